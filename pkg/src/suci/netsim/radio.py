"""Log-distance path loss and its inverse."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..errors import OutOfModel


@dataclass(frozen=True)
class SignalModel:
    path_loss_exponent: float = 2.0
    reference_distance: float = 1.0  # d0, metres
    sensitivity: Optional[float] = None  # weakest usable signal; None = unlimited range
    noise_std: float = 0.0  # Gaussian measurement noise on reported signals

    def __post_init__(self):
        if self.path_loss_exponent <= 0:
            raise ValueError("path loss exponent must be positive")
        if self.reference_distance <= 0:
            raise ValueError("reference distance must be positive")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")


def received_signal(model: SignalModel, tx_power: float, distance: float) -> float:
    """tx_power - 10 n log10(max(d, d0) / d0)."""
    if distance < 0:
        raise ValueError("distance must be non-negative")
    d0 = model.reference_distance
    return tx_power - 10.0 * model.path_loss_exponent * math.log10(max(distance, d0) / d0)


def signal_to_distance(model: SignalModel, tx_power: float, observed_signal: float) -> float:
    """Invert :func:`received_signal`.  Anything inside d0 maps to d0."""
    if observed_signal > tx_power:
        raise OutOfModel(f"observed signal {observed_signal} exceeds transmit power {tx_power}")
    return model.reference_distance * 10.0 ** ((tx_power - observed_signal) / (10.0 * model.path_loss_exponent))


def in_range(model: SignalModel, signal: float) -> bool:
    return model.sensitivity is None or signal >= model.sensitivity
