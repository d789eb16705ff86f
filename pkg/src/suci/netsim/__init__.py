"""Deterministic simulation of 5G initial registration next to IMSI catchers."""

from .engine import adversary_capture, run_registration, select_cell
from .geometry import trilaterate
from .model import (
    REGISTRATION_SEQUENCE,
    AdversaryMode,
    Capture,
    EntityKind,
    IdentityMode,
    MessageKind,
    SimEntity,
    SimMessage,
    SimScenario,
    SimTrace,
    TraceEvent,
    UeState,
)
from .radio import SignalModel, received_signal, signal_to_distance
from .scenario import bundled_scenarios, load_scenario, parse_scenario

__all__ = [
    "REGISTRATION_SEQUENCE", "AdversaryMode", "Capture", "EntityKind", "IdentityMode", "MessageKind",
    "SignalModel", "SimEntity", "SimMessage", "SimScenario", "SimTrace", "TraceEvent", "UeState",
    "adversary_capture", "bundled_scenarios", "load_scenario", "parse_scenario", "received_signal",
    "run_registration", "select_cell", "signal_to_distance", "trilaterate",
]
