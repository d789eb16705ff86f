"""Value types for the registration simulator and the trace export format."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional, Union

from ..identifiers import Suci, Supi, serialize_suci, serialize_supi
from ..protection import OperatorPolicy
from .radio import SignalModel


class EntityKind(str, enum.Enum):
    UE = "ue"
    GNB = "gnb"
    CORE = "core"
    ROGUE = "rogue"


class UeState(str, enum.Enum):
    PLMN_SEARCH = "PlmnSearch"
    DEREGISTERED = "Deregistered"
    REGISTER_INITIATED = "RegisterInitiated"
    AUTHENTICATING = "Authenticating"
    SECURITY_MODE = "SecurityMode"
    REGISTERED = "Registered"


_UE_ORDER = list(UeState)
UE_TRANSITIONS = {a: b for a, b in zip(_UE_ORDER, _UE_ORDER[1:])}


class MessageKind(str, enum.Enum):
    REGISTRATION_REQUEST = "RegistrationRequest"
    AUTHENTICATION_REQUEST = "AuthenticationRequest"
    AUTHENTICATION_RESPONSE = "AuthenticationResponse"
    SECURITY_MODE_COMMAND = "SecurityModeCommand"
    SECURITY_MODE_COMPLETE = "SecurityModeComplete"
    REGISTRATION_ACCEPT = "RegistrationAccept"
    RRC_RECONFIGURATION = "RrcReconfiguration"
    RRC_MEASUREMENT_REPORT = "RrcMeasurementReport"


REGISTRATION_SEQUENCE = (
    MessageKind.REGISTRATION_REQUEST,
    MessageKind.AUTHENTICATION_REQUEST,
    MessageKind.AUTHENTICATION_RESPONSE,
    MessageKind.SECURITY_MODE_COMMAND,
    MessageKind.SECURITY_MODE_COMPLETE,
    MessageKind.REGISTRATION_ACCEPT,
)


class AdversaryMode(str, enum.Enum):
    OFF = "off"
    PASSIVE = "passive"
    TRILATERATION = "trilateration"
    LOCATION_INFO = "location-info"

    @classmethod
    def parse(cls, text: str) -> AdversaryMode:
        key = text.strip().lower().replace("_", "-")
        aliases = {"passive-capture": "passive", "locationinfo": "location-info", "none": "off"}
        return cls(aliases.get(key, key))


class IdentityMode(str, enum.Enum):
    """What the UE puts in its RegistrationRequest."""

    IMSI = "imsi"  # pre-5G behaviour: plaintext permanent identity
    SUCI = "suci"


Position = tuple[float, float]


@dataclass(frozen=True)
class SimEntity:
    id: str
    kind: EntityKind
    position: Position = (0.0, 0.0)
    tx_power: float = 0.0

    @property
    def is_station(self) -> bool:
        return self.kind in (EntityKind.GNB, EntityKind.ROGUE)


@dataclass(frozen=True)
class SimMessage:
    src: str
    dst: str
    kind: MessageKind
    payload: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind is MessageKind.REGISTRATION_REQUEST:
            identity = self.payload.get("identity")
            if not isinstance(identity, (Supi, Suci)):
                raise TypeError("RegistrationRequest must carry exactly one Supi or Suci identity")

    @property
    def identity(self) -> Union[Supi, Suci, None]:
        return self.payload.get("identity")


@dataclass(frozen=True)
class TraceEvent:
    seq: int
    time_us: int
    event: str  # "state" | "message" | "note"
    entity: str
    message: Optional[SimMessage] = None
    data: Mapping[str, Any] = field(default_factory=dict)

    def to_record(self) -> dict:
        rec = {"seq": self.seq, "t_us": self.time_us, "event": self.event, "entity": self.entity}
        if self.message is not None:
            m = self.message
            rec["kind"] = m.kind.value
            rec["from"] = m.src
            rec["to"] = m.dst
            rec["payload"] = {k: _jsonable(v) for k, v in m.payload.items()}
        for k, v in self.data.items():
            rec[k] = _jsonable(v)
        return rec


def _jsonable(value):
    if isinstance(value, Supi):
        return serialize_supi(value)
    if isinstance(value, Suci):
        return serialize_suci(value)
    if isinstance(value, bytes):
        return value.hex()
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, Mapping):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass(frozen=True)
class Capture:
    adversary: str
    identity: str
    position: Optional[Position] = None
    identifying: bool = True


@dataclass(frozen=True)
class SimScenario:
    entities: tuple[SimEntity, ...]
    supi: Supi
    ue_policy: OperatorPolicy = OperatorPolicy()
    identity_mode: IdentityMode = IdentityMode.SUCI
    adversary_mode: AdversaryMode = AdversaryMode.PASSIVE
    rng_seed: int = 0
    signal_model: SignalModel = SignalModel()
    provision_home_key: bool = True
    network_keys: Optional[Mapping[int, Any]] = None  # key id -> HomeNetworkKeyPair
    max_time_us: int = 10_000_000
    latency_us: int = 1_000
    search_interval_us: int = 1_000_000

    def __post_init__(self):
        ids = [e.id for e in self.entities]
        if len(ids) != len(set(ids)):
            raise ValueError("entity ids must be unique")
        if sum(e.kind is EntityKind.UE for e in self.entities) != 1:
            raise ValueError("a scenario needs exactly one UE")

    @property
    def ue(self) -> SimEntity:
        return next(e for e in self.entities if e.kind is EntityKind.UE)

    @property
    def ue_true_position(self) -> Position:
        return self.ue.position

    def of_kind(self, kind: EntityKind) -> list[SimEntity]:
        return [e for e in self.entities if e.kind is kind]


@dataclass(frozen=True)
class SimTrace:
    events: tuple[TraceEvent, ...]
    captured_identities: frozenset = frozenset()
    final_state: UeState = UeState.PLMN_SEARCH
    serving_cell: Optional[str] = None
    ue_true_position: Optional[Position] = None

    def messages(self) -> list[SimMessage]:
        return [e.message for e in self.events if e.message is not None]

    def message_kinds(self) -> list[MessageKind]:
        return [m.kind for m in self.messages()]

    def state_path(self) -> list[UeState]:
        return [UeState(e.data["to"]) for e in self.events if e.event == "state"]

    def identifying_captures(self) -> list[Capture]:
        return [c for c in self.sorted_captures() if c.identifying]

    def sorted_captures(self) -> list[Capture]:
        return sorted(self.captured_identities, key=lambda c: (c.adversary, c.identity))

    def export(self) -> str:
        """Line-delimited JSON, one record per event then one per capture."""
        lines = [json.dumps(e.to_record(), separators=(",", ":")) for e in self.events]
        for c in self.sorted_captures():
            rec = {
                "event": "capture",
                "adversary": c.adversary,
                "identity": c.identity,
                "identifying": c.identifying,
                "position": list(c.position) if c.position is not None else None,
            }
            lines.append(json.dumps(rec, separators=(",", ":")))
        return "\n".join(lines) + "\n"
