"""Single-threaded discrete-event run of one UE's initial registration.

The virtual clock counts integer microseconds.  Every scheduled action is
keyed by (time, insertion sequence), so runs with the same scenario and
seed replay identically.

Authentication is a stand-in challenge-response: the core sends a random
16-octet nonce and the UE answers with HMAC-SHA-256(K, nonce) truncated to
16 octets, K being a long-term key shared by the subscriber and its home
network.  Rogue stations do not know K and never get past the
RegistrationRequest.
"""

from __future__ import annotations

import dataclasses
import hashlib
import heapq
import hmac
import itertools
import random
from typing import Iterable, Optional

from .. import ecies
from ..errors import DegenerateGeometry, OutOfModel, SuciError
from ..identifiers import Suci, Supi, serialize_suci
from ..protection import conceal_supi, deconceal_suci
from .geometry import distance, trilaterate
from .model import (
    UE_TRANSITIONS,
    AdversaryMode,
    Capture,
    EntityKind,
    IdentityMode,
    MessageKind,
    Position,
    SimEntity,
    SimMessage,
    SimScenario,
    SimTrace,
    TraceEvent,
    UeState,
)
from .radio import SignalModel, in_range, received_signal, signal_to_distance

RES_LEN = 16
CORE_PROCESSING_US = 500


class IllegalTransition(RuntimeError):
    pass


def select_cell(scenario: SimScenario, position: Position) -> tuple[Optional[SimEntity], dict[str, float]]:
    """Strongest in-range station at ``position``; ties go to the smaller id."""
    candidates = scenario.of_kind(EntityKind.GNB)
    if scenario.adversary_mode is not AdversaryMode.OFF:
        candidates += scenario.of_kind(EntityKind.ROGUE)
    signals = {}
    for st in sorted(candidates, key=lambda e: e.id):
        rx = received_signal(scenario.signal_model, st.tx_power, distance(position, st.position))
        if in_range(scenario.signal_model, rx):
            signals[st.id] = rx
    if not signals:
        return None, signals
    best = min(signals, key=lambda sid: (-signals[sid], sid))
    return next(e for e in candidates if e.id == best), signals


class _Run:
    def __init__(self, scenario: SimScenario):
        self.sc = scenario
        self.rng = random.Random(scenario.rng_seed)
        self.entities = {e.id: e for e in scenario.entities}
        self.ue = scenario.ue
        self.ue_state = UeState.PLMN_SEARCH
        self.serving: Optional[SimEntity] = None
        self.clock = 0
        self._queue: list = []
        self._order = itertools.count()
        self._seq = itertools.count()
        self.events: list[TraceEvent] = []

        cores = scenario.of_kind(EntityKind.CORE)
        self.core_id = cores[0].id if cores else "core"

        # provisioning happens before the clock starts; draw order is fixed
        self.ue_policy = scenario.ue_policy
        self.network_keys = dict(scenario.network_keys or {})
        wanted = self.ue_policy.preferred_scheme
        if (
            scenario.identity_mode is IdentityMode.SUCI
            and scenario.provision_home_key
            and wanted is not None
            and self.ue_policy.provisioned_home_key is None
        ):
            pair = ecies.generate_keypair(wanted, self.rng)
            key_id = self.ue_policy.home_network_public_key_id
            self.network_keys.setdefault(key_id, pair)
            self.ue_policy = dataclasses.replace(self.ue_policy, provisioned_home_key=pair.public_key)
        self.long_term_key = self.rng.randbytes(16)
        self.subscribers = {str(scenario.supi): self.long_term_key}
        self.pending_nonce: Optional[bytes] = None

    # -- plumbing -----------------------------------------------------

    def at(self, delay_us: int, fn, *args):
        heapq.heappush(self._queue, (self.clock + delay_us, next(self._order), fn, args))

    def record(self, event: str, entity: str, message: Optional[SimMessage] = None, **data):
        self.events.append(TraceEvent(next(self._seq), self.clock, event, entity, message, data))

    def note(self, entity: str, what: str, **data):
        self.record("note", entity, note=what, **data)

    def transition(self, new: UeState):
        if UE_TRANSITIONS.get(self.ue_state) is not new:
            raise IllegalTransition(f"{self.ue_state.value} -> {new.value}")
        self.record("state", self.ue.id, **{"from": self.ue_state.value, "to": new.value})
        self.ue_state = new

    def send(self, src: str, dst: str, kind: MessageKind, **payload):
        msg = SimMessage(src, dst, kind, payload)
        self.record("message", src, msg)
        self.at(self.sc.latency_us, self.deliver, msg)

    def deliver(self, msg: SimMessage):
        target = self.entities[msg.dst]
        if target.kind is EntityKind.UE:
            self.ue_receive(msg)
        elif target.kind is EntityKind.ROGUE:
            self.rogue_receive(target, msg)
        else:
            self.note(target.id, "relay", kind=msg.kind, to=self.core_id)
            self.at(CORE_PROCESSING_US, self.core_receive, target, msg)

    def run(self) -> SimTrace:
        self.record("state", self.ue.id, **{"from": None, "to": self.ue_state.value})
        self.at(0, self.cell_search)
        while self._queue:
            t, _, fn, args = heapq.heappop(self._queue)
            if t > self.sc.max_time_us:
                break
            self.clock = t
            fn(*args)
        captures = adversary_capture(self.events, self.sc.adversary_mode, self.sc.entities, self.sc.signal_model)
        return SimTrace(
            events=tuple(self.events),
            captured_identities=captures,
            final_state=self.ue_state,
            serving_cell=self.serving.id if self.serving else None,
            ue_true_position=self.ue.position,
        )

    # -- UE -----------------------------------------------------------

    def cell_search(self):
        cell, signals = select_cell(self.sc, self.ue.position)
        self.note(self.ue.id, "cell_search", signals=signals, selected=cell.id if cell else None)
        if cell is None:
            self.at(self.sc.search_interval_us, self.cell_search)
            return
        self.serving = cell
        self.transition(UeState.DEREGISTERED)
        identity = self.ue_identity()
        if identity is None:
            return
        self.send(self.ue.id, cell.id, MessageKind.REGISTRATION_REQUEST, identity=identity)
        self.transition(UeState.REGISTER_INITIATED)

    def ue_identity(self):
        if self.sc.identity_mode is IdentityMode.IMSI:
            return self.sc.supi
        try:
            result = conceal_supi(self.sc.supi, self.ue_policy, self.rng)
        except SuciError as exc:
            self.note(self.ue.id, "conceal_failed", reason=str(exc))
            return None
        if result.downgraded:
            self.note(self.ue.id, "downgrade", reason=result.note)
        return result.suci

    def ue_receive(self, msg: SimMessage):
        kind = msg.kind
        if kind is MessageKind.AUTHENTICATION_REQUEST:
            self.transition(UeState.AUTHENTICATING)
            res = hmac.new(self.long_term_key, msg.payload["nonce"], hashlib.sha256).digest()[:RES_LEN]
            self.send(self.ue.id, msg.src, MessageKind.AUTHENTICATION_RESPONSE, res=res)
        elif kind is MessageKind.SECURITY_MODE_COMMAND:
            self.transition(UeState.SECURITY_MODE)
            self.send(self.ue.id, msg.src, MessageKind.SECURITY_MODE_COMPLETE)
        elif kind is MessageKind.REGISTRATION_ACCEPT:
            self.transition(UeState.REGISTERED)
        elif kind is MessageKind.RRC_RECONFIGURATION:
            self.ue_measure(msg)

    def ue_measure(self, msg: SimMessage):
        model = self.sc.signal_model
        signals = {}
        for cell_id in msg.payload.get("measure_cells", ()):
            cell = self.entities[cell_id]
            rx = received_signal(model, cell.tx_power, distance(self.ue.position, cell.position))
            if model.noise_std:
                rx += self.rng.gauss(0.0, model.noise_std)
            signals[cell_id] = rx
        payload = {"signals": signals}
        if msg.payload.get("request_location"):
            payload["location_info"] = self.ue.position
        self.send(self.ue.id, msg.src, MessageKind.RRC_MEASUREMENT_REPORT, **payload)

    # -- network ------------------------------------------------------

    def core_receive(self, gnb: SimEntity, msg: SimMessage):
        kind = msg.kind
        if kind is MessageKind.REGISTRATION_REQUEST:
            identity = msg.identity
            if isinstance(identity, Suci):
                try:
                    supi = deconceal_suci(identity, self.network_keys)
                except SuciError as exc:
                    self.note(self.core_id, "registration_rejected", reason=f"{type(exc).__name__}: {exc}")
                    return
                self.note(self.core_id, "sidf", supi=supi)
            else:
                supi = identity
            if str(supi) not in self.subscribers:
                self.note(self.core_id, "registration_rejected", reason="unknown subscriber")
                return
            self.pending_nonce = self.rng.randbytes(16)
            self.send(gnb.id, msg.src, MessageKind.AUTHENTICATION_REQUEST, nonce=self.pending_nonce)
        elif kind is MessageKind.AUTHENTICATION_RESPONSE:
            expected = hmac.new(self.long_term_key, self.pending_nonce or b"", hashlib.sha256).digest()[:RES_LEN]
            if self.pending_nonce is None or not hmac.compare_digest(expected, msg.payload["res"]):
                self.note(self.core_id, "authentication_failed")
                return
            self.send(gnb.id, msg.src, MessageKind.SECURITY_MODE_COMMAND, ciphering="NEA2", integrity="NIA2")
        elif kind is MessageKind.SECURITY_MODE_COMPLETE:
            self.send(gnb.id, msg.src, MessageKind.REGISTRATION_ACCEPT)

    def rogue_receive(self, rogue: SimEntity, msg: SimMessage):
        mode = self.sc.adversary_mode
        if msg.kind is not MessageKind.REGISTRATION_REQUEST:
            return
        if mode is AdversaryMode.TRILATERATION:
            cells = sorted(e.id for e in self.sc.of_kind(EntityKind.ROGUE))
            self.send(rogue.id, msg.src, MessageKind.RRC_RECONFIGURATION, measure_cells=cells)
        elif mode is AdversaryMode.LOCATION_INFO:
            self.send(rogue.id, msg.src, MessageKind.RRC_RECONFIGURATION, measure_cells=[], request_location=True)


def run_registration(scenario: SimScenario) -> SimTrace:
    return _Run(scenario).run()


# ---------------------------------------------------------------------------
# Adversary view of a finished trace
# ---------------------------------------------------------------------------

def _identity_view(identity) -> tuple[str, bool]:
    if isinstance(identity, Supi):
        return str(identity), True
    if identity.is_null:
        # null-scheme SUCI: MSIN readable straight off the air
        return str(Supi(identity.plmn, identity.scheme_output.msin)), True
    return serialize_suci(identity), False


def _locate(report: Optional[SimMessage], mode: AdversaryMode, rogues: dict, model: SignalModel):
    if report is None:
        return None
    if mode is AdversaryMode.LOCATION_INFO:
        loc = report.payload.get("location_info")
        return tuple(loc) if loc is not None else None
    if mode is not AdversaryMode.TRILATERATION:
        return None
    anchors, dists = [], []
    for cell_id, rx in report.payload.get("signals", {}).items():
        cell = rogues.get(cell_id)
        if cell is None:
            continue
        try:
            dists.append(signal_to_distance(model, cell.tx_power, rx))
        except OutOfModel:
            continue
        anchors.append(cell.position)
    try:
        return trilaterate(anchors, dists)
    except DegenerateGeometry:
        return None


def adversary_capture(
    events: Iterable[TraceEvent],
    mode: AdversaryMode,
    entities: Iterable[SimEntity] = (),
    signal_model: SignalModel = SignalModel(),
) -> frozenset:
    """What the IMSI catchers learn from the RegistrationRequests they received.

    Plaintext SUPIs and null-scheme SUCIs give an identifying capture; ECIES
    SUCIs give only an opaque, non-identifying string.  In the two tracking
    modes the capture also carries the UE position the catcher worked out.
    """
    if mode is AdversaryMode.OFF:
        return frozenset()
    events = list(events)
    rogues = {e.id: e for e in entities if e.kind is EntityKind.ROGUE}
    reports = {}
    for ev in events:
        m = ev.message
        if m is not None and m.kind is MessageKind.RRC_MEASUREMENT_REPORT and m.dst in rogues:
            reports[m.dst] = m
    captures = set()
    for ev in events:
        m = ev.message
        if m is None or m.kind is not MessageKind.REGISTRATION_REQUEST or m.dst not in rogues:
            continue
        text, identifying = _identity_view(m.identity)
        position = _locate(reports.get(m.dst), mode, rogues, signal_model)
        captures.add(Capture(m.dst, text, position, identifying))
    return frozenset(captures)
