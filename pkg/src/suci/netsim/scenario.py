"""Scenario files: ``key = value`` settings followed by ``[kind id]`` entity blocks.

Example::

    seed = 7
    supi = 24201-534567890
    identity = suci            # imsi = legacy plaintext identity
    adversary = passive        # off | passive | trilateration | location-info
    path_loss_exponent = 2.0

    [policy]                   # or: policy = some.policy
    scheme = profile-a

    [ue phone]
    position = 40, 40

    [gnb cell-1]
    position = 0, 0
    tx_power = 30

    [rogue catcher-1]
    position = 45, 45
    tx_power = 40
"""

from __future__ import annotations

import configparser
import os
from importlib import resources

from ..errors import ScenarioError, SuciError
from ..identifiers import parse_supi
from ..protection import OperatorPolicy, load_key_store, load_policy, policy_from_mapping
from .model import AdversaryMode, EntityKind, IdentityMode, SimEntity, SimScenario
from .radio import SignalModel

_ROOT = "scenario"
_SETTINGS = {
    "seed", "supi", "identity", "adversary", "policy", "path_loss_exponent", "reference_distance",
    "sensitivity", "noise_std", "provision_home_key", "max_time", "latency_ms",
}


def _float(section, key, value):
    try:
        return float(value)
    except ValueError:
        raise ScenarioError(f"[{section}] {key}: expected a number, got {value!r}") from None


def _position(section, value):
    parts = [p.strip() for p in value.split(",")]
    if len(parts) != 2:
        raise ScenarioError(f"[{section}] position: expected 'x, y', got {value!r}")
    return (_float(section, "position", parts[0]), _float(section, "position", parts[1]))


def _bool(key, value):
    v = value.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ScenarioError(f"{key}: expected a boolean, got {value!r}")


def parse_scenario(text: str, base_dir: str = ".") -> SimScenario:
    cp = configparser.ConfigParser(
        interpolation=None, comment_prefixes=("#", ";"), inline_comment_prefixes=("#", ";"),
        default_section="\x00defaults",
    )
    try:
        cp.read_string(f"[{_ROOT}]\n" + text)
    except configparser.Error as exc:
        raise ScenarioError(f"malformed scenario: {exc}".replace("\n", " ")) from None

    settings = dict(cp[_ROOT])
    unknown = set(settings) - _SETTINGS
    if unknown:
        raise ScenarioError(f"unknown scenario settings: {', '.join(sorted(unknown))}")
    if "supi" not in settings:
        raise ScenarioError("scenario must name the UE's supi")

    try:
        supi = parse_supi(settings["supi"])
        identity = IdentityMode(settings.get("identity", "suci").strip().lower())
        adversary = AdversaryMode.parse(settings.get("adversary", "passive"))
        seed = int(settings.get("seed", "0"))
    except (SuciError, ValueError) as exc:
        raise ScenarioError(f"[{_ROOT}] {exc}") from None

    try:
        model = SignalModel(
            path_loss_exponent=_float(_ROOT, "path_loss_exponent", settings.get("path_loss_exponent", "2")),
            reference_distance=_float(_ROOT, "reference_distance", settings.get("reference_distance", "1")),
            sensitivity=(_float(_ROOT, "sensitivity", settings["sensitivity"]) if "sensitivity" in settings else None),
            noise_std=_float(_ROOT, "noise_std", settings.get("noise_std", "0")),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None

    has_inline_policy = cp.has_section("policy")
    if has_inline_policy and "policy" in settings:
        raise ScenarioError("give either 'policy = <file>' or a [policy] block, not both")
    if has_inline_policy:
        policy, _ = policy_from_mapping({k: v for k, v in cp["policy"].items()}, base_dir)
    elif "policy" in settings:
        policy, _ = load_policy(os.path.join(base_dir, settings["policy"]))
    else:
        policy = OperatorPolicy()

    entities = []
    network_keys = None
    for section in cp.sections():
        if section in (_ROOT, "policy"):
            continue
        kind_text, _, ent_id = section.partition(" ")
        ent_id = ent_id.strip()
        try:
            kind = EntityKind(kind_text.strip().lower())
        except ValueError:
            raise ScenarioError(f"[{section}]: unknown entity kind {kind_text!r}") from None
        if not ent_id:
            raise ScenarioError(f"[{section}]: entity blocks are written [<kind> <id>]")
        block = cp[section]
        allowed = {"position", "tx_power"} | ({"private_key"} if kind is EntityKind.CORE else set())
        extra = set(block) - allowed
        if extra:
            raise ScenarioError(f"[{section}]: unknown keys {', '.join(sorted(extra))}")
        if kind is EntityKind.CORE and "private_key" in block:
            network_keys = load_key_store(os.path.join(base_dir, block["private_key"]))
        entities.append(SimEntity(
            id=ent_id,
            kind=kind,
            position=_position(section, block.get("position", "0, 0")),
            tx_power=_float(section, "tx_power", block.get("tx_power", "0")),
        ))

    try:
        return SimScenario(
            entities=tuple(entities),
            supi=supi,
            ue_policy=policy,
            identity_mode=identity,
            adversary_mode=adversary,
            rng_seed=seed,
            signal_model=model,
            provision_home_key=_bool("provision_home_key", settings.get("provision_home_key", "yes")),
            network_keys=network_keys,
            max_time_us=int(_float(_ROOT, "max_time", settings.get("max_time", "10")) * 1_000_000),
            latency_us=int(_float(_ROOT, "latency_ms", settings.get("latency_ms", "1")) * 1_000),
        )
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def bundled_scenarios() -> list[str]:
    return sorted(
        p.name.removesuffix(".scenario")
        for p in resources.files("suci.scenarios").iterdir()
        if p.name.endswith(".scenario")
    )


def load_scenario(path_or_name: str) -> SimScenario:
    """Load a scenario file, or one of the bundled scenarios by name."""
    if os.path.exists(path_or_name):
        try:
            with open(path_or_name, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ScenarioError(f"cannot read {path_or_name}: {exc}") from None
        return parse_scenario(text, os.path.dirname(os.path.abspath(path_or_name)))
    name = os.path.basename(path_or_name).removesuffix(".scenario")
    if name in bundled_scenarios():
        ref = resources.files("suci.scenarios") / f"{name}.scenario"
        with resources.as_file(ref) as p:
            return parse_scenario(p.read_text(encoding="utf-8"), str(p.parent))
    raise ScenarioError(f"no such scenario file or bundled scenario: {path_or_name}")
