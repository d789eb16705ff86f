"""SUPI <-> SUCI orchestration: UE-side concealment and the network-side SIDF.

Operator policy decides the scheme.  When SUCI is switched off, or the
preferred ECIES profile has no provisioned home network key, the UE falls
back to the null scheme and sends the MSIN in the clear; the result carries
a ``downgraded`` flag so callers can surface that.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Mapping, Optional

from . import ecies
from .ecies import EciesProfile, HomeNetworkKeyPair
from .errors import (
    CorruptPlaintext,
    KeyFileError,
    MalformedTbcd,
    MissingHomeKey,
    PolicyError,
    UnknownKeyId,
)
from .identifiers import (
    DEFAULT_ROUTING_INDICATOR,
    SUPI_FORMAT_IMSI,
    EciesOutput,
    NullOutput,
    Suci,
    Supi,
    tbcd_decode,
    tbcd_encode,
)


@dataclass(frozen=True)
class OperatorPolicy:
    suci_enabled: bool = True
    preferred_scheme: Optional[EciesProfile] = EciesProfile.A  # None = null scheme
    provisioned_home_key: Optional[bytes] = None  # home network public key (UE side)
    home_network_public_key_id: int = 0
    routing_indicator: str = DEFAULT_ROUTING_INDICATOR
    null_fallback: bool = True

    def effective_scheme(self) -> Optional[EciesProfile]:
        """Scheme actually used; None means null."""
        if not self.suci_enabled or self.preferred_scheme is None:
            return None
        if self.provisioned_home_key is None:
            return None
        return self.preferred_scheme

    @property
    def downgrades(self) -> bool:
        """True when the policy asks for protection but the UE ends up on the null scheme."""
        if not self.suci_enabled:
            return True
        return self.preferred_scheme is not None and self.provisioned_home_key is None

    def downgrade_reason(self) -> str:
        if not self.suci_enabled:
            return "SUCI disabled by operator policy; null scheme used"
        if self.downgrades:
            return (f"no home network public key provisioned for {self.preferred_scheme.label}; "
                    "falling back to null scheme")
        return ""


@dataclass(frozen=True)
class ConcealedIdentity:
    suci: Suci
    downgraded: bool = False
    note: str = ""


def conceal_supi(supi: Supi, policy: OperatorPolicy, rng=None, *, ephemeral: HomeNetworkKeyPair | None = None) -> ConcealedIdentity:
    if policy.downgrades and policy.suci_enabled and not policy.null_fallback:
        raise MissingHomeKey(policy.downgrade_reason().replace("falling back to null scheme",
                                                               "null fallback forbidden by policy"))
    scheme = policy.effective_scheme()
    if scheme is None:
        output = NullOutput(supi.msin)
        scheme_id = 0
    else:
        eph_pub, ct, mac = ecies.conceal(
            scheme, policy.provisioned_home_key, tbcd_encode(supi.msin), ephemeral=ephemeral, rng=rng
        )
        output = EciesOutput(eph_pub, ct, mac)
        scheme_id = int(scheme)
    suci = Suci(
        supi_format=SUPI_FORMAT_IMSI,
        plmn=supi.plmn,
        routing_indicator=policy.routing_indicator,
        protection_scheme_id=scheme_id,
        home_network_public_key_id=policy.home_network_public_key_id,
        scheme_output=output,
    )
    return ConcealedIdentity(suci, policy.downgrades, policy.downgrade_reason())


def deconceal_suci(suci: Suci, network_keys: Mapping[int, HomeNetworkKeyPair]) -> Supi:
    """Subscriber identity de-concealing: recover the SUPI from a SUCI."""
    out = suci.scheme_output
    if isinstance(out, NullOutput):
        return Supi(suci.plmn, out.msin)
    try:
        key = network_keys[suci.home_network_public_key_id]
    except KeyError:
        raise UnknownKeyId(f"no home network private key with id {suci.home_network_public_key_id}") from None
    if key.profile is not suci.profile:
        raise UnknownKeyId(
            f"key id {suci.home_network_public_key_id} is {key.profile.label}, SUCI uses {suci.profile.label}"
        )
    packed = ecies.deconceal(key.profile, key.private_key, out.ephemeral_public_key, out.ciphertext, out.mac)
    try:
        msin = tbcd_decode(packed)
        return Supi(suci.plmn, msin)
    except (MalformedTbcd, ValueError) as exc:
        raise CorruptPlaintext(f"decrypted MSIN is not valid: {exc}") from None


# ---------------------------------------------------------------------------
# Key files: "profile-a:<hex>" per line
# ---------------------------------------------------------------------------

def format_key_line(profile: EciesProfile, key: bytes) -> str:
    return f"{profile.label}:{key.hex()}"


def read_key_lines(path) -> list[tuple[EciesProfile, bytes]]:
    try:
        with open(path, encoding="ascii") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise KeyFileError(f"cannot read key file {path}: {exc}") from None
    keys = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, hexkey = line.partition(":")
        try:
            if not sep:
                raise ValueError("missing profile prefix")
            keys.append((EciesProfile.from_label(label), bytes.fromhex(hexkey.strip())))
        except ValueError as exc:
            raise KeyFileError(f"{path}:{lineno}: {exc}") from None
    if not keys:
        raise KeyFileError(f"{path}: no keys found")
    return keys


def write_keypair(prefix, pair: HomeNetworkKeyPair) -> tuple[str, str]:
    pub, priv = f"{prefix}.pub", f"{prefix}.priv"
    with open(pub, "w", encoding="ascii") as fh:
        fh.write(format_key_line(pair.profile, pair.public_key) + "\n")
    fd = os.open(priv, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
    with os.fdopen(fd, "w", encoding="ascii") as fh:
        fh.write(format_key_line(pair.profile, pair.private_key) + "\n")
    return pub, priv


def load_public_key(path) -> tuple[EciesProfile, bytes]:
    profile, key = read_key_lines(path)[0]
    if len(key) != profile.public_key_len:
        raise KeyFileError(f"{path}: {profile.label} public key must be {profile.public_key_len} octets")
    return profile, key


def load_key_store(path, key_id: int | None = None) -> dict[int, HomeNetworkKeyPair]:
    """Private key file -> {key id: key pair}.  Line n holds key id n unless
    ``key_id`` is given for a single-key file."""
    lines = read_key_lines(path)
    if key_id is not None and len(lines) != 1:
        raise KeyFileError(f"{path}: an explicit key id needs a file with exactly one key")
    store = {}
    for n, (profile, key) in enumerate(lines):
        try:
            pair = ecies.keypair_from_private(profile, key)
        except ValueError as exc:
            raise KeyFileError(f"{path}: {exc}") from None
        store[key_id if key_id is not None else n] = pair
    return store


# ---------------------------------------------------------------------------
# Policy files: line-oriented "key = value"
# ---------------------------------------------------------------------------

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _bool(key, value):
    v = value.lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise PolicyError(f"{key}: expected a boolean, got {value!r}")


def parse_kv(text: str, origin: str = "<text>") -> dict[str, str]:
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise PolicyError(f"{origin}:{lineno}: expected 'key = value'")
        entries[key.strip().lower()] = value.strip()
    return entries


def policy_from_mapping(entries: Mapping[str, str], base_dir=".") -> tuple[OperatorPolicy, Optional[str]]:
    """Build a policy from parsed key/values.

    Returns the policy and the key file path (resolved against ``base_dir``)
    if one was named.  A named key file that does not exist counts as "not
    provisioned"; one that exists but is malformed raises KeyFileError.
    """
    known = {"suci_enabled", "scheme", "key_id", "routing_indicator", "key_file", "null_fallback"}
    unknown = set(entries) - known
    if unknown:
        raise PolicyError(f"unknown policy keys: {', '.join(sorted(unknown))}")
    kwargs = {}
    if "suci_enabled" in entries:
        kwargs["suci_enabled"] = _bool("suci_enabled", entries["suci_enabled"])
    if "null_fallback" in entries:
        kwargs["null_fallback"] = _bool("null_fallback", entries["null_fallback"])
    if "scheme" in entries:
        scheme = entries["scheme"].lower()
        if scheme in ("null", "0", "none"):
            kwargs["preferred_scheme"] = None
        else:
            try:
                kwargs["preferred_scheme"] = EciesProfile.from_label(scheme)
            except ValueError as exc:
                raise PolicyError(str(exc)) from None
    if "key_id" in entries:
        try:
            kwargs["home_network_public_key_id"] = int(entries["key_id"])
        except ValueError:
            raise PolicyError(f"key_id must be an integer, got {entries['key_id']!r}") from None
        if not 0 <= kwargs["home_network_public_key_id"] <= 255:
            raise PolicyError("key_id must be in 0..255")
    if "routing_indicator" in entries:
        ri = entries["routing_indicator"]
        if not (1 <= len(ri) <= 4 and all(c in "0123456789" for c in ri)):
            raise PolicyError(f"routing_indicator must be 1-4 digits, got {ri!r}")
        kwargs["routing_indicator"] = ri

    key_path = None
    if entries.get("key_file"):
        key_path = os.path.join(base_dir, entries["key_file"])
        if os.path.exists(key_path):
            profile, key = load_public_key(key_path)
            wanted = kwargs.get("preferred_scheme", OperatorPolicy.preferred_scheme)
            if wanted is not None and profile is not wanted:
                raise PolicyError(f"key file holds a {profile.label} key but scheme is {wanted.label}")
            kwargs["provisioned_home_key"] = key
    return OperatorPolicy(**kwargs), key_path


def load_policy(path) -> tuple[OperatorPolicy, Optional[str]]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise PolicyError(f"cannot read policy file {path}: {exc}") from None
    return policy_from_mapping(parse_kv(text, str(path)), os.path.dirname(os.path.abspath(path)))
