"""SUPI/IMSI and SUCI value types, TBCD digit packing and the text codecs.

Text forms::

    SUPI  24201-534567890
    SUCI  suci-0-242-01-0000-1-0-<hex(ephemeral key | ciphertext | mac)>
    SUCI  suci-0-242-01-0000-0-0-534567890          (null scheme)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .ecies import MAC_LEN, EciesProfile
from .errors import (
    InvalidDigit,
    InvalidSuci,
    InvalidSupi,
    MalformedTbcd,
    TruncatedOutput,
    UnknownScheme,
)

SUPI_FORMAT_IMSI = 0
SCHEME_NULL = 0
SCHEME_NAMES = {0: "null", 1: "ecies-profile-a", 2: "ecies-profile-b"}
DEFAULT_ROUTING_INDICATOR = "0000"

_DIGITS = re.compile(r"[0-9]+")


def _is_digits(text, lengths) -> bool:
    return isinstance(text, str) and bool(_DIGITS.fullmatch(text)) and len(text) in lengths


# ---------------------------------------------------------------------------
# TBCD
# ---------------------------------------------------------------------------

def tbcd_encode(digits: str) -> bytes:
    """Pack decimal digits two per octet, first digit in the low nibble, 0xF pad."""
    if not digits:
        raise InvalidDigit("cannot encode an empty digit string")
    nibbles = []
    for ch in digits:
        if ch not in "0123456789":
            raise InvalidDigit(f"non-digit character {ch!r}")
        nibbles.append(ord(ch) - 48)
    if len(nibbles) % 2:
        nibbles.append(0xF)
    return bytes(lo | (hi << 4) for lo, hi in zip(nibbles[::2], nibbles[1::2]))


def tbcd_decode(packed: bytes) -> str:
    if not packed:
        raise MalformedTbcd("empty TBCD string")
    out = []
    last = len(packed) - 1
    for i, octet in enumerate(packed):
        lo, hi = octet & 0x0F, octet >> 4
        if lo > 9:
            raise MalformedTbcd(f"invalid nibble {lo:#x} in octet {i}")
        out.append(str(lo))
        if hi == 0xF and i == last:
            break
        if hi > 9:
            raise MalformedTbcd(f"invalid nibble {hi:#x} in octet {i}")
        out.append(str(hi))
    return "".join(out)


# ---------------------------------------------------------------------------
# Value types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Plmn:
    mcc: str
    mnc: str

    def __post_init__(self):
        if not _is_digits(self.mcc, (3,)):
            raise InvalidSupi(f"MCC must be 3 digits, got {self.mcc!r}")
        if not _is_digits(self.mnc, (2, 3)):
            raise InvalidSupi(f"MNC must be 2 or 3 digits, got {self.mnc!r}")

    def __str__(self):
        return self.mcc + self.mnc


@dataclass(frozen=True)
class Supi:
    plmn: Plmn
    msin: str

    def __post_init__(self):
        if not _is_digits(self.msin, (9, 10)):
            raise InvalidSupi(f"MSIN must be 9 or 10 digits, got {self.msin!r}")

    @property
    def mcc(self) -> str:
        return self.plmn.mcc

    @property
    def mnc(self) -> str:
        return self.plmn.mnc

    def __str__(self):
        return serialize_supi(self)


@dataclass(frozen=True)
class NullOutput:
    msin: str

    def __post_init__(self):
        if not _is_digits(self.msin, (9, 10)):
            raise InvalidSuci(f"null-scheme MSIN must be 9 or 10 digits, got {self.msin!r}")


@dataclass(frozen=True)
class EciesOutput:
    ephemeral_public_key: bytes
    ciphertext: bytes
    mac: bytes

    def __post_init__(self):
        if len(self.mac) != MAC_LEN:
            raise InvalidSuci(f"MAC must be {MAC_LEN} octets, got {len(self.mac)}")
        if not self.ciphertext:
            raise InvalidSuci("ciphertext must be non-empty")

    @property
    def payload(self) -> bytes:
        return self.ephemeral_public_key + self.ciphertext + self.mac


SchemeOutput = Union[NullOutput, EciesOutput]


@dataclass(frozen=True)
class Suci:
    supi_format: int
    plmn: Plmn
    routing_indicator: str
    protection_scheme_id: int
    home_network_public_key_id: int
    scheme_output: SchemeOutput

    def __post_init__(self):
        if self.supi_format != SUPI_FORMAT_IMSI:
            raise InvalidSuci(f"only SUPI format 0 (IMSI) is supported, got {self.supi_format}")
        if not _is_digits(self.routing_indicator, (1, 2, 3, 4)):
            raise InvalidSuci(f"routing indicator must be 1-4 digits, got {self.routing_indicator!r}")
        if not 0 <= self.home_network_public_key_id <= 255:
            raise InvalidSuci("home network public key id must be in 0..255")
        scheme = self.protection_scheme_id
        out = self.scheme_output
        if scheme == SCHEME_NULL:
            if not isinstance(out, NullOutput):
                raise InvalidSuci("scheme 0 requires a null-scheme output")
        elif scheme in (1, 2):
            if not isinstance(out, EciesOutput):
                raise InvalidSuci(f"scheme {scheme} requires an ECIES output")
            keylen = EciesProfile(scheme).public_key_len
            if len(out.ephemeral_public_key) != keylen:
                raise InvalidSuci(f"scheme {scheme} needs a {keylen}-octet ephemeral key")
        else:
            raise UnknownScheme(f"protection scheme id {scheme} is not assigned")

    @property
    def is_null(self) -> bool:
        return self.protection_scheme_id == SCHEME_NULL

    @property
    def profile(self) -> EciesProfile | None:
        return None if self.is_null else EciesProfile(self.protection_scheme_id)

    def __str__(self):
        return serialize_suci(self)


# ---------------------------------------------------------------------------
# Text codecs
# ---------------------------------------------------------------------------

_SUPI_RE = re.compile(r"([0-9]{5,6})-([0-9]+)")


def parse_supi(text: str) -> Supi:
    """Parse ``<mcc><mnc>-<msin>``; a 6-digit prefix means a 3-digit MNC."""
    m = _SUPI_RE.fullmatch(text.strip()) if isinstance(text, str) else None
    if m is None:
        raise InvalidSupi(f"expected <mcc><mnc>-<msin>, got {text!r}")
    prefix, msin = m.groups()
    return Supi(Plmn(prefix[:3], prefix[3:]), msin)


def serialize_supi(supi: Supi) -> str:
    return f"{supi.plmn.mcc}{supi.plmn.mnc}-{supi.msin}"


def serialize_suci(s: Suci) -> str:
    out = s.scheme_output
    payload = out.msin if isinstance(out, NullOutput) else out.payload.hex()
    return "-".join([
        "suci",
        str(s.supi_format),
        s.plmn.mcc,
        s.plmn.mnc,
        s.routing_indicator,
        str(s.protection_scheme_id),
        str(s.home_network_public_key_id),
        payload,
    ])


def _small_int(field: str, text: str) -> int:
    if not _is_digits(text, range(1, 4)):
        raise InvalidSuci(f"{field} must be a small decimal integer, got {text!r}")
    return int(text)


def parse_suci(text: str) -> Suci:
    parts = text.strip().split("-") if isinstance(text, str) else []
    if len(parts) != 8 or parts[0].lower() != "suci":
        raise InvalidSuci(f"expected suci-<fmt>-<mcc>-<mnc>-<ri>-<scheme>-<keyid>-<output>, got {text!r}")
    _, fmt, mcc, mnc, routing, scheme_text, key_id, payload = parts
    try:
        plmn = Plmn(mcc, mnc)
    except InvalidSupi as exc:
        raise InvalidSuci(str(exc)) from None
    scheme = _small_int("protection scheme id", scheme_text)

    if scheme == SCHEME_NULL:
        output: SchemeOutput = NullOutput(payload)
    elif scheme in (1, 2):
        keylen = EciesProfile(scheme).public_key_len
        try:
            raw = bytes.fromhex(payload)
        except ValueError:
            raise InvalidSuci("scheme output is not valid hex") from None
        if len(raw) < keylen + 1 + MAC_LEN:
            raise TruncatedOutput(
                f"scheme {scheme} output needs at least {keylen + 1 + MAC_LEN} octets, got {len(raw)}"
            )
        output = EciesOutput(raw[:keylen], raw[keylen:-MAC_LEN], raw[-MAC_LEN:])
    else:
        raise UnknownScheme(f"protection scheme id {scheme} is not assigned")

    return Suci(
        supi_format=_small_int("SUPI format", fmt),
        plmn=plmn,
        routing_indicator=routing,
        protection_scheme_id=scheme,
        home_network_public_key_id=_small_int("home network public key id", key_id),
        scheme_output=output,
    )
