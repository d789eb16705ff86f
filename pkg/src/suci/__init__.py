"""5G subscriber identity concealment (SUCI) toolkit and IMSI-catcher simulator."""

from .ecies import EciesProfile, HomeNetworkKeyPair, generate_keypair
from .identifiers import (
    EciesOutput,
    NullOutput,
    Plmn,
    Suci,
    Supi,
    parse_suci,
    parse_supi,
    serialize_suci,
    serialize_supi,
    tbcd_decode,
    tbcd_encode,
)
from .protection import ConcealedIdentity, OperatorPolicy, conceal_supi, deconceal_suci

__version__ = "0.1.0"

__all__ = [
    "ConcealedIdentity", "EciesOutput", "EciesProfile", "HomeNetworkKeyPair", "NullOutput",
    "OperatorPolicy", "Plmn", "Suci", "Supi", "conceal_supi", "deconceal_suci", "generate_keypair",
    "parse_suci", "parse_supi", "serialize_suci", "serialize_supi", "tbcd_decode", "tbcd_encode",
]
