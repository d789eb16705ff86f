"""ECIES concealment primitive for SUCI Profile A (X25519) and Profile B (secp256r1).

Cipher suite, identical for both profiles:

* key agreement: ephemeral/static ECDH, shared secret = 32-octet x-coordinate
* KDF: ANSI X9.63 with SHA-256, shared info = ephemeral public key, 64 octets
  split into AES key (16) | initial counter block (16) | MAC key (32)
* AES-128-CTR over the plaintext
* HMAC-SHA-256 over the ciphertext, truncated to 8 octets

Curve arithmetic and the AES block function come from ``cryptography``;
everything above them is done here.

Randomness is passed in explicitly as any object with a ``randbytes(n)``
method (``random.Random`` for reproducible runs, ``secrets.SystemRandom``
for real use).
"""

from __future__ import annotations

import enum
import hashlib
import hmac
import secrets
from dataclasses import dataclass

from cryptography.exceptions import UnsupportedAlgorithm
from cryptography.hazmat.primitives.asymmetric import ec, x25519
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes
from cryptography.hazmat.primitives.serialization import (
    Encoding,
    PublicFormat,
)

from .errors import DegenerateKey, IntegrityFailure, InvalidKey, InvalidPoint

MAC_LEN = 8
ENC_KEY_LEN = 16
ICB_LEN = 16
MAC_KEY_LEN = 32
SECRET_LEN = 32

_P256_ORDER = 0xFFFFFFFF00000000FFFFFFFFFFFFFFFFBCE6FAADA7179E84F3B9CAC2FC632551


class EciesProfile(enum.IntEnum):
    """The two standardized ECIES profiles; the value is the protection scheme id."""

    A = 1
    B = 2

    @property
    def public_key_len(self) -> int:
        return 32 if self is EciesProfile.A else 33

    @property
    def private_key_len(self) -> int:
        return 32

    @property
    def label(self) -> str:
        return "profile-a" if self is EciesProfile.A else "profile-b"

    @classmethod
    def from_label(cls, label: str) -> EciesProfile:
        text = label.strip().lower()
        for profile in cls:
            if text in (profile.label, profile.name.lower(), str(int(profile))):
                return profile
        raise ValueError(f"unknown ECIES profile {label!r}")


@dataclass(frozen=True)
class HomeNetworkKeyPair:
    profile: EciesProfile
    private_key: bytes
    public_key: bytes

    def __repr__(self):
        return f"HomeNetworkKeyPair({self.profile.label}, public={self.public_key.hex()})"


@dataclass(frozen=True)
class SharedSecret:
    profile: EciesProfile
    secret: bytes


@dataclass(frozen=True)
class DerivedKeys:
    enc_key: bytes
    initial_counter_block: bytes
    mac_key: bytes


def _default_rng():
    return secrets.SystemRandom()


def clamp_x25519(scalar: bytes) -> bytes:
    b = bytearray(scalar)
    b[0] &= 248
    b[31] &= 127
    b[31] |= 64
    return bytes(b)


def _check_len(what: str, data: bytes, expected: int) -> None:
    if len(data) != expected:
        raise InvalidKey(f"{what} must be {expected} octets, got {len(data)}")


def _p256_private(private_key: bytes) -> ec.EllipticCurvePrivateKey:
    _check_len("profile-b private key", private_key, 32)
    value = int.from_bytes(private_key, "big")
    if not 1 <= value < _P256_ORDER:
        raise InvalidKey("profile-b private scalar out of range [1, n-1]")
    return ec.derive_private_key(value, ec.SECP256R1())


def _p256_public(public_key: bytes) -> ec.EllipticCurvePublicKey:
    if len(public_key) != 33 or public_key[0] not in (2, 3):
        raise InvalidPoint("profile-b public key must be a 33-octet compressed point")
    try:
        return ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256R1(), public_key)
    except (ValueError, UnsupportedAlgorithm) as exc:
        raise InvalidPoint(f"not a point on secp256r1: {exc}") from None


def keypair_from_private(profile: EciesProfile, private_key: bytes) -> HomeNetworkKeyPair:
    """Rebuild a key pair from a stored private scalar.

    Profile A scalars are clamped before being stored, so the returned
    ``private_key`` may differ from the input in its low three and top two bits.
    """
    profile = EciesProfile(profile)
    if profile is EciesProfile.A:
        _check_len("profile-a private key", private_key, 32)
        private_key = clamp_x25519(private_key)
        key = x25519.X25519PrivateKey.from_private_bytes(private_key)
        public = key.public_key().public_bytes(Encoding.Raw, PublicFormat.Raw)
    else:
        key = _p256_private(private_key)
        public = key.public_key().public_bytes(Encoding.X962, PublicFormat.CompressedPoint)
    return HomeNetworkKeyPair(profile, bytes(private_key), public)


def generate_keypair(profile: EciesProfile, rng=None) -> HomeNetworkKeyPair:
    rng = rng or _default_rng()
    profile = EciesProfile(profile)
    if profile is EciesProfile.A:
        return keypair_from_private(profile, rng.randbytes(32))
    while True:
        candidate = rng.randbytes(32)
        if 1 <= int.from_bytes(candidate, "big") < _P256_ORDER:
            return keypair_from_private(profile, candidate)


def key_agreement(profile: EciesProfile, private_key: bytes, peer_public_key: bytes) -> SharedSecret:
    profile = EciesProfile(profile)
    if profile is EciesProfile.A:
        _check_len("profile-a private key", private_key, 32)
        _check_len("profile-a public key", peer_public_key, 32)
        priv = x25519.X25519PrivateKey.from_private_bytes(private_key)
        peer = x25519.X25519PublicKey.from_public_bytes(peer_public_key)
        try:
            secret = priv.exchange(peer)
        except ValueError:
            # OpenSSL refuses the all-zero output itself
            raise DegenerateKey("X25519 shared secret is all zero (small-order peer key)") from None
        if not any(secret):
            raise DegenerateKey("X25519 shared secret is all zero (small-order peer key)")
    else:
        priv = _p256_private(private_key)
        peer = _p256_public(peer_public_key)
        secret = priv.exchange(ec.ECDH(), peer)
    return SharedSecret(profile, secret)


def kdf(shared: SharedSecret, ephemeral_public_key: bytes, out_len: int) -> bytes:
    """ANSI X9.63 KDF over SHA-256 with the ephemeral public key as shared info."""
    if out_len < 1:
        raise ValueError("out_len must be at least 1")
    blocks = []
    counter = 1
    while 32 * len(blocks) < out_len:
        blocks.append(
            hashlib.sha256(shared.secret + counter.to_bytes(4, "big") + ephemeral_public_key).digest()
        )
        counter += 1
    return b"".join(blocks)[:out_len]


def derive_keys(shared: SharedSecret, ephemeral_public_key: bytes) -> DerivedKeys:
    material = kdf(shared, ephemeral_public_key, ENC_KEY_LEN + ICB_LEN + MAC_KEY_LEN)
    return DerivedKeys(
        enc_key=material[:ENC_KEY_LEN],
        initial_counter_block=material[ENC_KEY_LEN:ENC_KEY_LEN + ICB_LEN],
        mac_key=material[ENC_KEY_LEN + ICB_LEN:],
    )


def _ctr(keys: DerivedKeys, data: bytes) -> bytes:
    ctx = Cipher(algorithms.AES(keys.enc_key), modes.CTR(keys.initial_counter_block)).encryptor()
    return ctx.update(data) + ctx.finalize()


def _tag(keys: DerivedKeys, ciphertext: bytes) -> bytes:
    return hmac.new(keys.mac_key, ciphertext, hashlib.sha256).digest()[:MAC_LEN]


def conceal(
    profile: EciesProfile,
    hn_public_key: bytes,
    plaintext: bytes,
    *,
    ephemeral: HomeNetworkKeyPair | None = None,
    rng=None,
) -> tuple[bytes, bytes, bytes]:
    """Encrypt ``plaintext`` to the home network key.

    Returns ``(ephemeral_public_key, ciphertext, mac)``.  A fresh ephemeral
    key pair is drawn from ``rng`` unless ``ephemeral`` pins one (tests only).
    """
    profile = EciesProfile(profile)
    if not plaintext:
        raise ValueError("plaintext must be non-empty")
    if ephemeral is None:
        ephemeral = generate_keypair(profile, rng)
    elif ephemeral.profile is not profile:
        raise InvalidKey(f"ephemeral key is {ephemeral.profile.label}, expected {profile.label}")
    shared = key_agreement(profile, ephemeral.private_key, hn_public_key)
    keys = derive_keys(shared, ephemeral.public_key)
    ciphertext = _ctr(keys, plaintext)
    return ephemeral.public_key, ciphertext, _tag(keys, ciphertext)


def deconceal(
    profile: EciesProfile,
    hn_private_key: bytes,
    ephemeral_public_key: bytes,
    ciphertext: bytes,
    mac: bytes,
) -> bytes:
    """Verify the MAC, then decrypt.  Raises IntegrityFailure on any mismatch."""
    profile = EciesProfile(profile)
    if len(mac) != MAC_LEN:
        raise IntegrityFailure(f"MAC must be {MAC_LEN} octets, got {len(mac)}")
    shared = key_agreement(profile, hn_private_key, ephemeral_public_key)
    keys = derive_keys(shared, ephemeral_public_key)
    if not hmac.compare_digest(_tag(keys, ciphertext), mac):
        raise IntegrityFailure("MAC verification failed")
    return _ctr(keys, ciphertext)
