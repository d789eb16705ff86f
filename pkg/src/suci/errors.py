"""Exception hierarchy shared by every module of the toolkit."""


class SuciError(Exception):
    """Base class for domain errors (CLI maps these to exit code 1)."""


class UsageError(SuciError):
    """Malformed user input: identifiers, scenario or policy text (exit code 2)."""


# identifiers
class InvalidDigit(UsageError, ValueError):
    pass


class MalformedTbcd(SuciError, ValueError):
    pass


class InvalidSupi(UsageError, ValueError):
    pass


class InvalidSuci(UsageError, ValueError):
    pass


class UnknownScheme(SuciError, ValueError):
    pass


class TruncatedOutput(SuciError, ValueError):
    pass


# ecies
class InvalidKey(SuciError, ValueError):
    """Key material of the wrong length or out of range for its profile."""


class DegenerateKey(SuciError):
    """X25519 produced the all-zero secret (peer key of small order)."""


class InvalidPoint(SuciError):
    """secp256r1 public key does not decode to a point on the curve."""


class IntegrityFailure(SuciError):
    """MAC tag did not verify; no plaintext is released."""


# protection
class UnknownKeyId(SuciError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MissingHomeKey(SuciError):
    """ECIES preferred, no home network key provisioned, null fallback forbidden."""


class CorruptPlaintext(SuciError):
    pass


# toy_curve
class TooLarge(SuciError, ValueError):
    pass


# netsim
class DegenerateGeometry(SuciError, ValueError):
    pass


class OutOfModel(SuciError, ValueError):
    pass


class ScenarioError(UsageError):
    pass


class PolicyError(UsageError):
    pass


class KeyFileError(SuciError):
    pass
