"""Exception hierarchy for the abpre toolkit."""


class AbpreError(Exception):
    """Base class for all abpre-specific errors."""


# ---- group / scalar errors ----

class NonPrimeModulus(AbpreError):
    """Mock suite was given a composite modulus."""


class UnsupportedCurve(AbpreError):
    """Pairing suite was asked for an unknown curve."""


class ZeroInverse(AbpreError):
    """Multiplicative inverse of zero requested."""


class BackendMismatch(AbpreError):
    """Values from different group suites (or moduli) were mixed."""


# ---- policy errors ----

class PolicySyntaxError(AbpreError):
    """Access-formula text failed to parse.

    Carries the character offset of the failure and the set of token
    kinds that would have been accepted there.
    """

    def __init__(self, position, expected):
        self.position = position
        self.expected = frozenset(expected)
        super().__init__(
            f"syntax error at position {position}: expected "
            + " or ".join(sorted(self.expected))
        )


# ---- scheme errors ----

class EmptyUniverse(AbpreError):
    """Setup requires at least one attribute."""


class DuplicateAttribute(AbpreError):
    """Setup universe contains a repeated attribute."""


class UnknownAttribute(AbpreError):
    """An attribute is not part of the system universe."""


class PolicyNotSatisfied(AbpreError):
    """The supplied attribute set does not satisfy the access policy."""


class ReencryptionDisabled(AbpreError):
    """Ciphertext was created without re-encryption material (no g2^s)."""


# ---- wire format errors ----

class FormatError(AbpreError):
    """Base class for serialization errors."""


class BadMagic(FormatError):
    """Input does not start with the ABPRE1 magic."""


class UnsupportedVersion(FormatError):
    """Wire version octet is not one this build understands."""


class TruncatedField(FormatError):
    """Input ended inside a length-prefixed field."""


class TypeMismatch(FormatError):
    """Decoded object type differs from the expected type."""


class InvalidEncoding(FormatError):
    """Field bytes do not describe a canonical, in-range value."""


class AEADAuthenticationFailure(FormatError):
    """Sealed payload failed authentication (tampered or wrong key)."""
