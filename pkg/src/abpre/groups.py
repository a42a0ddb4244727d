"""Bilinear group abstraction with interchangeable backends.

Two backends implement the same symmetric-pairing interface:

* ``mock`` -- a discrete-log oracle where every element is represented by
  its exponent modulo a chosen prime.  All protocol identities become
  exact modular arithmetic, which is what the scheme test suite leans on.
* ``pairing`` -- a type-1 supersingular curve with a real Tate pairing
  (see :mod:`abpre.pairing`).

Suites are interned: :func:`suite_new` returns the same object for the
same parameters, so elements decoded from disk interoperate with elements
from an independently constructed suite.
"""

from __future__ import annotations

import gmpy2

from .errors import BackendMismatch, InvalidEncoding, NonPrimeModulus, ZeroInverse
from .rng import RandomSource


class Scalar:
    """An element of Z_p in canonical form (0 <= value < modulus)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.modulus != self.modulus:
                raise BackendMismatch("scalars from different moduli")
            return other
        if isinstance(other, int):
            return Scalar(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.value + other.value, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.value - other.value, self.modulus)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Scalar(self.value * other.value, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(-self.value, self.modulus)

    def inverse(self) -> "Scalar":
        if self.value == 0:
            raise ZeroInverse("0 has no multiplicative inverse")
        return Scalar(int(gmpy2.invert(self.value, self.modulus)), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"Scalar({self.value} mod {self.modulus})"


class SourceElement:
    """Element of the pairing source group G."""

    __slots__ = ("suite", "data", "_cache")

    def __init__(self, suite: "GroupSuite", data):
        self.suite = suite
        self.data = data
        self._cache = None

    def __mul__(self, other):
        return self.suite.source_mul(self, other)

    def __pow__(self, k):
        return self.suite.source_exp(self, k)

    def __eq__(self, other):
        return (
            isinstance(other, SourceElement)
            and self.suite is other.suite
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.suite), self.data))

    def __repr__(self):
        return f"<G {self.suite.describe_source(self.data)}>"


class TargetElement:
    """Element of the pairing target group G_T."""

    __slots__ = ("suite", "data", "_cache")

    def __init__(self, suite: "GroupSuite", data):
        self.suite = suite
        self.data = data
        self._cache = None

    def __mul__(self, other):
        return self.suite.target_mul(self, other)

    def __pow__(self, k):
        return self.suite.target_exp(self, k)

    def __truediv__(self, other):
        return self.suite.target_mul(self, self.suite.target_inverse(other))

    def inverse(self):
        return self.suite.target_inverse(self)

    def __eq__(self, other):
        return (
            isinstance(other, TargetElement)
            and self.suite is other.suite
            and self.data == other.data
        )

    def __hash__(self):
        return hash((id(self.suite), self.data))

    def __repr__(self):
        return f"<GT {self.suite.describe_target(self.data)}>"


class GroupSuite:
    """A bilinear group: generators g, g2 of G, gt = pair(g, g) in G_T.

    Concrete backends implement the ``_s_*`` / ``_t_*`` payload hooks; the
    public methods add suite-mismatch checks and element wrapping.
    """

    backend_id: str
    order: int

    def __init__(self):
        self.g = SourceElement(self, self._s_generator())
        self.g2 = SourceElement(self, self._s_second_generator())
        self.gt = TargetElement(self, self._pair(self.g.data, self.g.data))

    # -- scalar helpers ------------------------------------------------

    def scalar(self, value: int) -> Scalar:
        return Scalar(value, self.order)

    def random_scalar(self, rng: RandomSource, nonzero: bool = False) -> Scalar:
        draw = rng.below_nonzero if nonzero else rng.below
        return Scalar(draw(self.order), self.order)

    def _exponent(self, k) -> int:
        if isinstance(k, Scalar):
            if k.modulus != self.order:
                raise BackendMismatch("scalar modulus differs from suite order")
            return k.value
        if isinstance(k, int):
            return k % self.order
        raise TypeError(f"exponent must be Scalar or int, not {type(k).__name__}")

    # -- mismatch checks -----------------------------------------------

    def _check_source(self, x):
        if not isinstance(x, SourceElement) or x.suite is not self:
            raise BackendMismatch("source element belongs to a different suite")

    def _check_target(self, x):
        if not isinstance(x, TargetElement) or x.suite is not self:
            raise BackendMismatch("target element belongs to a different suite")

    # -- source group ----------------------------------------------------

    def source_identity(self) -> SourceElement:
        return SourceElement(self, self._s_identity())

    def source_mul(self, x: SourceElement, y: SourceElement) -> SourceElement:
        self._check_source(x)
        self._check_source(y)
        return SourceElement(self, self._s_mul(x.data, y.data))

    def source_exp(self, base: SourceElement, k) -> SourceElement:
        self._check_source(base)
        return SourceElement(self, self._s_exp(base, self._exponent(k)))

    # -- pairing ---------------------------------------------------------

    def pair(self, x: SourceElement, y: SourceElement) -> TargetElement:
        self._check_source(x)
        self._check_source(y)
        return TargetElement(self, self._pair(x.data, y.data))

    # -- target group ----------------------------------------------------

    def target_identity(self) -> TargetElement:
        return TargetElement(self, self._t_identity())

    def target_mul(self, x: TargetElement, y: TargetElement) -> TargetElement:
        self._check_target(x)
        self._check_target(y)
        return TargetElement(self, self._t_mul(x.data, y.data))

    def target_exp(self, base: TargetElement, k) -> TargetElement:
        self._check_target(base)
        return TargetElement(self, self._t_exp(base, self._exponent(k)))

    def target_inverse(self, x: TargetElement) -> TargetElement:
        self._check_target(x)
        return TargetElement(self, self._t_inverse(x.data))

    def random_target(self, rng: RandomSource) -> TargetElement:
        """Uniform element of G_T (gt generates the whole prime-order group)."""
        return self.target_exp(self.gt, rng.below(self.order))

    # -- serialization hooks (used by abpre.wire) ------------------------

    @property
    def params(self) -> dict:
        raise NotImplementedError

    def encode_source(self, x: SourceElement) -> bytes:
        self._check_source(x)
        return self._s_encode(x.data)

    def decode_source(self, blob: bytes) -> SourceElement:
        return SourceElement(self, self._s_decode(blob))

    def encode_target(self, x: TargetElement) -> bytes:
        self._check_target(x)
        return self._t_encode(x.data)

    def decode_target(self, blob: bytes) -> TargetElement:
        return TargetElement(self, self._t_decode(blob))

    def describe_source(self, data) -> str:
        return repr(data)

    def describe_target(self, data) -> str:
        return repr(data)


class MockSuite(GroupSuite):
    """Discrete-log oracle backend: an element *is* its exponent mod p.

    ``g`` is exponent 1, ``g2`` a chosen nonzero exponent, and
    ``pair(g^a, g^b) = gt^(ab)``, so every pairing-product identity in the
    scheme reduces to exact integer arithmetic.  Test oracle only; offers
    no hardness whatsoever.
    """

    backend_id = "mock"

    def __init__(self, p: int, g2_exponent: int):
        if p < 2 or not gmpy2.is_prime(p):
            raise NonPrimeModulus(f"mock modulus {p} is not prime")
        if p.bit_length() > 256:
            raise ValueError("mock modulus must fit in 32 bytes")
        if g2_exponent % p == 0:
            raise ValueError("g2 exponent must be nonzero mod p")
        self.order = p
        self._g2_exponent = g2_exponent % p
        super().__init__()

    @property
    def params(self):
        return {"p": self.order, "g2_exponent": self._g2_exponent}

    def _s_generator(self):
        return 1

    def _s_second_generator(self):
        return self._g2_exponent

    def _s_identity(self):
        return 0

    def _s_mul(self, a, b):
        return (a + b) % self.order

    def _s_exp(self, base, k):
        return base.data * k % self.order

    def _pair(self, a, b):
        return a * b % self.order

    _t_identity = _s_identity
    _t_mul = _s_mul
    _t_exp = _s_exp

    def _t_inverse(self, a):
        return -a % self.order

    def _s_encode(self, a):
        return a.to_bytes(32, "big")

    def _s_decode(self, blob):
        if len(blob) != 32:
            raise InvalidEncoding("mock element must be 32 bytes")
        v = int.from_bytes(blob, "big")
        if v >= self.order:
            raise InvalidEncoding("mock exponent not reduced mod p")
        return v

    _t_encode = _s_encode
    _t_decode = _s_decode

    def describe_source(self, data):
        return f"g^{data} mod {self.order}"

    describe_target = describe_source


_SUITES: dict = {}


def suite_new(backend_id: str, **params) -> GroupSuite:
    """Create (or fetch the interned copy of) a group suite.

    mock backend:    ``suite_new("mock", p=?, g2_exponent=?)``
    pairing backend: ``suite_new("pairing", curve="ss512")``
    """
    if backend_id == "mock":
        key = ("mock", params["p"], params["g2_exponent"])
        if key not in _SUITES:
            suite = MockSuite(params["p"], params["g2_exponent"])
            canonical = ("mock", suite.order, suite._g2_exponent)
            _SUITES[key] = _SUITES.setdefault(canonical, suite)
        return _SUITES[key]
    if backend_id == "pairing":
        from .pairing import PairingSuite

        curve = params.get("curve", "ss512")
        key = ("pairing", curve)
        if key not in _SUITES:
            _SUITES[key] = PairingSuite(curve)
        return _SUITES[key]
    raise ValueError(f"unknown backend {backend_id!r}")
