"""Type-1 (supersingular) pairing backend.

Curve: E: y^2 = x^3 + x over F_q with q = 3 mod 4, which is supersingular
with #E(F_q) = q + 1 = cofactor * r for a prime r.  G is the order-r
subgroup of E(F_q); G_T the order-r subgroup of F_{q^2}^*.  The pairing is
the modified Tate pairing

    e(P, Q) = f_{r,P}(phi(Q)) ^ ((q^2 - 1) / r)

with distortion map phi(x, y) = (-x, iy), i^2 = -1.  The distortion map
makes e symmetric and non-degenerate on G x G, exactly the setting the
scheme's algebra is written in.

The "ss512" parameter set is the widely used 512-bit/160-bit type-A
configuration (~80-bit security), the conventional choice for pairing
research prototypes.  Implementation notes:

* Miller's loop runs in affine coordinates with denominator elimination
  (vertical-line factors lie in F_q and die in the final exponentiation).
* The final exponentiation splits as (q-1) * (q+1)/r; after the (q-1)
  step values are unitary, so inversion is conjugation.
* Scalar multiplication caches a doubles table on the element, making
  repeated exponentiation of the fixed bases (g, g2, h_x, gt, ...) cheap.

All coordinates are gmpy2.mpz; hot paths are plain tuple arithmetic.
"""

import hashlib

from gmpy2 import invert, mpz, powmod

from .errors import InvalidEncoding, UnsupportedCurve
from .groups import GroupSuite

_CURVES = {
    # PBC type-A parameters: q + 1 = cofactor * r on y^2 = x^3 + x.
    "ss512": {
        "q": mpz(
            "8780710799663312522437781984754049815806883199414208211028653399266475"
            "630880222957078625179422662221423155858769582317459277713367317481324"
            "925129998224791"
        ),
        "r": mpz(730750818665451621361119245571504901405976559617),
    },
}


def _naf(k: int):
    """Non-adjacent form, least significant digit first."""
    digits = []
    while k:
        if k & 1:
            d = 2 - (k & 3)
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


class _Curve:
    """Arithmetic on E(F_q) and F_{q^2} for one parameter set."""

    def __init__(self, q: mpz, r: mpz):
        assert q % 4 == 3 and (q + 1) % r == 0
        self.q = q
        self.r = r
        self.cofactor = (q + 1) // r  # also the final-exponentiation tail
        self.rbits = bin(int(r))[3:]  # bits of r after the leading 1

    # ---- affine point arithmetic (None = point at infinity) ----

    def add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        q = self.q
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % q == 0:
                return None
            lam = (3 * x1 * x1 + 1) * invert(2 * y1, q) % q
        else:
            lam = (y2 - y1) * invert(x2 - x1, q) % q
        x3 = (lam * lam - x1 - x2) % q
        return (x3, (lam * (x1 - x3) - y1) % q)

    def neg(self, P):
        return None if P is None else (P[0], (-P[1]) % self.q)

    def mul_plain(self, P, k: int):
        """Double-and-add; used for cofactor clearing and cross-checks."""
        R = None
        for bit in bin(k)[2:] if k else "":
            R = self.add(R, R)
            if bit == "1":
                R = self.add(R, P)
        return R

    # ---- Jacobian helpers for fast multiplication ----

    def _jdbl(self, J):
        X1, Y1, Z1 = J
        q = self.q
        if Y1 == 0:
            return None
        YY = Y1 * Y1 % q
        S = 4 * X1 * YY % q
        ZZ = Z1 * Z1 % q
        M = (3 * X1 * X1 + ZZ * ZZ) % q
        X3 = (M * M - 2 * S) % q
        Y3 = (M * (S - X3) - 8 * YY * YY) % q
        Z3 = 2 * Y1 * Z1 % q
        return (X3, Y3, Z3)

    def _jmadd(self, J, A):
        """Jacobian + affine mixed addition."""
        if J is None:
            return (A[0], A[1], mpz(1))
        q = self.q
        X1, Y1, Z1 = J
        x2, y2 = A
        Z1Z1 = Z1 * Z1 % q
        U2 = x2 * Z1Z1 % q
        S2 = y2 * Z1 * Z1Z1 % q
        if U2 == X1:
            if S2 == Y1:
                return self._jdbl(J)
            return None
        H = (U2 - X1) % q
        HH = H * H % q
        I = 4 * HH % q
        Jj = H * I % q
        rr = 2 * (S2 - Y1) % q
        V = X1 * I % q
        X3 = (rr * rr - Jj - 2 * V) % q
        Y3 = (rr * (V - X3) - 2 * Y1 * Jj) % q
        Z3 = ((Z1 + H) * (Z1 + H) - Z1Z1 - HH) % q
        if Z3 == 0:
            return None
        return (X3, Y3, Z3)

    def _jaffine(self, J):
        if J is None:
            return None
        q = self.q
        X, Y, Z = J
        zi = invert(Z, q)
        zi2 = zi * zi % q
        return (X * zi2 % q, Y * zi2 * zi % q)

    def doubles_table(self, P):
        """Affine [2^i]P for i = 0 .. bitlen(r), batch-normalized."""
        q = self.q
        jac = [(P[0], P[1], mpz(1))]
        for _ in range(self.r.bit_length()):
            jac.append(self._jdbl(jac[-1]))
        # Montgomery batch inversion of the Z coordinates
        zs = [J[2] for J in jac]
        prefix = [mpz(1)]
        for z in zs:
            prefix.append(prefix[-1] * z % q)
        inv_total = invert(prefix[-1], q)
        table = [None] * len(jac)
        for idx in range(len(jac) - 1, -1, -1):
            zi = inv_total * prefix[idx] % q
            inv_total = inv_total * zs[idx] % q
            zi2 = zi * zi % q
            X, Y, _ = jac[idx]
            table[idx] = (X * zi2 % q, Y * zi2 * zi % q)
        return table

    def mul_table(self, table, k: int):
        """k*P from the doubles table of P, via NAF (adds only)."""
        acc = None
        for i, d in enumerate(_naf(k)):
            if d:
                A = table[i] if d > 0 else (table[i][0], (-table[i][1]) % self.q)
                acc = self._jmadd(acc, A)
        return self._jaffine(acc)

    # ---- F_{q^2} = F_q[i] / (i^2 + 1), elements (a, b) = a + b*i ----

    def f2_mul(self, x, y):
        q = self.q
        a0, a1 = x
        b0, b1 = y
        t0 = a0 * b0
        t1 = a1 * b1
        return ((t0 - t1) % q, ((a0 + a1) * (b0 + b1) - t0 - t1) % q)

    def f2_sqr(self, x):
        q = self.q
        a, b = x
        return ((a + b) * (a - b) % q, 2 * a * b % q)

    def f2_conj(self, x):
        return (x[0], (-x[1]) % self.q)

    def f2_inv(self, x):
        q = self.q
        a, b = x
        d = invert(a * a + b * b, q)
        return (a * d % q, (-b) * d % q)

    def f2_exp(self, x, k: int):
        """Square-and-multiply; safe for arbitrary F_{q^2} elements."""
        res = (mpz(1), mpz(0))
        if k == 0:
            return res
        for bit in bin(k)[2:]:
            res = self.f2_sqr(res)
            if bit == "1":
                res = self.f2_mul(res, x)
        return res

    def squares_table(self, z):
        table = [z]
        for _ in range(self.r.bit_length()):
            table.append(self.f2_sqr(table[-1]))
        return table

    def f2_exp_table(self, table, k: int):
        """z^k from the squares table; NAF uses conjugation as inverse.

        Only valid for unitary z (norm 1), which all of G_T is.
        """
        res = (mpz(1), mpz(0))
        for i, d in enumerate(_naf(k)):
            if d:
                res = self.f2_mul(res, table[i] if d > 0 else self.f2_conj(table[i]))
        return res

    # ---- modified Tate pairing ----

    def miller(self, P, Q):
        """f_{r,P} evaluated at phi(Q), vertical lines eliminated."""
        q = self.q
        xq, yq = Q
        mxq = (-xq) % q  # x-coordinate of phi(Q); the y-coordinate is i*yq
        f = (mpz(1), mpz(0))
        T = P
        for bit in self.rbits:
            f = self.f2_sqr(f)
            if T is not None:
                x1, y1 = T
                if y1 == 0:
                    T = None
                else:
                    lam = (3 * x1 * x1 + 1) * invert(2 * y1, q) % q
                    f = self.f2_mul(f, ((lam * (x1 - mxq) - y1) % q, yq))
                    x3 = (lam * lam - 2 * x1) % q
                    T = (x3, (lam * (x1 - x3) - y1) % q)
            if bit == "1" and T is not None:
                x1, y1 = T
                x2, y2 = P
                if x1 == x2:
                    if (y1 + y2) % q == 0:
                        T = None  # vertical line; eliminated
                        continue
                    lam = (3 * x1 * x1 + 1) * invert(2 * y1, q) % q
                else:
                    lam = (y2 - y1) * invert(x2 - x1, q) % q
                f = self.f2_mul(f, ((lam * (x1 - mxq) - y1) % q, yq))
                x3 = (lam * lam - x1 - x2) % q
                T = (x3, (lam * (x1 - x3) - y1) % q)
        return f

    def final_exp(self, f):
        # f^(q-1): conj(f) * f^(-1); the result is unitary
        u = self.f2_mul(self.f2_conj(f), self.f2_inv(f))
        # then ^((q+1)/r) with cheap unitary arithmetic
        res = (mpz(1), mpz(0))
        for bit in bin(int(self.cofactor))[2:]:
            res = self.f2_sqr(res)
            if bit == "1":
                res = self.f2_mul(res, u)
        return res

    def pair(self, P, Q):
        if P is None or Q is None:
            return (mpz(1), mpz(0))
        return self.final_exp(self.miller(P, Q))

    # ---- deterministic generator derivation ----

    def point_from_tag(self, tag: bytes):
        q = self.q
        counter = 0
        while True:
            seed = hashlib.sha512(tag + counter.to_bytes(4, "big")).digest()
            x = mpz(int.from_bytes(seed, "big") % q)
            rhs = (x * x % q * x + x) % q
            y = powmod(rhs, (q + 1) // 4, q)
            if y * y % q == rhs:
                P = self.mul_plain((x, min(y, q - y)), int(self.cofactor))
                if P is not None:
                    return P
            counter += 1


class PairingSuite(GroupSuite):
    """GroupSuite over the supersingular curve; scalars live mod r."""

    backend_id = "pairing"

    def __init__(self, curve: str = "ss512"):
        if curve not in _CURVES:
            raise UnsupportedCurve(f"unknown curve {curve!r}")
        params = _CURVES[curve]
        self.curve_name = curve
        self.curve = _Curve(params["q"], params["r"])
        self.order = int(params["r"])
        self._gen = self.curve.point_from_tag(b"abpre:" + curve.encode() + b":g")
        self._gen2 = self.curve.point_from_tag(b"abpre:" + curve.encode() + b":g2")
        super().__init__()
        assert self.gt.data != (1, 0), "pairing is degenerate"

    @property
    def params(self):
        return {"curve": self.curve_name}

    def _s_generator(self):
        return self._gen

    def _s_second_generator(self):
        return self._gen2

    def _s_identity(self):
        return None

    def _s_mul(self, a, b):
        return self.curve.add(a, b)

    def _s_exp(self, el, k):
        if el.data is None or k == 0:
            return None
        if el._cache is None:
            el._cache = self.curve.doubles_table(el.data)
        return self.curve.mul_table(el._cache, k)

    def _pair(self, a, b):
        return self.curve.pair(a, b)

    def _t_identity(self):
        return (mpz(1), mpz(0))

    def _t_mul(self, a, b):
        return self.curve.f2_mul(a, b)

    def _t_exp(self, el, k):
        if el.data == (1, 0) or k == 0:
            return (mpz(1), mpz(0))
        if el._cache is None:
            el._cache = self.curve.squares_table(el.data)
        return self.curve.f2_exp_table(el._cache, k)

    def _t_inverse(self, a):
        # G_T elements are unitary: z^(q+1) = 1, so the inverse is the conjugate
        return self.curve.f2_conj(a)

    # ---- encodings: uncompressed affine / F_{q^2} coordinate pairs ----

    _COORD = 64  # 512-bit field elements

    def _s_encode(self, a):
        if a is None:
            return b"\x00"
        x, y = a
        return b"\x04" + int(x).to_bytes(self._COORD, "big") + int(y).to_bytes(self._COORD, "big")

    def _s_decode(self, blob):
        if blob == b"\x00":
            return None
        if len(blob) != 1 + 2 * self._COORD or blob[0] != 0x04:
            raise InvalidEncoding("bad source element encoding")
        q = self.curve.q
        x = mpz(int.from_bytes(blob[1 : 1 + self._COORD], "big"))
        y = mpz(int.from_bytes(blob[1 + self._COORD :], "big"))
        if x >= q or y >= q:
            raise InvalidEncoding("coordinate not reduced mod q")
        if (y * y - (x * x % q * x + x)) % q != 0:
            raise InvalidEncoding("point is not on the curve")
        if self.curve.mul_plain((x, y), self.order) is not None:
            raise InvalidEncoding("point is outside the prime-order subgroup")
        return (x, y)

    def _t_encode(self, a):
        return int(a[0]).to_bytes(self._COORD, "big") + int(a[1]).to_bytes(
            self._COORD, "big"
        )

    def _t_decode(self, blob):
        if len(blob) != 2 * self._COORD:
            raise InvalidEncoding("bad target element encoding")
        q = self.curve.q
        a = mpz(int.from_bytes(blob[: self._COORD], "big"))
        b = mpz(int.from_bytes(blob[self._COORD :], "big"))
        if a >= q or b >= q:
            raise InvalidEncoding("coordinate not reduced mod q")
        if self.curve.f2_exp((a, b), self.order) != (1, 0):
            raise InvalidEncoding("value is outside the order-r subgroup")
        return (a, b)

    def describe_source(self, data):
        if data is None:
            return "identity"
        return f"({hex(int(data[0]))[:14]}.., ..)"

    def describe_target(self, data):
        return f"({hex(int(data[0]))[:14]}.., ..)"
