"""Ciphertext-policy attribute-based proxy re-encryption.

The six core operations (setup, keygen, encrypt, decrypt_l1, rkgen,
reencrypt + decrypt_l2) plus the outsourced-decryption transform.  A
delegator encrypts under policy W1; the proxy, holding a re-encryption
key, converts the ciphertext to one decryptable by holders of attribute
sets satisfying a second policy W2 chosen at re-encryption time, without
seeing the plaintext.  Setting ``reencryptable=False`` at encryption
omits the g2^s component, which blocks re-encryption while leaving
first-level decryption untouched.

Algebra (all verified exactly on the mock backend):

    K = g^a1 * g^(a*t),  L = g^t,  K_x = h_x^t
    C = m * e(g,g)^(a1*s),  C' = g^s,  Chat = g2^s,
    C_i = g^(a*l_i) * h^(-r_i),  D_i = g^(r_i)
    first level:  e(C',K) / prod_i (e(C_i,L) e(D_i,K_x))^(w_i) = e(g,g)^(a1*s)
    re-encrypted: T0 * e(P, AK) * J = e(g,g)^(a1*s)
        with  P = prod_i (C_i D_i)^(w_i),  AK = g2^d,
              J = prod_i (e(C'_i, L'') e(D'_i, K''_x))^(w'_i)

where a1 is the master exponent alpha.  The share vector of the second
level shares rk_scalar = a*d*t1, and L'' = g^(1/t1) supplies the matching
1/t1 so the exponents telescope to -a*d*s.

Caveats inherited from the construction itself: rkgen needs the master
key (delegation is not non-interactive with respect to the authority),
and the proxy receives the bare scalar a*d*t1.  Both are surfaced in the
README.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Optional

from .errors import (
    DuplicateAttribute,
    EmptyUniverse,
    PolicyNotSatisfied,
    ReencryptionDisabled,
    UnknownAttribute,
)
from .groups import GroupSuite, Scalar, SourceElement, TargetElement
from .policy import AccessMatrix, make_shares, satisfying_rows
from .rng import RandomSource


@dataclass(frozen=True)
class PublicParams:
    suite: GroupSuite
    universe: tuple[str, ...]
    e_gg_alpha: TargetElement
    g_a: SourceElement
    h: dict  # attribute -> SourceElement

    @property
    def g(self) -> SourceElement:
        return self.suite.g

    @property
    def g2(self) -> SourceElement:
        return self.suite.g2


@dataclass(frozen=True)
class MasterKey:
    alpha: Scalar
    a: Scalar


@dataclass(frozen=True)
class UserSecretKey:
    attrs: frozenset
    K: SourceElement
    L: SourceElement
    K_x: dict  # attribute -> SourceElement


@dataclass(frozen=True)
class CiphertextL1:
    policy: AccessMatrix
    C: TargetElement
    C_prime: SourceElement
    C_hat: Optional[SourceElement]  # present iff re-encryptable
    rows: tuple  # (C_i, D_i) per matrix row


@dataclass(frozen=True)
class ProxyReKey:
    delegator_attrs: frozenset
    K_p: SourceElement
    L_p: SourceElement
    K_px: dict
    rk_scalar: Scalar  # a * d * t1; shared over W2 at re-encryption time


@dataclass(frozen=True)
class DelegateeKey:
    attrs: frozenset
    AK: SourceElement  # g2^d
    L_dd: SourceElement  # g^(1/t1)
    K_ddx: dict  # attribute -> h_x^(1/t1)


@dataclass(frozen=True)
class CiphertextL2:
    policy2: AccessMatrix
    C: TargetElement  # carried unchanged from the first level
    T0: TargetElement
    P: SourceElement  # aggregate prod (C_i D_i)^(w_i) of the used rows
    rows2: tuple


@dataclass(frozen=True)
class TransformKey:
    attrs: frozenset
    L_tk: SourceElement
    K_tkx: dict
    AK: SourceElement


@dataclass(frozen=True)
class PartialDecryption:
    T0_full: TargetElement
    T1: TargetElement


def _require_known(attrs, universe, what="attribute"):
    unknown = set(attrs) - set(universe)
    if unknown:
        raise UnknownAttribute(f"{what}(s) not in universe: {sorted(unknown)}")


def setup(
    suite: GroupSuite, universe, rng: RandomSource
) -> tuple[PublicParams, MasterKey]:
    """Draw master exponents and one group element per universe attribute."""
    universe = tuple(universe)
    if not universe:
        raise EmptyUniverse("universe must name at least one attribute")
    if len(set(universe)) != len(universe):
        seen = set()
        dup = next(a for a in universe if a in seen or seen.add(a))
        raise DuplicateAttribute(f"attribute {dup!r} listed twice")
    alpha = suite.random_scalar(rng, nonzero=True)
    a = suite.random_scalar(rng, nonzero=True)
    h = {x: suite.g ** suite.random_scalar(rng) for x in universe}
    pp = PublicParams(
        suite=suite,
        universe=universe,
        e_gg_alpha=suite.gt ** alpha,
        g_a=suite.g ** a,
        h=h,
    )
    return pp, MasterKey(alpha=alpha, a=a)


def keygen(
    pp: PublicParams, msk: MasterKey, attrs, rng: RandomSource
) -> UserSecretKey:
    """Attribute-bound key: K = g^alpha g^(a t), L = g^t, K_x = h_x^t."""
    attrs = frozenset(attrs)
    if not attrs:
        raise ValueError("attribute set must be non-empty")
    _require_known(attrs, pp.universe)
    t = pp.suite.random_scalar(rng)
    return UserSecretKey(
        attrs=attrs,
        K=pp.g ** msk.alpha * pp.g_a ** t,
        L=pp.g ** t,
        K_x={x: pp.h[x] ** t for x in sorted(attrs)},
    )


def encrypt(
    pp: PublicParams,
    m: TargetElement,
    policy: AccessMatrix,
    reencryptable: bool,
    rng: RandomSource,
) -> CiphertextL1:
    """Encrypt a target-group message under an LSSS policy (M1, rho1)."""
    _require_known(policy.attributes, pp.universe, "policy attribute")
    suite = pp.suite
    policy = policy.reduce(suite.order)
    s = suite.random_scalar(rng)
    shares = make_shares(policy, s, rng)
    row_parts = []
    for lam_i, attr in zip(shares, policy.rho):
        r_i = suite.random_scalar(rng)
        C_i = pp.g_a ** lam_i * pp.h[attr] ** (-r_i)
        row_parts.append((C_i, pp.g ** r_i))
    return CiphertextL1(
        policy=policy,
        C=m * pp.e_gg_alpha ** s,
        C_prime=pp.g ** s,
        C_hat=pp.g2 ** s if reencryptable else None,
        rows=tuple(row_parts),
    )


def _pair_product(suite, terms):
    """prod over (left, right, w): (e(left_a, right_a) * e(left_b, right_b))^w."""
    acc = suite.target_identity()
    for (xa, ya), (xb, yb), w in terms:
        acc = acc * (suite.pair(xa, ya) * suite.pair(xb, yb)) ** w
    return acc


def decrypt_l1(pp: PublicParams, sk: UserSecretKey, ct: CiphertextL1) -> TargetElement:
    """First-level decryption; PolicyNotSatisfied when attrs fail the policy."""
    suite = pp.suite
    sel = satisfying_rows(ct.policy, sk.attrs, suite.order)
    if sel is None:
        raise PolicyNotSatisfied("key attributes do not satisfy the ciphertext policy")
    indices, omega = sel
    prod = _pair_product(
        suite,
        (
            ((ct.rows[i][0], sk.L), (ct.rows[i][1], sk.K_x[ct.policy.rho[i]]), w)
            for i, w in zip(indices, omega)
        ),
    )
    blinding = suite.pair(ct.C_prime, sk.K) / prod
    return ct.C / blinding


def rkgen(
    pp: PublicParams,
    msk: MasterKey,
    sk: UserSecretKey,
    delegatee_attrs,
    rng: RandomSource,
) -> tuple[ProxyReKey, DelegateeKey]:
    """Split re-encryption material: blinded delegator key for the proxy,
    auxiliary key (AK = g2^d) plus 1/t1-keys for the delegatee."""
    delegatee_attrs = frozenset(delegatee_attrs)
    if not delegatee_attrs:
        raise ValueError("delegatee attribute set must be non-empty")
    _require_known(delegatee_attrs, pp.universe, "delegatee attribute")
    suite = pp.suite
    d = suite.random_scalar(rng, nonzero=True)
    t1 = suite.random_scalar(rng, nonzero=True)
    g2_d = pp.g2 ** d
    t1_inv = t1.inverse()
    proxy = ProxyReKey(
        delegator_attrs=sk.attrs,
        K_p=sk.K * pp.g2 ** (msk.a * d),
        L_p=sk.L * g2_d,
        K_px={x: sk.K_x[x] * g2_d for x in sorted(sk.attrs)},
        rk_scalar=msk.a * d * t1,
    )
    delegatee = DelegateeKey(
        attrs=delegatee_attrs,
        AK=g2_d,
        L_dd=pp.g ** t1_inv,
        K_ddx={x: pp.h[x] ** t1_inv for x in sorted(delegatee_attrs)},
    )
    return proxy, delegatee


def reencrypt(
    pp: PublicParams,
    rk: ProxyReKey,
    ct: CiphertextL1,
    policy2: AccessMatrix,
    rng: RandomSource,
) -> CiphertextL2:
    """Transform a re-encryptable first-level ciphertext to policy W2.

    The delegator's attributes must satisfy the original policy; the new
    rows share rk_scalar = a*d*t1 so that only 1/t1 key holders can peel
    the extra blinding.
    """
    if ct.C_hat is None:
        raise ReencryptionDisabled("ciphertext was encrypted without g2^s")
    _require_known(policy2.attributes, pp.universe, "policy attribute")
    suite = pp.suite
    sel = satisfying_rows(ct.policy, rk.delegator_attrs, suite.order)
    if sel is None:
        raise PolicyNotSatisfied(
            "delegator attributes do not satisfy the original policy"
        )
    indices, omega = sel
    prod = _pair_product(
        suite,
        (
            ((ct.rows[i][0], rk.L_p), (ct.rows[i][1], rk.K_px[ct.policy.rho[i]]), w)
            for i, w in zip(indices, omega)
        ),
    )
    T0 = suite.pair(ct.C_prime, rk.K_p) / prod
    P = reduce(
        suite.source_mul,
        ((ct.rows[i][0] * ct.rows[i][1]) ** w for i, w in zip(indices, omega)),
    )
    policy2 = policy2.reduce(suite.order)
    shares = make_shares(policy2, rk.rk_scalar, rng)
    rows2 = []
    for lam_i, attr in zip(shares, policy2.rho):
        r_i = suite.random_scalar(rng)
        C_i = ct.C_hat ** (-lam_i) * pp.h[attr] ** (-r_i)
        rows2.append((C_i, pp.g ** r_i))
    return CiphertextL2(policy2=policy2, C=ct.C, T0=T0, P=P, rows2=tuple(rows2))


def decrypt_l2(pp: PublicParams, dk: DelegateeKey, ct2: CiphertextL2) -> TargetElement:
    """Decrypt a re-encrypted ciphertext with the delegatee key."""
    suite = pp.suite
    sel = satisfying_rows(ct2.policy2, dk.attrs, suite.order)
    if sel is None:
        raise PolicyNotSatisfied(
            "delegatee attributes do not satisfy the re-encryption policy"
        )
    indices, omega = sel
    J = _pair_product(
        suite,
        (
            ((ct2.rows2[i][0], dk.L_dd), (ct2.rows2[i][1], dk.K_ddx[ct2.policy2.rho[i]]), w)
            for i, w in zip(indices, omega)
        ),
    )
    blinding = ct2.T0 * suite.pair(ct2.P, dk.AK) * J
    return ct2.C / blinding


def transform_keygen(
    dk: DelegateeKey, rng: RandomSource
) -> tuple[Scalar, TransformKey]:
    """Blind the delegatee key by 1/z so a third party can do the pairings."""
    suite = dk.AK.suite
    z = suite.random_scalar(rng, nonzero=True)
    z_inv = z.inverse()
    tk = TransformKey(
        attrs=dk.attrs,
        L_tk=dk.L_dd ** z_inv,
        K_tkx={x: el ** z_inv for x, el in sorted(dk.K_ddx.items())},
        AK=dk.AK,
    )
    return z, tk


def transform_apply(
    pp: PublicParams, tk: TransformKey, ct2: CiphertextL2
) -> PartialDecryption:
    """Outsourced pairing work: everything except the final unblinding."""
    suite = pp.suite
    sel = satisfying_rows(ct2.policy2, tk.attrs, suite.order)
    if sel is None:
        raise PolicyNotSatisfied(
            "transform-key attributes do not satisfy the re-encryption policy"
        )
    indices, omega = sel
    T1 = _pair_product(
        suite,
        (
            ((ct2.rows2[i][0], tk.L_tk), (ct2.rows2[i][1], tk.K_tkx[ct2.policy2.rho[i]]), w)
            for i, w in zip(indices, omega)
        ),
    )
    return PartialDecryption(
        T0_full=ct2.T0 * suite.pair(ct2.P, tk.AK),
        T1=T1,
    )


def finish_decrypt(
    z: Scalar, C: TargetElement, pd: PartialDecryption
) -> TargetElement:
    """Unblind a partial decryption: m = C / (T0_full * T1^z)."""
    return C / (pd.T0_full * pd.T1 ** z)
