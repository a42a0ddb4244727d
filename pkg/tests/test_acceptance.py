"""Acceptance suite: one test per criterion, exact equality throughout.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one PASS/FAIL
line per criterion.  Expected values for the worked transcript were
regenerated with scripts/regen_transcript.py before being frozen here.
"""

import functools
import importlib.util
import pathlib
import random
import time

import pytest

from abpre import scheme, wire
from abpre.errors import PolicyNotSatisfied, ReencryptionDisabled
from abpre.groups import suite_new
from abpre.policy import (
    And,
    Leaf,
    Or,
    compile_lsss,
    eval_formula,
    parse_policy,
    rank,
    satisfying_rows,
)
from abpre.rng import SeededRandom, TapeRandom

from conftest import M61

ROOT = pathlib.Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"

ATTRS = ("A", "B", "C", "D")


def criterion(number, description):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[ACCEPTANCE {number}] FAIL  {description}")
                raise
            print(f"[ACCEPTANCE {number}] PASS  {description}")
        return wrapper
    return deco


def _both_suites():
    return [
        suite_new("mock", p=M61, g2_exponent=2),
        suite_new("pairing", curve="ss512"),
    ]


def _random_formula(rnd, depth):
    if depth <= 1 or rnd.random() < 0.3:
        return Leaf(rnd.choice(ATTRS))
    op = And if rnd.random() < 0.5 else Or
    return op(_random_formula(rnd, depth - 1), _random_formula(rnd, depth - 1))


def _random_subset(rnd):
    return frozenset(a for a in ATTRS if rnd.random() < 0.5)


# -------------------------------------------------------------------------


@criterion(1, "golden transcript W-1 reproduced exactly, both decrypts recover m")
def test_criterion_1_golden_transcript():
    start = time.perf_counter()
    suite = suite_new("mock", p=13, g2_exponent=7)
    g, gt = suite.g, suite.gt

    pp, msk = scheme.setup(suite, ["A", "B"], TapeRandom([3, 2, 4, 5]))
    assert pp.e_gg_alpha == gt ** 3 and pp.g_a == g ** 2
    assert pp.h == {"A": g ** 4, "B": g ** 5}

    sk = scheme.keygen(pp, msk, {"A", "B"}, TapeRandom([6]))
    assert (sk.K, sk.L) == (g ** 2, g ** 6)
    assert sk.K_x == {"A": g ** 11, "B": g ** 4}

    m = gt ** 9
    w1 = compile_lsss(parse_policy("A AND B"))
    ct = scheme.encrypt(pp, m, w1, True, TapeRandom([5, 3, 1, 2]))
    assert (ct.C, ct.C_prime, ct.C_hat) == (gt ** 11, g ** 5, g ** 9)
    assert ct.rows == ((g ** 12, g ** 1), (g ** 10, g ** 2))

    assert suite.pair(ct.C_prime, sk.K) == gt ** 10
    assert scheme.decrypt_l1(pp, sk, ct) == m

    rk, dk = scheme.rkgen(pp, msk, sk, {"B"}, TapeRandom([4, 3]))
    assert (rk.K_p, rk.L_p) == (g ** 6, g ** 8)
    assert rk.K_px == {"A": g ** 0, "B": g ** 6}
    assert rk.rk_scalar.value == 11
    assert (dk.AK, dk.L_dd) == (g ** 2, g ** 9)
    assert dk.K_ddx == {"B": g ** 6}

    ct2 = scheme.reencrypt(pp, rk, ct, compile_lsss(parse_policy("B")), TapeRandom([6]))
    assert (ct2.T0, ct2.P) == (gt ** 11, g ** 12)
    assert ct2.rows2 == ((g ** 1, g ** 6),)
    assert scheme.decrypt_l2(pp, dk, ct2) == m

    z, tk = scheme.transform_keygen(dk, TapeRandom([5]))
    assert (tk.L_tk, tk.K_tkx["B"]) == (g ** 7, g ** 9)
    pd = scheme.transform_apply(pp, tk, ct2)
    assert (pd.T1, pd.T0_full) == (gt ** 9, gt ** 9)
    assert scheme.finish_decrypt(z, ct2.C, pd) == m

    assert time.perf_counter() - start < 1.0


@criterion(2, "bilinearity holds exactly on >=100 random pairs per backend")
def test_criterion_2_bilinearity():
    for suite in _both_suites():
        rng = SeededRandom(2)
        for _ in range(100):
            a = suite.random_scalar(rng)
            b = suite.random_scalar(rng)
            assert suite.pair(suite.g ** a, suite.g ** b) == suite.gt ** (a * b)
        assert suite.gt != suite.target_identity()


@criterion(3, "LSSS compiler equivalent to brute force, exhaustive to depth 3")
def test_criterion_3_compiler_equivalence():
    start = time.perf_counter()

    def formulas(depth):
        if depth == 1:
            return [Leaf(a) for a in ATTRS]
        smaller = formulas(depth - 1)
        out = list(smaller)
        for left in smaller:
            for right in smaller:
                out.append(And(left, right))
                out.append(Or(left, right))
        return out

    all_formulas = formulas(3)
    assert len(all_formulas) == 2628  # 36 of depth <= 2, plus 2 * 36^2 combinations
    subsets = [
        frozenset(a for i, a in enumerate(ATTRS) if mask >> i & 1)
        for mask in range(16)
    ]
    for modulus in (13, M61):
        for f in all_formulas:
            matrix = compile_lsss(f)
            for S in subsets:
                sel = satisfying_rows(matrix, S, modulus)
                assert (sel is not None) == eval_formula(f, S)
                if sel is not None:
                    indices, omega = sel
                    assert all(matrix.rho[i] in S for i in indices)
                    for col in range(matrix.n_cols):
                        total = sum(
                            w.value * matrix.rows[i][col]
                            for i, w in zip(indices, omega)
                        )
                        assert total % modulus == (1 if col == 0 else 0)
    assert time.perf_counter() - start < 30.0


@criterion(4, ">=200 randomized round trips per backend, success iff satisfaction")
def test_criterion_4_round_trips():
    for suite in _both_suites():
        rnd = random.Random(4)
        rng = SeededRandom(44)
        pp, msk = scheme.setup(suite, list(ATTRS), rng)
        keys = {}  # attr subset -> UserSecretKey (one key per user)
        rekeys = {}  # (delegator subset, delegatee subset) -> (rk, dk)

        def key_for(attrs):
            if attrs not in keys:
                keys[attrs] = scheme.keygen(pp, msk, attrs, rng)
            return keys[attrs]

        # first level
        for _ in range(200):
            ast = _random_formula(rnd, 3)
            attrs = _random_subset(rnd) or frozenset({rnd.choice(ATTRS)})
            m = suite.random_target(rng)
            ct = scheme.encrypt(pp, m, compile_lsss(ast), True, rng)
            sk = key_for(attrs)
            if eval_formula(ast, attrs):
                assert scheme.decrypt_l1(pp, sk, ct) == m
            else:
                with pytest.raises(PolicyNotSatisfied):
                    scheme.decrypt_l1(pp, sk, ct)

        # re-encrypted
        done = 0
        while done < 200:
            ast1 = _random_formula(rnd, 3)
            ast2 = _random_formula(rnd, 3)
            delegator = _random_subset(rnd) or frozenset({rnd.choice(ATTRS)})
            delegatee = _random_subset(rnd) or frozenset({rnd.choice(ATTRS)})
            if not eval_formula(ast1, delegator):
                continue  # proxy-side rejection exercised separately below
            pair_key = (delegator, delegatee)
            if pair_key not in rekeys:
                rekeys[pair_key] = scheme.rkgen(
                    pp, msk, key_for(delegator), delegatee, rng
                )
            rk, dk = rekeys[pair_key]
            m = suite.random_target(rng)
            ct = scheme.encrypt(pp, m, compile_lsss(ast1), True, rng)
            ct2 = scheme.reencrypt(pp, rk, ct, compile_lsss(ast2), rng)
            if eval_formula(ast2, delegatee):
                assert scheme.decrypt_l2(pp, dk, ct2) == m
            else:
                with pytest.raises(PolicyNotSatisfied):
                    scheme.decrypt_l2(pp, dk, ct2)
            done += 1

        # unsatisfied delegator policy rejects at the proxy
        sk = key_for(frozenset({"A"}))
        rk, _ = scheme.rkgen(pp, msk, sk, frozenset({"B"}), rng)
        ct = scheme.encrypt(
            pp, suite.random_target(rng), compile_lsss(parse_policy("A AND B")),
            True, rng,
        )
        with pytest.raises(PolicyNotSatisfied):
            scheme.reencrypt(pp, rk, ct, compile_lsss(parse_policy("B")), rng)


@criterion(5, "outsourced decryption equals direct decryption on >=100 instances")
def test_criterion_5_outsourcing_equivalence():
    suite = suite_new("mock", p=M61, g2_exponent=2)
    rnd = random.Random(5)
    rng = SeededRandom(55)
    pp, msk = scheme.setup(suite, list(ATTRS), rng)
    sk = scheme.keygen(pp, msk, frozenset(ATTRS), rng)
    done = 0
    while done < 100:
        ast1 = _random_formula(rnd, 3)
        ast2 = _random_formula(rnd, 3)
        delegatee = _random_subset(rnd) or frozenset({rnd.choice(ATTRS)})
        if not eval_formula(ast2, delegatee):
            continue
        rk, dk = scheme.rkgen(pp, msk, sk, delegatee, rng)
        m = suite.random_target(rng)
        ct = scheme.encrypt(pp, m, compile_lsss(ast1), True, rng)
        ct2 = scheme.reencrypt(pp, rk, ct, compile_lsss(ast2), rng)
        direct = scheme.decrypt_l2(pp, dk, ct2)
        z, tk = scheme.transform_keygen(dk, rng)
        pd = scheme.transform_apply(pp, tk, ct2)
        assert scheme.finish_decrypt(z, ct2.C, pd) == direct == m
        done += 1
    # and on the pairing backend for a sample
    suite = suite_new("pairing", curve="ss512")
    rng = SeededRandom(56)
    pp, msk = scheme.setup(suite, list(ATTRS), rng)
    sk = scheme.keygen(pp, msk, frozenset(ATTRS), rng)
    rk, dk = scheme.rkgen(pp, msk, sk, frozenset({"C"}), rng)
    for _ in range(5):
        m = suite.random_target(rng)
        ct = scheme.encrypt(pp, m, compile_lsss(parse_policy("A AND B")), True, rng)
        ct2 = scheme.reencrypt(pp, rk, ct, compile_lsss(parse_policy("C")), rng)
        z, tk = scheme.transform_keygen(dk, rng)
        pd = scheme.transform_apply(pp, tk, ct2)
        assert scheme.finish_decrypt(z, ct2.C, pd) == scheme.decrypt_l2(pp, dk, ct2) == m


@criterion(6, "re-encryption control: disabled blocks the proxy, never the owner")
def test_criterion_6_reencryption_control():
    for suite in _both_suites():
        rng = SeededRandom(6)
        pp, msk = scheme.setup(suite, list(ATTRS), rng)
        sk = scheme.keygen(pp, msk, frozenset({"A", "B"}), rng)
        rk, dk = scheme.rkgen(pp, msk, sk, frozenset({"C"}), rng)
        policy = compile_lsss(parse_policy("A AND B"))
        policy2 = compile_lsss(parse_policy("C"))
        for _ in range(10):
            m = suite.random_target(rng)
            locked = scheme.encrypt(pp, m, policy, False, rng)
            assert locked.C_hat is None
            with pytest.raises(ReencryptionDisabled):
                scheme.reencrypt(pp, rk, locked, policy2, rng)
            assert scheme.decrypt_l1(pp, sk, locked) == m
            open_ct = scheme.encrypt(pp, m, policy, True, rng)
            assert scheme.decrypt_l1(pp, sk, open_ct) == m
            assert scheme.decrypt_l2(
                pp, dk, scheme.reencrypt(pp, rk, open_ct, policy2, rng)
            ) == m


@criterion(7, "serialization round trips, canonical bytes, stable golden files")
def test_criterion_7_serialization():
    for suite in _both_suites():
        rng = SeededRandom(7)
        pp, msk = scheme.setup(suite, list(ATTRS), rng)
        sk = scheme.keygen(pp, msk, frozenset({"A", "B"}), rng)
        m = suite.random_target(rng)
        ct = scheme.encrypt(pp, m, compile_lsss(parse_policy("A AND B")), True, rng)
        rk, dk = scheme.rkgen(pp, msk, sk, frozenset({"C"}), rng)
        ct2 = scheme.reencrypt(pp, rk, ct, compile_lsss(parse_policy("C")), rng)
        _, tk = scheme.transform_keygen(dk, rng)
        eight = {
            wire.TYPE_PK: pp, wire.TYPE_MSK: msk, wire.TYPE_SK: sk,
            wire.TYPE_RK_PROXY: rk, wire.TYPE_RK_DELEGATEE: dk,
            wire.TYPE_CT1: ct, wire.TYPE_CT2: ct2, wire.TYPE_TK: tk,
        }
        assert len(eight) == 8
        for obj_type, obj in eight.items():
            blob = wire.encode_object(obj, suite=suite)
            decoded = wire.decode_object(blob, obj_type)
            assert decoded == obj
            assert wire.encode_object(decoded, suite=suite) == blob

    # golden files: regenerate the transcript and compare byte-for-byte
    spec = importlib.util.spec_from_file_location(
        "make_golden", ROOT / "scripts" / "make_golden.py"
    )
    make_golden = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(make_golden)
    built = make_golden.build()
    for name, blob in built.items():
        assert (GOLDEN / name).read_bytes() == blob, f"golden file drifted: {name}"
    rebuilt = make_golden.build()
    assert rebuilt == built


@criterion(8, "unauthorized sets: target outside row span, decrypts always refuse")
def test_criterion_8_negative_authorization():
    suite = suite_new("mock", p=M61, g2_exponent=2)
    rnd = random.Random(8)
    rng = SeededRandom(88)
    pp, msk = scheme.setup(suite, list(ATTRS), rng)
    full_sk = scheme.keygen(pp, msk, frozenset(ATTRS), rng)
    checked = 0
    for _ in range(300):
        ast = _random_formula(rnd, 3)
        S = _random_subset(rnd)
        if eval_formula(ast, S):
            continue
        matrix = compile_lsss(ast)
        rows_s = [matrix.rows[i] for i, a in enumerate(matrix.rho) if a in S]
        e1 = [1] + [0] * (matrix.n_cols - 1)
        assert rank(rows_s + [e1], M61) == rank(rows_s, M61) + 1
        assert satisfying_rows(matrix, S, M61) is None
        m = suite.random_target(rng)
        ct = scheme.encrypt(pp, m, matrix, True, rng)
        if S:
            sk = scheme.keygen(pp, msk, S, rng)
            with pytest.raises(PolicyNotSatisfied):
                scheme.decrypt_l1(pp, sk, ct)
            rk, dk = scheme.rkgen(pp, msk, full_sk, S, rng)
            ct2 = scheme.reencrypt(pp, rk, ct, matrix, rng)
            with pytest.raises(PolicyNotSatisfied):
                scheme.decrypt_l2(pp, dk, ct2)
            _, tk = scheme.transform_keygen(dk, rng)
            with pytest.raises(PolicyNotSatisfied):
                scheme.transform_apply(pp, tk, ct2)
        checked += 1
    assert checked >= 100


@criterion(9, "pairing-backend 10-attribute encrypt/reencrypt/decrypt cycle < 1 s")
def test_criterion_9_performance():
    suite = suite_new("pairing", curve="ss512")
    rng = SeededRandom(9)
    universe = [f"attr{i}" for i in range(10)]
    pp, msk = scheme.setup(suite, universe, rng)
    sk = scheme.keygen(pp, msk, frozenset(universe), rng)
    rk, dk = scheme.rkgen(pp, msk, sk, frozenset(universe), rng)
    policy1 = compile_lsss(parse_policy(" AND ".join(universe)))
    policy2 = compile_lsss(parse_policy(" AND ".join(universe)))
    m = suite.random_target(rng)

    start = time.perf_counter()
    ct = scheme.encrypt(pp, m, policy1, True, rng)
    ct2 = scheme.reencrypt(pp, rk, ct, policy2, rng)
    out = scheme.decrypt_l2(pp, dk, ct2)
    elapsed = time.perf_counter() - start

    assert out == m
    print(f"\n  10-attribute cycle: {elapsed * 1000:.0f} ms", end="  ")
    assert elapsed < 1.0
