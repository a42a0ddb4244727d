import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abpre.errors import PolicySyntaxError
from abpre.groups import Scalar
from abpre.policy import (
    AccessMatrix,
    And,
    Leaf,
    Or,
    compile_lsss,
    eval_formula,
    format_policy,
    make_shares,
    parse_policy,
    rank,
    satisfying_rows,
)
from abpre.rng import SeededRandom, TapeRandom

from conftest import M61

ATTRS = ("A", "B", "C", "D")


def subsets(pool=ATTRS):
    for mask in range(1 << len(pool)):
        yield frozenset(a for i, a in enumerate(pool) if mask >> i & 1)


# ---------------------------------------------------------------- parser --


def test_parse_single_attribute():
    assert parse_policy("A") == Leaf("A")


def test_parse_precedence():
    assert parse_policy("A AND B OR C") == Or(And(Leaf("A"), Leaf("B")), Leaf("C"))


def test_parse_parentheses():
    assert parse_policy("A AND (B OR C)") == And(Leaf("A"), Or(Leaf("B"), Leaf("C")))


def test_parse_left_associativity():
    assert parse_policy("A AND B AND C") == And(And(Leaf("A"), Leaf("B")), Leaf("C"))


def test_parse_attribute_charset():
    ast = parse_policy("role:admin AND !revoked OR dept.eng-1")
    assert ast == Or(And(Leaf("role:admin"), Leaf("!revoked")), Leaf("dept.eng-1"))


@pytest.mark.parametrize(
    "text,position",
    [
        ("A AND (B OR", 11),
        ("", 0),
        ("A AND", 5),
        ("(A OR B", 7),
        ("A B", 2),
        ("A && B", 2),
    ],
)
def test_parse_errors_report_position(text, position):
    with pytest.raises(PolicySyntaxError) as exc:
        parse_policy(text)
    assert exc.value.position == position
    assert exc.value.expected


formula_st = st.recursive(
    st.sampled_from(ATTRS).map(Leaf),
    lambda kids: st.builds(And, kids, kids) | st.builds(Or, kids, kids),
    max_leaves=8,
)


@given(formula_st)
def test_format_parse_round_trip(ast):
    assert parse_policy(format_policy(ast)) == ast


# -------------------------------------------------------------- compiler --


def test_compile_leaf():
    m = compile_lsss(Leaf("A"))
    assert m.rows == ((1,),) and m.rho == ("A",)


def test_compile_or():
    m = compile_lsss(parse_policy("A OR B"))
    assert m.rows == ((1,), (1,)) and m.rho == ("A", "B")


def test_compile_and():
    m = compile_lsss(parse_policy("A AND B"))
    assert m.rows == ((1, 1), (0, -1)) and m.rho == ("A", "B")


def test_compile_rows_follow_leaf_order():
    m = compile_lsss(parse_policy("(A OR B) AND C"))
    assert m.rho == ("A", "B", "C")


def test_repeated_attribute_rows():
    m = compile_lsss(parse_policy("A AND A"))
    assert m.rho == ("A", "A")
    assert satisfying_rows(m, {"A"}, 13) is not None


def test_matrix_validation():
    with pytest.raises(ValueError):
        AccessMatrix((), ())
    with pytest.raises(ValueError):
        AccessMatrix(((1,), (1, 0)), ("A", "B"))
    with pytest.raises(ValueError):
        AccessMatrix(((1,),), ("A", "B"))


def _enumerate_formulas(depth):
    if depth == 1:
        return [Leaf(a) for a in ATTRS]
    smaller = _enumerate_formulas(depth - 1)
    out = list(smaller)
    for left in smaller:
        for right in smaller:
            out.append(And(left, right))
            out.append(Or(left, right))
    return out


def test_compiler_equivalence_exhaustive_depth2():
    """Every depth-<=2 formula agrees with brute-force evaluation on every
    subset; depth 3 runs in the acceptance suite."""
    for f in _enumerate_formulas(2):
        m = compile_lsss(f)
        for S in subsets():
            sel = satisfying_rows(m, S, 13)
            assert (sel is not None) == eval_formula(f, S), (f, S)


@given(formula_st, st.sets(st.sampled_from(ATTRS)))
@settings(max_examples=300)
def test_compiler_equivalence_random(ast, attrs):
    m = compile_lsss(ast)
    sel = satisfying_rows(m, attrs, M61)
    assert (sel is not None) == eval_formula(ast, attrs)
    if sel is not None:
        indices, omega = sel
        assert all(m.rho[i] in attrs for i in indices)
        for col in range(m.n_cols):
            total = sum(w.value * m.rows[i][col] for i, w in zip(indices, omega))
            assert total % M61 == (1 if col == 0 else 0)


@given(formula_st, st.sets(st.sampled_from(ATTRS)), st.sets(st.sampled_from(ATTRS)))
@settings(max_examples=200)
def test_satisfaction_is_monotone(ast, attrs, extra):
    m = compile_lsss(ast)
    if satisfying_rows(m, attrs, M61) is not None:
        assert satisfying_rows(m, attrs | extra, M61) is not None


def test_empty_set_never_satisfies():
    for f in _enumerate_formulas(2):
        assert not eval_formula(f, frozenset())
        assert satisfying_rows(compile_lsss(f), frozenset(), 13) is None


# ---------------------------------------------------------------- shares --


def test_make_shares_spec_example():
    m = compile_lsss(parse_policy("A AND B"))
    lam = make_shares(m, Scalar(5, 13), TapeRandom([3]))  # v = (5, 3)
    assert [s.value for s in lam] == [8, 10]


def test_make_shares_single_row():
    m = compile_lsss(Leaf("A"))
    lam = make_shares(m, Scalar(11, 13), TapeRandom([]))
    assert [s.value for s in lam] == [11]


def test_reconstruction_identity_random_vectors():
    rng = SeededRandom(21)
    m = compile_lsss(parse_policy("(A AND B) OR (C AND (D OR A))"))
    for _ in range(100):
        secret = Scalar(rng.below(M61), M61)
        lam = make_shares(m, secret, rng)
        for attrs in ({"A", "B"}, {"C", "D"}, {"A", "C"}, {"A", "B", "C", "D"}):
            indices, omega = satisfying_rows(m, attrs, M61)
            got = sum(w.value * lam[i].value for i, w in zip(indices, omega)) % M61
            assert got == secret.value


# ------------------------------------------------------- solving / spans --


def test_satisfying_rows_spec_examples():
    m = compile_lsss(parse_policy("A AND B"))
    indices, omega = satisfying_rows(m, {"A", "B"}, 13)
    assert indices == [0, 1]
    assert [w.value for w in omega] == [1, 1]
    assert satisfying_rows(m, {"A"}, 13) is None

    m_or = compile_lsss(parse_policy("A OR B"))
    indices, omega = satisfying_rows(m_or, {"B"}, 13)
    assert indices == [1]
    assert [w.value for w in omega] == [1]


def test_solution_is_deterministic():
    m = compile_lsss(parse_policy("A OR B"))
    first = satisfying_rows(m, {"A", "B"}, 13)
    assert first == satisfying_rows(m, {"A", "B"}, 13)
    # free variables pinned to zero: only the first row is used
    assert first[0] == [0]


def test_unauthorized_sets_leave_target_outside_span():
    for f in _enumerate_formulas(2):
        m = compile_lsss(f)
        e1 = [1] + [0] * (m.n_cols - 1)
        for S in subsets():
            chosen = [m.rows[i] for i, a in enumerate(m.rho) if a in S]
            if satisfying_rows(m, S, 13) is None:
                assert rank(chosen + [e1], 13) == rank(chosen, 13) + 1
            else:
                assert rank(chosen + [e1], 13) == rank(chosen, 13)
