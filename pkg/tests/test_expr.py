import pytest
from hypothesis import given, strategies as st

from diffcond import expr as ex


# ---------------------------------------------------------------- strategies

_names = st.sampled_from(["x", "y", "z"])
_cmp_ops = st.sampled_from(["<", "<=", ">", ">=", "==", "!="])

# nonnegative literals only: the parser reads "-3" as Neg(Int(3))
_leaves = st.one_of(st.integers(0, 9).map(ex.Int), _names.map(ex.Var))

_aexprs = st.recursive(
    _leaves,
    lambda kids: st.one_of(
        st.builds(ex.Neg, kids),
        st.builds(ex.Arith, st.sampled_from(["+", "-", "*", "/", "%"]), kids, kids),
    ),
    max_leaves=8,
)

_cmps = st.builds(ex.Cmp, _cmp_ops, _aexprs, _aexprs)

_bexprs = st.recursive(
    st.one_of(_cmps, st.sampled_from([ex.Bool(True), ex.Bool(False)])),
    lambda kids: st.one_of(
        st.builds(ex.Not, kids),
        st.builds(ex.Logic, st.sampled_from(["&&", "||"]), kids, kids),
    ),
    max_leaves=6,
)

_states = st.dictionaries(_names, st.integers(-20, 20))


def _eval_or_blocked(e, state):
    try:
        return ex.evaluate(e, state)
    except ex.EvalBlocked:
        return ex.EvalBlocked


# ------------------------------------------------------------- arithmetic


@pytest.mark.parametrize(
    "a, b, q, r",
    [
        (7, 2, 3, 1),
        (-7, 2, -3, -1),
        (7, -2, -3, 1),
        (-7, -2, 3, -1),
        (1, 4, 0, 1),
        (-1, 4, 0, -1),
        (8, 2, 4, 0),
    ],
)
def test_truncating_division_table(a, b, q, r):
    assert ex.trunc_div(a, b) == q
    assert ex.trunc_mod(a, b) == r


@given(st.integers(-100, 100), st.integers(-100, 100).filter(lambda b: b != 0))
def test_division_identity(a, b):
    assert a == b * ex.trunc_div(a, b) + ex.trunc_mod(a, b)
    assert abs(ex.trunc_mod(a, b)) < abs(b)


def test_zero_divisor_blocks():
    with pytest.raises(ex.EvalBlocked):
        ex.trunc_div(1, 0)
    with pytest.raises(ex.EvalBlocked):
        ex.evaluate(ex.parse_aexpr_text("x / y"), {"x": 1, "y": 0})
    with pytest.raises(ex.EvalBlocked):
        ex.evaluate(ex.parse_aexpr_text("x % y"), {"x": 1})


def test_missing_variables_read_zero():
    assert ex.evaluate(ex.parse_aexpr_text("x + y"), {}) == 0
    assert ex.evaluate(ex.parse_bexpr_text("x == 0"), {}) is True


def test_short_circuit_skips_blocked_operand():
    guard = ex.parse_bexpr_text("x != 0 && 1 / x > 0")
    assert ex.evaluate(guard, {"x": 0}) is False
    either = ex.parse_bexpr_text("x == 0 || 1 / x > 0")
    assert ex.evaluate(either, {"x": 0}) is True
    with pytest.raises(ex.EvalBlocked):
        ex.evaluate(ex.parse_bexpr_text("x == 0 && 1 / x > 0"), {"x": 0})


# ------------------------------------------------------------ text round-trip


@given(_aexprs)
def test_arithmetic_pretty_parse_round_trip(e):
    assert ex.parse_aexpr_text(ex.pretty(e)) == e


@given(_bexprs)
def test_boolean_pretty_parse_round_trip(b):
    assert ex.parse_bexpr_text(ex.pretty(b)) == b


def test_negative_literal_parses_as_negation():
    assert ex.parse_aexpr_text("-3") == ex.Neg(ex.Int(3))
    assert ex.pretty(ex.Int(-3)) == "-3"


@pytest.mark.parametrize(
    "text",
    [
        "x + 2 * y",
        "(x + 2) * y",
        "x - y - z",
        "x - (y - z)",
        "-x % 3",
        "!(x > 0 && y > 0)",
        "x > 0 && y > 0 || z > 0",
        "(x > 0 || y > 0) && z > 0",
        "x / y / z",
    ],
)
def test_pretty_is_stable(text):
    parse = ex.parse_bexpr_text if (">" in text or "!" in text) else ex.parse_aexpr_text
    assert ex.pretty(parse(text)) == text


def test_parenthesized_comparison_parses():
    assert ex.parse_bexpr_text("(x > 0)") == ex.Cmp(">", ex.Var("x"), ex.Int(0))
    got = ex.parse_bexpr_text("((x) + 1) > 0")
    assert got == ex.Cmp(">", ex.Arith("+", ex.Var("x"), ex.Int(1)), ex.Int(0))


def test_parse_error_carries_position():
    with pytest.raises(ex.SourceError) as info:
        ex.parse_aexpr_text("x +")
    assert info.value.line == 1
    with pytest.raises(ex.SourceError):
        ex.parse_bexpr_text("x >")
    with pytest.raises(ex.SourceError):
        ex.parse_aexpr_text("x $ y")


# ------------------------------------------------------- normalize and negate


@given(_bexprs)
def test_normalize_is_idempotent(b):
    n = ex.normalize(b)
    assert ex.normalize(n) == n


@given(_bexprs)
def test_negate_twice_is_normalize(b):
    assert ex.negate(ex.negate(b)) == ex.normalize(b)


@given(_bexprs, _states)
def test_negate_complements_evaluation(b, state):
    got = _eval_or_blocked(ex.negate(b), state)
    want = _eval_or_blocked(b, state)
    if want is ex.EvalBlocked:
        assert got is ex.EvalBlocked
    else:
        assert got == (not want)


@given(_bexprs, _states)
def test_normalize_preserves_evaluation(b, state):
    assert _eval_or_blocked(ex.normalize(b), state) == _eval_or_blocked(b, state)


def test_conjunct_flattening():
    b = ex.parse_bexpr_text("x > 0 && y > 0 && z > 0")
    got = [ex.pretty(c) for c in ex.conjuncts(b)]
    assert got == ["x > 0", "y > 0", "z > 0"]
    assert list(ex.conjuncts(ex.parse_bexpr_text("x > 0 || y > 0"))) == [
        ex.parse_bexpr_text("x > 0 || y > 0")
    ]


# ----------------------------------------------------------- static helpers


def test_const_value():
    assert ex.const_value(ex.parse_aexpr_text("2 + 3 * 4")) == 14
    assert ex.const_value(ex.parse_aexpr_text("x + 1")) is None
    assert ex.const_value(ex.parse_aexpr_text("1 / 0")) is None
    assert ex.const_value(ex.parse_bexpr_text("3 < 2")) is False


def test_always_evaluates():
    assert ex.always_evaluates(ex.parse_aexpr_text("x + y * 3"))
    assert ex.always_evaluates(ex.parse_aexpr_text("x / 2"))
    assert ex.always_evaluates(ex.parse_aexpr_text("x % (2 + 1)"))
    assert not ex.always_evaluates(ex.parse_aexpr_text("x / y"))
    assert not ex.always_evaluates(ex.parse_aexpr_text("1 / 0"))
    assert not ex.always_evaluates(ex.parse_aexpr_text("1 / (x - x)"))


def test_divisor_reads():
    e = ex.parse_aexpr_text("x / y + z % (w + 1)")
    assert ex.divisor_reads(e) == frozenset({"y", "w"})
    assert ex.divisor_reads(ex.parse_aexpr_text("x / 2")) == frozenset()


def test_free_vars():
    assert ex.free_vars(ex.parse_bexpr_text("x + y > z")) == frozenset({"x", "y", "z"})
    assert ex.free_vars(ex.parse_aexpr_text("3 + 4")) == frozenset()


@given(_bexprs)
def test_walk_covers_free_vars(b):
    seen = {n.name for n in ex.walk(b) if isinstance(n, ex.Var)}
    assert seen == set(ex.free_vars(b))
