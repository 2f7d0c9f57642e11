import pytest

from diffcond.condition import generate_condition, trivial_condition
from diffcond.detect_dp import diff_dp
from diffcond.detect_syn import diff_syn
from diffcond.frontend import compile_source
from diffcond.oracle import OracleBounds, error_paths
from diffcond.reducer import reduce
from diffcond.taskgen import generate_task
from diffcond.verify import Verdict, conditional_verify

from samples import HAND_PAIRS


def _pair(name):
    for n, orig, mod in HAND_PAIRS:
        if n == name:
            return compile_source(orig), compile_source(mod)
    raise KeyError(name)


def _inputs_count(bound, nvars):
    return (2 * bound + 1) ** nvars


# ------------------------------------------------------ headline behaviors


def test_precise_condition_skips_all_sign_flip_inputs():
    orig, mod = _pair("sign-flip")
    bounds = OracleBounds(bound=4, depth=40)
    precise = conditional_verify(mod, generate_condition(diff_dp(orig, mod)), bounds)
    assert (precise.explored_paths, precise.covered_paths) == (0, 9)
    assert precise.result == "safe" and precise.alarms == ()
    coarse = conditional_verify(mod, generate_condition(diff_syn(orig, mod)), bounds)
    assert (coarse.explored_paths, coarse.covered_paths) == (9, 0)
    assert coarse.result == "safe"


def test_assert_relax_alarms_exactly_on_relaxed_inputs():
    orig, mod = _pair("assert-relax")
    bounds = OracleBounds(bound=10, depth=40)
    v = conditional_verify(mod, generate_condition(diff_dp(orig, mod)), bounds)
    assert v.result == "alarm"
    assert (v.explored_paths, v.covered_paths) == (7, 14)
    assert [s["x"] for s in v.alarm_inputs()] == [4, 5, 6, 7, 8, 9, 10]
    for state, path in v.alarms:
        assert path.final_location == mod.error
        assert path.initial_state == state


def test_no_condition_means_plain_bounded_verification():
    orig, mod = _pair("assert-relax")
    bounds = OracleBounds(bound=10, depth=40)
    plain = conditional_verify(mod, None, bounds)
    triv = conditional_verify(mod, trivial_condition(), bounds)
    assert plain.covered_paths == 0 and triv.covered_paths == 0
    assert plain.explored_paths == triv.explored_paths == 21
    assert plain.alarm_inputs() == triv.alarm_inputs()
    assert len(plain.alarms) == len(error_paths(mod, bounds))


def test_verdict_is_safe_without_error_paths():
    orig, mod = _pair("swapped-assignments")
    v = conditional_verify(mod, None, OracleBounds(bound=4, depth=40))
    assert v.result == "safe" and v.alarms == ()


# ----------------------------------------------------------------- bounding


def test_truncation_is_reported():
    _, mod = _pair("loop-truncates")
    tight = conditional_verify(mod, None, OracleBounds(bound=4, depth=10))
    assert tight.truncated and tight.result == "safe"
    roomy = conditional_verify(mod, None, OracleBounds(bound=4, depth=400))
    assert not roomy.truncated


def test_blocked_runs_are_explored_without_alarm():
    mod = compile_source("y = 1 / x;\nassert(y >= 0);\n")
    v = conditional_verify(mod, None, OracleBounds(bound=1, depth=40))
    # x = 0 blocks on the division and simply stops
    assert v.explored_paths == 3 and v.result == "alarm"
    assert [s["x"] for s in v.alarm_inputs()] == [-1]


def test_explicit_input_vars_widen_the_input_space():
    mod = compile_source("assert(x <= 3);\n")
    bounds = OracleBounds(bound=2, depth=40, input_vars=("x", "y"))
    v = conditional_verify(mod, None, bounds)
    assert v.explored_paths == 25


# -------------------------------------------------------------- invariants


def test_every_input_is_explored_or_covered():
    from diffcond.oracle import resolve_inputs

    bounds = OracleBounds(bound=3, depth=60)
    for name, orig, mod in HAND_PAIRS:
        o, m = compile_source(orig), compile_source(mod)
        total = _inputs_count(bounds.bound, len(resolve_inputs(bounds, (m,))))
        for detect in (diff_dp, diff_syn):
            a = generate_condition(detect(o, m))
            v = conditional_verify(m, a, bounds)
            assert v.explored_paths + v.covered_paths == total, name


def test_covered_alarm_sets_match_residual_verification():
    from diffcond.oracle import resolve_inputs

    for seed in range(25):
        pair = generate_task(seed)
        orig, mod = compile_source(pair.original), compile_source(pair.modified)
        # pin the inputs so both routes enumerate the same states even
        # when the reduction drops every read of some input variable
        bounds = OracleBounds(3, 60, resolve_inputs(OracleBounds(3, 60), (mod,)))
        a = generate_condition(diff_dp(orig, mod))
        direct = conditional_verify(mod, a, bounds)
        indirect = conditional_verify(reduce(mod, a).cfa, None, bounds)
        assert [tuple(sorted(s.items())) for s in direct.alarm_inputs()] == [
            tuple(sorted(s.items())) for s in indirect.alarm_inputs()
        ], seed


def test_alarm_inputs_are_ascending():
    orig, mod = _pair("assert-relax")
    v = conditional_verify(mod, None, OracleBounds(bound=10, depth=40))
    xs = [s["x"] for s in v.alarm_inputs()]
    assert xs == sorted(xs)


def test_condition_vocabulary_is_checked():
    orig, mod = _pair("sign-flip")
    a = generate_condition(diff_dp(orig, mod))
    with pytest.raises(ValueError, match="not an edge"):
        conditional_verify(compile_source("assert(x <= 3);\n"), a, OracleBounds(2, 40))


def test_verdict_fields_default():
    v = Verdict("safe", (), 0, 0)
    assert not v.truncated and v.alarm_inputs() == ()
