from diffcond.cfa import CFA, op_text
from diffcond.detect_syn import diff_syn
from diffcond.diffgraph import aligned, bad, to_json_obj, validate_graph
from diffcond.frontend import compile_source

from samples import HAND_PAIRS, SIGN_FLIP_MODIFIED, SIGN_FLIP_ORIGINAL


def _graphs():
    for name, orig, mod in HAND_PAIRS:
        yield name, diff_syn(compile_source(orig), compile_source(mod))


def test_sign_flip_stops_at_first_textual_change():
    dg = diff_syn(compile_source(SIGN_FLIP_ORIGINAL), compile_source(SIGN_FLIP_MODIFIED))
    assert dg.nodes == {aligned(0, 0), bad(1)}
    assert dg.root == aligned(0, 0)
    assert dg.delta == {bad(1)}
    assert len(dg.edges) == 1
    assert op_text(dg.edges[0].label.op) == "r = x"
    assert dg.stats.pops == 1


def test_identical_programs_align_everywhere():
    c = compile_source("if (x > 0) {\n  y = 1;\n} else {\n  y = -1;\n}\nassert(y != 0);\n")
    dg = diff_syn(c, c)
    assert dg.delta == frozenset()
    assert all(n.kind == "aligned" and n.orig == n.mod for n in dg.nodes)
    assert {n.mod for n in dg.nodes} == set(c.locations)
    assert len(dg.edges) == len(c.edges)
    assert all(dg.modified_vars[n] == frozenset() for n in dg.nodes)


def test_new_error_marker_is_flagged():
    dg = diff_syn(compile_source(""), compile_source("error;\n"))
    assert dg.nodes == {aligned(0, 0), bad(1)}
    assert dg.delta == {bad(1)}


def test_removed_code_is_invisible():
    dg = diff_syn(compile_source("error;\n"), compile_source(""))
    assert dg.nodes == {aligned(0, 0)}
    assert dg.edges == () and dg.delta == frozenset()


def test_swapped_statements_are_a_textual_change():
    dg = diff_syn(compile_source("a = 1;\nb = 2;\n"), compile_source("b = 2;\na = 1;\n"))
    assert bad(1) in dg.delta


def test_degenerate_modified_start_in_error():
    orig = compile_source("x = 1;\n")
    stub = CFA.make((0,), 0, 0, ())
    dg = diff_syn(orig, stub)
    assert dg.nodes == {bad(0)} and dg.root == bad(0)
    assert dg.delta == {bad(0)} and dg.edges == ()


def test_modified_vars_stay_empty():
    for name, dg in _graphs():
        assert all(v == frozenset() for v in dg.modified_vars.values()), name


def test_graphs_validate_on_hand_corpus():
    for name, dg in _graphs():
        assert validate_graph(dg) == [], name


def test_pops_within_product_budget():
    for name, dg in _graphs():
        budget = len(dg.original.locations) * len(dg.modified.locations)
        assert dg.stats.pops <= budget, name


def test_json_shape_marks_bad_nodes():
    dg = diff_syn(compile_source(SIGN_FLIP_ORIGINAL), compile_source(SIGN_FLIP_MODIFIED))
    obj = to_json_obj(dg)
    kinds = {n["id"]: n["kind"] for n in obj["nodes"]}
    assert kinds == {0: "aligned", 1: "bad"}
    assert obj["nodes"][1]["orig"] is None
    assert obj["delta"] == [1]
