import pytest
from hypothesis import given, strategies as st

from diffcond import expr as ex
from diffcond.cfa import check_deterministic, op_text
from diffcond.frontend import (
    Assert,
    Assign,
    ErrorStmt,
    If,
    Program,
    While,
    build_cfa,
    compile_source,
    parse_program,
    pretty_print,
)
from diffcond.taskgen import generate_task

from samples import HAND_PAIRS, SIGN_FLIP_ORIGINAL


def _edges(c):
    return [(e.src, op_text(e.op), e.dst) for e in c.edges]


# ------------------------------------------------------------------ parsing


def test_parse_two_statements():
    got = parse_program("x = 1;\ny = x + 2;\n")
    assert got == Program(
        (
            Assign("x", ex.Int(1)),
            Assign("y", ex.Arith("+", ex.Var("x"), ex.Int(2))),
        )
    )


def test_parse_if_else_while_assert_error():
    src = (
        "if (x > 0) {\n"
        "  y = 1;\n"
        "} else {\n"
        "  while (y > 0) {\n"
        "    y = y - 1;\n"
        "  }\n"
        "}\n"
        "assert(y == 0);\n"
        "error;\n"
    )
    got = parse_program(src)
    assert isinstance(got.stmts[0], If)
    assert isinstance(got.stmts[0].orelse[0], While)
    assert isinstance(got.stmts[1], Assert)
    assert got.stmts[2] == ErrorStmt()
    assert pretty_print(got) == src


def test_parse_empty_source():
    assert parse_program("") == Program(())
    assert parse_program("   \n  // just a comment\n") == Program(())


def test_comments_are_skipped():
    got = parse_program("x = 1; // set x\n// whole line\ny = 2;\n")
    assert got == Program((Assign("x", ex.Int(1)), Assign("y", ex.Int(2))))


@pytest.mark.parametrize(
    "src",
    [
        "x = ;",
        "if x > 0 { }",
        "}",
        "{ x = 1; }",
        "error",
        "true = 1;",
        "x = 1",
        "if (x > 0) { x = 1; ",
    ],
)
def test_parse_errors(src):
    with pytest.raises(ex.SourceError):
        parse_program(src)


def test_parse_error_position():
    with pytest.raises(ex.SourceError) as info:
        parse_program("x = 1;\ny = ;\n")
    assert info.value.line == 2


def test_empty_blocks_parse():
    got = parse_program("if (x > 0) {\n} else {\n  y = 1;\n}\n")
    assert got.stmts[0].then == ()


@given(st.integers(0, 60))
def test_generated_sources_round_trip(seed):
    pair = generate_task(seed)
    for text in (pair.original, pair.modified):
        assert pretty_print(parse_program(text)) == text


# ---------------------------------------------------------------- compiling


def test_sign_flip_cfa_shape():
    c = compile_source(SIGN_FLIP_ORIGINAL)
    assert c.locations == (0, 1, 2, 3, 4, 5)
    assert c.initial == 0
    assert c.error == 5
    assert _edges(c) == [
        (0, "r = -x", 1),
        (1, "x > 0", 2),
        (1, "x <= 0", 4),
        (2, "r = -x", 3),
        (3, "r <= 0", 4),
        (3, "r > 0", 5),
    ]


def test_assert_compiles_to_complementary_assumes():
    c = compile_source("assert(x <= 5);\n")
    assert _edges(c) == [(0, "x <= 5", 1), (0, "x > 5", 2)]
    assert c.error == 2


def test_error_marker_compiles_to_constant_true_assume():
    c = compile_source("error;\n")
    assert _edges(c) == [(0, "true", 1)]
    assert c.error == 1
    assert c.locations == (0, 1)


def test_empty_program_has_detached_error_location():
    c = compile_source("")
    assert c.locations == (0, 1)
    assert c.initial == 0 and c.error == 1
    assert c.edges == ()


def test_while_loops_back_to_head():
    c = compile_source("while (x > 0) {\n  x = x - 1;\n}\n")
    assert _edges(c) == [(0, "x > 0", 1), (0, "x <= 0", 2), (1, "x = x - 1", 0)]
    assert c.error == 3


def test_statements_after_error_marker_stay_compiled():
    c = compile_source("error;\nx = 1;\n")
    texts = [t for _, t, _ in _edges(c)]
    assert "true" in texts and "x = 1" in texts


def test_locations_are_contiguous_and_error_last():
    for _, orig, mod in HAND_PAIRS:
        for src in (orig, mod):
            c = compile_source(src)
            assert c.locations == tuple(range(len(c.locations)))
            assert c.initial == 0
            assert c.error == len(c.locations) - 1


def test_hand_corpus_compiles_deterministic():
    for name, orig, mod in HAND_PAIRS:
        for src in (orig, mod):
            assert check_deterministic(compile_source(src)) == [], name


@given(st.integers(0, 60))
def test_generated_programs_compile_deterministic(seed):
    pair = generate_task(seed)
    for text in (pair.original, pair.modified):
        assert check_deterministic(compile_source(text)) == []


def test_build_cfa_matches_compile_source():
    src = "y = x;\nassert(y >= x);\n"
    assert build_cfa(parse_program(src)) == compile_source(src)
