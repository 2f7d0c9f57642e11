"""Shared program pairs used across the test modules.

SIGN_FLIP_* is the running pair whose difference graph shape is pinned
exactly; ASSERT_* is the bound-relaxation pair with known regression
bugs at x in {4, 5}.  HAND_PAIRS is a corpus of (name, original,
modified) sources covering identical programs, new assignments, resync
chains, implication-matched assumes, division hazards, error markers,
loops, and truncation.
"""

SIGN_FLIP_ORIGINAL = "r = -x;\nif (x > 0) {\n  r = -x;\n  assert(r <= 0);\n}\n"
SIGN_FLIP_MODIFIED = "r = x;\nif (x > 0) {\n  r = -x;\n  assert(r <= 0);\n}\n"

ASSERT_ORIGINAL = "assert(x <= 5);\n"
ASSERT_MODIFIED = "assert(x <= 3);\n"

HAND_PAIRS: list[tuple[str, str, str]] = [
    ("sign-flip", SIGN_FLIP_ORIGINAL, SIGN_FLIP_MODIFIED),
    ("assert-relax", ASSERT_ORIGINAL, ASSERT_MODIFIED),
    (
        "identical-straightline",
        "y = x + 1;\nz = y * 2;\nassert(z != 3);\n",
        "y = x + 1;\nz = y * 2;\nassert(z != 3);\n",
    ),
    (
        "identical-branchy",
        "if (x > 0) {\n  y = 1;\n} else {\n  y = -1;\n}\nassert(y != 0);\n",
        "if (x > 0) {\n  y = 1;\n} else {\n  y = -1;\n}\nassert(y != 0);\n",
    ),
    (
        "new-assignment-head",
        "y = x + 1;\nassert(y > 0);\n",
        "z = 0;\ny = x + 1;\nassert(y > 0);\n",
    ),
    (
        "constant-change",
        "y = 1;\nassert(x + y > 0);\n",
        "y = 2;\nassert(x + y > 0);\n",
    ),
    (
        "resync-identical-assume",
        "y = 5;\nassert(x < 3);\n",
        "assert(x < 3);\n",
    ),
    (
        "resync-new-assume",
        "a = x;\nb = a + 1;\nassert(b > 0);\n",
        "a = x;\nassert(a + 1 > 0);\n",
    ),
    (
        "same-write-different-rhs",
        "y = x + 1;\nassert(y > 0);\n",
        "y = x + 2;\nassert(y > 0);\n",
    ),
    (
        "swapped-assignments",
        "a = 1;\nb = 2;\n",
        "b = 2;\na = 1;\n",
    ),
    (
        "branch-split",
        "y = x;\n",
        "if (x > 2) {\n  y = x;\n} else {\n  y = x;\n}\n",
    ),
    (
        "if-to-assert",
        "if (x > 0) {\n  y = 1;\n} else {\n  y = 2;\n}\n",
        "assert(x > 0);\ny = 1;\n",
    ),
    (
        "assert-conjunct-tighten",
        "assert(x > 0 && x < 5);\n",
        "assert(x > 1 && x < 5);\n",
    ),
    (
        "assert-weaken",
        "y = x % 3;\nassert(y < 3);\n",
        "y = x % 3;\nassert(y < 4);\n",
    ),
    (
        "error-marker-vs-assert",
        "y = 1;\nerror;\n",
        "assert(x <= 3);\n",
    ),
    (
        "empty-vs-error",
        "",
        "error;\n",
    ),
    (
        "error-vs-empty",
        "error;\n",
        "",
    ),
    (
        "both-error",
        "error;\n",
        "error;\n",
    ),
    (
        "division-hazard-lockstep",
        "y = 0;\nx = 1 / y;\nerror;\n",
        "y = 2;\nx = 1 / y;\nerror;\n",
    ),
    (
        "division-blocks-resync",
        "y = 0;\nz = 1 / y;\nassert(x < 2);\n",
        "y = 0;\nassert(x < 2);\n",
    ),
    (
        "division-by-zero-constant",
        "x = 1 / 0;\nassert(x > 0);\n",
        "x = 1;\nassert(x > 0);\n",
    ),
    (
        "variable-divisor",
        "z = x / y;\nassert(z >= 0 || z < 0);\n",
        "z = x / y;\nassert(z >= 0);\n",
    ),
    (
        "loop-sum",
        "s = 0;\nwhile (x > 0) {\n  s = s + x;\n  x = x - 1;\n}\nassert(s >= 0);\n",
        "s = 0;\nwhile (x > 0) {\n  s = s - x;\n  x = x - 1;\n}\nassert(s >= 0);\n",
    ),
    (
        "loop-bound-change",
        "i = x;\nwhile (i > 0) {\n  i = i - 1;\n}\nassert(i <= 0);\n",
        "i = x;\nwhile (i > 1) {\n  i = i - 1;\n}\nassert(i <= 0);\n",
    ),
    (
        "loop-truncates",
        "while (x > -60) {\n  x = x - 1;\n}\n",
        "while (x > -60) {\n  x = x - 2;\n}\n",
    ),
    (
        "three-inputs",
        "if (x > y) {\n  m = x;\n} else {\n  m = y;\n}\nassert(m + z >= z);\n",
        "if (x > y) {\n  m = x;\n} else {\n  m = y;\n}\nassert(m + z > z);\n",
    ),
    (
        "nested-branches",
        "if (x > 0) {\n  if (y > 0) {\n    z = 1;\n  } else {\n    z = 2;\n  }\n} else {\n  z = 3;\n}\nassert(z > 0);\n",
        "if (x > 0) {\n  if (y > 0) {\n    z = 1;\n  } else {\n    z = 2;\n  }\n} else {\n  z = 0;\n}\nassert(z > 0);\n",
    ),
]

# Exact difference graph the precise detector must produce for the
# sign-flip pair, derived by hand from the worklist rules: the changed
# head assignment stalls with r marked changed, the branch assumes
# carry r along, the identical r = -x write re-synchronizes both runs,
# and no regression bug indicator remains.
GOLDEN_SIGN_FLIP_DP_GRAPH = {
    "nodes": [
        {"id": 0, "kind": "aligned", "orig": 0, "mod": 0, "modified_vars": []},
        {"id": 1, "kind": "aligned", "orig": 0, "mod": 1, "modified_vars": ["r"]},
        {"id": 2, "kind": "aligned", "orig": 2, "mod": 2, "modified_vars": ["r"]},
        {"id": 3, "kind": "aligned", "orig": 4, "mod": 4, "modified_vars": ["r"]},
        {"id": 4, "kind": "aligned", "orig": 3, "mod": 3, "modified_vars": []},
        {"id": 5, "kind": "aligned", "orig": 5, "mod": 5, "modified_vars": []},
    ],
    "root": 0,
    "delta": [],
    "edges": [
        {"src": 0, "edge": {"src": 0, "op": "r = x", "dst": 1}, "dst": 1},
        {"src": 1, "edge": {"src": 1, "op": "x <= 0", "dst": 4}, "dst": 3},
        {"src": 1, "edge": {"src": 1, "op": "x > 0", "dst": 2}, "dst": 2},
        {"src": 2, "edge": {"src": 2, "op": "r = -x", "dst": 3}, "dst": 4},
        {"src": 4, "edge": {"src": 3, "op": "r <= 0", "dst": 4}, "dst": 3},
        {"src": 4, "edge": {"src": 3, "op": "r > 0", "dst": 5}, "dst": 5},
    ],
}
