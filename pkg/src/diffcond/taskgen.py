"""Random program-pair generation for fuzzing the pipeline.

Each task is an original program plus a mutated copy, both as source
text.  Programs are built from a tiny statement grammar with at most
three variables and at most one canonical counting loop, then checked
against the bounded oracle so that every original run completes within
the campaign depth.  Mutations edit one AST site: an operator, a
constant, a statement, or an assert condition.  Everything is driven by
a seed-keyed RNG, so the same seed always yields the same pair.
"""

from __future__ import annotations

import dataclasses
import random
from dataclasses import dataclass

from . import expr as ex
from .cfa import check_deterministic
from .frontend import Assert, Assign, ErrorStmt, If, Program, While, build_cfa, pretty_print
from .oracle import default_input_vars, final_location, input_states

_VARS = ("x", "y", "z")
_CMP_OPS = ("<", "<=", ">", ">=", "==", "!=")
_CMP_SWAP = {"<": "<=", "<=": "<", ">": ">=", ">=": ">", "==": "!=", "!=": "=="}


@dataclass(frozen=True)
class TaskParams:
    max_stmts: int = 5
    bound: int = 4  # oracle bound used for the termination screen
    depth: int = 40
    literals: tuple[int, int] = (-4, 4)
    attempts: int = 20


@dataclass(frozen=True)
class TaskPair:
    original: str
    modified: str
    mutation: str


def _lit(rng: random.Random, p: TaskParams) -> ex.Int:
    return ex.Int(rng.randint(p.literals[0], p.literals[1]))


def _gen_aexpr(rng: random.Random, p: TaskParams, avail: list[str], depth: int) -> ex.Expr:
    if depth == 0 or rng.random() < 0.45:
        if avail and rng.random() < 0.7:
            return ex.Var(rng.choice(avail))
        return _lit(rng, p)
    if rng.random() < 0.08:
        return ex.Neg(_gen_aexpr(rng, p, avail, depth - 1))
    op = rng.choices(("+", "-", "*", "/", "%"), weights=(5, 5, 3, 1, 1))[0]
    left = _gen_aexpr(rng, p, avail, depth - 1)
    if op in ("/", "%"):
        # mostly constant nonzero divisors; a variable divisor now and
        # then exercises blocked-path handling downstream
        if avail and rng.random() < 0.15:
            right: ex.Expr = ex.Var(rng.choice(avail))
        else:
            right = ex.Int(rng.choice((1, 2, 3, -2)))
    else:
        right = _gen_aexpr(rng, p, avail, depth - 1)
    return ex.Arith(op, left, right)


def _gen_cmp(rng: random.Random, p: TaskParams, avail: list[str]) -> ex.Expr:
    left = ex.Var(rng.choice(avail)) if avail else _lit(rng, p)
    right = _lit(rng, p) if rng.random() < 0.7 else _gen_aexpr(rng, p, avail, 1)
    return ex.Cmp(rng.choice(_CMP_OPS), left, right)


def _gen_bexpr(rng: random.Random, p: TaskParams, avail: list[str], depth: int) -> ex.Expr:
    if depth > 0:
        r = rng.random()
        if r < 0.15:
            op = rng.choice(("&&", "||"))
            return ex.Logic(op, _gen_bexpr(rng, p, avail, depth - 1), _gen_bexpr(rng, p, avail, depth - 1))
        if r < 0.22:
            return ex.Not(_gen_bexpr(rng, p, avail, depth - 1))
    return _gen_cmp(rng, p, avail)


def _gen_simple(rng: random.Random, p: TaskParams, avail: list[str]):
    r = rng.random()
    if r < 0.10:
        return ErrorStmt()
    if r < 0.38:
        return Assert(_gen_bexpr(rng, p, avail, 0))
    target = rng.choice(_VARS)
    return Assign(target, _gen_aexpr(rng, p, avail, 1))


def _gen_loop(rng: random.Random, p: TaskParams, inputs: set[str], written: set[str]) -> While:
    # canonical counting loop: strictly decreasing counter, lower bound
    v = rng.choice(sorted(inputs | written))
    limit = rng.randint(-2, 2)
    step = rng.choice((1, 1, 2))
    body: list = [Assign(v, ex.Arith("-", ex.Var(v), ex.Int(step)))]
    if rng.random() < 0.6:
        other = rng.choice([w for w in _VARS if w != v])
        avail = sorted(inputs | written | {v})
        body.insert(rng.randrange(2), Assign(other, _gen_aexpr(rng, p, avail, 1)))
    return While(ex.Cmp(">", ex.Var(v), ex.Int(limit)), tuple(body))


def _gen_branch(rng: random.Random, p: TaskParams, avail: list[str]) -> tuple:
    return tuple(_gen_simple(rng, p, avail) for _ in range(rng.choice((1, 1, 2))))


def _gen_program(rng: random.Random, p: TaskParams, allow_loop: bool) -> Program:
    # reads are restricted to declared inputs plus definitely-written
    # variables, keeping the derived input set small
    inputs = set(_VARS[: rng.choice((1, 1, 2, 2, 2))])
    count = rng.randint(2, p.max_stmts)
    stmts: list = []
    written: set[str] = set()
    loop_used = False
    for _ in range(count):
        avail = sorted(inputs | written)
        r = rng.random()
        if allow_loop and not loop_used and r < 0.18:
            stmts.append(_gen_loop(rng, p, inputs, written))
            loop_used = True
        elif r < 0.40:
            cond = _gen_bexpr(rng, p, avail, 1)
            then = _gen_branch(rng, p, avail)
            orelse = _gen_branch(rng, p, avail) if rng.random() < 0.5 else ()
            stmts.append(If(cond, then, orelse))
        elif r < 0.55:
            stmts.append(Assert(_gen_bexpr(rng, p, avail, 1)))
        else:
            target = rng.choice(_VARS)
            stmts.append(Assign(target, _gen_aexpr(rng, p, avail, 2)))
            written.add(target)
    if rng.random() < 0.10:
        stmts.append(ErrorStmt())
    return Program(tuple(stmts))


def _terminates(c, p: TaskParams) -> bool:
    names = default_input_vars((c,))
    if len(names) > 2:  # keeps the input enumeration small downstream
        return False
    for init in input_states(names, p.bound):
        _, truncated = final_location(c, init, p.depth)
        if truncated:
            return False
    return True


# ---------------------------------------------------------------- mutation

def _get(node, path):
    for step in path:
        node = node[step] if isinstance(step, int) else getattr(node, step)
    return node


def _replace(node, path, new):
    if not path:
        return new
    head, rest = path[0], path[1:]
    if isinstance(head, int):
        return node[:head] + (_replace(node[head], rest, new),) + node[head + 1 :]
    child = getattr(node, head)
    return dataclasses.replace(node, **{head: _replace(child, rest, new)})


@dataclass
class _Sites:
    ops: list  # (path, Arith | Cmp | Logic)
    ints: list  # (path, Int)
    blocks: list  # (path to a statement tuple, its length)
    stmts: list  # (block path, index)
    asserts: list  # (path, Assert)


def _scan_expr(e: ex.Expr, path: tuple, sites: _Sites) -> None:
    if isinstance(e, ex.Int):
        sites.ints.append((path, e))
    elif isinstance(e, (ex.Neg, ex.Not)):
        _scan_expr(e.operand, path + ("operand",), sites)
    elif isinstance(e, (ex.Arith, ex.Cmp, ex.Logic)):
        sites.ops.append((path, e))
        _scan_expr(e.left, path + ("left",), sites)
        _scan_expr(e.right, path + ("right",), sites)


def _scan_block(stmts: tuple, path: tuple, sites: _Sites) -> None:
    sites.blocks.append((path, len(stmts)))
    for i, s in enumerate(stmts):
        spath = path + (i,)
        sites.stmts.append((path, i))
        if isinstance(s, Assign):
            _scan_expr(s.rhs, spath + ("rhs",), sites)
        elif isinstance(s, Assert):
            sites.asserts.append((spath, s))
            _scan_expr(s.cond, spath + ("cond",), sites)
        elif isinstance(s, If):
            _scan_expr(s.cond, spath + ("cond",), sites)
            _scan_block(s.then, spath + ("then",), sites)
            _scan_block(s.orelse, spath + ("orelse",), sites)
        elif isinstance(s, While):
            _scan_expr(s.cond, spath + ("cond",), sites)
            _scan_block(s.body, spath + ("body",), sites)


def _collect(prog: Program) -> _Sites:
    sites = _Sites([], [], [], [], [])
    _scan_block(prog.stmts, ("stmts",), sites)
    return sites


def _swap_op(rng: random.Random, node):
    if isinstance(node, ex.Logic):
        return dataclasses.replace(node, op="||" if node.op == "&&" else "&&")
    if isinstance(node, ex.Cmp):
        return dataclasses.replace(node, op=_CMP_SWAP[node.op])
    if node.op in ("/", "%"):
        return dataclasses.replace(node, op="%" if node.op == "/" else "/")
    pool = [o for o in ("+", "-", "*") if o != node.op]
    return dataclasses.replace(node, op=rng.choice(pool))


def _mutate(rng: random.Random, prog: Program, p: TaskParams) -> tuple[Program, str]:
    sites = _collect(prog)
    avail = sorted(_prog_names(prog)) or ["x"]
    kinds: list[str] = ["stmt-insert"] * 2
    if sites.ops:
        kinds += ["op-swap"] * 3
    if sites.ints:
        kinds += ["const-tweak"] * 3
    if sites.stmts:
        kinds += ["stmt-delete"] * 2
    if sites.asserts:
        kinds += ["assert-strengthen"] * 3 + ["assert-weaken"]
    kind = rng.choice(kinds)

    if kind == "op-swap":
        path, node = rng.choice(sites.ops)
        return _replace(prog, path, _swap_op(rng, node)), kind
    if kind == "const-tweak":
        path, node = rng.choice(sites.ints)
        return _replace(prog, path, ex.Int(node.value + rng.choice((-1, 1)))), kind
    if kind == "stmt-insert":
        block_path, length = rng.choice(sites.blocks)
        index = rng.randint(0, length)
        block = _get(prog, block_path)
        new = block[:index] + (_gen_simple(rng, p, avail),) + block[index:]
        return _replace(prog, block_path, new), kind
    if kind == "stmt-delete":
        block_path, index = rng.choice(sites.stmts)
        block = _get(prog, block_path)
        return _replace(prog, block_path, block[:index] + block[index + 1 :]), kind
    path, node = rng.choice(sites.asserts)
    extra = _gen_cmp(rng, p, avail)
    joiner = "&&" if kind == "assert-strengthen" else "||"
    cond = ex.Logic(joiner, node.cond, extra)
    return _replace(prog, path, dataclasses.replace(node, cond=cond)), kind


def _prog_names(prog: Program) -> set[str]:
    names: set[str] = set()

    def block(stmts: tuple) -> None:
        for s in stmts:
            if isinstance(s, Assign):
                names.add(s.name)
                names.update(ex.free_vars(s.rhs))
            elif isinstance(s, Assert):
                names.update(ex.free_vars(s.cond))
            elif isinstance(s, If):
                names.update(ex.free_vars(s.cond))
                block(s.then)
                block(s.orelse)
            elif isinstance(s, While):
                names.update(ex.free_vars(s.cond))
                block(s.body)

    block(prog.stmts)
    return names


def generate_task(seed: int, params: TaskParams | None = None) -> TaskPair:
    """Deterministically build the program pair for a seed."""
    p = params or TaskParams()
    rng = random.Random(f"task-{seed}")
    prog = None
    for attempt in range(p.attempts):
        allow_loop = attempt < p.attempts // 2  # later attempts go loop-free
        cand = _gen_program(rng, p, allow_loop)
        c = build_cfa(cand)
        if check_deterministic(c) or not _terminates(c, p):
            continue
        prog = cand
        break
    assert prog is not None, "loop-free candidates always pass the screen"
    mutated, label = _mutate(rng, prog, p)
    return TaskPair(pretty_print(prog), pretty_print(mutated), label)
