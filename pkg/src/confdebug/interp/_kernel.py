"""Execution kernel: the hot inner loop of the deterministic interpreter.

This module is written in Cython "pure Python" style: plain Python that
``setup.py`` optionally compiles to a C extension. When the extension is
built it shadows this source file at import time; otherwise the
interpreted version runs. Both are the same code, so behavior is
identical by construction.
"""
from ..errors import RuntimeFault
from ..lang.ast import (
    K_ASSIGN, K_BINARY, K_BOOL, K_CALL, K_IF, K_INT, K_OPTION, K_REPEAT,
    K_RETURN, K_SYM, K_UNARY, K_VAR, K_WORK,
)

try:
    import cython
    COMPILED = cython.compiled
except ImportError:  # pragma: no cover
    COMPILED = False

CALL_DEPTH_LIMIT = 10_000
LOOP_ITERATION_LIMIT = 1_000_000

_RETURN = object()  # block-exit marker


class _State:
    __slots__ = ("program", "config", "coverage", "depth")

    def __init__(self, program, config):
        self.program = program
        self.config = config
        self.coverage = set()
        self.depth = 0


def _eval(node, env, state):
    state.coverage.add(node.node_id)
    kind = node.kind
    if kind == K_INT or kind == K_BOOL:
        return node.value
    if kind == K_SYM:
        return node.name
    if kind == K_VAR:
        try:
            return env[node.name]
        except KeyError:
            raise RuntimeFault(f"unbound variable {node.name}", node.node_id) from None
    if kind == K_OPTION:
        return state.config[node.option]
    if kind == K_UNARY:
        v = _eval(node.operand, env, state)
        if node.op == "-":
            if type(v) is not int:
                raise RuntimeFault("unary '-' needs an int", node.node_id)
            return -v
        if type(v) is not bool:
            raise RuntimeFault("'!' needs a bool", node.node_id)
        return not v
    if kind == K_BINARY:
        op = node.op
        if op == "&&":
            lv = _eval(node.left, env, state)
            if type(lv) is not bool:
                raise RuntimeFault("'&&' needs bools", node.node_id)
            return lv and _require_bool(_eval(node.right, env, state), node)
        if op == "||":
            lv = _eval(node.left, env, state)
            if type(lv) is not bool:
                raise RuntimeFault("'||' needs bools", node.node_id)
            return lv or _require_bool(_eval(node.right, env, state), node)
        lv = _eval(node.left, env, state)
        rv = _eval(node.right, env, state)
        if op == "==":
            _require_same_type(lv, rv, node)
            return lv == rv
        if op == "!=":
            _require_same_type(lv, rv, node)
            return lv != rv
        if type(lv) is not int or type(rv) is not int:
            raise RuntimeFault(f"operator {op!r} needs ints", node.node_id)
        if op == "+":
            return lv + rv
        if op == "-":
            return lv - rv
        if op == "*":
            return lv * rv
        if op == "/":
            if rv == 0:
                raise RuntimeFault("division by zero", node.node_id)
            return lv // rv
        if op == "%":
            if rv == 0:
                raise RuntimeFault("modulo by zero", node.node_id)
            return lv % rv
        if op == "<":
            return lv < rv
        if op == "<=":
            return lv <= rv
        if op == ">":
            return lv > rv
        return lv >= rv
    raise RuntimeFault("not an expression", node.node_id)


def _require_bool(v, node):
    if type(v) is not bool:
        raise RuntimeFault("boolean operator needs bools", node.node_id)
    return v


def _require_same_type(lv, rv, node):
    if type(lv) is not type(rv):
        raise RuntimeFault("comparison of mismatched types", node.node_id)


def _exec_block(body, env, state, tree):
    """Run statements; returns (exited, value) where exited means `return`."""
    for stmt in body:
        kind = stmt.kind
        state.coverage.add(stmt.node_id)
        if kind == K_WORK:
            amount = _eval(stmt.expr, env, state)
            if type(amount) is not int or amount < 0:
                raise RuntimeFault("work() needs a non-negative int",
                                   stmt.node_id)
            tree["self"] += amount
        elif kind == K_ASSIGN:
            env[stmt.target] = _eval(stmt.expr, env, state)
        elif kind == K_IF:
            cond = _eval(stmt.cond, env, state)
            if type(cond) is not bool:
                raise RuntimeFault("if condition must be a bool", stmt.node_id)
            branch = stmt.then_body if cond else stmt.else_body
            exited, value = _exec_block(branch, env, state, tree)
            if exited:
                return True, value
        elif kind == K_REPEAT:
            count = _eval(stmt.count, env, state)
            if type(count) is not int or count < 0:
                raise RuntimeFault("repeat count must be a non-negative int",
                                   stmt.node_id)
            if count > LOOP_ITERATION_LIMIT:
                raise RuntimeFault(
                    f"loop bound {count} exceeds limit {LOOP_ITERATION_LIMIT}",
                    stmt.node_id)
            for _ in range(count):
                exited, value = _exec_block(stmt.body, env, state, tree)
                if exited:
                    return True, value
        elif kind == K_CALL:
            args = [_eval(a, env, state) for a in stmt.args]
            value, child = _call(stmt.callee, args, state, stmt.node_id)
            tree["children"].append(child)
            if stmt.target is not None:
                env[stmt.target] = value
        elif kind == K_RETURN:
            value = 0 if stmt.expr is None else _eval(stmt.expr, env, state)
            return True, value
        else:
            raise RuntimeFault("not a statement", stmt.node_id)
    return False, 0


def _call(name, args, state, site_id):
    if state.depth >= CALL_DEPTH_LIMIT:
        raise RuntimeFault(f"call depth exceeds {CALL_DEPTH_LIMIT}", site_id)
    fn = state.program.function(name)
    if len(args) != len(fn.params):
        raise RuntimeFault(
            f"{name} expects {len(fn.params)} args, got {len(args)}", site_id)
    state.coverage.add(fn.node_id)
    env = {}
    for param, value in zip(fn.params, args):
        state.coverage.add(param.node_id)
        env[param.name] = value
    tree = {"function": name, "self": 0, "total": 0, "children": []}
    state.depth += 1
    _, value = _exec_block(fn.body, env, state, tree)
    state.depth -= 1
    tree["total"] = tree["self"] + sum(c["total"] for c in tree["children"])
    return value, tree


def run(program, config):
    """Execute `program` under `config`.

    Returns (total_cost, call_tree, coverage) where call_tree is a nested
    dict (function, self, total, children) rooted at the entry function
    and coverage is the set of executed node ids.
    """
    state = _State(program, dict(config))
    _, tree = _call(program.entry, [], state, program.node_id)
    return tree["total"], tree, state.coverage
