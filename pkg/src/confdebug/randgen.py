"""Seeded random MiniConf programs and random dependence graphs.

Used by the property/oracle test suites and the kernel benchmark. Every
generated program parses, validates, and runs without runtime faults
under any total configuration: integer expressions are built from
non-negative atoms and operators closed over non-negative ints, and
booleans/ints are never mixed.
"""
from __future__ import annotations

import random

_OPTION_NAMES = ["Alpha", "Beta", "Gamma", "Delta", "Epsilon", "Zeta",
                 "Eta", "Theta", "Iota", "Kappa"]


class _FnCtx:
    def __init__(self, name, params):
        self.name = name
        self.params = params  # list of (name, type) with type in {"int", "bool"}
        self.int_vars = [p for p, t in params if t == "int"]
        self.bool_vars = [p for p, t in params if t == "bool"]
        self.counter = 0

    def fresh(self, prefix):
        self.counter += 1
        return f"{prefix}{self.counter}"


class ProgramGenerator:
    def __init__(self, rng: random.Random, max_options: int = 4,
                 max_functions: int = 5, enum_prob: float = 0.0,
                 max_depth: int = 2):
        self.rng = rng
        self.max_options = max_options
        self.max_functions = max_functions
        self.enum_prob = enum_prob
        self.max_depth = max_depth
        self.options = []  # (name, values, default)

    # --- expressions -------------------------------------------------------

    def int_expr(self, ctx, depth=0):
        rng = self.rng
        atoms = [str(rng.randint(0, 9))]
        if ctx.int_vars:
            atoms.append(rng.choice(ctx.int_vars))
        atom = rng.choice(atoms)
        if depth >= 2 or rng.random() < 0.5:
            return atom
        op = rng.choice(["+", "*"])
        return f"{atom} {op} {self.int_expr(ctx, depth + 1)}"

    def bool_atom(self, ctx):
        rng = self.rng
        choices = []
        for name, values, _default in self.options:
            if values == (False, True):
                choices.append(f"option({name})")
            else:
                choices.append(f"option({name}) == :{rng.choice(values)}")
        if ctx.bool_vars:
            choices.append(rng.choice(ctx.bool_vars))
        choices.append(rng.choice(["true", "false"]))
        choices.append(f"{self.int_expr(ctx, 2)} < {self.int_expr(ctx, 2)}")
        return rng.choice(choices)

    def bool_expr(self, ctx, depth=0):
        rng = self.rng
        if depth >= 2 or rng.random() < 0.5:
            return self.bool_atom(ctx)
        op = rng.choice(["&&", "||"])
        return f"{self.bool_atom(ctx)} {op} {self.bool_expr(ctx, depth + 1)}"

    # --- statements --------------------------------------------------------

    def statements(self, ctx, callees, depth, budget):
        rng = self.rng
        out = []
        n = rng.randint(1, max(1, budget))
        for _ in range(n):
            kind = rng.random()
            if kind < 0.35:
                out.append(f"work({self.int_expr(ctx)});")
            elif kind < 0.5:
                var = ctx.fresh("i")
                out.append(f"{var} = {self.int_expr(ctx)};")
                ctx.int_vars.append(var)
            elif kind < 0.6:
                var = ctx.fresh("b")
                out.append(f"{var} = {self.bool_expr(ctx)};")
                ctx.bool_vars.append(var)
            elif kind < 0.75 and depth < self.max_depth:
                # vars assigned inside a branch must not escape: the branch
                # may not run
                snapshot = (list(ctx.int_vars), list(ctx.bool_vars))
                then = self.statements(ctx, callees, depth + 1, budget - 1)
                ctx.int_vars, ctx.bool_vars = list(snapshot[0]), list(snapshot[1])
                block = "\n".join(f"  {s}" for s in then)
                if rng.random() < 0.4:
                    other = self.statements(ctx, callees, depth + 1, budget - 1)
                    ctx.int_vars, ctx.bool_vars = snapshot
                    else_block = "\n".join(f"  {s}" for s in other)
                    out.append(f"if ({self.bool_expr(ctx)}) {{\n{block}\n}} "
                               f"else {{\n{else_block}\n}}")
                else:
                    out.append(f"if ({self.bool_expr(ctx)}) {{\n{block}\n}}")
            elif kind < 0.85 and depth < self.max_depth:
                snapshot = (list(ctx.int_vars), list(ctx.bool_vars))
                body = self.statements(ctx, callees, depth + 1, budget - 1)
                ctx.int_vars, ctx.bool_vars = snapshot
                block = "\n".join(f"  {s}" for s in body)
                out.append(f"repeat {rng.randint(0, 3)} {{\n{block}\n}}")
            elif callees:
                callee = rng.choice(callees)
                args = []
                for _p, t in callee.params:
                    args.append(self.int_expr(ctx) if t == "int"
                                else self.bool_expr(ctx))
                call = f"{callee.name}({', '.join(args)});"
                if callee.returns and rng.random() < 0.5:
                    var = ctx.fresh("r")
                    call = f"{var} = {call[:-1]};"
                    out.append(call)
                    ctx.int_vars.append(var)
                else:
                    out.append(call)
            else:
                out.append(f"work({rng.randint(0, 9)});")
        return out

    # --- whole program -----------------------------------------------------

    def generate(self) -> str:
        rng = self.rng
        n_opts = rng.randint(1, self.max_options)
        self.options = []
        for i in range(n_opts):
            name = _OPTION_NAMES[i]
            if rng.random() < self.enum_prob:
                k = rng.randint(2, 3)
                values = tuple(f"v{j}" for j in range(k))
                default = values[0]
            else:
                values = (False, True)
                default = rng.random() < 0.2
            self.options.append((name, values, default))

        n_fns = rng.randint(1, self.max_functions)
        helpers = []
        for i in range(n_fns - 1, 0, -1):
            params = []
            for j in range(rng.randint(0, 2)):
                params.append((f"p{j}", rng.choice(["int", "bool"])))
            ctx = _FnCtx(f"f{i}", params)
            ctx.returns = rng.random() < 0.5
            ctx.body_callees = list(helpers)  # only later-defined fns: acyclic
            helpers.append(ctx)

        lines = []
        for name, values, default in self.options:
            if values == (False, True):
                d = "true" if default else "false"
                lines.append(f"option {name} bool default {d};")
            else:
                lines.append(f"option {name} enum {{{', '.join(values)}}} "
                             f"default {default};")

        main_ctx = _FnCtx("main", [])
        main_ctx.returns = False
        body = self.statements(main_ctx, helpers, 0, 5)
        lines.append("fn main() {")
        lines.extend(f"  {s}" for s in body)
        lines.append("}")

        for ctx in helpers:
            body = self.statements(ctx, ctx.body_callees, 0, 4)
            if ctx.returns:
                body.append(f"return {self.int_expr(ctx)};")
            params = ", ".join(p for p, _t in ctx.params)
            lines.append(f"fn {ctx.name}({params}) {{")
            lines.extend(f"  {s}" for s in body)
            lines.append("}")
        return "\n".join(lines) + "\n"


def random_program_source(seed: int, max_options: int = 4,
                          max_functions: int = 5, enum_prob: float = 0.0) -> str:
    rng = random.Random(seed)
    return ProgramGenerator(rng, max_options=max_options,
                            max_functions=max_functions,
                            enum_prob=enum_prob).generate()


def random_digraph(seed: int, max_nodes: int = 200, edge_prob: float = None):
    """Random directed graph as (nodes, edges) with integer node ids."""
    rng = random.Random(seed)
    n = rng.randint(2, max_nodes)
    if edge_prob is None:
        edge_prob = rng.uniform(0.5, 3.0) / n
    nodes = list(range(n))
    edges = set()
    for u in nodes:
        for v in nodes:
            if u != v and rng.random() < edge_prob:
                edges.add((u, v, rng.choice(["data", "control", "call"])))
    return set(nodes), edges
