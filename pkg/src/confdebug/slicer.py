"""Statement-level dependence graph, slices, and coverage-filtered chops.

Graph nodes are statements, option-load expressions, function entries, and
parameters. Data edges come from an intraprocedural reaching-definitions
analysis over a per-function control-flow graph; control edges from the
structured conditionals/loops (plus entry -> top-level statements); call,
param-in, and param-out edges connect functions context-insensitively.
The result over-approximates: a chop contains every node on some
source-to-target dependence path.
"""
from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field

from .errors import UnknownNode
from .lang import ast
from .lang.ast import (
    Assign, CallStmt, Function, If, OptionLoad, Program, Repeat, Return, Var,
    Work, walk,
)

EDGE_KINDS = ("data", "control", "call", "param-in", "param-out")


@dataclass
class DependenceGraph:
    nodes: set
    edges: set  # of (from_id, to_id, kind)
    _succ: dict = field(default_factory=dict, repr=False)
    _pred: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._build_adjacency()

    def _build_adjacency(self):
        self._succ = {n: set() for n in self.nodes}
        self._pred = {n: set() for n in self.nodes}
        for u, v, _kind in self.edges:
            self._succ[u].add(v)
            self._pred[v].add(u)

    def successors(self, node):
        return self._succ[node]

    def predecessors(self, node):
        return self._pred[node]

    def to_obj(self) -> dict:
        return {
            "schema_version": 1,
            "nodes": sorted(self.nodes),
            "edges": [
                {"from": u, "to": v, "kind": k}
                for u, v, k in sorted(self.edges)
            ],
        }


# --- per-statement facts ----------------------------------------------------


def _stmt_exprs(stmt):
    """Expressions evaluated at the statement itself (not nested stmts)."""
    if isinstance(stmt, Assign):
        return [stmt.expr]
    if isinstance(stmt, CallStmt):
        return list(stmt.args)
    if isinstance(stmt, If):
        return [stmt.cond]
    if isinstance(stmt, Repeat):
        return [stmt.count]
    if isinstance(stmt, Return):
        return [stmt.expr] if stmt.expr is not None else []
    if isinstance(stmt, Work):
        return [stmt.expr]
    return []


def _used_vars(stmt):
    used = set()
    for expr in _stmt_exprs(stmt):
        for node in walk(expr):
            if isinstance(node, Var):
                used.add(node.name)
    return used


def _option_loads(stmt):
    loads = []
    for expr in _stmt_exprs(stmt):
        for node in walk(expr):
            if isinstance(node, OptionLoad):
                loads.append(node.node_id)
    return loads


def _defined_var(stmt):
    if isinstance(stmt, Assign):
        return stmt.target
    if isinstance(stmt, CallStmt) and stmt.target is not None:
        return stmt.target
    return None


def _statements(body):
    """All statements in a body, including nested ones."""
    out = []
    for stmt in body:
        out.append(stmt)
        if isinstance(stmt, If):
            out.extend(_statements(stmt.then_body))
            out.extend(_statements(stmt.else_body))
        elif isinstance(stmt, Repeat):
            out.extend(_statements(stmt.body))
    return out


# --- control-flow graph -------------------------------------------------------


def build_cfg(fn: Function) -> dict:
    """Successor map over statement node ids; entry key is fn.node_id.

    `return` statements have no successors; a `repeat` has edges both into
    its body and past it (zero iterations), with a back edge from the body.
    """
    succ = {fn.node_id: set()}

    def block(stmts, follow):
        # returns the entry set of the block; `follow` is what comes after
        nxt = set(follow)
        for stmt in reversed(stmts):
            sid = stmt.node_id
            if isinstance(stmt, If):
                then_entry = block(stmt.then_body, nxt)
                else_entry = block(stmt.else_body, nxt) if stmt.else_body else nxt
                succ[sid] = set(then_entry) | set(else_entry)
            elif isinstance(stmt, Repeat):
                body_entry = block(stmt.body, {sid})
                succ[sid] = set(body_entry) | nxt
            elif isinstance(stmt, Return):
                succ[sid] = set()
            else:
                succ[sid] = nxt
            nxt = {sid}
        return nxt

    succ[fn.node_id] = block(fn.body, set())
    return succ


def _reaching_definitions(fn: Function, cfg: dict) -> dict:
    """IN sets: statement id -> set of (var, def node id) reaching it.

    Classic worklist dataflow; params act as initial definitions flowing
    out of the function-entry node.
    """
    stmts = {s.node_id: s for s in _statements(fn.body)}
    preds = {sid: set() for sid in stmts}
    for src, succs in cfg.items():
        for dst in succs:
            preds.setdefault(dst, set()).add(src)

    gen = {}
    kills = {}
    for sid, stmt in stmts.items():
        var = _defined_var(stmt)
        gen[sid] = {(var, sid)} if var else set()
        kills[sid] = var

    in_sets = {sid: set() for sid in stmts}
    out_sets = {sid: set(gen[sid]) for sid in stmts}
    out_sets[fn.node_id] = {(p.name, p.node_id) for p in fn.params}

    work = deque(stmts)
    while work:
        sid = work.popleft()
        incoming = set()
        for p in preds.get(sid, ()):
            incoming |= out_sets.get(p, set())
        in_sets[sid] = incoming
        new_out = set(gen[sid]) | {d for d in incoming if d[0] != kills[sid]}
        if new_out != out_sets[sid]:
            out_sets[sid] = new_out
            for succ in cfg.get(sid, ()):
                work.append(succ)
    return in_sets


# --- graph construction -------------------------------------------------------


def build_dependence_graph(program: Program) -> DependenceGraph:
    nodes = set()
    edges = set()

    for fn in program.functions:
        nodes.add(fn.node_id)
        for p in fn.params:
            nodes.add(p.node_id)
        stmts = _statements(fn.body)
        for stmt in stmts:
            nodes.add(stmt.node_id)
            for load_id in _option_loads(stmt):
                nodes.add(load_id)
                edges.add((load_id, stmt.node_id, "data"))

        # control: entry -> top-level statements; if/repeat -> direct children
        for stmt in fn.body:
            edges.add((fn.node_id, stmt.node_id, "control"))
        for stmt in stmts:
            if isinstance(stmt, If):
                for child in stmt.then_body + stmt.else_body:
                    edges.add((stmt.node_id, child.node_id, "control"))
            elif isinstance(stmt, Repeat):
                for child in stmt.body:
                    edges.add((stmt.node_id, child.node_id, "control"))

        # data: reaching definitions
        cfg = build_cfg(fn)
        in_sets = _reaching_definitions(fn, cfg)
        for stmt in stmts:
            used = _used_vars(stmt)
            for var, def_id in in_sets.get(stmt.node_id, ()):
                if var in used:
                    edges.add((def_id, stmt.node_id, "data"))

        # interprocedural edges
        for stmt in stmts:
            if isinstance(stmt, CallStmt):
                callee = program.function(stmt.callee)
                edges.add((stmt.node_id, callee.node_id, "call"))
                for p in callee.params:
                    edges.add((stmt.node_id, p.node_id, "param-in"))
                if stmt.target is not None:
                    for ret in _statements(callee.body):
                        if isinstance(ret, Return):
                            edges.add((ret.node_id, stmt.node_id, "param-out"))

    return DependenceGraph(nodes=nodes, edges=edges)


# --- slicing --------------------------------------------------------------------


def _check_nodes(graph: DependenceGraph, ids) -> set:
    ids = set(ids)
    unknown = ids - graph.nodes
    if unknown:
        raise UnknownNode(f"not graph nodes: {sorted(unknown)}")
    return ids


def _reach(graph: DependenceGraph, seeds, within, reverse: bool) -> set:
    neighbors = graph.predecessors if reverse else graph.successors
    seen = set(s for s in seeds if s in within)
    queue = deque(seen)
    while queue:
        node = queue.popleft()
        for nxt in neighbors(node):
            if nxt in within and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def backward_slice(graph: DependenceGraph, targets) -> set:
    """All nodes from which some target is reachable, targets included."""
    targets = _check_nodes(graph, targets)
    return _reach(graph, targets, graph.nodes, reverse=True)


def forward_slice(graph: DependenceGraph, sources, within) -> set:
    """Forward reachability from sources inside the induced subgraph."""
    sources = _check_nodes(graph, sources)
    return _reach(graph, sources, set(within), reverse=False)


def chop(graph: DependenceGraph, sources, targets) -> set:
    """Fixed-point chop: nodes on some source-to-target dependence path."""
    sources = _check_nodes(graph, sources)
    targets = _check_nodes(graph, targets)
    current = set(graph.nodes)
    while True:
        backward = _reach(graph, targets & current, current, reverse=True)
        forward = _reach(graph, sources & backward, backward, reverse=False)
        if forward == current:
            return current
        current = forward


def filter_by_coverage(chop_nodes, coverage_union) -> set:
    """Drop chop nodes not executed under either compared configuration."""
    return set(chop_nodes) & set(coverage_union)


# --- cause-effect chain ----------------------------------------------------------


@dataclass
class ChopResult:
    sources: set
    targets: set
    nodes: set
    method_nodes: list  # (function, role in {source, target, intermediate})
    method_edges: list  # (from_function, to_function)
    highlights: dict  # file -> [(start, end, node_id)]
    warnings: list
    chop_id: str = ""

    def to_obj(self) -> dict:
        return {
            "schema_version": 1,
            "chop_id": self.chop_id,
            "sources": sorted(self.sources),
            "targets": sorted(self.targets),
            "nodes": sorted(self.nodes),
            "method_graph": {
                "nodes": [{"function": fn, "role": role}
                          for fn, role in self.method_nodes],
                "edges": [{"from": u, "to": v} for u, v in self.method_edges],
            },
            "highlights": {
                file: [{"start": s, "end": e, "node_id": n}
                       for s, e, n in spans]
                for file, spans in sorted(self.highlights.items())
            },
            "warnings": list(self.warnings),
        }


def cause_effect_chain(program: Program, graph: DependenceGraph,
                       influencing_options, hotspot_functions,
                       coverage_union) -> ChopResult:
    """Coverage-filtered chop from option loads to hotspot-function statements.

    Never-read options are reported as warnings (empty contribution), not
    errors; an unreachable hotspot yields an empty method graph plus a
    warning.
    """
    from .lang.parser import option_load_sites

    warnings = []
    declared = {o.name for o in program.options}
    for name in influencing_options:
        if name not in declared:
            raise UnknownNode(f"option {name} is not declared")
    for name in hotspot_functions:
        program.function(name)  # KeyError on unknown function

    sites = option_load_sites(program)
    sources = set()
    for name in sorted(influencing_options):
        if not sites[name]:
            warnings.append(f"option {name} is never read; no sources")
        sources |= sites[name]

    coverage_union = set(coverage_union)
    targets = set()
    for name in sorted(hotspot_functions):
        fn = program.function(name)
        for stmt in _statements(fn.body):
            if stmt.node_id in coverage_union and stmt.node_id in graph.nodes:
                targets.add(stmt.node_id)

    if sources and targets:
        nodes = filter_by_coverage(chop(graph, sources, targets),
                                   coverage_union)
    else:
        nodes = set()

    owner = ast.enclosing_function(program)
    fn_by_id = {fn.node_id: fn.name for fn in program.functions}
    in_chop_sources = sources & nodes
    in_chop_targets = targets & nodes

    functions_in_chop = sorted({
        fn_by_id.get(n, owner.get(n)) for n in nodes
        if fn_by_id.get(n, owner.get(n)) is not None})
    source_fns = {owner[n] for n in in_chop_sources}
    target_fns = {owner[n] for n in in_chop_targets}
    method_nodes = []
    for fn in functions_in_chop:
        if fn in source_fns:
            role = "source"
        elif fn in target_fns:
            role = "target"
        else:
            role = "intermediate"
        method_nodes.append((fn, role))

    def owner_of(n):
        return fn_by_id.get(n, owner.get(n))

    method_edges = sorted({
        (owner_of(u), owner_of(v))
        for u, v, _k in graph.edges
        if u in nodes and v in nodes and owner_of(u) != owner_of(v)
    })

    if (hotspot_functions and sources
            and not any(fn in target_fns for fn in hotspot_functions)):
        warnings.append("no covered dependence path reaches the hotspots; "
                        "method graph is empty" if not nodes else
                        "hotspot functions unreachable from option loads")

    index = ast.node_index(program)
    highlights = {}
    for n in sorted(nodes):
        if n in fn_by_id:
            continue  # whole-function spans are not highlighted
        node = index[n]
        spans = highlights.setdefault(node.span.file, [])
        spans.append((node.span.start, node.span.end, n))
    for spans in highlights.values():
        spans.sort()

    chop_id = hashlib.sha256(repr((
        sorted(influencing_options), sorted(hotspot_functions),
        sorted(sources), sorted(targets))).encode()).hexdigest()[:16]

    return ChopResult(sources=sources, targets=targets, nodes=nodes,
                      method_nodes=method_nodes, method_edges=method_edges,
                      highlights=highlights, warnings=warnings,
                      chop_id=chop_id)
