"""Acceptance suite: one test per shipped guarantee, one printed verdict each.

Each test re-derives its expectation from first principles (hand-computable
fixtures, brute-force oracles) rather than from the implementation under
test, and enforces its runtime budget.
"""
import functools
import random
import shutil
import sys
import time

import numpy as np
import pytest
from click.testing import CliRunner

from confdebug.cli import main as cli_main
from confdebug.interp import execute, hotspot_view, measure_campaign
from confdebug.lang import IntLit, Work, parse_program, walk
from confdebug.models import (
    BASE_TERM, Term, diff_influence, enumerate_configs, fit_exact,
    fit_local_models, predict,
)
from confdebug.profdiff import diff_hotspot_views
from confdebug.randgen import random_digraph, random_program_source
from confdebug.slicer import (
    DependenceGraph, build_dependence_graph, chop, filter_by_coverage,
)
from confdebug.workspace import Session, Workspace, fit_workspace_models

from conftest import FIXTURES, berkeley_config


def criterion(name, budget_s):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[FAIL] {name}", file=sys.__stderr__)
                raise
            elapsed = time.perf_counter() - start
            assert elapsed < budget_s, (
                f"{name}: {elapsed:.1f}s exceeds {budget_s}s budget")
            print(f"[PASS] {name} ({elapsed:.1f}s < {budget_s}s)",
                  file=sys.__stderr__)
        return wrapper
    return deco


def full_factorial(program):
    configs = enumerate_configs(program.options, limit=100_000)
    return measure_campaign(program, configs)


@criterion("exact global model on the two-option-interaction fixture", 10)
def test_berkeley_global_model_exact(berkeley):
    records = full_factorial(berkeley)
    measurements = [(r.config, r.total_seconds) for r in records]
    model = fit_exact(measurements, berkeley_config(),
                      max_degree=len(berkeley.options))
    expected = {
        BASE_TERM: 4.6,
        Term(frozenset({("Duplicates", True), ("Transactions", True)})): 54.7,
        Term(frozenset({("Evict", True)})): 8.9,
        Term(frozenset({("Temporary", True)})): 3.5,
    }
    assert set(model.coefficients) == set(expected)
    for term, value in expected.items():
        assert abs(model.coefficients[term] - value) <= 1e-9
    assert not model.approximate


def _local_sum_holds(program, base, tol):
    records = full_factorial(program)
    measurements = [(r.config, r.total_seconds) for r in records]
    degree = len(program.options)
    global_model = fit_exact(measurements, base, max_degree=degree)
    local_models = fit_local_models(records, base, max_degree=degree)
    all_terms = set(global_model.coefficients)
    for m in local_models.values():
        all_terms |= set(m.coefficients)
    for term in all_terms:
        local_sum = sum(m.coefficients.get(term, 0.0)
                        for m in local_models.values())
        target = global_model.coefficients.get(term, 0.0)
        assert abs(local_sum - target) <= tol, term.label()


@criterion("per-function coefficients sum to the system coefficients", 60)
def test_local_sum_property(berkeley):
    _local_sum_holds(berkeley, berkeley_config(), tol=1e-6)
    for seed in range(50):
        src = random_program_source(seed, max_options=6, max_functions=10)
        program = parse_program(src)
        base = {o.name: o.default for o in program.options}
        _local_sum_holds(program, base, tol=1e-6)


@criterion("full-degree fit reproduces every measurement exactly", 120)
def test_full_degree_exactness():
    for seed in range(100):
        src = random_program_source(seed, max_options=8, max_functions=6,
                                    enum_prob=0.0)
        program = parse_program(src)
        base = {o.name: o.default for o in program.options}
        records = full_factorial(program)
        measurements = [(r.config, r.total_seconds) for r in records]
        model = fit_exact(measurements, base,
                          max_degree=len(program.options))
        for config, y in measurements:
            assert predict(model, config) - y == 0.0, f"seed {seed}"


@criterion("attributed deltas conserve the predicted difference", 120)
def test_attribution_conservation():
    rng = random.Random(424242)
    checked = 0
    for seed in range(25):
        src = random_program_source(seed, max_options=5, max_functions=6)
        program = parse_program(src)
        base = {o.name: o.default for o in program.options}
        configs = enumerate_configs(program.options, limit=100_000)
        records = measure_campaign(program, configs)
        model = fit_exact([(r.config, r.total_seconds) for r in records],
                          base, max_degree=len(program.options))
        for _ in range(40):
            a, b = rng.choice(configs), rng.choice(configs)
            report = diff_influence(model, a, b)
            lhs = sum(d for _opts, d in report.influences)
            rhs = predict(model, b) - predict(model, a)
            assert abs(lhs - rhs) <= 1e-9
            checked += 1
    assert checked == 1000


def _closure_chop(nodes, edges, sources, targets):
    ids = sorted(nodes)
    pos = {n: i for i, n in enumerate(ids)}
    adj = np.zeros((len(ids), len(ids)), dtype=bool)
    for u, v, _k in edges:
        adj[pos[u], pos[v]] = True
    reach = adj.copy()
    np.fill_diagonal(reach, True)
    while True:
        nxt = reach | (reach @ reach)
        if (nxt == reach).all():
            break
        reach = nxt
    return {n for n in ids
            if any(reach[pos[s], pos[n]] for s in sources)
            and any(reach[pos[n], pos[t]] for t in targets)}


@criterion("chop matches the brute-force path-node oracle", 60)
def test_chop_oracle_equivalence(berkeley, density):
    rng = random.Random(2024)
    for i in range(200):
        nodes, edges = random_digraph(seed=i, max_nodes=200)
        graph = DependenceGraph(nodes=set(nodes), edges=edges)
        ids = sorted(nodes)
        k = min(4, len(ids))
        sources = set(rng.sample(ids, rng.randint(1, k)))
        targets = set(rng.sample(ids, rng.randint(1, k)))
        expected = _closure_chop(nodes, edges, sources, targets)
        assert chop(graph, sources, targets) == expected, f"graph {i}"
        coverage = set(rng.sample(ids, len(ids) // 2 or 1))
        assert filter_by_coverage(expected, coverage) == expected & coverage

    for program in (berkeley, density):
        graph = build_dependence_graph(program)
        from confdebug.lang.parser import option_load_sites
        sources = set().union(*option_load_sites(program).values())
        for fn in program.functions:
            targets = {s.node_id for s in walk(fn)
                       if s.node_id in graph.nodes} & graph.nodes
            targets = {t for t in targets if t != fn.node_id}
            if not targets:
                continue
            expected = _closure_chop(graph.nodes, graph.edges, sources,
                                     targets)
            assert chop(graph, sources, targets) == expected, fn.name


@criterion("profile diff reproduces the known regression shape", 60)
def test_profile_diff_fidelity(berkeley):
    view_a = hotspot_view(execute(berkeley, berkeley_config()))
    view_b = hotspot_view(execute(
        berkeley, berkeley_config(dup=True, txn=True, repl=True)))
    diff = diff_hotspot_views(view_a, view_b)
    cursor = diff.entry("cursor_put")
    assert cursor.delta > 0
    assert cursor.stack_diff.only_a == [] and cursor.stack_diff.only_b == []
    assert diff.entry("file_manager_read").status == "only_b"

    rng = random.Random(77)
    pairs = 0
    while pairs < 100:
        src = random_program_source(rng.randrange(100_000), max_options=4)
        program = parse_program(src)
        opts = [o.name for o in program.options]
        a = {o: rng.random() < 0.5 for o in opts}
        b = {o: rng.random() < 0.5 for o in opts}
        ab = diff_hotspot_views(hotspot_view(execute(program, a)),
                                hotspot_view(execute(program, b)))
        ba = diff_hotspot_views(hotspot_view(execute(program, b)),
                                hotspot_view(execute(program, a)))
        for e in ab.entries:
            assert ba.entry(e.function).delta == -e.delta
        assert (sum(e.self_b - e.self_a for e in ab.entries)
                == ab.total_b - ab.total_a)
        pairs += 1


def _run_pipeline(ws):
    runner = CliRunner()
    steps = [
        ["measure", "--sample", "32", "--seed", "7"],
        ["model"],
        ["diff-config", "default", "user", "--format", "json"],
        ["hotspots", "default", "user", "--format", "json"],
        ["profile-diff", "default", "user", "--format", "json"],
        ["chain", "default", "user", "--format", "json"],
    ]
    for step in steps:
        result = runner.invoke(cli_main, ["-w", str(ws), *step],
                               catch_exceptions=False)
        assert result.exit_code == 0, (step, result.output)
    return {p.name: p.read_bytes() for p in sorted((ws / "reports").iterdir())}


@criterion("seeded pipeline runs are byte-identical", 120)
def test_pipeline_determinism(tmp_path):
    ws1, ws2 = tmp_path / "run1", tmp_path / "run2"
    shutil.copytree(FIXTURES / "berkeley_mini", ws1)
    shutil.copytree(FIXTURES / "berkeley_mini", ws2)
    first, second = _run_pipeline(ws1), _run_pipeline(ws2)
    assert first.keys() == second.keys()
    for name in first:
        assert first[name] == second[name], name


def _defect_statement(program, magnitude):
    for node in walk(program):
        if (isinstance(node, Work) and isinstance(node.expr, IntLit)
                and node.expr.value == magnitude):
            return node
    raise AssertionError("planted defect statement not found")


def _end_to_end(tmp_path, fixture, defect_function, defect_magnitude):
    ws = tmp_path / fixture
    shutil.copytree(FIXTURES / fixture, ws)
    workspace = Workspace.load(ws)
    records = measure_campaign(
        workspace.program,
        enumerate_configs(workspace.program.options, limit=100_000))
    workspace.append_measurements(records)
    workspace.write_models(*fit_workspace_models(workspace, records, 3))
    session = Session(workspace)
    chain = session.cause_effect("default", "user")
    roles = {n["function"]: n["role"]
             for n in chain["method_graph"]["nodes"]}
    assert roles.get(defect_function) in ("target", "intermediate"), roles
    defect = _defect_statement(workspace.program, defect_magnitude)
    spans = chain["highlights"][workspace.program_path.name]
    assert any(s["node_id"] == defect.node_id for s in spans)
    assert any(s["start"] == defect.span.start and s["end"] == defect.span.end
               for s in spans)


@criterion("end-to-end scenario localizes both planted defects", 120)
def test_end_to_end_debugging_scenario(tmp_path):
    _end_to_end(tmp_path, "berkeley_mini", "cursor_put", 429)
    _end_to_end(tmp_path, "density_mini", "scale_image", 300)
