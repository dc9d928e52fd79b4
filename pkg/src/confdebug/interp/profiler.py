"""Deterministic execution with abstract cost accounting.

One cost unit models 0.1 s of execution time, so fixture programs can hit
fractional second targets exactly. `execute` is a pure function of
(program, configuration); wall-clock measurement exists behind a flag but
is never part of any derived analysis.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from ..errors import CampaignError, ValidationError, WorkbenchError
from ..lang.ast import Program
from . import _kernel

UNIT_SECONDS = 0.1


def to_seconds(units: int) -> float:
    """Cost units to seconds by correctly rounded division.

    Division keeps every converted value on the decimal 0.1-grid, so model
    fitting over converted measurements stays exact; multiplying by the
    float 0.1 would not (3 * 0.1 != 3 / 10).
    """
    return units / 10


def validate_config(program: Program, config: dict) -> None:
    declared = {o.name: o for o in program.options}
    if set(config) != set(declared):
        missing = set(declared) - set(config)
        extra = set(config) - set(declared)
        raise ValidationError(
            f"configuration is not total: missing={sorted(missing)} "
            f"extra={sorted(extra)}")
    for name, value in config.items():
        if value not in declared[name].values:
            raise ValidationError(
                f"value {value!r} outside domain of option {name}")


@dataclass
class ExecutionRecord:
    config: dict
    total_cost: int
    call_tree: dict  # nested {function, self, total, children}
    method_times: dict  # function -> (self units, total units)
    coverage: frozenset
    wall_time_s: float | None = None

    @property
    def total_seconds(self) -> float:
        return to_seconds(self.total_cost)

    def method_seconds(self, function: str) -> tuple:
        s, t = self.method_times.get(function, (0, 0))
        return to_seconds(s), to_seconds(t)

    def to_obj(self) -> dict:
        # fixed key order: config, total_cost, method_times, call_tree, coverage
        return {
            "config": {k: self.config[k] for k in sorted(self.config)},
            "total_cost": self.total_cost,
            "method_times": {
                fn: list(self.method_times[fn]) for fn in sorted(self.method_times)
            },
            "call_tree": self.call_tree,
            "coverage": sorted(self.coverage),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "ExecutionRecord":
        return cls(
            config=dict(obj["config"]),
            total_cost=obj["total_cost"],
            call_tree=obj["call_tree"],
            method_times={fn: tuple(v) for fn, v in obj["method_times"].items()},
            coverage=frozenset(obj["coverage"]),
        )


def _aggregate_method_times(tree: dict) -> dict:
    """Per-function (self, total) units.

    Totals count only outermost activations of a function, so recursive
    re-entry is not double counted; self costs are always summed.
    """
    times: dict = {}

    def visit(node, ancestors):
        fn = node["function"]
        s, t = times.get(fn, (0, 0))
        s += node["self"]
        if fn not in ancestors:
            t += node["total"]
        times[fn] = (s, t)
        for child in node["children"]:
            visit(child, ancestors | {fn})

    visit(tree, frozenset())
    return times


def execute(program: Program, config: dict, wall_clock: bool = False) -> ExecutionRecord:
    """Run `program` under a total `config`; deterministic cost accounting."""
    validate_config(program, config)
    started = time.perf_counter() if wall_clock else None
    total, tree, coverage = _kernel.run(program, config)
    wall = time.perf_counter() - started if wall_clock else None
    return ExecutionRecord(
        config=dict(config),
        total_cost=total,
        call_tree=tree,
        method_times=_aggregate_method_times(tree),
        coverage=frozenset(coverage),
        wall_time_s=wall,
    )


def measure_campaign(program: Program, configs: list) -> list:
    """Execute every configuration in order; errors carry the config index."""
    records = []
    for i, config in enumerate(configs):
        try:
            records.append(execute(program, config))
        except WorkbenchError as exc:
            raise CampaignError(i, exc) from exc
    return records


# --- hotspot view ----------------------------------------------------------


@dataclass
class HotspotEntry:
    function: str
    total: int  # units, cumulated over all distinct call stacks
    self_time: int  # units
    # back trace -> attributed units; key is the stack from this function
    # up to the entry function
    back_traces: dict = field(default_factory=dict)


@dataclass
class HotspotView:
    total_cost: int
    entries: list  # of HotspotEntry, total desc / name asc

    def entry(self, function: str):
        for e in self.entries:
            if e.function == function:
                return e
        return None


def hotspot_view(record: ExecutionRecord) -> HotspotView:
    """Inverse call tree: functions ranked by cumulated total time.

    Zero-total functions are omitted. For each entry the attributed
    back-trace times sum to the entry total (recursive re-entry is folded
    into the outermost activation, consistent with method_times).
    """
    acc: dict = {}

    def visit(node, stack):
        fn = node["function"]
        here = (fn,) + stack
        entry = acc.setdefault(fn, {"total": 0, "self": 0, "traces": {}})
        entry["self"] += node["self"]
        if fn not in stack:
            entry["total"] += node["total"]
            entry["traces"][here] = entry["traces"].get(here, 0) + node["total"]
        for child in node["children"]:
            visit(child, here)

    visit(record.call_tree, ())
    entries = [
        HotspotEntry(function=fn, total=v["total"], self_time=v["self"],
                     back_traces=dict(v["traces"]))
        for fn, v in acc.items() if v["total"] > 0
    ]
    entries.sort(key=lambda e: (-e.total, e.function))
    return HotspotView(total_cost=record.total_cost, entries=entries)
