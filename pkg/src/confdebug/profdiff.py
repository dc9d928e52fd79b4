"""Hotspot-view comparison between two configurations.

Back traces are compared as exact function-name stack sequences; the
deterministic interpreter makes fuzzy matching unnecessary.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .interp.profiler import UNIT_SECONDS, HotspotView

# methods below this (seconds, both views) are hidden by default when
# rendering; hidden mass is reported as an aggregate row
DISPLAY_THRESHOLD_S = 0.05


@dataclass
class StackDiff:
    shared: list  # stacks present in both views
    only_a: list
    only_b: list
    # stack -> attributed units, per side
    times_a: dict = field(default_factory=dict)
    times_b: dict = field(default_factory=dict)


@dataclass
class ProfileDiffEntry:
    function: str
    time_a: int  # total units in view A
    time_b: int
    self_a: int
    self_b: int
    status: str  # both | only_a | only_b
    stack_diff: StackDiff
    is_option_hotspot: bool = False

    @property
    def delta(self) -> int:
        return self.time_b - self.time_a

    @property
    def delta_seconds(self) -> float:
        return self.delta * UNIT_SECONDS


@dataclass
class ProfileDiff:
    total_a: int
    total_b: int
    entries: list  # of ProfileDiffEntry, |delta| desc then name asc

    def entry(self, function: str):
        for e in self.entries:
            if e.function == function:
                return e
        return None

    def to_obj(self) -> dict:
        def stack_obj(diff: StackDiff):
            def row(stack):
                return {
                    "stack": list(stack),
                    "time_a": diff.times_a.get(stack, 0) * UNIT_SECONDS,
                    "time_b": diff.times_b.get(stack, 0) * UNIT_SECONDS,
                }
            return {
                "shared": [row(s) for s in diff.shared],
                "only_a": [row(s) for s in diff.only_a],
                "only_b": [row(s) for s in diff.only_b],
            }

        return {
            "schema_version": 1,
            "total_a": self.total_a * UNIT_SECONDS,
            "total_b": self.total_b * UNIT_SECONDS,
            "entries": [
                {
                    "function": e.function,
                    "time_a": e.time_a * UNIT_SECONDS,
                    "time_b": e.time_b * UNIT_SECONDS,
                    "self_a": e.self_a * UNIT_SECONDS,
                    "self_b": e.self_b * UNIT_SECONDS,
                    "delta": e.delta_seconds,
                    "status": e.status,
                    "is_option_hotspot": e.is_option_hotspot,
                    "stack_diff": stack_obj(e.stack_diff),
                }
                for e in self.entries
            ],
        }


def diff_hotspot_views(view_a: HotspotView, view_b: HotspotView) -> ProfileDiff:
    """Per-method time deltas and back-trace differences for two views."""
    a = {e.function: e for e in view_a.entries}
    b = {e.function: e for e in view_b.entries}
    entries = []
    for fn in sorted(set(a) | set(b)):
        ea, eb = a.get(fn), b.get(fn)
        traces_a = dict(ea.back_traces) if ea else {}
        traces_b = dict(eb.back_traces) if eb else {}
        shared = sorted(set(traces_a) & set(traces_b))
        only_a = sorted(set(traces_a) - set(traces_b))
        only_b = sorted(set(traces_b) - set(traces_a))
        if ea is None:
            status = "only_b"
        elif eb is None:
            status = "only_a"
        else:
            status = "both"
        entries.append(ProfileDiffEntry(
            function=fn,
            time_a=ea.total if ea else 0,
            time_b=eb.total if eb else 0,
            self_a=ea.self_time if ea else 0,
            self_b=eb.self_time if eb else 0,
            status=status,
            stack_diff=StackDiff(shared=shared, only_a=only_a, only_b=only_b,
                                 times_a=traces_a, times_b=traces_b),
        ))
    entries.sort(key=lambda e: (-abs(e.delta), e.function))
    return ProfileDiff(total_a=view_a.total_cost, total_b=view_b.total_cost,
                       entries=entries)


def annotate_with_hotspots(diff: ProfileDiff, report) -> ProfileDiff:
    """Flag entries that appear in an option-hotspots report; order unchanged.

    `report` is an OptionHotspotsReport or any iterable of function names.
    """
    names = set(report.functions() if hasattr(report, "functions") else report)
    for entry in diff.entries:
        entry.is_option_hotspot = entry.function in names
    return diff


def render_rows(diff: ProfileDiff, threshold_s: float = DISPLAY_THRESHOLD_S):
    """Rows for display: sub-threshold methods folded into an aggregate row.

    Returns (visible entries, hidden row or None); the hidden row keeps the
    aggregate times so conservation survives the display filter.
    """
    threshold = threshold_s / UNIT_SECONDS
    visible = [e for e in diff.entries
               if e.time_a >= threshold or e.time_b >= threshold]
    hidden = [e for e in diff.entries if e not in visible]
    if not hidden:
        return visible, None
    agg = {
        "functions": [e.function for e in hidden],
        "time_a": sum(e.time_a for e in hidden) * UNIT_SECONDS,
        "time_b": sum(e.time_b for e in hidden) * UNIT_SECONDS,
        "delta": sum(e.delta for e in hidden) * UNIT_SECONDS,
        "self_a": sum(e.self_a for e in hidden) * UNIT_SECONDS,
        "self_b": sum(e.self_b for e in hidden) * UNIT_SECONDS,
        "self_delta": sum(e.self_b - e.self_a for e in hidden) * UNIT_SECONDS,
    }
    return visible, agg
