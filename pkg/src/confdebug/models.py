"""Global and local performance-influence models.

A model is a base cost plus coefficient-weighted interaction terms, always
expressed relative to a base configuration. Exact fitting uses Möbius
inversion (signed inclusion-exclusion over sub-deviations from the base)
on a full factorial; sampled fitting uses forward stepwise least squares.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateDesign, DuplicateConfig, InconsistentModels,
    IncompleteFactorial, SpaceTooLarge, UnknownOption,
)
from .interp.profiler import to_seconds

PRUNE_EPS = 1e-9
STEPWISE_MIN_GAIN = 1e-3


def _value_key(value) -> str:
    return f"b{int(value)}" if isinstance(value, bool) else f"s{value}"


@dataclass(frozen=True)
class Term:
    """A set of (option, non-base value) factors; the empty set is the base."""
    factors: frozenset

    @property
    def degree(self) -> int:
        return len(self.factors)

    @property
    def options(self) -> frozenset:
        return frozenset(opt for opt, _v in self.factors)

    def sort_key(self):
        return tuple(sorted((opt, _value_key(v)) for opt, v in self.factors))

    def matches(self, config: dict) -> bool:
        return all(config[opt] == value for opt, value in self.factors)

    def label(self) -> str:
        if not self.factors:
            return "base"
        parts = []
        for opt, value in sorted(self.factors):
            parts.append(opt if value is True else f"{opt}={value}")
        return "*".join(parts)


BASE_TERM = Term(frozenset())


@dataclass
class PerformanceInfluenceModel:
    base_config: dict
    coefficients: dict  # Term -> seconds
    granularity: str = "global"  # "global" or "local"
    function: str | None = None
    approximate: bool = False
    residuals: list | None = None

    @property
    def base_coefficient(self) -> float:
        return self.coefficients.get(BASE_TERM, 0.0)

    def terms(self):
        return sorted(self.coefficients, key=Term.sort_key)

    def to_obj(self) -> dict:
        obj = {
            "schema_version": 1,
            "granularity": self.granularity,
            "function": self.function,
            "base_config": {k: self.base_config[k]
                            for k in sorted(self.base_config)},
            "approximate": self.approximate,
            "terms": [
                {"factors": [[opt, val] for opt, val in sorted(t.factors)],
                 "coefficient": float(self.coefficients[t])}
                for t in self.terms()
            ],
        }
        if self.residuals is not None:
            obj["residuals"] = list(self.residuals)
        return obj

    @classmethod
    def from_obj(cls, obj: dict) -> "PerformanceInfluenceModel":
        coeffs = {}
        for entry in obj["terms"]:
            term = Term(frozenset((opt, val) for opt, val in entry["factors"]))
            coeffs[term] = entry["coefficient"]
        return cls(
            base_config=dict(obj["base_config"]),
            coefficients=coeffs,
            granularity=obj["granularity"],
            function=obj.get("function"),
            approximate=obj["approximate"],
            residuals=obj.get("residuals"),
        )


# --- configuration space ----------------------------------------------------


def enumerate_configs(options: list, limit: int) -> list:
    """Full factorial in lexicographic option order, all-base config first.

    Within each option, the base (default) value comes first, remaining
    values keep their declared order.
    """
    size = 1
    for opt in options:
        size *= len(opt.values)
    if size > limit:
        raise SpaceTooLarge(size, limit)
    names = sorted(o.name for o in options)
    by_name = {o.name: o for o in options}
    per_option = []
    for name in names:
        opt = by_name[name]
        rest = [v for v in opt.values if v != opt.default]
        per_option.append([opt.default] + rest)
    configs = []
    for combo in itertools.product(*per_option):
        configs.append(dict(zip(names, combo)))
    return configs


def sample_configs(options: list, n: int, seed: int) -> list:
    """Seeded uniform sample of n distinct configurations."""
    import random
    rng = random.Random(seed)
    space = 1
    for opt in options:
        space *= len(opt.values)
    n = min(n, space)
    seen = {}
    names = sorted(o.name for o in options)
    by_name = {o.name: o for o in options}
    while len(seen) < n:
        config = {name: rng.choice(by_name[name].values) for name in names}
        seen.setdefault(tuple(config[k] for k in names), config)
    return list(seen.values())


# --- exact fitting (Möbius inversion) ---------------------------------------


def _domains_from_measurements(measurements: list, base: dict):
    """Per-option value lists (base first) inferred from the data."""
    names = sorted(base)
    values = {name: set() for name in names}
    for config, _y in measurements:
        if set(config) != set(base):
            raise UnknownOption(
                f"config options {sorted(config)} != base options {names}")
        for name in names:
            values[name].add(config[name])
    domains = []
    for name in names:
        rest = sorted(values[name] - {base[name]}, key=_value_key)
        domains.append([base[name]] + rest)
    return names, domains


def fit_exact(measurements: list, base: dict, max_degree: int,
              granularity: str = "global", function: str | None = None
              ) -> PerformanceInfluenceModel:
    """Exact model from a full factorial by Möbius inversion.

    beta_S = sum over T subseteq S of (-1)^(|S|-|T|) * y(config deviating
    from base exactly on T), computed as a sequential per-option
    difference transform. If pruning leaves terms above max_degree the
    model is refit by truncated least squares and flagged approximate.
    """
    names, domains = _domains_from_measurements(measurements, base)
    shape = tuple(len(d) for d in domains)
    index = {name: {v: i for i, v in enumerate(dom)}
             for name, dom in zip(names, domains)}
    expected = 1
    for k in shape:
        expected *= k

    # exact rational arithmetic over the shortest-decimal reading of each
    # float: measurements on a decimal grid (cost units / 10) stay on it, so
    # spurious interaction terms cancel exactly and full-degree fits
    # reproduce every measurement bit-for-bit
    table = {}
    for config, y in measurements:
        key = tuple(index[name][config[name]] for name in names)
        if key in table:
            raise DuplicateConfig(f"configuration measured twice: {config}")
        table[key] = Fraction(str(y)) if isinstance(y, float) else Fraction(y)
    if len(table) != expected:
        raise IncompleteFactorial(expected - len(table))

    # sequential Möbius transform: subtract the base slice along each axis
    for axis in range(len(names)):
        new = {}
        for key, value in table.items():
            if key[axis] == 0:
                new[key] = value
            else:
                base_key = key[:axis] + (0,) + key[axis + 1:]
                new[key] = value - table[base_key]
        table = new

    coefficients = {}
    for key, beta in table.items():
        degree = sum(1 for i in key if i != 0)
        if degree > 0 and abs(beta) < PRUNE_EPS:
            continue
        factors = frozenset(
            (names[axis], domains[axis][i])
            for axis, i in enumerate(key) if i != 0)
        coefficients[Term(factors)] = beta

    needs_truncation = any(t.degree > max_degree for t in coefficients)
    if needs_truncation and max_degree < len(names):
        return _fit_least_squares_truncated(
            measurements, base, names, domains, max_degree,
            granularity, function)
    return PerformanceInfluenceModel(
        base_config=dict(base), coefficients=coefficients,
        granularity=granularity, function=function)


def _candidate_terms(names, domains, max_degree):
    terms = []
    non_base = {name: dom[1:] for name, dom in zip(names, domains)}
    for degree in range(1, max_degree + 1):
        for opts in itertools.combinations(names, degree):
            for values in itertools.product(*(non_base[o] for o in opts)):
                terms.append(Term(frozenset(zip(opts, values))))
    terms.sort(key=lambda t: (t.degree, t.sort_key()))
    return terms


def _design_matrix(configs, terms):
    X = np.ones((len(configs), len(terms) + 1))
    for j, term in enumerate(terms, start=1):
        for i, config in enumerate(configs):
            X[i, j] = 1.0 if term.matches(config) else 0.0
    return X


def _fit_least_squares_truncated(measurements, base, names, domains,
                                 max_degree, granularity, function):
    configs = [c for c, _y in measurements]
    y = np.array([float(v) for _c, v in measurements])
    terms = _candidate_terms(names, domains, max_degree)
    X = _design_matrix(configs, terms)
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    residuals = list(y - X @ beta)
    coefficients = {BASE_TERM: float(beta[0])}
    for term, b in zip(terms, beta[1:]):
        if abs(b) >= PRUNE_EPS:
            coefficients[term] = float(b)
    return PerformanceInfluenceModel(
        base_config=dict(base), coefficients=coefficients,
        granularity=granularity, function=function,
        approximate=True, residuals=residuals)


# --- sampled fitting (forward stepwise least squares) ------------------------


def fit_sampled(measurements: list, base: dict, max_degree: int,
                granularity: str = "global", function: str | None = None,
                min_gain: float = STEPWISE_MIN_GAIN
                ) -> PerformanceInfluenceModel:
    """Forward stepwise least squares over candidate terms up to max_degree.

    Selection stops when the adjusted-R² improvement drops below
    STEPWISE_MIN_GAIN (plain R² when there are no residual degrees of
    freedom). The model is flagged approximate and carries its training
    residuals.
    """
    names, domains = _domains_from_measurements(measurements, base)
    configs = [c for c, _y in measurements]
    distinct = {tuple(sorted((k, _value_key(v)) for k, v in c.items()))
                for c in configs}
    if len(distinct) < 2:
        raise DegenerateDesign("all sampled configurations are identical")

    y = np.array([float(v) for _c, v in measurements])
    n = len(y)
    tss = float(np.sum((y - y.mean()) ** 2))
    candidates = _candidate_terms(names, domains, max_degree)
    columns = {t: np.array([1.0 if t.matches(c) else 0.0 for c in configs])
               for t in candidates}

    def adjusted_r2(rss, p):
        r2 = 1.0 - rss / tss if tss > 0 else 1.0
        if n - p - 1 <= 0:
            return r2
        return 1.0 - (1.0 - r2) * (n - 1) / (n - p - 1)

    selected = []
    X = np.ones((n, 1))
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    rss = float(np.sum((y - X @ beta) ** 2))
    score = adjusted_r2(rss, 0)

    remaining = list(candidates)
    while remaining and rss > 1e-18 and len(selected) + 1 < n + 1:
        best = None
        for term in remaining:
            Xt = np.column_stack([X, columns[term]])
            bt, *_ = np.linalg.lstsq(Xt, y, rcond=None)
            rss_t = float(np.sum((y - Xt @ bt) ** 2))
            if best is None or rss_t < best[1] - 1e-15:
                best = (term, rss_t)
        term, rss_t = best
        new_score = adjusted_r2(rss_t, len(selected) + 1)
        if new_score - score < min_gain:
            break
        selected.append(term)
        X = np.column_stack([X, columns[term]])
        rss = rss_t
        score = new_score

    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    residuals = list(y - X @ beta)
    coefficients = {BASE_TERM: float(beta[0])}
    for term, b in zip(selected, beta[1:]):
        if abs(b) >= PRUNE_EPS:
            coefficients[term] = float(b)
    return PerformanceInfluenceModel(
        base_config=dict(base), coefficients=coefficients,
        granularity=granularity, function=function,
        approximate=True, residuals=residuals)


# --- local models ------------------------------------------------------------


def fit_local_models(records: list, base: dict, max_degree: int) -> dict:
    """One model per function, fitted on that function's SELF time.

    Self time (not total) makes the per-term local coefficients sum to the
    global coefficient exactly under the abstract cost model. Functions
    absent from a run contribute zero for that run. Uses Möbius inversion
    when the campaign is a full factorial, stepwise regression otherwise.
    """
    functions = sorted({fn for r in records for fn in r.method_times})
    models = {}
    for fn in functions:
        measurements = []
        for r in records:
            self_units, _total = r.method_times.get(fn, (0, 0))
            measurements.append((r.config, to_seconds(self_units)))
        try:
            models[fn] = fit_exact(measurements, base, max_degree,
                                   granularity="local", function=fn)
        except (IncompleteFactorial, DuplicateConfig):
            models[fn] = fit_sampled(measurements, base, max_degree,
                                     granularity="local", function=fn)
    return models


# --- evaluation and reports ---------------------------------------------------


def predict(model: PerformanceInfluenceModel, config: dict) -> float:
    if set(config) != set(model.base_config):
        raise UnknownOption(
            f"config options {sorted(config)} do not match model options "
            f"{sorted(model.base_config)}")
    # exact summation: exact (rational) coefficients stay exact, floats are
    # promoted losslessly
    total = Fraction(0)
    for term in model.terms():
        if term.matches(config):
            total += Fraction(model.coefficients[term])
    return float(total)


def rebase(model: PerformanceInfluenceModel, options: list, new_base: dict,
           limit: int = 1 << 20) -> PerformanceInfluenceModel:
    """Re-express the model relative to another base configuration.

    Predictions are invariant; only the coefficients change.
    """
    configs = enumerate_configs(options, limit)
    measurements = [(c, predict(model, c)) for c in configs]
    return fit_exact(measurements, new_base, max_degree=len(options),
                     granularity=model.granularity, function=model.function)


@dataclass
class InfluencingOptionsReport:
    from_config: dict
    to_config: dict
    changed: list  # (option, from_value, to_value), option-name order
    influences: list  # (frozenset of option names, delta seconds), |delta| desc
    unexplained_changes: list  # option names, sorted

    @property
    def total_delta(self) -> float:
        return sum(d for _opts, d in self.influences)

    def to_obj(self) -> dict:
        return {
            "schema_version": 1,
            "from_config": {k: self.from_config[k]
                            for k in sorted(self.from_config)},
            "to_config": {k: self.to_config[k] for k in sorted(self.to_config)},
            "changed": [
                {"option": o, "from": f, "to": t} for o, f, t in self.changed
            ],
            "influences": [
                {"options": sorted(opts), "delta": delta}
                for opts, delta in self.influences
            ],
            "unexplained_changes": list(self.unexplained_changes),
        }


def diff_influence(model: PerformanceInfluenceModel, from_config: dict,
                   to_config: dict) -> InfluencingOptionsReport:
    """Attribute the predicted performance delta to influencing options.

    A term contributes when its truth value differs between the two
    configurations; contributions are grouped by the term's changed
    options. Changed options affecting no term are reported as having no
    performance influence.
    """
    for config in (from_config, to_config):
        if set(config) != set(model.base_config):
            raise UnknownOption("configuration does not match model options")
    changed = [(name, from_config[name], to_config[name])
               for name in sorted(from_config)
               if from_config[name] != to_config[name]]
    changed_set = {name for name, _f, _t in changed}

    groups = {}
    for term in model.terms():
        if term is BASE_TERM or not term.factors:
            continue
        was = term.matches(from_config)
        now = term.matches(to_config)
        if was == now:
            continue
        delta = model.coefficients[term] * (1.0 if now else -1.0)
        key = frozenset(term.options & changed_set)
        groups[key] = groups.get(key, 0.0) + delta

    influences = sorted(groups.items(),
                        key=lambda kv: (-abs(kv[1]), tuple(sorted(kv[0]))))
    covered = set().union(*groups.keys()) if groups else set()
    unexplained = sorted(changed_set - covered)
    return InfluencingOptionsReport(
        from_config=dict(from_config), to_config=dict(to_config),
        changed=changed, influences=influences,
        unexplained_changes=unexplained)


@dataclass
class OptionHotspotsReport:
    from_config: dict
    to_config: dict
    min_delta: float
    entries: list  # (function, delta seconds, [(term, delta), ...]) |delta| desc
    omitted_delta: float = 0.0  # mass below min_delta, kept for conservation

    @property
    def total_delta(self) -> float:
        return sum(d for _fn, d, _terms in self.entries) + self.omitted_delta

    def functions(self):
        return [fn for fn, _d, _t in self.entries]

    def to_obj(self) -> dict:
        return {
            "schema_version": 1,
            "from_config": {k: self.from_config[k]
                            for k in sorted(self.from_config)},
            "to_config": {k: self.to_config[k] for k in sorted(self.to_config)},
            "min_delta": self.min_delta,
            "entries": [
                {
                    "function": fn,
                    "delta": delta,
                    "terms": [
                        {"factors": [[opt, val]
                                     for opt, val in sorted(term.factors)],
                         "delta": term_delta}
                        for term, term_delta in terms
                    ],
                }
                for fn, delta, terms in self.entries
            ],
            "omitted_delta": self.omitted_delta,
        }


def option_hotspots(local_models: dict, from_config: dict, to_config: dict,
                    min_delta: float = 0.0) -> OptionHotspotsReport:
    """Per-function performance deltas between two configurations."""
    bases = {tuple(sorted((k, _value_key(v)) for k, v in m.base_config.items()))
             for m in local_models.values()}
    if len(bases) > 1:
        raise InconsistentModels("local models disagree on base configuration")
    option_spaces = {frozenset(m.base_config) for m in local_models.values()}
    if len(option_spaces) > 1:
        raise InconsistentModels("local models disagree on option space")

    entries = []
    omitted = 0.0
    for fn in sorted(local_models):
        model = local_models[fn]
        contributing = []
        delta = 0.0
        for term in model.terms():
            if not term.factors:
                continue
            was = term.matches(from_config)
            now = term.matches(to_config)
            if was == now:
                continue
            term_delta = model.coefficients[term] * (1.0 if now else -1.0)
            contributing.append((term, term_delta))
            delta += term_delta
        if not contributing:
            continue
        if abs(delta) < min_delta:
            omitted += delta
            continue
        contributing.sort(key=lambda td: (-abs(td[1]), td[0].sort_key()))
        entries.append((fn, delta, contributing))
    entries.sort(key=lambda e: (-abs(e[1]), e[0]))
    return OptionHotspotsReport(
        from_config=dict(from_config), to_config=dict(to_config),
        min_delta=min_delta, entries=entries, omitted_delta=omitted)
