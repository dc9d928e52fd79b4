import itertools

import pytest

from confdebug.errors import (
    DegenerateDesign, DuplicateConfig, IncompleteFactorial, SpaceTooLarge,
    UnknownOption,
)
from confdebug.interp import execute, measure_campaign
from confdebug.lang import OptionDecl, parse_program
from confdebug.models import (
    BASE_TERM, Term, diff_influence, enumerate_configs, fit_exact,
    fit_local_models, fit_sampled, option_hotspots, predict, rebase,
    sample_configs, PerformanceInfluenceModel,
)

from conftest import berkeley_config

DT = Term(frozenset({("Duplicates", True), ("Transactions", True)}))
EVICT = Term(frozenset({("Evict", True)}))
TEMP = Term(frozenset({("Temporary", True)}))


def bool_options(*names):
    return [OptionDecl(n, (False, True), False) for n in names]


# --- enumerate_configs -------------------------------------------------------


def test_enumerate_three_booleans():
    opts = bool_options("A", "B", "C")
    configs = enumerate_configs(opts, 100)
    assert len(configs) == 8
    assert configs[0] == {"A": False, "B": False, "C": False}
    assert len({tuple(sorted(c.items())) for c in configs}) == 8


def test_enumerate_mixed_domains():
    opts = bool_options("A", "B") + [OptionDecl("M", ("x", "y", "z"), "y")]
    configs = enumerate_configs(opts, 100)
    assert len(configs) == 12
    assert configs[0] == {"A": False, "B": False, "M": "y"}


def test_enumerate_space_too_large():
    opts = bool_options("A", "B") + [OptionDecl("M", ("x", "y", "z"), "y")]
    with pytest.raises(SpaceTooLarge) as err:
        enumerate_configs(opts, 8)
    assert err.value.actual == 12
    assert err.value.limit == 8


def test_sample_configs_deterministic():
    opts = bool_options("A", "B", "C", "D")
    s1 = sample_configs(opts, 8, seed=1)
    s2 = sample_configs(opts, 8, seed=1)
    assert s1 == s2
    assert len(s1) == 8
    assert len({tuple(sorted(c.items())) for c in s1}) == 8


# --- fit_exact ---------------------------------------------------------------


def two_option_measurements():
    base = {"Duplicates": False, "Transactions": False}
    return [
        ({"Duplicates": False, "Transactions": False}, 4.6),
        ({"Duplicates": True, "Transactions": False}, 4.6),
        ({"Duplicates": False, "Transactions": True}, 4.6),
        ({"Duplicates": True, "Transactions": True}, 59.3),
    ], base


def test_fit_exact_two_option_interaction():
    measurements, base = two_option_measurements()
    model = fit_exact(measurements, base, max_degree=2)
    # hand Möbius inversion: beta_DT = y(TT) - y(TF) - y(FT) + y(FF)
    assert model.coefficients[BASE_TERM] == pytest.approx(4.6, abs=1e-12)
    assert model.coefficients[DT] == pytest.approx(54.7, abs=1e-12)
    assert set(model.coefficients) == {BASE_TERM, DT}
    assert not model.approximate


def test_fit_exact_constant_measurements():
    configs = [
        {"A": a, "B": b} for a in (False, True) for b in (False, True)
    ]
    model = fit_exact([(c, 7.25) for c in configs],
                      {"A": False, "B": False}, max_degree=2)
    assert model.coefficients == {BASE_TERM: 7.25}


def test_fit_exact_rejects_incomplete_and_duplicate():
    measurements, base = two_option_measurements()
    with pytest.raises(IncompleteFactorial) as err:
        fit_exact(measurements[:3], base, max_degree=2)
    assert err.value.missing == 1
    with pytest.raises(DuplicateConfig):
        fit_exact(measurements + [measurements[0]], base, max_degree=2)


def berkeley_campaign(berkeley):
    configs = enumerate_configs(berkeley.options, 64)
    records = measure_campaign(berkeley, configs)
    return configs, records


def test_berkeley_mini_full_model(berkeley):
    configs, records = berkeley_campaign(berkeley)
    measurements = [(r.config, r.total_seconds) for r in records]
    model = fit_exact(measurements, berkeley_config(), max_degree=3)
    assert model.coefficients[BASE_TERM] == pytest.approx(4.6, abs=1e-9)
    assert model.coefficients[DT] == pytest.approx(54.7, abs=1e-9)
    assert model.coefficients[EVICT] == pytest.approx(8.9, abs=1e-9)
    assert model.coefficients[TEMP] == pytest.approx(3.5, abs=1e-9)
    assert set(model.coefficients) == {BASE_TERM, DT, EVICT, TEMP}
    assert not model.approximate


# --- fit_sampled -------------------------------------------------------------


def test_sampled_matches_exact_on_berkeley(berkeley):
    _configs, records = berkeley_campaign(berkeley)
    measurements = [(r.config, r.total_seconds) for r in records]
    exact = fit_exact(measurements, berkeley_config(), max_degree=3)
    sampled = fit_sampled(measurements, berkeley_config(), max_degree=3)
    assert set(sampled.coefficients) == set(exact.coefficients)
    for term, coef in exact.coefficients.items():
        assert sampled.coefficients[term] == pytest.approx(coef, abs=1e-6)
    assert sampled.approximate
    assert max(abs(r) for r in sampled.residuals) < 1e-9


def test_sampled_single_option_coefficient():
    base = {"Temporary": False}
    measurements = [({"Temporary": False}, 4.6), ({"Temporary": True}, 8.1)]
    model = fit_sampled(measurements, base, max_degree=1)
    assert model.coefficients[BASE_TERM] == pytest.approx(4.6, abs=1e-9)
    temp = Term(frozenset({("Temporary", True)}))
    assert model.coefficients[temp] == pytest.approx(3.5, abs=1e-9)


def test_sampled_noiseless_linear_half_sample():
    # y = 2 + 1.5*A + 0.75*B over half of a 3-option factorial
    half = [
        {"A": a, "B": b, "C": c}
        for a, b, c in itertools.product((False, True), repeat=3)
        if (a, b, c) != (True, True, True) and (a or b or not c)
    ]
    measurements = [(c, 2.0 + 1.5 * c["A"] + 0.75 * c["B"]) for c in half]
    model = fit_sampled(measurements,
                        {"A": False, "B": False, "C": False}, max_degree=2)
    assert all(abs(r) < 1e-9 for r in model.residuals)
    for config, y in measurements:
        assert predict(model, config) == pytest.approx(y, abs=1e-9)


def test_sampled_degenerate_design():
    same = {"A": False}
    with pytest.raises(DegenerateDesign):
        fit_sampled([(same, 1.0), (dict(same), 1.0)], same, max_degree=1)


# --- predict -----------------------------------------------------------------


def reference_model():
    return PerformanceInfluenceModel(
        base_config=berkeley_config(),
        coefficients={BASE_TERM: 4.6, DT: 54.7, EVICT: 8.9, TEMP: 3.5},
    )


def test_predict_examples():
    model = reference_model()
    assert predict(model, berkeley_config()) == pytest.approx(4.6)
    assert predict(model, berkeley_config(dup=True, txn=True, evict=True)) \
        == pytest.approx(68.2)
    empty = PerformanceInfluenceModel(base_config=berkeley_config(),
                                      coefficients={BASE_TERM: 4.6})
    for evict in (False, True):
        assert predict(empty, berkeley_config(evict=evict)) == 4.6
    with pytest.raises(UnknownOption):
        predict(model, {"Nope": True})


# --- diff_influence ----------------------------------------------------------


def test_diff_known_scenario():
    model = reference_model()
    report = diff_influence(model, berkeley_config(),
                            berkeley_config(dup=True, txn=True, repl=True))
    assert [(o, f, t) for o, f, t in report.changed] == [
        ("Duplicates", False, True), ("Replicated", False, True),
        ("Transactions", False, True)]
    assert report.influences == [
        (frozenset({"Duplicates", "Transactions"}), pytest.approx(54.7))]
    assert report.unexplained_changes == ["Replicated"]


def test_diff_identity_is_empty():
    model = reference_model()
    report = diff_influence(model, berkeley_config(), berkeley_config())
    assert report.changed == []
    assert report.influences == []
    assert report.unexplained_changes == []


def test_diff_single_flip_does_not_activate_interaction():
    model = reference_model()
    report = diff_influence(model, berkeley_config(),
                            berkeley_config(dup=True))
    assert report.influences == []
    assert report.unexplained_changes == ["Duplicates"]


# --- local models and option hotspots ----------------------------------------


def test_berkeley_local_models(berkeley):
    _configs, records = berkeley_campaign(berkeley)
    local = fit_local_models(records, berkeley_config(), max_degree=3)
    cursor = local["cursor_put"]
    assert cursor.coefficients[DT] == pytest.approx(42.9, abs=1e-9)
    assert cursor.coefficients[BASE_TERM] == pytest.approx(0.9, abs=1e-9)
    # sum of local interaction coefficients equals the global one
    total = sum(m.coefficients.get(DT, 0.0) for m in local.values())
    assert total == pytest.approx(54.7, abs=1e-6)
    # a function never executed in any record simply has no model;
    # one executed with zero cost everywhere has an all-zero model
    setup = local["setup"]
    assert set(setup.coefficients) == {BASE_TERM}


def test_option_hotspots_berkeley(berkeley):
    _configs, records = berkeley_campaign(berkeley)
    local = fit_local_models(records, berkeley_config(), max_degree=3)
    report = option_hotspots(local, berkeley_config(),
                             berkeley_config(dup=True, txn=True))
    assert report.entries[0][0] == "cursor_put"
    assert report.entries[0][1] == pytest.approx(42.9, abs=1e-9)
    assert report.total_delta == pytest.approx(54.7, abs=1e-6)

    # min_delta larger than every delta -> no entries, mass in omitted_delta
    silent = option_hotspots(local, berkeley_config(),
                             berkeley_config(dup=True, txn=True),
                             min_delta=1000.0)
    assert silent.entries == []
    assert silent.omitted_delta == pytest.approx(54.7, abs=1e-6)


# --- property-style invariants -----------------------------------------------


def full_factorial_fit(seed, max_options=4):
    from confdebug.randgen import random_program_source
    src = random_program_source(seed, max_options=max_options)
    program = parse_program(src)
    configs = enumerate_configs(program.options, 1 << 12)
    records = measure_campaign(program, configs)
    measurements = [(r.config, r.total_seconds) for r in records]
    base = configs[0]
    model = fit_exact(measurements, base, max_degree=len(program.options))
    return program, configs, records, measurements, base, model


def test_exact_fit_completeness_on_random_programs():
    for seed in range(25):
        _p, _c, _r, measurements, _b, model = full_factorial_fit(seed)
        for config, y in measurements:
            assert predict(model, config) - y == 0.0, f"seed {seed}"


def test_attribution_conservation_quantified():
    import random
    rng = random.Random(99)
    checked = 0
    for seed in range(10):
        _p, configs, _r, _m, _b, model = full_factorial_fit(seed)
        for _ in range(40):
            a = rng.choice(configs)
            b = rng.choice(configs)
            report = diff_influence(model, a, b)
            lhs = sum(d for _o, d in report.influences)
            rhs = predict(model, b) - predict(model, a)
            assert abs(lhs - rhs) < 1e-9
            checked += 1
    assert checked == 400


def test_moebius_regression_agreement_on_random_programs():
    for seed in range(8):
        _p, _c, _r, measurements, base, exact = full_factorial_fit(
            seed, max_options=3)
        n_opts = len(base)
        sampled = fit_sampled(measurements, base, max_degree=n_opts,
                              min_gain=0.0)
        for config, _y in measurements:
            assert predict(sampled, config) == pytest.approx(
                predict(exact, config), abs=1e-6)


def test_local_sum_property_on_random_programs():
    for seed in range(12):
        program, configs, records, _m, base, global_model = \
            full_factorial_fit(seed)
        local = fit_local_models(records, base,
                                 max_degree=len(program.options))
        all_terms = set(global_model.coefficients)
        for m in local.values():
            all_terms |= set(m.coefficients)
        for term in all_terms:
            local_sum = sum(m.coefficients.get(term, 0.0)
                            for m in local.values())
            assert local_sum == pytest.approx(
                global_model.coefficients.get(term, 0.0), abs=1e-6), \
                f"seed {seed}, term {term.label()}"


def test_rebase_preserves_predictions(berkeley):
    _configs, records = berkeley_campaign(berkeley)
    measurements = [(r.config, r.total_seconds) for r in records]
    model = fit_exact(measurements, berkeley_config(), max_degree=5)
    new_base = berkeley_config(dup=True, txn=True, repl=True)
    rebased = rebase(model, berkeley.options, new_base)
    assert rebased.coefficients != model.coefficients
    assert rebased.base_coefficient == pytest.approx(
        predict(model, new_base), abs=1e-9)
    for config, y in measurements:
        assert predict(rebased, config) == pytest.approx(
            predict(model, config), abs=1e-9)


def test_model_serialization_roundtrip(berkeley):
    _configs, records = berkeley_campaign(berkeley)
    measurements = [(r.config, r.total_seconds) for r in records]
    model = fit_exact(measurements, berkeley_config(), max_degree=3)
    clone = PerformanceInfluenceModel.from_obj(model.to_obj())
    # exact rational coefficients serialize as floats
    assert clone.coefficients == {t: float(v)
                                  for t, v in model.coefficients.items()}
    assert clone.base_config == model.base_config
