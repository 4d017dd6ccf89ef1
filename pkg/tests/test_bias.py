import pytest

from app.models.errors import ParameterError
from app.services.analysis.bias import (DEFAULT_CHUNK, carry_bias, carry_formula, carry_table, chunk_sizes,
                                        fsm_bias_mc, run_chunked, two_round_experiment)


def test_carry_formula():
    assert carry_formula(0) == 1.0
    assert carry_formula(1) == 0.75
    assert carry_formula(31) == pytest.approx(0.5)


@pytest.mark.parametrize("i", [0, 1, 2, 5])
def test_carry_into_bit_matches_formula(i):
    result = carry_bias(i, 200_000, seed=17)
    assert result.passed
    assert result.into.within(2 * carry_formula(i) - 1, 4)
    assert "into" in result.matching


@pytest.mark.slow
@pytest.mark.parametrize("i", range(1, 9))
def test_carry_conventions_against_exact_values(i):
    result = carry_bias(i, 10 ** 6, seed=1000 + i)
    assert result.into.within(2 * carry_formula(i) - 1, 4)
    assert result.out_of.within(2 * carry_formula(i + 1) - 1, 4)
    assert result.passed


def test_carry_out_is_the_next_bit():
    result = carry_bias(1, 200_000, seed=3)
    assert result.out_of.within(2 * carry_formula(2) - 1, 4)
    assert "out" not in result.matching


@pytest.mark.parametrize("workers", [2, 3, 8])
def test_same_estimate_for_any_worker_count(workers):
    samples = 3 * DEFAULT_CHUNK + 5
    one = carry_bias(3, samples, seed=2024, workers=1)
    many = carry_bias(3, samples, seed=2024, workers=workers)
    assert one.into.estimate == many.into.estimate
    assert one.out_of.estimate == many.out_of.estimate
    other = carry_bias(3, samples, seed=2025)
    assert other.into.estimate != one.into.estimate


@pytest.mark.parametrize("workers", [2, 8])
def test_relation_estimate_independent_of_workers(workers):
    samples = 2 * DEFAULT_CHUNK + 17
    one = fsm_bias_mc("snow1-two-round", samples, seed=99, workers=1)
    many = fsm_bias_mc("snow1-two-round", samples, seed=99, workers=workers)
    assert one.to_dict() == many.to_dict()


def test_chunking():
    assert chunk_sizes(2 * DEFAULT_CHUNK + 3) == [DEFAULT_CHUNK, DEFAULT_CHUNK, 3]
    assert chunk_sizes(10, 4) == [4, 4, 2]
    assert run_chunked(lambda rng, n: n, 10, seed=1, chunk_size=4) == 10
    with pytest.raises(ParameterError):
        run_chunked(lambda rng, n: n, 0, seed=1)
    with pytest.raises(ParameterError):
        run_chunked(lambda rng, n: n, 10, seed=1, workers=0)


def test_carry_arguments():
    with pytest.raises(ParameterError):
        carry_bias(32, 100, 1)
    with pytest.raises(ParameterError):
        carry_bias(1, 0, 1)


def test_carry_table():
    frame = carry_table([carry_bias(i, 10_000, seed=5) for i in range(3)])
    assert frame["i"].tolist() == [0, 1, 2]
    assert frame["expected"].tolist() == [1.0, 0.75, 0.625]


def test_fair_coin_is_unbiased():
    report = fsm_bias_mc("fair-coin", 200_000, seed=8)
    assert report.within(0.0, 4)
    assert report.relation_id == "fair-coin"


def test_fair_coin_calibration():
    reports = [fsm_bias_mc("fair-coin", 20_000, seed=seed) for seed in range(100)]
    inside = sum(r.within(0.0, 4) for r in reports)
    assert inside >= 99
    assert len({r.estimate for r in reports}) > 1


def test_single_output_bit_is_unbiased():
    report = fsm_bias_mc([("fm1", 7)], 100_000, seed=8, workers=2)
    assert report.within(0.0, 4)
    assert report.relation_id == "lsb:fm1[7]"


def test_relation_arguments():
    with pytest.raises(ParameterError):
        fsm_bias_mc([("st2", 0)], 100, 1)
    with pytest.raises(ParameterError):
        fsm_bias_mc([("st0", 32)], 100, 1)
    with pytest.raises(ParameterError):
        fsm_bias_mc("snow1-two-round", 100, 1, order="middle")


@pytest.mark.slow
def test_two_round_experiment_structure():
    experiment = two_round_experiment(1 << 18, seed=11, search_samples=1 << 14)
    assert set(experiment.reports) == {"lsb", "msb"}
    for order, report in experiment.reports.items():
        assert report.relation_id.startswith(order + ":")
        assert report.samples == 1 << 18
    if experiment.discrepancy:
        assert experiment.best is not None
        assert experiment.best.samples == 1 << 14
    else:
        assert experiment.best is None
    data = experiment.to_dict()
    assert set(data) == {"orders", "significant", "best_neighbour", "discrepancy"}
    assert len(experiment.table()) == 2 + (experiment.best is not None)


@pytest.mark.slow
def test_two_round_relation_is_significant():
    experiment = two_round_experiment(1 << 24, seed=7, workers=2)
    assert "lsb" in experiment.significant
    lsb = experiment.reports["lsb"]
    assert abs(lsb.estimate / lsb.std_error) > 5
    assert not experiment.discrepancy
    assert experiment.best is None
