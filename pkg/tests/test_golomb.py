import pytest

from app.models.errors import ParameterError
from app.services.analysis.golomb import autocorrelation, cyclic_runs, golomb_tests
from app.services.analysis.linear_complexity import characteristic_to_connection, lfsr_sequence


def m_sequence(poly: int):
    degree = poly.bit_length() - 1
    period = (1 << degree) - 1
    return lfsr_sequence(characteristic_to_connection(poly), [1] + [0] * (degree - 1), period)


@pytest.mark.parametrize("poly", [0x25, 0x11D, 0x16801])
def test_m_sequences_pass(poly):
    report = golomb_tests(m_sequence(poly))
    assert report.balanced
    assert report.ones == report.zeros + 1
    assert report.span_ok
    assert report.run_distribution
    assert report.two_level
    assert report.passed


def test_degree5_details():
    report = golomb_tests(m_sequence(0x25))
    assert report.period == 31
    assert report.span_n == 5
    assert sum(report.runs.values()) == 16
    assert report.runs[(0, 1)] == report.runs[(1, 1)] == 4
    assert report.to_dict()["autocorrelation"]["out_of_phase_counts"] == [-1]
    assert report.runs_frame()["count"].sum() == 16


def test_unbalanced_sequence_fails():
    report = golomb_tests([1, 1, 1, 1, 1, 1, 0])
    assert not report.balanced
    assert not report.passed


def test_period_argument():
    seq = m_sequence(0x25)
    assert golomb_tests(seq + seq, period=31).passed
    with pytest.raises(ParameterError):
        golomb_tests(seq, period=32)
    with pytest.raises(ParameterError):
        golomb_tests(seq, period=0)


def test_cyclic_runs_joins_wraparound():
    assert cyclic_runs([1, 0, 0, 1]) == {(1, 2): 1, (0, 2): 1}
    assert cyclic_runs([1, 1, 1]) == {(1, 3): 1}
    assert cyclic_runs([]) == {}


def test_autocorrelation_peak():
    corr = autocorrelation([0, 0, 1, 0, 1, 1, 1])
    assert corr[0] == pytest.approx(1.0)
    assert corr[1:] == pytest.approx([-1 / 7] * 6)
