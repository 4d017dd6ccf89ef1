from app.data.db import database_path
from app.data.reports import delete_report, get_report, list_reports, load_report, save_report
from app.models.report import RunReport


def make_report(op="analyze.carry", passed=True, seed=5):
    return RunReport(op, {"i": [1]}, passed, seed=seed, samples=100, estimate=0.75, std_error=0.01)


def test_archive_follows_environment(tmp_path):
    assert database_path() == tmp_path / "reports.db"


def test_save_and_list():
    first = save_report(make_report())
    second = save_report(make_report("vectors", passed=False, seed=None))
    assert second > first
    rows = list_reports()
    assert [r["id"] for r in rows] == [second, first]
    assert [r["command"] for r in list_reports("vectors")] == ["vectors"]
    assert rows[0]["passed"] == 0
    assert rows[0]["seed"] is None


def test_load_round_trip():
    report = make_report()
    report_id = save_report(report)
    assert load_report(report_id).to_json() == report.to_json()
    assert get_report(report_id)["payload"] == report.to_json()


def test_full_width_seed_is_kept():
    seed = 2 ** 64 - 1
    report_id = save_report(make_report(seed=seed))
    assert get_report(report_id)["seed"] == str(seed)
    assert load_report(report_id).seed == seed


def test_delete():
    report_id = save_report(make_report())
    assert delete_report(report_id)
    assert not delete_report(report_id)
    assert get_report(report_id) is None
    assert load_report(report_id) is None


def test_explicit_path(tmp_path):
    path = tmp_path / "other" / "archive.db"
    report_id = save_report(make_report(), path)
    assert path.exists()
    assert [r["id"] for r in list_reports(path=path)] == [report_id]
    assert list_reports() == []
