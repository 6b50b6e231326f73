import json

import pytest

from quadisog.cli import main
from quadisog.figures import plot_isogeny_graph, plot_report
from quadisog.isogeny import isogeny_graph
from quadisog.pipeline import (
    BLOCKED,
    COMPLETE,
    MissingOracleData,
    SearchConfig,
    emit_report,
    parse_report,
    search_convenient,
    solve_field,
)


@pytest.fixture(scope="module")
def report():
    return solve_field(-6846)


def test_beyond_q(report):
    assert report.status == COMPLETE
    assert report.beyond_q_infinite == (15, 27, 32, 36)
    assert report.unrecorded == ()
    assert "GRH" in report.tags and "BSD" in report.tags


def test_structured_round_trip(report):
    doc = emit_report(report, "structured")
    assert json.loads(doc)["schema"] == "quadisog.report/1"
    back = parse_report(doc)
    assert back == report
    assert emit_report(back, "structured") == doc


def test_text_is_deterministic(report):
    assert emit_report(report) == emit_report(parse_report(emit_report(report, "structured")))
    assert emit_report(report).startswith("# cyclic isogenies over Q(sqrt -6846)\nstatus\tcomplete\n")


def test_blocked_field_reports_missing_levels():
    r = solve_field(5)
    assert r.status == BLOCKED
    assert any("289" in b for b in r.blockers)
    assert r.unrecorded is None


def test_bad_inputs():
    with pytest.raises(ValueError):
        solve_field(12)
    with pytest.raises(ValueError):
        SearchConfig(d_range=(5, 1))
    with pytest.raises(ValueError):
        emit_report(solve_field(5), "xml")


def test_search_without_growth_data_raises():
    with pytest.raises(MissingOracleData) as exc:
        search_convenient((-20, 20))
    assert ("J0+(163) growth", 2) in exc.value.pairs


def test_figures(report, tmp_path):
    p = plot_report(report, tmp_path / "r.png")
    assert p.stat().st_size > 1000
    g = isogeny_graph(-3375, 1, [2, 7])
    p = plot_isogeny_graph(g, tmp_path / "g.png")
    assert p.read_bytes()[:4] == b"\x89PNG"


def test_cli_mf(capsys):
    assert main(["--format", "structured", "mf", "213"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["B"] == [15, 20, 24, 27, 32, 36]
    assert main(["mf", "-5", "--s2-primes", "23"]) == 0
    assert "343" in capsys.readouterr().out


def test_cli_errors(capsys):
    assert main(["mf", "-7"]) == 2
    assert main(["mf", "9"]) == 2
    assert main(["search", "-30", "30"]) == 2
    assert "missing oracle data" in capsys.readouterr().err


def test_cli_verify_catalogue(capsys, tmp_path):
    assert main(["verify-catalogue"]) == 0
    assert "FAIL" not in capsys.readouterr().out
    bad = tmp_path / "bad.json"
    bad.write_text("{}")
    assert main(["--catalogue", str(bad), "verify-catalogue"]) == 1


def test_cli_graph_with_figure(capsys, tmp_path):
    assert main(["--format", "structured", "isogeny-graph", "-3375", "--primes", "2,7", "--figure-dir", str(tmp_path)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert 14 in doc["cyclic_degrees"]
    assert (tmp_path / "isogeny_graph.png").exists()


def test_cli_solve_blocked_with_figure(capsys, tmp_path):
    assert main(["solve", "5", "--figure-dir", str(tmp_path)]) == 1
    assert "status\tblocked" in capsys.readouterr().out
    assert (tmp_path / "table_5.png").exists()
