"""Command-line surface: headers, values, exit codes."""

import csv
import math

import numpy as np
import pytest

from rankbound.cli import main
from rankbound.distributions import parse_dist, sample_iid
from rankbound.empirical import deviation_report
from rankbound.harness import SUMMARY_COLUMNS
from rankbound.measures import parse_mu


def _run(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out.splitlines(), out.err


# -- stats ---------------------------------------------------------------------


def test_stats_line_matches_library(capsys):
    rc, lines, err = _run(
        capsys, ["stats", "--dist", "uniform:0,1", "--n", "200", "--seed", "5"]
    )
    assert rc == 0 and err == ""
    assert lines[0] == "n,seed,sup_norm,l1_norm,cvm,dkw_bound,cvm_threshold"
    cells = lines[1].split(",")
    assert cells[0] == "200" and cells[1] == "5"
    model = parse_dist("uniform:0,1")
    rep = deviation_report(model, sample_iid(model, 200, 5), parse_mu("lebesgue"), grid=512)
    # 17 significant digits round-trip float64 exactly
    assert float(cells[2]) == rep.sup_norm
    assert float(cells[3]) == rep.l1_norm
    assert float(cells[4]) == rep.cvm
    assert float(cells[5]) == rep.dkw_bound
    assert float(cells[6]) == rep.cvm_threshold


# -- approx --------------------------------------------------------------------


def test_approx_closed_form(capsys):
    rc, lines, _ = _run(
        capsys, ["approx", "--dist", "uniform:0,1", "--k", "4", "--method", "closed"]
    )
    assert rc == 0
    assert lines[0] == "class,k,method,grid,error,bound_1_over_4K,adversarial_bound"
    cells = lines[1].split(",")
    assert cells[:4] == ["p0", "4", "closed", "0"]
    assert float(cells[4]) == 0.0625
    assert float(cells[5]) == 0.0625
    assert float(cells[6]) == pytest.approx(1.0 / 192.0)


def test_approx_adversarial_cell_blank_below_two(capsys):
    rc, lines, _ = _run(
        capsys, ["approx", "--dist", "uniform:0,1", "--k", "1", "--method", "closed"]
    )
    assert rc == 0
    assert lines[1].endswith(",")
    assert lines[1].split(",")[6] == ""


def test_approx_dp_near_closed_form(capsys):
    rc, lines, _ = _run(
        capsys,
        [
            "approx", "--dist", "staircase:1", "--mu", "matched",
            "--k", "2", "--method", "dp", "--grid", "400",
        ],
    )
    assert rc == 0
    cells = lines[1].split(",")
    assert cells[2] == "dp" and cells[3] == "400"
    assert float(cells[4]) == pytest.approx(0.125, abs=2e-3)


def test_approx_interp_exact_on_uniform(capsys):
    rc, lines, _ = _run(
        capsys, ["approx", "--dist", "uniform:0,1", "--k", "5", "--method", "interp"]
    )
    assert rc == 0
    cells = lines[1].split(",")
    assert cells[0] == "p1" and cells[2] == "interp" and cells[3] == "4096"
    assert float(cells[4]) == pytest.approx(0.0, abs=1e-12)


def test_approx_lloyd_matches_closed_form_when_matched(capsys):
    rc, lines, _ = _run(
        capsys,
        ["approx", "--dist", "uniform:0,1", "--mu", "matched", "--k", "8", "--method", "lloyd"],
    )
    assert rc == 0
    assert float(lines[1].split(",")[4]) == pytest.approx(1.0 / 32.0, rel=1e-3)


# -- query ---------------------------------------------------------------------

QUERY_ARGV = [
    "query", "--dist", "uniform:0,1", "--n", "500", "--seed", "3",
    "--k", "4", "--queries", "25", "--qseed", "9",
]


def test_query_rows_are_correct_ranks(capsys):
    rc, lines, _ = _run(capsys, QUERY_ARGV)
    assert rc == 0
    assert lines[0] == "q,rank,epsilon,routing_steps,search_steps"
    assert len(lines) == 1 + 25
    keys = sample_iid(parse_dist("uniform:0,1"), 500, 3).keys
    for line in lines[1:]:
        q, rank, eps, routing, steps = line.split(",")
        assert int(rank) == int(np.searchsorted(keys, float(q), side="right"))
        assert float(eps) >= 0.0
        assert 0 <= int(routing) <= math.ceil(math.log2(4))
        assert int(steps) >= 1


def test_query_is_deterministic(capsys):
    _, first, _ = _run(capsys, QUERY_ARGV)
    _, second, _ = _run(capsys, QUERY_ARGV)
    assert first == second


# -- bound ---------------------------------------------------------------------


def test_bound_row_defaults_r(capsys):
    rc, lines, _ = _run(capsys, ["bound", "--row", "l2", "--n", "100000", "--k", "16"])
    assert rc == 0
    assert lines[0] == "row,n,k,r,bound_value,vacuous,threshold_r,table_form"
    cells = lines[1].split(",")
    assert cells[:3] == ["l2", "100000", "16"]
    assert float(cells[3]) == 0.25 / 16
    assert float(cells[4]) == pytest.approx(1562.091751709536, abs=1e-9)
    assert cells[5] == "0"
    assert float(cells[6]) == pytest.approx(1.0 / (math.sqrt(6.0) * 1e5), rel=1e-12)
    assert cells[7] == ""


def test_bound_constant_row_reports_both_forms(capsys):
    rc, lines, _ = _run(
        capsys,
        ["bound", "--row", "e1", "--n", "100000", "--k", "16", "--cf", "1", "--cff", "1"],
    )
    assert rc == 0
    cells = lines[1].split(",")
    assert cells[5] == "1"  # negative bound at these constants: vacuous
    assert float(cells[4]) < 0.0
    assert cells[7] != ""
    float(cells[7])  # table form present and parseable


def test_bound_constant_row_requires_pinch(capsys):
    rc, _, err = _run(capsys, ["bound", "--row", "e1", "--n", "1000", "--k", "4"])
    assert rc == 2
    assert err.startswith("error:")


# -- experiment / verify -------------------------------------------------------


def test_experiment_stdout_summary(capsys):
    rc, lines, _ = _run(
        capsys,
        [
            "experiment", "--dist", "uniform:0,1", "--mu", "matched",
            "--n-list", "400", "--k-list", "4",
            "--trials", "2", "--queries-per-trial", "50",
        ],
    )
    assert rc == 0
    assert lines[0] == ",".join(SUMMARY_COLUMNS)
    rows = [next(csv.reader([line])) for line in lines[1:]]
    assert [r[10] for r in rows] == ["l1", "l2"]
    for r in rows:
        assert len(r) == len(SUMMARY_COLUMNS)
        assert r[0] == "uniform:0,1"
        assert r[-1] == "ok"


def test_experiment_config_file_with_override(capsys, tmp_path):
    p = tmp_path / "sweep.cfg"
    p.write_text(
        "dist = uniform:0,1\nmu = matched\nn_list = 300\nk_list = 4\n"
        "trials = 2\nqueries_per_trial = 40\n"
    )
    rc, lines, _ = _run(capsys, ["experiment", "--config", str(p), "--trials", "3"])
    assert rc == 0
    for line in lines[1:]:
        assert next(csv.reader([line]))[7] == "3"  # override beat the file


def test_verify_exit_zero_on_clean_run(capsys):
    rc, lines, _ = _run(
        capsys,
        [
            "verify", "--dist", "uniform:0,1", "--mu", "matched",
            "--n-list", "20000", "--k-list", "16",
            "--trials", "3", "--queries-per-trial", "500",
        ],
    )
    assert rc == 0
    for line in lines[1:]:
        assert next(csv.reader([line]))[-2] == "1"  # satisfied


def test_verify_exit_nonzero_on_errored_cell(capsys):
    rc, lines, _ = _run(
        capsys,
        [
            "verify", "--dist", "uniform:0,1", "--mu", "matched",
            "--n-list", "400,10000", "--k-list", "4", "--fit", "dp",
            "--grid", "500", "--trials", "2", "--queries-per-trial", "40",
        ],
    )
    assert rc == 1
    assert any(line.endswith("error:DomainError") for line in lines[1:])


# -- failure surface -----------------------------------------------------------


def test_domain_errors_exit_two(capsys):
    rc, _, err = _run(capsys, ["stats", "--dist", "uniform:5,1", "--n", "10", "--seed", "1"])
    assert rc == 2
    assert err.startswith("error:")
