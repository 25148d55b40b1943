import json

from relsplit.cli import main

DY_SCHEME = {"d": [0.5, 0.5], "M": [[1.0], [-1.0]], "N": [[0.0, 0.0], [1.0, 0.0]],
             "P": [[0.0], [1.0]], "R": [[1.0, 0.0]]}


def write_json(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def run_config(tmp_path, **overrides):
    doc = {
        "graph": {"kind": "sequential", "n": 2},
        "problem": {"kind": "lasso", "q": 10, "d": 15, "seed": 3, "lam": 0.01, "u": 5.0},
        "relocator": "davis-yin",
        "schedule": {"variant": "safeguard", "t_rule": "norm-ratio"},
        "run": {"max_iters": 200, "fix_res_tol": 1e-9, "record_every": 10,
                "z0": {"kind": "normal", "seed": 0}},
    }
    doc.update(overrides)
    return write_json(tmp_path / "cfg.json", doc)


def test_validate_pass(tmp_path, capsys):
    cfg = write_json(tmp_path / "s.json", {"scheme": DY_SCHEME})
    assert main(["validate", cfg]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 6 and "FAIL" not in out


def test_validate_fail_names_condition(tmp_path, capsys):
    bad = dict(DY_SCHEME, R=[[0.0, 1.0]])
    cfg = write_json(tmp_path / "s.json", {"scheme": bad})
    assert main(["validate", cfg]) == 1
    out = capsys.readouterr().out
    assert "(f) FAIL" in out


def test_validate_missing_file():
    assert main(["validate", "/nonexistent/cfg.json"]) == 2


def test_validate_graph_config(tmp_path, capsys):
    cfg = write_json(tmp_path / "g.json", {"graph": {"kind": "inward-star", "n": 4}})
    assert main(["validate", cfg]) == 0
    assert capsys.readouterr().out.count("PASS") == 6


def test_run_writes_csv_deterministically(tmp_path, capsys):
    cfg = run_config(tmp_path)
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    assert main(["run", cfg, "--out", str(out1)]) == 0
    assert main(["run", cfg, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    lines = out1.read_text().splitlines()
    assert lines[0] == "k,gamma,theta,lambda,fix_res,consensus,objective,rel_err_x,rel_err_f,sweeps"
    assert len(lines) > 2


def test_run_stops_on_tolerance(tmp_path):
    cfg = run_config(tmp_path, run={"max_iters": 100000, "fix_res_tol": 1e-8,
                                    "record_every": 1, "z0": {"kind": "zero"}})
    out = tmp_path / "c.csv"
    assert main(["run", cfg, "--out", str(out)]) == 0
    rows = out.read_text().splitlines()[1:]
    assert len(rows) < 100000
    assert float(rows[-1].split(",")[4]) <= 1e-8


def test_run_abort_exit_code(tmp_path):
    cfg = run_config(tmp_path, relaxation={"lam": 1.5, "theta": 1.0})
    out = tmp_path / "d.csv"
    assert main(["run", cfg, "--out", str(out)]) == 1
    assert out.exists()


def test_run_bad_config(tmp_path):
    cfg = write_json(tmp_path / "bad.json", {"problem": {"kind": "lasso", "q": 4, "d": 4}})
    assert main(["run", cfg]) == 2


def test_bench(tmp_path, capsys, monkeypatch):
    spec = {
        "graph": {"kind": "sequential", "n": 2},
        "problem": {"kind": "lasso", "q": 8, "d": 10, "seed": 5, "lam": 0.02, "u": 5.0},
        "relocator": "davis-yin",
        "budget": 300,
        "record_every": 5,
        "out_dir": str(tmp_path / "bench"),
        "z0": {"kind": "normal", "seed": 1},
        "methods": [
            {"name": "const", "schedule": {"variant": "constant"}},
            {"name": "fpr-harmonic", "schedule": {"variant": "safeguard", "t_rule": "harmonic"}},
        ],
    }
    cfg = write_json(tmp_path / "spec.json", spec)
    monkeypatch.setenv("REL_SPLIT_THREADS", "2")
    assert main(["bench", cfg]) == 0
    out_dir = tmp_path / "bench"
    assert (out_dir / "const.csv").exists()
    assert (out_dir / "fpr-harmonic.csv").exists()
    summary = (out_dir / "summary.csv").read_text().splitlines()
    assert summary[0].startswith("method,converged,aborted")
    assert len(summary) == 3


def test_bench_default_grid(tmp_path):
    spec = {
        "graph": {"kind": "sequential", "n": 2},
        "problem": {"kind": "lasso", "q": 6, "d": 8, "seed": 6, "lam": 0.05, "u": 5.0},
        "relocator": "davis-yin",
        "budget": 3000,
        "out_dir": str(tmp_path / "bench2"),
    }
    cfg = write_json(tmp_path / "spec2.json", spec)
    assert main(["bench", cfg]) == 0
    names = {p.name for p in (tmp_path / "bench2").glob("*.csv")}
    assert names == {"const-0.1L.csv", "const-1L.csv", "const-1.99L.csv",
                     "fpr-norm-ratio.csv", "fpr-accel.csv", "fpr-harmonic.csv",
                     "summary.csv"}
    # monotonicity sanity: every converged method ends below rel_err_f = 1
    converged = 0
    for row in (tmp_path / "bench2" / "summary.csv").read_text().splitlines()[1:]:
        cells = row.split(",")
        if cells[1] == "True":
            converged += 1
            assert float(cells[6]) < 1.0, row
    assert converged >= 1


def test_bench_across_topologies(tmp_path):
    spec = {
        "graphs": [{"kind": k, "n": 3} for k in
                   ("inward-star", "outward-star", "sequential")],
        "problem": {"kind": "elastic-net", "q": 10, "d": 8, "seed": 2, "n_corr": 1},
        "relocator": "auto",
        "budget": 400,
        "out_dir": str(tmp_path / "bench4"),
        "methods": [
            {"name": "fpr-nr", "schedule": {"variant": "safeguard", "t_rule": "norm-ratio"}},
            {"name": "fpr-har", "schedule": {"variant": "safeguard", "t_rule": "harmonic"}},
        ],
    }
    cfg = write_json(tmp_path / "spec4.json", spec)
    assert main(["bench", cfg]) == 0
    names = {p.name for p in (tmp_path / "bench4").glob("*.csv")}
    expect = {f"{k}-{m}.csv" for k in ("inward-star", "outward-star", "sequential")
              for m in ("fpr-nr", "fpr-har")} | {"summary.csv"}
    assert names == expect
    rows = (tmp_path / "bench4" / "summary.csv").read_text().splitlines()[1:]
    assert len(rows) == 6
    assert all(r.split(",")[2] == "" for r in rows)  # none aborted


def test_bench_records_per_method_aborts(tmp_path):
    # inward-star n=3 has mu > beta: the 1/beta and 1.99/beta constants lie
    # outside (0, 2/mu) and must be recorded as aborted while others proceed
    spec = {
        "graph": {"kind": "inward-star", "n": 3},
        "problem": {"kind": "elastic-net", "q": 10, "d": 8, "seed": 2, "n_corr": 1},
        "relocator": "inward-star",
        "budget": 400,
        "out_dir": str(tmp_path / "bench3"),
    }
    cfg = write_json(tmp_path / "spec3.json", spec)
    assert main(["bench", cfg]) == 0
    rows = (tmp_path / "bench3" / "summary.csv").read_text().splitlines()[1:]
    by_name = {r.split(",")[0]: r for r in rows}
    assert len(by_name) == 5  # no accel rule for n > 2
    assert by_name["const-1L"].split(",")[2] != ""
    assert by_name["const-1.99L"].split(",")[2] != ""
    assert by_name["fpr-norm-ratio"].split(",")[2] == ""


def test_proptest(capsys):
    assert main(["proptest", "resolvent-identity", "--trials", "200", "--seed", "1"]) == 0
    assert "PASS" in capsys.readouterr().out
    assert main(["proptest", "unknown-suite"]) == 2


def test_proptest_pinv_and_scheme_suites(capsys):
    assert main(["proptest", "pinv-closed-forms"]) == 0
    assert main(["proptest", "scheme-validity"]) == 0
