"""Command-line interface: subcommands, exit codes, round trips, determinism."""

import json
from pathlib import Path


from saddlelift import cli
from saddlelift.catalog import make_catalog_form

PROBLEMS = Path(__file__).resolve().parent.parent / "problems"


def _write(tmp_path, doc, name="prob.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def _dc_problem():
    return {
        "problem": {
            "catalog": "dc",
            "params": {"d": "(tag convex (* 2 (sq x0)))", "c": "(sq x0)", "n": 1},
        },
        "solver": {"max_outer": 15},
        "start": [2.0, 0.0],
    }


def test_solve_dc(tmp_path, capsys):
    path = _write(tmp_path, _dc_problem())
    trace = str(tmp_path / "trace.csv")
    code = cli.main(["solve", path, "--trace", trace, "--seed", "1"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["status"] == "eps_feasible_converged"
    assert abs(out["f_ref"]) <= 1e-2
    lines = Path(trace).read_text().strip().splitlines()
    assert lines[0] == "k,rho,F,G,P,step_norm,f_ref"


def test_solve_shipped_problem_file(capsys):
    code = cli.main(["solve", str(PROBLEMS / "ex41.json")])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["status"] == "eps_feasible_converged"


def test_solve_flagship_file(capsys):
    code = cli.main(["solve", str(PROBLEMS / "p51_n5.json")])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["status"] == "eps_feasible_converged"
    assert abs(out["f_ref"]) <= 1e-2


def test_solve_exit_code_on_nonconverged(tmp_path, capsys):
    doc = _dc_problem()
    doc["solver"] = {"max_outer": 1, "eps": 1e-15}
    path = _write(tmp_path, doc)
    code = cli.main(["solve", path])
    capsys.readouterr()
    assert code == 2


def test_kkt_known_multipliers(capsys):
    code = cli.main(
        ["kkt", str(PROBLEMS / "ex41.json"), "--point", "0,0,0",
         "--alpha", "1,1,1", "--beta", "1,1,1"]
    )
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["stationarity_residual_xy"] == 0.0
    assert out["stationarity_residual_z"] == 0.0
    assert out["alpha"] == [1.0, 1.0, 1.0]


def test_kkt_infeasible_point(capsys):
    code = cli.main(["kkt", str(PROBLEMS / "ex41.json"), "--point", "1,1,0"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2
    assert "error" in out


def test_witness_command(capsys):
    code = cli.main(["witness", str(PROBLEMS / "ex41.json"), "--x", "4"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["y"] == [2.0] and out["z"] == [16.0]
    assert out["witness_gap"] == 0.0


def test_witness_failure_exit_code(tmp_path, capsys):
    doc = {"problem": {"catalog": "sigmoid"}}
    path = _write(tmp_path, doc)
    code = cli.main(["witness", path, "--x", "0.5"])
    out = json.loads(capsys.readouterr().out)
    assert code == 2 and "error" in out


def test_catalog_list_and_describe(capsys):
    assert cli.main(["catalog", "list"]) == 0
    text = capsys.readouterr().out
    assert "abs_power" in text and "maxabs_minus_sum" in text
    assert cli.main(["catalog", "describe", "abs_power"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["partition"] == [1, 1, 1]


def test_audit_command(tmp_path, capsys):
    path = _write(tmp_path, _dc_problem())
    code = cli.main(["audit", path, "--grid", "501", "--samples", "4", "--seed", "0"])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["classification"] == "d2-and-d3-verified"


def test_usage_errors_exit_one(tmp_path, capsys):
    assert cli.main(["solve", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert cli.main(["solve", str(bad)]) == 1
    err = capsys.readouterr().err
    assert "line" in err and "column" in err
    assert cli.main(["frobnicate"]) == 1
    capsys.readouterr()


def test_expression_parse_error_carries_position(tmp_path, capsys):
    doc = {
        "problem": {
            "inline": {
                "name": "broken",
                "partition": [1, 0, 0],
                "g": "(sq nope)",
            }
        }
    }
    path = _write(tmp_path, doc)
    assert cli.main(["solve", path]) == 1
    err = capsys.readouterr().err
    assert "nope" in err


def test_inline_round_trip():
    from saddlelift.catalog import default_suite

    for form in default_suite():
        doc = cli.form_to_inline(form)
        back = cli.inline_form(doc)
        assert back.partition == form.partition, form.name
        assert back.box == form.box, form.name
        assert back.g == form.g, form.name
        assert back.ineq == form.ineq, form.name
        assert back.eq == form.eq, form.name
        if form.window is not None:
            assert back.window == form.window, form.name


def test_inline_solve(tmp_path, capsys):
    # the quartic lift written out inline, no witness/reference
    doc = {
        "problem": {
            "inline": {
                "name": "inline41",
                "partition": [1, 1, 1],
                "lower": [None, 0.0, 0.0],
                "upper": [None, None, None],
                "g": "(+ y0 (pow y0 4) (neg z0) (sq x0) (neg z0))",
                "ineq": ["(+ (pow y0 4) (neg z0))", "(+ (sq x0) (neg z0))", "(neg y0)"],
            }
        },
        "solver": {"max_outer": 12},
        "start": [0.4, 0.4, 0.5],
    }
    path = _write(tmp_path, doc)
    code = cli.main(["solve", path])
    out = json.loads(capsys.readouterr().out)
    assert code == 0
    assert out["f_ref"] is None


def test_byte_identical_reruns(tmp_path, capsys):
    path = _write(tmp_path, _dc_problem())
    outs, traces = [], []
    for run in range(2):
        trace = str(tmp_path / f"t{run}.csv")
        code = cli.main(["solve", path, "--trace", trace, "--seed", "7"])
        assert code == 0
        outs.append(capsys.readouterr().out)
        traces.append(Path(trace).read_bytes())
    assert outs[0] == outs[1]
    assert traces[0] == traces[1]
