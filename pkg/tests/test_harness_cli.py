import json
import math

import pytest

from symtensor.cli import main
from symtensor.convex.io import read_body
from symtensor.harness import ExperimentSpec, RunReport, run
from symtensor.harness.corpus import builtin_ball, random_vpolytope, rng_for


def cli(*argv):
    return main([str(a) for a in argv])


def load(path):
    return json.loads(path.read_text())


@pytest.fixture
def cubes(tmp_path):
    path = tmp_path / "cube.json"
    assert cli("make", "bp", "--p", "inf", "--d", 2, "--out", path) == 0
    return path


# -- make -------------------------------------------------------------------


def test_make_builtin_balls(tmp_path):
    cli("make", "bp", "--p", "inf", "--d", 3, "--out", tmp_path / "a.json")
    cli("make", "bp", "--p", "1", "--d", 3, "--out", tmp_path / "b.json")
    a, b = load(tmp_path / "a.json"), load(tmp_path / "b.json")
    e = [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]
    assert (a["kind"], a["data"], a["format"]) == ("hpolytope", e, "symtensor/1")
    assert (b["kind"], b["data"]) == ("vpolytope", e)


def test_make_random_is_seeded(tmp_path):
    for name in ("x", "y"):
        cli("make", "random-v", "--d", 2, "--gens", 4, "--seed", 7, "--out", tmp_path / f"{name}.json")
    assert (tmp_path / "x.json").read_bytes() == (tmp_path / "y.json").read_bytes()
    cli("--seed", 8, "make", "random-v", "--d", 2, "--gens", 4, "--out", tmp_path / "z.json")
    assert (tmp_path / "z.json").read_bytes() != (tmp_path / "x.json").read_bytes()


def test_make_ellipsoid_and_round_trip(tmp_path):
    path = tmp_path / "e.json"
    assert cli("make", "ellipsoid", "--shape", "1,0;0,4", "--out", path) == 0
    E = read_body(path)
    assert E.exact_shape == ((1, 0), (0, 4))


def test_make_usage_errors(tmp_path, capsys):
    assert cli("make", "bp", "--d", 2) == 2
    assert cli("make", "bp", "--p", "3", "--d", 2) == 2
    assert cli("make", "bp", "--p", "1", "--d", 0) == 2
    with pytest.raises(SystemExit) as info:
        cli("make", "sphere")
    assert info.value.code == 2


@pytest.mark.parametrize("factory", [lambda: builtin_ball("inf", 3), lambda: builtin_ball("1", 2),
                                     lambda: random_vpolytope(rng_for(3), 3, 4)])
def test_body_files_round_trip(tmp_path, factory):
    from symtensor.convex.io import write_body
    body = factory()
    write_body(body, tmp_path / "b.json")
    again = read_body(tmp_path / "b.json")
    assert type(again) is type(body) and again.dim == body.dim
    assert getattr(again, "generators", None) == getattr(body, "generators", None)
    assert getattr(again, "facet_normals", None) == getattr(body, "facet_normals", None)


# -- product / gauge / norms ------------------------------------------------


def test_product_files(tmp_path, cubes):
    cli("product", "pi", cubes, cubes, "--out", tmp_path / "pi.json")
    cli("product", "eps", cubes, cubes, "--out", tmp_path / "eps.json")
    pi, eps = load(tmp_path / "pi.json"), load(tmp_path / "eps.json")
    # four stored generators stand for eight signed vertices
    assert pi["kind"] == "vpolytope" and len(pi["data"]) == 4
    assert eps["kind"] == "hpolytope" and eps["dim"] == 4 and len(eps["data"]) == 4
    assert sorted(map(tuple, eps["data"])) == sorted(
        tuple("1" if i == j else "0" for j in range(4)) for i in range(4))


def test_hilbert2_product_of_ellipsoids(tmp_path):
    cli("make", "ellipsoid", "--shape", "1,0;0,4", "--out", tmp_path / "e.json")
    assert cli("product", "hilbert2", tmp_path / "e.json", tmp_path / "e.json", "--out", tmp_path / "h.json") == 0
    E = read_body(tmp_path / "h.json")
    assert [E.exact_shape[i][i] for i in range(4)] == [1, 4, 4, 16]


def test_gauge_and_support(tmp_path, cubes, capsys):
    cli("gauge", cubes, "--", "1,1/2", "-3,2")
    out = json.loads(capsys.readouterr().out)
    assert [r["gauge"] for r in out["results"]] == ["1", "3"]
    cli("gauge", "--support", cubes, "1,1/2")
    assert json.loads(capsys.readouterr().out)["results"][0]["support"] == "3/2"


@pytest.mark.parametrize("u, eps, pi, omega", [("1,0;0,1", "1", "1", 1.0), ("1,1;1,-1", "1", "2", math.sqrt(2)),
                                               ("1,-1,2,-2", "2", "2", 2.0)])
def test_norms_verb(cubes, capsys, u, eps, pi, omega):
    assert cli("norms", u, cubes, cubes) == 0
    out = json.loads(capsys.readouterr().out)
    assert (out["eps"], out["pi"]) == (eps, pi)
    lo, hi = out["omega2"]
    assert lo - 1e-4 <= omega <= hi + 1e-4 and out["sandwich_holds"]


def test_norms_from_file_and_shape_mismatch(tmp_path, cubes, capsys):
    (tmp_path / "u.json").write_text(json.dumps({"entries": [[1, 1], [1, -1]]}))
    assert cli("norms", tmp_path / "u.json", cubes, cubes) == 0
    assert json.loads(capsys.readouterr().out)["pi"] == "2"
    assert cli("norms", "1,2,3", cubes, cubes) == 2
    assert cli("norms", "1,0;0,1", tmp_path / "missing.json", cubes) == 2


# -- check / report ---------------------------------------------------------


def test_check_duality_is_exact_and_deterministic(tmp_path):
    args = ("check", "duality", "--seed", 1, "--dims", "2x3", "--samples", 10)
    assert cli(*args, "--out", tmp_path / "a") == 0
    assert cli(*args, "--jobs", 2, "--out", tmp_path / "b") == 0
    a = (tmp_path / "a.json").read_bytes()
    assert a == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    rep = json.loads(a)
    assert rep["environment"] == {"version": "0.1.0", "seed": 1}
    assert rep["summary"]["passed"] == 20 and all(r["exact"] for r in rep["records"])
    assert "seconds" in load(tmp_path / "a.timing.json")


def test_check_symmetries_dims(tmp_path):
    assert cli("check", "symmetries", "--dims", "2,3", "--out", tmp_path / "s") == 0
    recs = load(tmp_path / "s.json")["records"]
    assert [r["detail"]["commutant_dimension"] for r in recs] == [1, 1, 1]


def test_check_grothendieck_ratio(tmp_path):
    assert cli("check", "grothendieck", "--m", 2, "--n", 2, "--samples", 100, "--out", tmp_path / "g") == 0
    recs = {r["name"]: r for r in load(tmp_path / "g.json")["records"]}
    assert abs(recs["grothendieck/2x2"]["detail"]["max_ratio"] - math.sqrt(2)) <= 2e-4


def test_failing_check_reports_reproduction(tmp_path, capsys, monkeypatch):
    from symtensor.harness import checks
    monkeypatch.setattr(checks, "bm_product", lambda **kw: checks.Outcome(False, True, {"lam": "5"}))
    code = cli("check", "ellipsoids", "--tol", "1e-4", "--out", tmp_path / "f")
    assert code == 1
    rep = load(tmp_path / "f.json")
    failed = [r for r in rep["records"] if r["status"] != "pass"]
    assert failed and all(r["reproduce"].startswith("symtensor check ellipsoids") for r in failed)
    assert "--only " + failed[0]["name"] in failed[0]["reproduce"]
    assert "reproduce:" in capsys.readouterr().out
    assert cli("report", tmp_path / "f.json") == 1


def test_report_formats(tmp_path, capsys):
    cli("check", "symmetries", "--out", tmp_path / "r")
    capsys.readouterr()
    assert cli("report", tmp_path / "r.json", "--format", "csv") == 0
    assert capsys.readouterr().out == (tmp_path / "r.csv").read_text()
    assert cli("report", tmp_path / "r.json", "--format", "json") == 0
    assert capsys.readouterr().out == (tmp_path / "r.json").read_text()
    assert cli("report", tmp_path / "missing.json") == 2


def test_bad_check_parameters():
    assert cli("check", "duality", "--dims", "2y3") == 2
    assert cli("check", "duality", "--tol", "-1") == 2
    with pytest.raises(SystemExit):
        cli("check", "nonsense")


def test_spec_validation_and_report_round_trip():
    with pytest.raises(ValueError):
        ExperimentSpec("nope")
    rep = run(ExperimentSpec("symmetries", seed=4))
    again = RunReport.from_dict(json.loads(rep.to_json()))
    assert again.to_json() == rep.to_json()
    assert [r.name for r in rep.records] == sorted(r.name for r in rep.records)
