import io
import json

import pytest

from dgklrw import cli
from dgklrw.cli import FAILED, OK, USAGE, run_command
from dgklrw.config import ConfigError, JobConfig
from dgklrw.diagrams import Element, Weight
from dgklrw.polyaction import RelationReport


def run(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


DIAGRAM = {"rho": [2], "sites": [{"kind": "Dot", "pos": 1}, {"kind": "X", "pos": 1}]}


def test_normalize_text(tmp_path):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps(DIAGRAM))
    code, out, _ = run("normalize", "--mu", "g0", "--input", str(path))
    assert code == OK
    assert "BX1 D2" in out and "q^" in out and "λ^" in out and "h^" in out


def test_normalize_json_roundtrip(tmp_path):
    path = tmp_path / "diag.json"
    path.write_text(json.dumps(DIAGRAM))
    code, out, _ = run("normalize", "--mu", "g0", "--input", str(path), "--format", "json")
    assert code == OK
    data = json.loads(out)
    mu = (Weight.beta(0),)
    e = Element.from_json(data, mu)
    assert len(e) == 2
    path2 = tmp_path / "nf.json"
    path2.write_text(out)
    code, out2, _ = run("normalize", "--input", str(path2), "--format", "json")
    assert code == OK
    assert Element.from_json(json.loads(out2), mu) == e


def test_normalize_stdin_with_rho_flag(monkeypatch):
    body = json.dumps({"sites": [{"kind": "Nail", "pos": 0}, {"kind": "Nail", "pos": 0}]})
    code, out, _ = run("normalize", "--mu", "i1", "--rho", "1", stdin=body, monkeypatch=monkeypatch)
    assert code == OK
    assert out.strip() == "0"


def test_normalize_usage_errors(tmp_path, monkeypatch):
    code, _, err = run("normalize", "--mu", "g0", "--input", str(tmp_path / "missing.json"))
    assert code == USAGE and "--input" in err
    code, _, err = run("normalize", "--mu", "g0", stdin="{not json", monkeypatch=monkeypatch)
    assert code == USAGE and "--input" in err
    bad = json.dumps({"rho": [1], "sites": [{"kind": "Dot", "pos": 0}]})
    code, _, err = run("normalize", "--mu", "g0", stdin=bad, monkeypatch=monkeypatch)
    assert code == USAGE and "colored" in err
    code, _, err = run("normalize", "--mu", "g0", stdin=json.dumps({"sites": []}), monkeypatch=monkeypatch)
    assert code == USAGE and "--rho" in err


def test_basis_four_keys():
    code, out, _ = run("basis", "--mu", "g0", "--kappa", "1", "--rho", "1", "--qmax", "4", "--format", "json")
    assert code == OK
    data = json.loads(out)
    assert data["count"] == 4
    degrees = sorted((d["degree"]["h"], d["degree"]["q"], d["degree"]["l"]) for d in data["basis"])
    assert degrees == [(0, 0, 0), (0, 2, 0), (1, 0, 2), (1, 2, 2)]


def test_basis_text_lines():
    code, out, _ = run("basis", "--mu", "g0", "--kappa", "1", "--rho", "1", "--qmax", "4")
    assert code == OK
    assert out.strip().splitlines()[-1] == "count: 4"
    assert ": 1 q^0 λ^0 h^0" in out


@pytest.mark.parametrize("argv,flag", [
    (["basis", "--mu", "g0", "--kappa", "1,0", "--rho", "1"], "--kappa"),
    (["basis", "--mu", "x0", "--kappa", "1", "--rho", "1"], "--mu"),
    (["basis", "--mu", "g0", "--kappa", "1", "--rho", "1", "--qmax", "0"], "--qmax"),
    (["basis", "--mu", "g0", "--kappa", "2", "--rho", "1"], "--kappa"),
    (["basis", "--mu", "g0", "--kappa", "1", "--rho", "a"], "--rho"),
    (["graded-dim", "--mu", "g0", "--kappa", "1", "--rho", "1", "--mode", "weird"], "--mode"),
    (["verify-relations", "--mu", "g0", "--b", "1", "--delta", "half"], "--delta"),
    (["basis", "--mu", "g0", "--kappa", "1", "--rho", "1", "--threads", "0"], "--threads"),
    (["confluence", "--black", "-1"], "--black"),
    (["bogus"], "invalid choice"),
    ([], "required"),
])
def test_usage_errors_name_the_flag(argv, flag):
    code, _, err = run(*argv)
    assert code == USAGE
    assert flag in err


def test_graded_dim_modes():
    code, out, _ = run("graded-dim", "--mu", "i1", "--kappa", "1", "--rho", "1", "--qmax", "10",
                       "--mode", "euler", "--format", "json")
    assert code == OK
    assert json.loads(out)["series"]["terms"] == [[0, 0, 1]]
    code, out, _ = run("graded-dim", "--mu", "g0", "--kappa", "1", "--rho", "1", "--qmax", "4")
    assert code == OK
    assert "q^0 λ^2 h^1: 1" in out


def test_verify_relations_pass_and_fail(monkeypatch):
    code, out, _ = run("verify-relations", "--mu", "g0,i1", "--b", "2", "--cap", "2")
    assert code == OK and "all relations hold" in out
    monkeypatch.setattr(cli, "verify_relations",
                        lambda *a, **k: RelationReport(1, 1, [((1,), "R2", [(2, 1)], "f")]))
    code, out, _ = run("verify-relations", "--mu", "g0", "--b", "1", "--format", "json")
    assert code == FAILED
    assert json.loads(out)["failures"][0]["relation"] == "R2"


def test_confluence_pass_and_fail():
    code, out, _ = run("confluence", "--black", "3", "--colored", "1", "--lmax", "0", "--pmax", "0")
    assert code == OK
    assert out.strip().endswith("all branchings joinable")
    code, out, _ = run("confluence", "--black", "3", "--colored", "1", "--lmax", "0", "--pmax", "0",
                       "--no-loop-rules", "--format", "json")
    assert code == FAILED
    data = json.loads(out)
    assert data["non_joinable"] > 0 and data["failures"]


def test_confluence_sampling():
    code, out, _ = run("confluence", "--black", "2", "--colored", "1", "--lmax", "0", "--pmax", "1",
                       "--sample", "20", "--sites", "5", "--seed", "7", "--format", "json")
    assert code == OK
    assert json.loads(out)["sampling"] == {"sampled": 20, "mismatches": []}


def test_confluence_deterministic():
    argv = ["confluence", "--black", "2", "--colored", "1", "--lmax", "0", "--pmax", "1",
            "--sample", "10", "--format", "json"]
    assert run(*argv)[1] == run(*argv)[1]


def test_euler_vs_shapovalov(monkeypatch):
    code, out, _ = run("euler-vs-shapovalov", "--mu", "i1", "--b", "1")
    assert code == OK
    assert "unit monomials (sign, q, λ): [(1, 0, 0)]" in out
    real = cli.euler_vs_shapovalov

    def broken(*a, **k):
        rep = real(*a, **k)
        rep.rows[0].matches = False
        return rep

    monkeypatch.setattr(cli, "euler_vs_shapovalov", broken)
    assert run("euler-vs-shapovalov", "--mu", "i1", "--b", "1")[0] == FAILED


def test_standard_module(monkeypatch):
    code, out, _ = run("standard-module", "--mu", "g0,g0", "--rho", "0,2", "--format", "json")
    assert code == OK
    data = json.loads(out)
    assert len(data["summands"]) == 4
    assert data["kclass"]["2,0"] == [[-2, 2, 1]]
    monkeypatch.setattr(cli, "oracle_kclass", lambda mu, rho: {})
    assert run("standard-module", "--mu", "g0,g0", "--rho", "0,2")[0] == FAILED


def test_oracle_subcommands():
    code, out, _ = run("oracle", "expand", "--mu", "g0,g0", "--rho", "0,2")
    assert code == OK
    assert len(out.strip().splitlines()) == 3
    code, out, _ = run("oracle", "shapovalov", "--mu", "i1", "--kappa", "1", "--rho", "1", "--format", "json")
    assert code == OK
    assert json.loads(out)["series"]["terms"] == [[0, 0, 1]]
    code, _, err = run("oracle", "--mu", "g0")
    assert code == USAGE


def test_identities(monkeypatch):
    code, out, _ = run("identities", "--lmax", "0", "--pmax", "1", "--nmax", "1", "--kmax", "1", "--bmax", "2")
    assert code == OK and "all identities hold" in out
    real = cli.run_identity_suite

    def broken(bounds):
        from dgklrw.rewriting import RewriteSystem
        return real(bounds, ["nailed-R3"], rewriter=RewriteSystem(loop_rules=False))

    monkeypatch.setattr(cli, "run_identity_suite", broken)
    code, out, _ = run("identities", "--lmax", "0", "--pmax", "0", "--format", "json")
    assert code == FAILED
    assert json.loads(out)["failures"]


def test_job_config_validation():
    cfg = JobConfig(mu=(Weight.beta(0), Weight.integral(1)), rho=(1, 2))
    assert cfg.b == 3
    with pytest.raises(ConfigError, match="--kappa and --rho"):
        JobConfig(mu=(Weight.beta(0),), kappa=(1,), rho=(2,))
    with pytest.raises(ConfigError, match="--rho does not sum"):
        JobConfig(mu=(Weight.beta(0),), b=2, rho=(1,))
    with pytest.raises(ConfigError, match="--format"):
        JobConfig(output="xml")
    with pytest.raises(ConfigError, match="nonnegative"):
        JobConfig(mu=(Weight.beta(0),), rho=(-1,))
