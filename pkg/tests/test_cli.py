import json
import logging

import pytest

from main import run
from src.lib.config import GAME_MAX_VERTICES_ENV


@pytest.fixture(autouse=True)
def restore_logging():
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def cli(capsys):
    def invoke(*argv):
        code = run(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


def test_assign_k11(cli, data_path, golden):
    code, out, _ = cli("assign", data_path("k11.bip"))
    assert code == 0
    assert out == golden("k11.assign")


def test_assign_with_trace(cli, data_path, golden):
    code, out, _ = cli("assign", "--trace", data_path("k11.bip"))
    assert code == 0
    assert out == golden("k11.assign") + golden("k11.trace")


def test_assign_general_graph(cli, data_path, golden):
    code, out, _ = cli("assign", "--check-invariants", data_path("tight2.graph"))
    assert code == 0
    assert out == golden("tight2.assign")


def test_assign_json(cli, data_path):
    code, out, _ = cli("--json", "assign", data_path("k11.bip"))
    assert code == 0
    payload = json.loads(out)
    assert payload["sigma"] == {"1": "2", "2": None, "v1": None, "v0": "v1"}
    assert payload["stats"]["iterations"] == 4


def test_certificates(cli, data_path, golden):
    assert cli("certificate", data_path("star.bip"))[:2] == (0, golden("star.cert"))
    assert cli("certificate", data_path("k11.bip"))[:2] == (0, golden("k11.cert"))


def test_certificate_needs_bipartite_input(cli, data_path):
    code, _, err = cli("certificate", data_path("tight2.graph"))
    assert code == 2
    assert "bipartite" in err


def test_verify_assign(cli, data_path):
    assert cli("verify-assign", data_path("k11.bip"), data_path("k11.assign"))[:2] == (0, "ok\n")
    code, out, _ = cli("verify-assign", data_path("k11.bip"), data_path("k11_bad.assign"))
    assert code == 1
    assert out.splitlines() == [
        "C2 violated at 1 (neighbor 2): neighbour has sigma = bottom",
        "C2 violated at 1 (neighbor v1): neighbour has sigma = bottom",
        "C2 violated at 2 (neighbor 1): neighbour has sigma = bottom",
        "C2 violated at v1 (neighbor 1): neighbour has sigma = bottom",
    ]


def test_play(cli, data_path):
    code, out, _ = cli("play", "--p2", "random", "--seed", "3", "--check-invariants", data_path("k11.bip"))
    assert code == 0
    assert out == "transcript: v0 v1 1 2\nwinner: 1\n"


def test_play_resign(cli, data_path):
    code, out, _ = cli("play", "--p1", "resign", "--p2", "minimax", data_path("k11.bip"))
    assert code == 0
    assert out.splitlines()[-1] == "forfeit: player 1 resigned"


def test_play_assign_for_the_losing_side(cli, data_path):
    code, _, err = cli("play", "--p1", "assign", data_path("star.bip"))
    assert code == 2
    assert "player 2" in err


def test_solve(cli, data_path):
    assert cli("solve", data_path("star.bip"))[:2] == (0, "winner: 2\n")
    assert cli("solve", data_path("k33.bip"))[:2] == (0, "winner: 1\n")


def test_solve_size_bound(cli, data_path, monkeypatch):
    monkeypatch.setenv(GAME_MAX_VERTICES_ENV, "3")
    code, _, err = cli("solve", data_path("k11.bip"))
    assert code == 2
    assert GAME_MAX_VERTICES_ENV in err


def test_maxweight(cli, data_path, golden):
    assert cli("maxweight", data_path("anti.wbip"))[:2] == (0, golden("anti.maxweight"))


def test_bench_tightness_json(cli):
    code, out, _ = cli("--json", "bench-tightness", "--n-max", "3", "--jobs", "1")
    assert code == 0
    rows = json.loads(out)
    assert [row["iterations"] for row in rows] == [2, 5, 10]
    assert [row["bound"] for row in rows] == [19, 51, 99]


def test_sweep(cli):
    code, out, _ = cli("sweep", "--count", "5", "--seed", "11", "--jobs", "1")
    assert code == 0
    assert out.startswith("instances=5 ")
    assert "disagreements=0" in out


def test_hyp_balanced(cli, data_path):
    code, out, _ = cli("hyp", "balanced", "--partial", data_path("triangle.hyp"))
    assert code == 0
    assert out.splitlines() == ["not balanced", "witness: 1 e1 2 e2 3 e3 1",
                                "partial: nu=1 tau=2 edges: e1 e2 e3"]
    assert cli("hyp", "balanced", data_path("duals.hyp"))[:2] == (0, "balanced\n")


def test_hyp_assign(cli, data_path, golden):
    assert cli("hyp", "assign", data_path("duals.hyp"))[:2] == (0, golden("duals.hyp_assign"))


def test_hyp_assign_by_search(cli, data_path):
    code, out, _ = cli("hyp", "assign", "--search", data_path("single.hyp"))
    assert code == 0
    assert out.splitlines() == ["U: 1", "method search", "sigma 1 e1", "sigma v1 _", "sigma v0 e0",
                                "R: 1 v1 v0", "verify ok"]


def test_hyp_without_independent_transversal(cli, data_path):
    code, _, err = cli("hyp", "assign", data_path("triangle.hyp"))
    assert code == 2
    assert "independent transversal" in err


def test_hyp_solve(cli, data_path):
    code, out, _ = cli("hyp", "solve", data_path("duals.hyp"))
    assert code == 0
    assert out == "winner: 1\nmatching covers U: no\nbalanced: yes\n"
    code, out, _ = cli("--json", "hyp", "solve", data_path("single.hyp"))
    assert json.loads(out) == {"winner": 2, "matching_covers_U": True, "balanced": True}


def test_parse_error_exit_code(cli, tmp_path):
    bad = tmp_path / "bad.bip"
    bad.write_text("p bip 1 1 1\ne 1 1\n")
    code, _, err = cli("assign", str(bad))
    assert code == 2
    assert "line 2" in err


def test_missing_file_exit_code(cli, tmp_path):
    assert cli("assign", str(tmp_path / "none.bip"))[0] == 2


def test_undecodable_file_exit_code(cli, tmp_path):
    bad = tmp_path / "bad.bip"
    bad.write_bytes(b"p bip 1 1 1\ne 1 2\nl 1 \xff\xfe\n")
    code, _, err = cli("assign", str(bad))
    assert code == 2
    assert "not UTF-8" in err


def test_usage_errors(cli):
    assert cli()[0] == 2
    assert cli("assign")[0] == 2
    assert cli("play", "--p1", "nobody", "x.bip")[0] == 2
