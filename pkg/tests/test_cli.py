"""
Test the command-line interface end to end
"""

import sys
import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

import harness
from models import ApproxResult, Coloring, Cover, GenParams, GenShape
from generator import gen_instance
from instance_parser import serialize_instance
from cli import cli, run_command

FIXTURES = Path(__file__).parent.parent / "fixtures"


@pytest.fixture(autouse=True)
def workspace(tmp_path, monkeypatch):
    """Run every command from an empty directory with no overrides"""
    for variable in ("RECOLOR_ORACLE_CAP", "RECOLOR_CACHE_DIR", "RECOLOR_WORKERS",
                     "RECOLOR_DOMAIN_POLICY", "RECOLOR_USE_CACHE"):
        monkeypatch.delenv(variable, raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path


def fixture(name):
    return str(FIXTURES / name)


def run_json(capsys, *argv):
    status = run_command(list(argv))
    captured = capsys.readouterr()
    return status, json.loads(captured.out) if captured.out else None, captured.err


# ============================================================================
# COMMANDS
# ============================================================================

def test_lowerbound(capsys):
    status, out, _ = run_json(capsys, "lowerbound", fixture("string_rgrg.tsv"))
    assert status == 0
    assert out["lower_bound"] == "1"
    assert out["sum_p_star"] == "2"
    assert out["per_color"]["R"]["best_block"] == ["v1"]


def test_approx_with_trace_and_opt(capsys):
    status, out, _ = run_json(capsys, "approx", fixture("caterpillar_3b.json"), "--algo", "tree3",
                              "--trace", "--opt")
    assert status == 0
    assert out["algorithm"] == "tree3"
    assert out["cost"] == "2"
    assert out["opt"] == "1"
    assert out["rounds"] == 2
    assert [entry["witness"]["tag"] for entry in out["trace"]] == ["Case3b", "Case1"]
    assert set(out["coloring"].values()) == {"A"}


def test_approx_without_trace(capsys):
    status, out, _ = run_json(capsys, "approx", fixture("string_rgrg.tsv"), "--algo", "string2")
    assert status == 0
    assert "trace" not in out
    assert out["opt"] is None
    assert out["cost"] == "1"


def test_approx_csv(capsys):
    status = run_command(["--format", "csv", "approx", fixture("star.json"), "--algo", "tree4"])
    lines = capsys.readouterr().out.splitlines()
    assert status == 0
    assert lines[0] == "id,weight,color,recolored,in_cover"
    assert len(lines) == 8


def test_exact_uses_cache(capsys, workspace):
    status, out, err = run_json(capsys, "exact", fixture("star.json"))
    assert status == 0
    assert out["cost"] == "2"
    assert out["opt"] == "2"
    assert "0 hit(s), 1 miss(es)" in err

    status, _, err = run_json(capsys, "exact", fixture("star.json"))
    assert "1 hit(s), 0 miss(es)" in err
    assert len(list((workspace / "cache").glob("*.json"))) == 1


def test_verify(capsys, workspace):
    good = workspace / "good.json"
    good.write_text(json.dumps(["g1", "b1"]))
    status, out, _ = run_json(capsys, "verify", fixture("star.json"), "--cover", str(good))
    assert status == 0
    assert out == {"valid": True, "cost": "2", "cover": ["g1", "b1"], "recoloring_cost": "2"}

    bad = workspace / "bad.json"
    bad.write_text(json.dumps({"cover": ["g1"]}))
    status, out, err = run_json(capsys, "verify", fixture("star.json"), "--cover", str(bad))
    assert status == 1
    assert out["valid"] is False
    assert "non-convex" in err


def test_verify_accepts_result_document(capsys, workspace):
    run_command(["approx", fixture("gadget_321.json"), "--algo", "tree3"])
    result = workspace / "result.json"
    result.write_text(capsys.readouterr().out)
    status, out, _ = run_json(capsys, "verify", fixture("gadget_321.json"), "--cover", str(result))
    assert status == 0
    assert out["valid"] is True


@pytest.mark.parametrize("algo", ["string2", "string3", "tree3", "tree4"])
def test_verify_reproduces_result_with_zero_weight_vertex(capsys, workspace, algo):
    """Test that verify accepts the cover approx wrote for a colored weight-0 vertex"""
    instance = workspace / "zero.tsv"
    instance.write_text("R\t1\nG\t0\nR\t1\n")
    status, result, _ = run_json(capsys, "approx", str(instance), "--algo", algo)
    assert status == 0
    assert (result["cover"], result["cost"]) == ([], "0")

    saved = workspace / "result.json"
    saved.write_text(json.dumps(result))
    status, out, err = run_json(capsys, "verify", str(instance), "--cover", str(saved))
    assert status == 0, err
    assert out["valid"] is True
    assert out["cost"] == result["cost"]
    assert out["recoloring_cost"] == result["cost"]


def test_verify_follows_configured_policy(capsys, workspace):
    config = workspace / "keep.json"
    config.write_text(json.dumps({"domain_policy": "keep"}))
    instance = workspace / "zero.tsv"
    instance.write_text("R\t1\nG\t0\nR\t1\n")
    status, result, _ = run_json(capsys, "--config", str(config), "approx", str(instance), "--algo", "tree3")
    assert status == 0
    assert (result["cover"], result["cost"]) == (["v2"], "0")

    saved = workspace / "result.json"
    saved.write_text(json.dumps(result))
    status, out, _ = run_json(capsys, "--config", str(config), "verify", str(instance), "--cover", str(saved))
    assert status == 0
    assert (out["valid"], out["cost"]) == (True, "0")


@pytest.mark.parametrize("policy", ["derive", "keep"])
def test_results_verify_against_their_own_instance(capsys, workspace, policy):
    """Test that approx results re-verify at their own cost with colored weight-0 vertices present"""
    config = workspace / "config.json"
    config.write_text(json.dumps({"domain_policy": policy, "use_cache": False}))
    saved = workspace / "result.json"
    for seed in range(12):
        shape = GenShape.PATH if seed % 2 else GenShape.RANDOM_TREE
        inst = gen_instance(GenParams(n=8, c=3, shape=shape, zero_weight_fraction=Fraction(1, 3), seed=seed))
        rng = np.random.default_rng(seed)
        colors = [c if c is not None else str(rng.choice(inst.palette)) for c in inst.colors]
        path = workspace / f"instance_{seed}.json"
        path.write_text(serialize_instance(inst.with_weights_and_colors(inst.weights, colors)))

        algos = ["string2", "string3", "tree3", "tree4"] if shape is GenShape.PATH else ["tree3", "tree4"]
        for algo in algos:
            status, result, _ = run_json(capsys, "--config", str(config), "approx", str(path), "--algo", algo)
            assert status == 0, f"seed {seed} {algo}"
            saved.write_text(json.dumps(result))
            status, out, err = run_json(capsys, "--config", str(config), "verify", str(path), "--cover", str(saved))
            assert status == 0, f"seed {seed} {algo}: {err}"
            assert out["cost"] == result["cost"], f"seed {seed} {algo}"


def test_gen_and_stdin():
    """Test piping a generated instance into another command"""
    runner = CliRunner()
    generated = runner.invoke(cli, ["gen", "--shape", "case2-spider", "-n", "9", "-c", "3", "--seed", "4"])
    assert generated.exit_code == 0, generated.stdout
    document = json.loads(generated.stdout)
    assert len(document["vertices"]) == 9

    bound = runner.invoke(cli, ["lowerbound", "-"], input=generated.stdout)
    assert bound.exit_code == 0, bound.stdout
    assert "lower_bound" in json.loads(bound.stdout)


def test_long_size_and_color_options(capsys):
    status = run_command(["gen", "--shape", "path", "--n", "5", "--c", "2", "--seed", "3"])
    document = json.loads(capsys.readouterr().out)
    assert status == 0
    assert len(document["vertices"]) == 5
    assert document["kind"] == "string"

    status, out, _ = run_json(capsys, "bench", "--algo", "string2", "--n", "6", "--c", "2", "--count", "3")
    assert status == 0
    assert out["count"] == 3


def test_bench(capsys):
    status, out, err = run_json(capsys, "bench", "--algo", "tree3", "-n", "7", "-c", "3",
                                "--count", "4", "--seed", "9")
    assert status == 0
    assert out["count"] == 4
    assert out["violations"] == 0
    assert Fraction(out["max_ratio"]) <= 3
    assert "✓ tree3: max ratio" in err


def test_bench_csv(capsys):
    status = run_command(["--format", "csv", "bench", "--algo", "string3", "-n", "6", "--count", "2",
                          "--fixed-size"])
    lines = capsys.readouterr().out.splitlines()
    assert status == 0
    assert lines[0] == "index,seed,n,algo_cost,opt,ratio,violation"
    assert len(lines) == 3


def test_bench_keep_going_counts_violations(capsys, monkeypatch):
    def everything(inst):
        return ApproxResult(algorithm="tree3", cover=Cover(frozenset(range(inst.n))),
                            cost=inst.weight_of(range(inst.n)))

    monkeypatch.setitem(harness.ALGORITHMS, "tree3", harness.AlgorithmSpec("tree3", everything, 1, False))
    status = run_command(["bench", "--algo", "tree3", "-n", "6", "--count", "3", "--fixed-size", "--keep-going"])
    captured = capsys.readouterr()
    assert status == 2
    assert json.loads(captured.out)["violations"] == 3
    assert "3 of 3 instance(s) break the factor 1" in captured.err

    status = run_command(["bench", "--algo", "tree3", "-n", "6", "--count", "3", "--fixed-size"])
    captured = capsys.readouterr()
    assert status == 2
    assert captured.out == ""
    assert "breaks the factor 1" in captured.err


def test_config_file_disables_cache(capsys, workspace):
    config = workspace / "custom.json"
    config.write_text(json.dumps({"use_cache": False, "domain_policy": "keep"}))
    status, _, err = run_json(capsys, "--config", str(config), "exact", fixture("star.json"))
    assert status == 0
    assert "Oracle cache" not in err
    assert not (workspace / "cache").exists()


# ============================================================================
# EXIT CODES
# ============================================================================

def test_missing_instance_exits_1(capsys):
    status = run_command(["lowerbound", "nowhere.json"])
    assert status == 1
    assert "not found" in capsys.readouterr().err


def test_string_algorithm_on_tree_exits_1(capsys):
    status = run_command(["approx", fixture("star.json"), "--algo", "string2"])
    assert status == 1
    assert "string instance" in capsys.readouterr().err


def test_usage_error_exits_1(capsys):
    assert run_command(["approx", fixture("star.json")]) == 1
    assert run_command(["frobnicate"]) == 1


def test_oracle_cap_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("RECOLOR_ORACLE_CAP", "4")
    status = run_command(["exact", fixture("star.json")])
    assert status == 1
    assert "capped at 4" in capsys.readouterr().err


def test_broken_guarantee_exits_2(capsys, monkeypatch):
    """Test that a result above the proven factor is reported as an internal error"""
    def everything_to_x(inst):
        return ApproxResult(algorithm="tree3", cover=Cover(), cost=Fraction(0),
                            coloring=Coloring(("X",) * inst.n))

    monkeypatch.setitem(harness.ALGORITHMS, "tree3",
                        harness.AlgorithmSpec("tree3", everything_to_x, 3, False))
    status = run_command(["approx", fixture("poor_bound_star.json"), "--algo", "tree3", "--opt"])
    assert status == 2
    assert "internal guarantee violated" in capsys.readouterr().err


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
