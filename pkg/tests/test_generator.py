"""
Test the instance generator, the ratio harness, result checks and export
"""

import sys
import csv
import json
from fractions import Fraction
from io import StringIO
from pathlib import Path

import networkx as nx
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from models import (
    ApproxResult, Cover, Coloring, ExportFormat, GenParams, GenShape, InstanceKind, InstanceError,
    InvariantViolation
)
from instance_parser import parse_instance
from generator import gen_instance, palette_for, minimum_size
from harness import (
    ALGORITHMS, AlgorithmSpec, run_algorithm, finalize_result, instance_params, measure_ratio, get_algorithm
)
from result_checker import ResultChecker
from result_exporter import ResultExporter

FIXTURES = Path(__file__).parent.parent / "fixtures"


# ============================================================================
# GENERATOR
# ============================================================================

def as_graph(inst):
    graph = nx.Graph()
    graph.add_nodes_from(range(inst.n))
    graph.add_edges_from(inst.edges)
    return graph


@pytest.mark.parametrize("shape", list(GenShape))
def test_generated_instances_are_trees(shape):
    params = GenParams(n=12, c=3, shape=shape, zero_weight_fraction=Fraction(1, 4), seed=5)
    inst = gen_instance(params)
    assert inst.n == 12
    assert nx.is_tree(as_graph(inst))
    assert inst.palette == ("A", "B", "C")
    assert any(c is not None for c in inst.colors)
    for w, c in zip(inst.weights, inst.colors):
        assert (w == 0) == (c is None), "weight-0 vertices are uncolored"
        assert 0 <= w <= 8


def test_generator_is_deterministic():
    params = GenParams(n=10, c=3, seed=42)
    assert gen_instance(params) == gen_instance(params)
    assert gen_instance(params) != gen_instance(GenParams(n=10, c=3, seed=43))


def test_path_shape_is_string():
    inst = gen_instance(GenParams(n=6, c=2, shape=GenShape.PATH, seed=1))
    assert inst.kind is InstanceKind.STRING
    assert inst.edges == tuple((i, i + 1) for i in range(5))


def test_palette_for_many_colors():
    assert palette_for(3) == ["A", "B", "C"]
    assert palette_for(30)[0] == "C000"
    assert len(palette_for(30)) == 30


@pytest.mark.parametrize("params, message", [
    (GenParams(n=0, c=2), "n must be"),
    (GenParams(n=5, c=0), "c must be"),
    (GenParams(n=5, c=2, weight_max=0), "weight_max"),
    (GenParams(n=5, c=2, zero_weight_fraction=Fraction(3, 2)), "zero_weight_fraction"),
    (GenParams(n=9, c=2, shape=GenShape.CASE2_SPIDER), "at least 3 colors"),
    (GenParams(n=6, c=3, shape=GenShape.CASE2_SPIDER), "n >= 7"),
    (GenParams(n=5, c=2, shape=GenShape.CASE3B_FAMILY), "n >= 6"),
])
def test_generator_rejects_infeasible_parameters(params, message):
    with pytest.raises(InstanceError, match=message):
        gen_instance(params)


def test_gen_params_round_trip_through_dict():
    params = GenParams(n=9, c=4, weight_max=3, shape=GenShape.STAR,
                       zero_weight_fraction=Fraction(1, 3), seed=7)
    assert GenParams.from_dict(params.to_dict()) == params
    assert minimum_size(GenShape.CASE2_SPIDER, 4) == 9


# ============================================================================
# HARNESS
# ============================================================================

def test_registry():
    assert set(ALGORITHMS) == {"string2", "string3", "tree3", "tree4"}
    assert get_algorithm("tree3").bound == 3
    with pytest.raises(InstanceError, match="unknown algorithm"):
        get_algorithm("tree5")


def test_string_algorithm_rejects_tree():
    inst = parse_instance(FIXTURES / "star.json")
    with pytest.raises(InstanceError, match="string instance"):
        run_algorithm("string2", inst)


def test_finalize_result_completes_cover_only_results():
    """Test that a cover-only result gets a convex recoloring and its true cost"""
    inst = parse_instance(FIXTURES / "star.json")
    raw = run_algorithm("tree4", inst)
    assert raw.coloring is None
    final = finalize_result(inst, raw)
    assert final.coloring.is_total
    assert final.cost <= raw.cost
    assert final.cover.weight(inst) == final.cost


def test_finalize_rejects_non_convex_coloring():
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    bad = ApproxResult(algorithm="string2", cover=Cover(), cost=Fraction(0), coloring=inst.coloring())
    with pytest.raises(InvariantViolation):
        finalize_result(inst, bad)


def test_instance_params():
    base = GenParams(n=10, c=3, seed=100)
    fixed = instance_params(base, 4, vary_size=False)
    assert (fixed.seed, fixed.n) == (104, 10)
    varied = instance_params(base, 4)
    assert varied.seed == 104
    assert 1 <= varied.n <= 10
    assert instance_params(base, 4) == varied


@pytest.mark.parametrize("algo_id", ["string2", "string3", "tree3", "tree4"])
def test_measure_ratio(algo_id):
    report = measure_ratio(algo_id, GenParams(n=8, c=3, weight_max=5, seed=11), count=6)
    assert len(report.records) == 6
    assert report.violations == 0
    assert report.max_ratio <= report.bound
    assert all(r.ratio >= 1 for r in report.records)
    data = report.to_dict()
    assert data["count"] == 6
    assert data["algorithm"] == algo_id


def test_measure_ratio_with_cache(tmp_path):
    params = GenParams(n=7, c=3, shape=GenShape.CASE2_SPIDER, seed=3)
    first = measure_ratio("tree3", params, count=3, cache_dir=str(tmp_path), vary_size=False)
    second = measure_ratio("tree3", params, count=3, cache_dir=str(tmp_path), vary_size=False)
    assert [r.to_dict() for r in first.records] == [r.to_dict() for r in second.records]
    assert len(list(tmp_path.glob("*.json"))) == 3


def test_measure_ratio_rejects_empty_run():
    with pytest.raises(InstanceError, match="count"):
        measure_ratio("tree3", GenParams(n=5, c=2), count=0)


def test_measure_ratio_counts_or_stops_on_violations(monkeypatch):
    """Test both ways a ratio above the bound is handled"""
    def everything(inst):
        return ApproxResult(algorithm="tree4", cover=Cover(frozenset(range(inst.n))),
                            cost=inst.weight_of(range(inst.n)))

    monkeypatch.setitem(ALGORITHMS, "tree4", AlgorithmSpec("tree4", everything, 1, False))
    params = GenParams(n=6, c=3, seed=2)
    report = measure_ratio("tree4", params, count=4, vary_size=False, fail_fast=False)
    assert report.violations == 4
    assert all(r.violation for r in report.records)
    assert report.to_dict()["violations"] == 4
    assert report.to_rows()[0]["violation"] is True

    with pytest.raises(InvariantViolation, match="breaks the factor 1"):
        measure_ratio("tree4", params, count=4, vary_size=False)


# ============================================================================
# CHECKER AND EXPORT
# ============================================================================

def test_checker_flags_invalid_cover():
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    result = ApproxResult(algorithm="string3", cover=Cover(frozenset({0})), cost=Fraction(1))
    issues = ResultChecker().check(inst, result)
    assert [i["field"] for i in issues] == ["cover"]
    assert issues[0]["severity"] == "error"


def test_checker_reports_optimal_result():
    inst = parse_instance(FIXTURES / "caterpillar_3b.json")
    result = ApproxResult(algorithm="tree3", cover=Cover(frozenset({inst.index_of["c"]})), cost=Fraction(1))
    issues = ResultChecker().check(inst, result, lower_bound=Fraction(1, 2), opt=Fraction(1))
    assert issues == [{"field": "cost", "issue": "Result is optimal", "severity": "info"}]


def test_checker_flags_factor_violation():
    inst = parse_instance(FIXTURES / "star.json")
    everything = Cover(frozenset(range(inst.n)))
    result = ApproxResult(algorithm="string2", cover=everything, cost=Fraction(6))
    issues = ResultChecker().check(inst, result, lower_bound=Fraction(0), opt=Fraction(2))
    messages = [i["issue"] for i in issues]
    assert any("penalty sum" in m for m in messages)
    assert any("2 x OPT" in m for m in messages)


def test_checker_flags_non_convex_coloring():
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    result = ApproxResult(algorithm="string2", cover=Cover(frozenset({1, 2})), cost=Fraction(2),
                          coloring=Coloring(("R", "G", "R", "G")))
    issues = ResultChecker().check(inst, result)
    assert [i["issue"] for i in issues] == ["Recoloring is not convex"]


def test_checker_warns_about_changes_outside_cover():
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    result = ApproxResult(algorithm="string3", cover=Cover(frozenset({1})), cost=Fraction(2),
                          coloring=Coloring(("R", "R", "R", "R")))
    issues = ResultChecker().check(inst, result)
    assert issues == [{"field": "coloring", "issue": "Recoloring changes vertices outside the cover",
                       "severity": "warning"}]


def test_checker_flags_cost_below_lower_bound():
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    result = ApproxResult(algorithm="string3", cover=Cover(), cost=Fraction(0))
    issues = ResultChecker().check(inst, result, lower_bound=Fraction(1))
    assert [i["field"] for i in issues] == ["cover", "cost"]
    assert "below the lower bound" in issues[1]["issue"]


def test_exporter(tmp_path):
    inst = parse_instance(FIXTURES / "caterpillar_3b.json")
    result = finalize_result(inst, run_algorithm("tree3", inst))
    exporter = ResultExporter()

    payload = result.to_dict(inst, lower_bound=Fraction(1, 2), opt=Fraction(1))
    text = exporter.export(payload, result.to_rows(inst), ExportFormat.JSON, str(tmp_path / "out" / "r.json"))
    assert json.loads(text)["cost"] == "2"
    assert json.loads((tmp_path / "out" / "r.json").read_text())["opt"] == "1"

    table = exporter.export(payload, result.to_rows(inst), ExportFormat.CSV)
    rows = list(csv.DictReader(StringIO(table)))
    assert table.splitlines()[0] == "id,weight,color,recolored,in_cover"
    assert len(rows) == inst.n
    assert rows[0] == {"id": "r", "weight": "1", "color": "B", "recolored": "A", "in_cover": "True"}

    assert exporter.get_file_extension(ExportFormat.CSV) == "csv"
    assert exporter.get_mime_type(ExportFormat.JSON) == "application/json"
    assert exporter.export_to_csv([]) == ""


if __name__ == "__main__":
    test_generator_is_deterministic()
    test_path_shape_is_string()
    test_registry()
    test_finalize_result_completes_cover_only_results()
    for algo in ("string2", "string3", "tree3", "tree4"):
        test_measure_ratio(algo)
    print("✓ All generator and harness tests passed")
