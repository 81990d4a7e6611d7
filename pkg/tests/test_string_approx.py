"""
Test the string 2- and 3-approximations
"""

import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from models import DomainPolicy, InstanceError, CaseTag, GenParams, GenShape
from instance_parser import validate_instance, parse_instance
from instance_core import is_convex, is_cover, recoloring_cost
from penalty import lower_bound
from oracle import exact_opt
from generator import gen_instance
from string_approx import two_approx_string, three_string_approx, find_string_violation

FIXTURES = Path(__file__).parent.parent / "fixtures"


def make_string(colors, weights=None):
    weights = weights or [1] * len(colors)
    return validate_instance({
        "kind": "string",
        "vertices": [{"id": f"v{i + 1}", "weight": str(w), "color": c}
                     for i, (c, w) in enumerate(zip(colors, weights))],
    }, DomainPolicy.KEEP)


def test_two_approx_small():
    """Test the sweep on R G R"""
    inst = make_string(["R", "G", "R"])
    result = two_approx_string(inst)
    assert result.coloring.assignment == ("R", "G", "G"), f"Got {result.coloring.assignment}"
    assert result.cost == 1
    assert result.cover.to_ids(inst) == ["v3"]


def test_two_approx_weighted():
    inst = make_string(["R", "G", "R", "G"], [3, 1, 1, 3])
    result = two_approx_string(inst)
    assert result.coloring.assignment == ("R", "R", "R", "G")
    assert result.cost == 1
    assert result.cost <= lower_bound(inst).sum_p_star


def test_two_approx_fills_uncovered_gaps():
    inst = make_string(["R", None, "G"], [1, 0, 2])
    result = two_approx_string(inst)
    assert result.coloring.assignment == ("R", "R", "G")
    assert result.cost == 0


def test_two_approx_without_blocks_uses_heaviest_color():
    """Test that weightless colors leave every block empty and one color wins"""
    inst = make_string(["R", "G"], [0, 0])
    result = two_approx_string(inst)
    assert result.coloring.assignment == ("G", "G")
    assert result.cost == 0


def test_two_approx_requires_string():
    inst = parse_instance(FIXTURES / "star.json")
    with pytest.raises(InstanceError):
        two_approx_string(inst)


def test_find_string_violation():
    inst = make_string(["R", "G", "B", "R"])
    assert find_string_violation(inst, {0, 1, 2, 3}) == (0, 2, 3)
    assert find_string_violation(inst, {0, 3}) is None
    assert find_string_violation(inst, {1, 2, 3}) is None


def test_three_approx_alternating():
    """Test one local-ratio round on R G R G"""
    inst = parse_instance(FIXTURES / "string_rgrg.tsv")
    result = three_string_approx(inst)
    assert result.rounds == 1
    assert result.cover.to_ids(inst) == ["v1", "v2", "v3"]
    assert result.cost == 3
    entry = result.trace.entries[0]
    assert entry.witness.tag is CaseTag.CASE1
    assert entry.witness.triple == (0, 1, 2)
    assert entry.epsilon == 1

    _, opt = exact_opt(inst)
    assert opt == 1
    assert result.cost <= 3 * opt


def test_three_approx_keeps_heavy_vertices():
    inst = make_string(["R", "G", "R"], [2, 1, 2])
    result = three_string_approx(inst)
    assert result.cover.to_ids(inst) == ["v2"]
    assert result.cost == 1
    assert result.trace.entries[0].zeroed == frozenset({"v2"})


def test_three_approx_convex_input():
    inst = make_string(["R", "R", "G"])
    result = three_string_approx(inst)
    assert result.rounds == 0
    assert result.cost == 0


@pytest.mark.parametrize("seed", range(25))
def test_string_ratios_against_oracle(seed):
    """Test both string algorithms against the exact optimum on random paths"""
    params = GenParams(n=3 + seed % 7, c=2 + seed % 3, weight_max=5, shape=GenShape.PATH,
                       zero_weight_fraction=Fraction(1, 5) if seed % 2 else Fraction(0), seed=seed)
    inst = gen_instance(params)
    _, opt = exact_opt(inst)

    two = two_approx_string(inst)
    assert is_convex(inst, two.coloring)
    assert two.cost == recoloring_cost(inst, two.coloring)
    assert two.cost <= lower_bound(inst).sum_p_star
    assert two.cost <= 2 * opt, f"seed {seed}: cost {two.cost} vs OPT {opt}"

    three = three_string_approx(inst)
    assert is_cover(inst, three.cover)
    assert three.cost <= 3 * opt, f"seed {seed}: cost {three.cost} vs OPT {opt}"


# ============================================================================
# SEEDED SWEEPS
# ============================================================================

@pytest.mark.parametrize("block", range(10))
def test_string_sweep_against_oracle(block):
    """Test 1000 random strings with n <= 14, c <= 4 and weights <= 8"""
    for seed in range(block * 100, (block + 1) * 100):
        rng = np.random.default_rng(seed)
        params = GenParams(n=int(rng.integers(1, 15)), c=int(rng.integers(1, 5)), weight_max=8,
                           shape=GenShape.PATH, zero_weight_fraction=Fraction(int(rng.integers(0, 3)), 8),
                           seed=seed)
        inst = gen_instance(params)
        _, opt = exact_opt(inst)

        two = two_approx_string(inst)
        assert is_convex(inst, two.coloring), f"seed {seed}"
        assert two.cost <= lower_bound(inst).sum_p_star, f"seed {seed}"
        assert two.cost <= 2 * opt, f"seed {seed}: cost {two.cost} vs OPT {opt}"

        three = three_string_approx(inst)
        assert is_cover(inst, three.cover), f"seed {seed}"
        assert three.cost <= 3 * opt, f"seed {seed}: cost {three.cost} vs OPT {opt}"


def best_time(algorithm, inst, repeats=5):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        algorithm(inst)
        times.append(time.perf_counter() - start)
    return min(times)


def test_two_approx_scales_near_linearly():
    """Test that the sweep stays near-linear as the string length doubles"""
    times = [best_time(two_approx_string, gen_instance(GenParams(n=n, c=4, shape=GenShape.PATH, seed=n)))
             for n in (1000, 2000, 4000)]
    for smaller, larger in zip(times, times[1:]):
        assert larger <= 4 * smaller, f"doubling n took {larger / smaller:.1f}x longer: {times}"


if __name__ == "__main__":
    test_two_approx_small()
    test_two_approx_weighted()
    test_three_approx_alternating()
    test_three_approx_keeps_heavy_vertices()
    for s in range(25):
        test_string_ratios_against_oracle(s)
    print("✓ All string approximation tests passed")
