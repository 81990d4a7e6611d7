"""
Exact minimum-weight covers by branch and bound, for small instances
"""

from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from models import Instance, InstanceError, Coloring, Cover
from instance_core import has_disjoint_carriers, complete_to_convex, is_expanding, recoloring_cost
from tree_utils import RootedTree
from cache_manager import OracleCache


DEFAULT_CAP = 16


def _search(inst: Instance, cap: int, collect_all: bool) -> Tuple[Fraction, List[Tuple[int, ...]]]:
    """
    Depth-first search over keep/remove decisions of the colored vertices

    A branch is cut as soon as the kept vertices stop being convex or the
    removed weight exceeds the best cover found so far.

    Returns:
        (optimal weight, optimal covers as sorted index tuples)
    """
    if inst.n > cap:
        raise InstanceError(f"instance has {inst.n} vertices; exact search is capped at {cap}")

    rooted = RootedTree(inst)
    colored = [v for v in range(inst.n) if inst.colors[v] is not None]
    kept: List[Optional[str]] = [None] * inst.n
    best = [inst.weight_of(colored)]
    optima: List[Tuple[int, ...]] = []

    def visit(i: int, removed_weight: Fraction, removed: List[int]):
        if removed_weight > best[0]:
            return
        if i == len(colored):
            found = tuple(sorted(removed))
            if removed_weight < best[0] or not optima:
                best[0] = removed_weight
                optima[:] = [found]
            elif collect_all:
                optima.append(found)
            elif found < optima[0]:
                optima[0] = found
            return

        v = colored[i]
        kept[v] = inst.colors[v]
        if has_disjoint_carriers(inst, Coloring(tuple(kept)), rooted):
            visit(i + 1, removed_weight, removed)
        kept[v] = None

        removed.append(v)
        visit(i + 1, removed_weight + inst.weights[v], removed)
        removed.pop()

    visit(0, Fraction(0), [])
    return best[0], optima


def exact_opt(inst: Instance, cap: int = DEFAULT_CAP, cache: Optional[OracleCache] = None) -> Tuple[Cover, Fraction]:
    """
    Minimum-weight cover and OPT

    Ties are broken by the lexicographically smallest sorted index tuple.

    Raises:
        InstanceError: If the instance has more than `cap` vertices
    """
    if inst.n > cap:
        raise InstanceError(f"instance has {inst.n} vertices; exact search is capped at {cap}")
    if cache is not None:
        cached = cache.get(inst, cap)
        if cached is not None:
            ids, opt = cached
            return Cover.from_ids(inst, ids), opt

    opt, optima = _search(inst, cap, collect_all=False)
    cover = Cover(frozenset(optima[0]))
    if cache is not None:
        cache.set(inst, cap, cover.to_ids(inst), opt)
    return cover, opt


def enumerate_optima(inst: Instance, cap: int = DEFAULT_CAP) -> List[Cover]:
    """All minimum-weight covers, in lexicographic order"""
    _, optima = _search(inst, cap, collect_all=True)
    return [Cover(frozenset(found)) for found in sorted(set(optima))]


def min_cover_weight(inst: Instance, weights: Sequence[Fraction], cap: int = DEFAULT_CAP) -> Fraction:
    """Smallest weight of a cover of `inst` measured with another weight function"""
    if len(weights) != inst.n:
        raise InstanceError(f"expected {inst.n} weights, got {len(weights)}")
    if any(w < 0 for w in weights):
        raise InstanceError("weights must be non-negative")
    _, opt = exact_opt(inst.with_weights_and_colors(weights, inst.colors), cap)
    return opt


def has_expanding_optimum(inst: Instance, cap: int = DEFAULT_CAP) -> bool:
    """True if some optimal convex recoloring keeps an original color in each of its blocks"""
    _, opt = exact_opt(inst, cap)
    for cover in enumerate_optima(inst, cap):
        recoloring = complete_to_convex(inst, inst.coloring().without(cover.members))
        if recoloring_cost(inst, recoloring) == opt and is_expanding(inst, recoloring):
            return True
    return False
