"""
Penalties of color blocks and the penalty lower bound on the optimal recoloring cost
"""

from fractions import Fraction
from typing import Iterable, List

from models import (
    Instance, InstanceKind, InstanceError, Coloring, BlockChoice, PenaltyReport
)
from instance_core import is_convex
from tree_utils import RootedTree, induces_connected


def _gains(inst: Instance, d: str) -> List[Fraction]:
    # overwriting an uncolored vertex is free
    return [Fraction(0) if c is None else (w if c == d else -w) for w, c in zip(inst.weights, inst.colors)]


def _color_weight(inst: Instance, d: str) -> Fraction:
    return sum((w for w, c in zip(inst.weights, inst.colors) if c == d), Fraction(0))


def penalty_of_set(inst: Instance, d: str, vertices: Iterable[int]) -> Fraction:
    """
    Cost of making `vertices` the block of color d

    Colored non-d vertices inside pay their weight, d vertices outside pay
    theirs. Uncolored vertices pay nothing.

    Raises:
        InstanceError: If the set is non-empty and not connected
    """
    block = set(vertices)
    if not induces_connected(inst, block):
        raise InstanceError(f"block for color {d!r} is not connected")
    inside = sum((inst.weights[v] for v in block
                  if inst.colors[v] is not None and inst.colors[v] != d), Fraction(0))
    outside = sum((inst.weights[v] for v in range(inst.n)
                   if v not in block and inst.colors[v] == d), Fraction(0))
    return inside + outside


def penalty_of_recoloring(inst: Instance, recoloring: Coloring) -> Fraction:
    """
    Sum of block penalties of a total convex recoloring (equals twice its cost)

    Raises:
        InstanceError: If the recoloring is partial or not convex
    """
    if not recoloring.is_total:
        raise InstanceError("penalty is defined for total recolorings only")
    if not is_convex(inst, recoloring):
        raise InstanceError("recoloring is not convex")
    blocks = recoloring.classes()
    total = Fraction(0)
    for d in sorted(set(inst.palette) | set(blocks)):
        total += penalty_of_set(inst, d, blocks.get(d, []))
    return total


def best_block_string(inst: Instance, d: str) -> BlockChoice:
    """
    Interval minimizing the penalty of color d on a string

    A maximum-sum scan over gains (+w for d, -w for other colors, 0 for
    uncolored vertices). The empty block is allowed; the leftmost interval wins ties.
    """
    if inst.kind is not InstanceKind.STRING:
        raise InstanceError("best_block_string requires a string instance")
    best_gain = Fraction(0)
    best = None
    current = Fraction(0)
    start = 0
    for i, gain in enumerate(_gains(inst, d)):
        if current <= 0:
            current = gain
            start = i
        else:
            current += gain
        if current > best_gain:
            best_gain = current
            best = (start, i)

    block = frozenset(range(best[0], best[1] + 1)) if best is not None else frozenset()
    return BlockChoice(color=d, best_block=block, p_star=_color_weight(inst, d) - best_gain, interval=best)


def best_block_tree(inst: Instance, d: str) -> BlockChoice:
    """
    Connected subtree minimizing the penalty of color d

    Rooted at vertex 0; best_down(v) is the best gain of a subtree topped at v.
    The first maximizer in traversal order wins ties.
    """
    rooted = RootedTree(inst, 0)
    gains = _gains(inst, d)
    best_down = [Fraction(0)] * inst.n
    best_gain = Fraction(0)
    best_top = None
    for v in rooted.post_order():
        value = gains[v]
        for child in rooted.children[v]:
            if best_down[child] > 0:
                value += best_down[child]
        best_down[v] = value
        if value > best_gain:
            best_gain = value
            best_top = v

    block = set()
    if best_top is not None:
        stack = [best_top]
        while stack:
            v = stack.pop()
            block.add(v)
            stack.extend(child for child in rooted.children[v] if best_down[child] > 0)
    return BlockChoice(color=d, best_block=frozenset(block), p_star=_color_weight(inst, d) - best_gain)


def lower_bound(inst: Instance) -> PenaltyReport:
    """
    Per-color best blocks and the bound sum(p*) / 2 <= OPT
    """
    finder = best_block_string if inst.kind is InstanceKind.STRING else best_block_tree
    per_color = {d: finder(inst, d) for d in inst.palette}
    total = sum((choice.p_star for choice in per_color.values()), Fraction(0))
    return PenaltyReport(per_color=per_color, sum_p_star=total, lower_bound=total / 2)
