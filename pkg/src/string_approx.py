"""
Approximation algorithms for convex recoloring of strings
"""

from fractions import Fraction
from typing import Collection, List, Optional, Tuple

from models import (
    Instance, InstanceKind, InstanceError, InvariantViolation,
    Coloring, Cover, ApproxResult, CaseWitness, CaseTag, TraceEntry, ReductionTrace
)
from instance_core import is_convex, is_cover, overwritten_set, recoloring_cost
from penalty import lower_bound


def _require_string(inst: Instance):
    if inst.kind is not InstanceKind.STRING:
        raise InstanceError("string algorithms require a string instance")


def _heaviest_color(inst: Instance) -> str:
    if not inst.palette:
        raise InstanceError("instance uses no colors")
    totals = {d: Fraction(0) for d in inst.palette}
    for w, c in zip(inst.weights, inst.colors):
        if c is not None:
            totals[c] += w
    best = inst.palette[0]
    for d in inst.palette[1:]:
        if totals[d] > totals[best]:
            best = d
    return best


def two_approx_string(inst: Instance) -> ApproxResult:
    """
    2-approximation for strings from per-color best blocks

    Sweeps left to right keeping the current color while it still covers the
    vertex (or nothing does), switching to the smallest covering color otherwise.
    The cost is at most sum(p*) <= 2 * OPT.
    """
    _require_string(inst)
    report = lower_bound(inst)

    covering: List[List[str]] = [[] for _ in range(inst.n)]
    for d in sorted(report.per_color):
        for v in report.per_color[d].best_block:
            covering[v].append(d)

    covered = [v for v in range(inst.n) if covering[v]]
    if not covered:
        assignment = [_heaviest_color(inst)] * inst.n
    else:
        current = covering[covered[0]][0]
        assignment = []
        for options in covering:
            if options and current not in options:
                current = options[0]
            assignment.append(current)

    coloring = Coloring(tuple(assignment))
    if not is_convex(inst, coloring):
        raise InvariantViolation("string sweep produced a non-convex coloring")
    cost = recoloring_cost(inst, coloring)
    if cost > report.sum_p_star:
        raise InvariantViolation(f"string sweep cost {cost} exceeds penalty sum {report.sum_p_star}")
    return ApproxResult(
        algorithm="string2",
        cover=Cover(overwritten_set(inst, coloring)),
        cost=cost,
        coloring=coloring,
    )


def find_string_violation(inst: Instance, support: Collection[int]) -> Optional[Tuple[int, int, int]]:
    """
    Find support vertices x < y < z with C(x) = C(z) != C(y)

    Returns None exactly when the vertices outside `support` form a cover.
    """
    last_seen = {}
    previous = None
    for v in range(inst.n):
        c = inst.colors[v]
        if v not in support or c is None:
            continue
        if previous is not None and inst.colors[previous] != c and c in last_seen:
            return last_seen[c], previous, v
        last_seen[c] = v
        previous = v
    return None


def three_string_approx(inst: Instance) -> ApproxResult:
    """
    Local-ratio 3-approximation for strings

    Each round lowers the three witnesses of a violation by their minimum
    weight; the vertices whose weight reaches zero form the cover.
    """
    _require_string(inst)
    base = inst.derived_domain()
    weights = list(base.weights)
    support = set(base.support())
    budget = len(support)
    entries = []

    while True:
        triple = find_string_violation(base, support)
        if triple is None:
            break
        if len(entries) >= budget:
            raise InvariantViolation("string reduction did not terminate")
        epsilon = min(weights[v] for v in triple)
        zeroed = set()
        for v in triple:
            weights[v] -= epsilon
            if weights[v] == 0:
                support.discard(v)
                zeroed.add(base.ids[v])
        entries.append(TraceEntry(
            round=len(entries),
            witness=CaseWitness(tag=CaseTag.CASE1, triple=triple),
            before=base,
            after=base,
            epsilon=epsilon,
            zeroed=frozenset(zeroed),
        ))

    cover = Cover(frozenset(v for v in range(base.n) if v not in support))
    if not is_cover(base, cover):
        raise InvariantViolation("string reduction left a violation")
    return ApproxResult(
        algorithm="string3",
        cover=cover,
        cost=cover.weight(base),
        trace=ReductionTrace(entries),
        rounds=len(entries),
    )
