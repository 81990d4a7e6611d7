"""
Core predicates on colored trees: blocks, carriers, convexity, covers and completion
"""

from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Set

from models import Coloring, Cover, Instance, InstanceError
from tree_utils import RootedTree


def count_blocks(inst: Instance, col: Coloring, d: str) -> int:
    """Number of maximal connected components of vertices colored d"""
    members = sum(1 for c in col.assignment if c == d)
    inner = sum(1 for u, v in inst.edges if col[u] == d and col[v] == d)
    return members - inner


def violations(inst: Instance, col: Coloring) -> int:
    """Sum over used colors of (blocks - 1); zero exactly for convex total colorings"""
    members: Dict[str, int] = {}
    for c in col.assignment:
        if c is not None:
            members[c] = members.get(c, 0) + 1
    for u, v in inst.edges:
        if col[u] is not None and col[u] == col[v]:
            members[col[u]] -= 1
    return sum(blocks - 1 for blocks in members.values())


def carrier(inst: Instance, vertices: Iterable[int]) -> Set[int]:
    """Vertex set of the minimal subtree containing `vertices`"""
    vertex_set = set(vertices)
    if not vertex_set:
        return set()
    spanning, _ = RootedTree(inst, min(vertex_set)).carrier(vertex_set)
    return spanning


def is_block_convex(inst: Instance, col: Coloring) -> bool:
    return violations(inst, col) == 0


def has_disjoint_carriers(inst: Instance, col: Coloring, rooted: Optional[RootedTree] = None) -> bool:
    """True if the carriers of the color classes are pairwise disjoint"""
    if rooted is None:
        if inst.n == 0:
            return True
        rooted = RootedTree(inst)
    owner: List[Optional[str]] = [None] * inst.n
    for d, members in col.classes().items():
        spanning, _ = rooted.carrier(members)
        for v in spanning:
            if owner[v] is not None:
                return False
            owner[v] = d
    return True


def is_convex(inst: Instance, col: Coloring) -> bool:
    """
    Convexity of a coloring

    Total colorings use the block criterion, partial ones the carrier criterion.
    """
    if len(col) != inst.n:
        raise InstanceError(f"coloring has {len(col)} entries for {inst.n} vertices")
    if col.is_total:
        return is_block_convex(inst, col)
    return has_disjoint_carriers(inst, col)


def is_cover(inst: Instance, cover: Cover) -> bool:
    """True if removing `cover` from the coloring domain leaves a convex partial coloring"""
    unknown = [v for v in cover.members if not 0 <= v < inst.n]
    if unknown:
        raise InstanceError(f"cover mentions unknown vertex indices {sorted(unknown)}")
    return has_disjoint_carriers(inst, inst.coloring().without(cover.members))


def complete_to_convex(inst: Instance, col: Coloring) -> Coloring:
    """
    Extend a convex partial coloring to a convex total coloring agreeing on its domain

    Carrier vertices take their carrier's color; the remaining vertices are filled
    layer by layer from the nearest colored vertex, smallest color first.

    Raises:
        InstanceError: If the partial coloring is not convex or there is no color to use
    """
    if not col.domain:
        if not inst.palette:
            raise InstanceError("cannot complete a coloring without any color")
        return Coloring(tuple(inst.palette[0] for _ in range(inst.n)))

    rooted = RootedTree(inst)
    if not has_disjoint_carriers(inst, col, rooted):
        raise InstanceError("partial coloring is not convex")

    assigned: List[Optional[str]] = [None] * inst.n
    for d, members in sorted(col.classes().items()):
        spanning, _ = rooted.carrier(members)
        for v in spanning:
            assigned[v] = d

    frontier = [v for v in range(inst.n) if assigned[v] is not None]
    while frontier:
        proposals: Dict[int, str] = {}
        for u in frontier:
            for v in inst.adjacency[u]:
                if assigned[v] is None:
                    current = proposals.get(v)
                    if current is None or assigned[u] < current:
                        proposals[v] = assigned[u]
        for v, d in proposals.items():
            assigned[v] = d
        frontier = sorted(proposals)

    return Coloring(tuple(assigned))


def overwritten_set(inst: Instance, recoloring: Coloring) -> FrozenSet[int]:
    """Colored vertices whose color the recoloring changes"""
    return frozenset(v for v in range(inst.n)
                     if inst.colors[v] is not None and recoloring[v] != inst.colors[v])


def recoloring_cost(inst: Instance, recoloring: Coloring) -> Fraction:
    return inst.weight_of(overwritten_set(inst, recoloring))


def is_expanding(inst: Instance, recoloring: Coloring) -> bool:
    """True if every block of the recoloring keeps at least one original color"""
    seen = [False] * inst.n
    for start in range(inst.n):
        if seen[start]:
            continue
        d = recoloring[start]
        seen[start] = True
        stack = [start]
        retained = False
        while stack:
            v = stack.pop()
            if inst.colors[v] is not None and inst.colors[v] == d:
                retained = True
            for u in inst.adjacency[v]:
                if not seen[u] and recoloring[u] == d:
                    seen[u] = True
                    stack.append(u)
        if not retained:
            return False
    return True
