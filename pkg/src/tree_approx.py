"""
Local-ratio approximation algorithms for convex recoloring of trees

The 3-approximation classifies each round into one of four cases, reduces the
instance accordingly and, once the remaining support is convex, maps the
trivial cover back through the recorded reductions in reverse.
"""

from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from models import (
    Instance, InstanceKind, InstanceError, InvariantViolation,
    Coloring, Cover, ApproxResult, CaseTag, CaseWitness, GadgetRecord,
    TraceEntry, ReductionTrace
)
from instance_core import complete_to_convex, is_cover
from tree_utils import RootedTree, branch_labels


def _support_terminals(inst: Instance) -> Dict[str, List[int]]:
    terminals: Dict[str, List[int]] = {}
    for v in range(inst.n):
        if inst.in_support(v):
            terminals.setdefault(inst.colors[v], []).append(v)
    return terminals


def _carriers(rooted: RootedTree, terminals: Dict[str, List[int]], n: int):
    """Carrier tops per color and, per vertex, the colors whose carrier contains it"""
    tops: Dict[str, int] = {}
    through: List[List[str]] = [[] for _ in range(n)]
    for d in sorted(terminals):
        spanning, top = rooted.carrier(terminals[d])
        tops[d] = top
        for v in spanning:
            through[v].append(d)
    return tops, through


def _separated_pair(labels: List[int], terminals: Sequence[int]) -> Tuple[int, int]:
    """Smallest terminal plus the smallest one in a different branch around the center"""
    ordered = sorted(terminals)
    first = ordered[0]
    for t in ordered[1:]:
        if labels[t] != labels[first]:
            return first, t
    raise InvariantViolation("carrier through the center has terminals on one side only")


def classify_case(inst: Instance) -> CaseWitness:
    """
    Classify the support coloring of an instance

    Cover when the support carriers are disjoint. Otherwise Case1 if a support
    vertex lies in a foreign carrier, Case2 if some vertex lies in three
    carriers, and Case3a/Case3b for the deepest carrier top (rooted at vertex 0).
    """
    if inst.n == 0:
        return CaseWitness(tag=CaseTag.COVER)
    rooted = RootedTree(inst, 0)
    terminals = _support_terminals(inst)
    tops, through = _carriers(rooted, terminals, inst.n)

    if all(len(colors) <= 1 for colors in through):
        return CaseWitness(tag=CaseTag.COVER)

    for y in range(inst.n):
        if inst.in_support(y) and len(through[y]) >= 2:
            d = next(c for c in through[y] if c != inst.colors[y])
            x, z = _separated_pair(branch_labels(inst, y), terminals[d])
            return CaseWitness(tag=CaseTag.CASE1, triple=(x, y, z))

    for v in range(inst.n):
        if len(through[v]) >= 3:
            labels = branch_labels(inst, v)
            pairs = tuple(_separated_pair(labels, terminals[d]) for d in through[v][:3])
            return CaseWitness(tag=CaseTag.CASE2, center=v, pairs=pairs)

    d0 = None
    for d in sorted(terminals):
        if d0 is None or rooted.depth[tops[d]] > rooted.depth[tops[d0]]:
            d0 = d
    r = tops[d0]
    subtree = frozenset(rooted.subtree_vertices(r))
    inside = sorted({inst.colors[v] for v in subtree if inst.in_support(v)})
    if inside == [d0]:
        return CaseWitness(tag=CaseTag.CASE3A, subtree_root=r, color=d0,
                           parent=rooted.parent[r], subtree=subtree)
    if len(inside) != 2 or d0 not in inside:
        raise InvariantViolation(f"subtree below {inst.ids[r]} holds colors {inside}")
    if inst.in_support(r):
        raise InvariantViolation(f"carrier top {inst.ids[r]} has positive weight")
    d_prime = inside[0] if inside[1] == d0 else inside[1]
    return CaseWitness(tag=CaseTag.CASE3B, subtree_root=r, color=d0, other_color=d_prime,
                       parent=rooted.parent[r], subtree=subtree)


def bicolored_constrained_opt(inst: Instance, root: int, root_color: str,
                              other_color: Optional[str] = None) -> Tuple[Coloring, Fraction]:
    """
    Cheapest convex recoloring of a two-colored tree with the root fixed to `root_color`

    The other color, if used, occupies exactly one subtree T(v) with v != root,
    so a single pass over subtree sums compares every candidate.

    Returns:
        (total coloring, cost); ties keep the split-free coloring, then the first v in pre-order
    """
    if not 0 <= root < inst.n:
        raise InstanceError(f"root index {root} out of range")
    present = {inst.colors[v] for v in range(inst.n) if inst.in_support(v)}
    if other_color is None:
        others = sorted(present - {root_color})
        if len(others) > 1:
            raise InstanceError(f"tree uses more than two colors: {sorted(present)}")
        other_color = others[0] if others else None
    elif present - {root_color, other_color}:
        raise InstanceError(f"tree uses colors outside {{{root_color}, {other_color}}}")

    rooted = RootedTree(inst, root)
    own = [inst.weights[v] if inst.in_support(v) and inst.colors[v] == root_color else Fraction(0)
           for v in range(inst.n)]
    foreign = [inst.weights[v] if inst.in_support(v) and inst.colors[v] == other_color else Fraction(0)
               for v in range(inst.n)]
    own_sums = rooted.subtree_sums(own)
    foreign_sums = rooted.subtree_sums(foreign)
    total_foreign = foreign_sums[root]

    best_cost = total_foreign
    best_split = None
    if other_color is not None:
        for v in rooted.order:
            if v == root:
                continue
            cost = own_sums[v] + total_foreign - foreign_sums[v]
            if cost < best_cost:
                best_cost = cost
                best_split = v

    assignment = [root_color] * inst.n
    if best_split is not None:
        for v in rooted.subtree_vertices(best_split):
            assignment[v] = other_color
    return Coloring(tuple(assignment)), best_cost


def _induced(inst: Instance, keep: Sequence[int], extra_vertices=(), extra_edges=()) -> Instance:
    """
    Sub-instance on `keep` (in index order) plus appended vertices

    Args:
        extra_vertices: (id, weight, color) triples
        extra_edges: pairs of external ids
    """
    keep = sorted(keep)
    local = {v: i for i, v in enumerate(keep)}
    ids = [inst.ids[v] for v in keep]
    weights = [inst.weights[v] for v in keep]
    colors = [inst.colors[v] for v in keep]
    for vid, weight, color in extra_vertices:
        ids.append(vid)
        weights.append(weight)
        colors.append(color)
    edges = [(local[u], local[v]) for u, v in inst.edges if u in local and v in local]
    position = {vid: i for i, vid in enumerate(ids)}
    for a, b in extra_edges:
        edges.append(tuple(sorted((position[a], position[b]))))
    return Instance(ids=tuple(ids), edges=tuple(sorted(edges)), weights=tuple(weights),
                    colors=tuple(colors), kind=InstanceKind.TREE, palette=inst.palette)


def _fresh_id(inst: Instance, base: str) -> str:
    candidate = base
    while candidate in inst.index_of:
        candidate += "'"
    return candidate


def compute_gadget(inst: Instance, witness: CaseWitness) -> GadgetRecord:
    """
    Costs and overwrite sets of the three reference recolorings of a Case-3b subtree

    C_high recolors every d' vertex to d0, C_medium is the cheaper of C_high and
    the best recoloring with the root colored d', C_min is the overall optimum.

    Raises:
        InstanceError: If the witness does not satisfy the Case-3b conditions
    """
    if witness.tag is not CaseTag.CASE3B:
        raise InstanceError(f"gadget needs a Case3b witness, got {witness.tag.value}")
    d0, d_prime, r = witness.color, witness.other_color, witness.subtree_root
    subtree = sorted(witness.subtree)

    inside = {inst.colors[v] for v in subtree if inst.in_support(v)}
    if not inside <= {d0, d_prime}:
        raise InstanceError(f"subtree uses colors {sorted(inside)} beyond {d0}, {d_prime}")
    if any(inst.in_support(v) and inst.colors[v] == d0 for v in range(inst.n) if v not in witness.subtree):
        raise InstanceError(f"color {d0} appears outside the reduced subtree")
    if inst.in_support(r):
        raise InstanceError(f"subtree root {inst.ids[r]} has positive weight")

    sub = _induced(inst, subtree)
    root_local = sub.index_of[inst.ids[r]]

    def overwritten(col: Coloring) -> frozenset:
        return frozenset(sub.ids[v] for v in range(sub.n) if sub.in_support(v) and col[v] != sub.colors[v])

    x_high = frozenset(sub.ids[v] for v in range(sub.n) if sub.in_support(v) and sub.colors[v] == d_prime)
    c_high = sum((sub.weights[sub.index_of[vid]] for vid in x_high), Fraction(0))
    col_d0, cost_d0 = bicolored_constrained_opt(sub, root_local, d0, d_prime)
    col_dp, cost_dp = bicolored_constrained_opt(sub, root_local, d_prime, d0)

    if cost_d0 <= cost_dp:
        c_min, x_min = cost_d0, overwritten(col_d0)
    else:
        c_min, x_min = cost_dp, overwritten(col_dp)
    if c_high <= cost_dp:
        c_medium, x_medium = c_high, x_high
    else:
        c_medium, x_medium = cost_dp, overwritten(col_dp)

    if not c_min <= c_medium <= c_high:
        raise InvariantViolation(f"gadget costs out of order: {c_high}, {c_medium}, {c_min}")

    root_id = inst.ids[r]
    return GadgetRecord(
        d0=d0, d_prime=d_prime,
        c_high=c_high, c_medium=c_medium, c_min=c_min,
        x_high=x_high, x_medium=x_medium, x_min=x_min,
        root_id=root_id, v0_id=_fresh_id(inst, f"{root_id}~v0"),
        removed=frozenset(sub.ids),
    )


def reduce(inst: Instance, witness: CaseWitness, round_index: int = 0) -> Tuple[Instance, TraceEntry]:
    """
    Apply one reduction step

    Case1, Case2 and Pairs rounds lower the designated vertices by their minimum
    weight and uncolor those reaching zero. Case3a deletes the subtree, Case3b
    replaces it by the two-vertex gadget.
    """
    tag = witness.tag
    if tag is CaseTag.COVER:
        raise InstanceError("a cover needs no reduction")

    if tag in (CaseTag.CASE1, CaseTag.CASE2, CaseTag.PAIRS):
        designated = witness.designated()
        epsilon = min(inst.weights[v] for v in designated)
        if epsilon <= 0:
            raise InvariantViolation("designated vertex outside the support")
        weights = list(inst.weights)
        colors = list(inst.colors)
        zeroed = set()
        for v in designated:
            weights[v] -= epsilon
            if weights[v] == 0:
                colors[v] = None
                zeroed.add(inst.ids[v])
        reduced = inst.with_weights_and_colors(weights, colors)
        return reduced, TraceEntry(round=round_index, witness=witness, before=inst, after=reduced,
                                   epsilon=epsilon, zeroed=frozenset(zeroed))

    keep = [v for v in range(inst.n) if v not in witness.subtree]
    removed = frozenset(inst.ids[v] for v in witness.subtree)
    if tag is CaseTag.CASE3A:
        reduced = _induced(inst, keep)
        return reduced, TraceEntry(round=round_index, witness=witness, before=inst, after=reduced,
                                   removed=removed)

    gadget = compute_gadget(inst, witness)
    root_weight, v0_weight = gadget.root_weight, gadget.v0_weight
    extra_vertices = [
        (gadget.root_id, root_weight, gadget.d0 if root_weight > 0 else None),
        (gadget.v0_id, v0_weight, gadget.d_prime if v0_weight > 0 else None),
    ]
    extra_edges = [(gadget.root_id, gadget.v0_id)]
    if witness.parent is not None:
        extra_edges.append((inst.ids[witness.parent], gadget.root_id))
    reduced = _induced(inst, keep, extra_vertices, extra_edges)
    return reduced, TraceEntry(round=round_index, witness=witness, before=inst, after=reduced,
                               gadget=gadget, removed=removed)


def update(x_prime: Cover, entry: TraceEntry) -> Cover:
    """
    Map a cover of the reduced instance back to the instance the round started from

    Raises:
        InstanceError: If `x_prime` is not a cover of the reduced instance
    """
    before, after = entry.before, entry.after
    if not is_cover(after, x_prime):
        raise InstanceError(f"round {entry.round}: cover of the reduced instance is invalid")
    chosen_ids = {after.ids[v] for v in x_prime.members}
    tag = entry.witness.tag

    if tag in (CaseTag.CASE1, CaseTag.CASE2, CaseTag.PAIRS):
        members = {before.index_of[vid] for vid in chosen_ids}
        if not is_cover(before, Cover(frozenset(members))):
            members |= {before.index_of[vid] for vid in entry.zeroed}
        return Cover(frozenset(members))

    if tag is CaseTag.CASE3A:
        return Cover(frozenset(before.index_of[vid] for vid in chosen_ids))

    gadget = entry.gadget
    in_gadget = chosen_ids & {gadget.root_id, gadget.v0_id}
    # the root only ever carries d0, so v0 decides when both are chosen
    if gadget.v0_id in in_gadget:
        overwrite = gadget.x_high
    elif gadget.root_id in in_gadget:
        overwrite = gadget.x_medium
    else:
        overwrite = gadget.x_min

    kept = chosen_ids - {gadget.root_id, gadget.v0_id}
    return Cover(frozenset(before.index_of[vid] for vid in kept | overwrite))


def _outside_support(inst: Instance) -> Cover:
    return Cover(frozenset(v for v in range(inst.n) if not inst.in_support(v)))


def three_tree_approx(inst: Instance) -> ApproxResult:
    """
    Local-ratio 3-approximation for trees

    Returns a cover, its nearest-carrier completion and the cover's weight.
    """
    base = inst.derived_domain()
    current = base
    entries: List[TraceEntry] = []
    budget = len(base.support())

    while True:
        witness = classify_case(current)
        if witness.tag is CaseTag.COVER:
            break
        if len(entries) >= budget:
            raise InvariantViolation(f"reduction exceeded {budget} rounds")
        reduced, entry = reduce(current, witness, len(entries))
        if len(reduced.support()) >= len(current.support()):
            raise InvariantViolation(f"round {len(entries)} ({witness.tag.value}) did not shrink the support")
        entries.append(entry)
        current = reduced

    cover = _outside_support(current)
    for entry in reversed(entries):
        cover = update(cover, entry)

    if not is_cover(base, cover):
        raise InvariantViolation("unwound cover leaves the coloring non-convex")
    coloring = complete_to_convex(base, base.coloring().without(cover.members))
    return ApproxResult(
        algorithm="tree3",
        cover=cover,
        cost=cover.weight(base),
        coloring=coloring,
        trace=ReductionTrace(entries),
        rounds=len(entries),
    )


def find_intersecting_pairs(inst: Instance) -> Optional[CaseWitness]:
    """
    Witness of two intersecting support carriers, or None when they are disjoint

    The center is the first vertex lying in two carriers; each of its first two
    colors contributes the center itself if it is a terminal of that color,
    otherwise two terminals on different sides of it.
    """
    if inst.n == 0:
        return None
    rooted = RootedTree(inst, 0)
    terminals = _support_terminals(inst)
    _, through = _carriers(rooted, terminals, inst.n)
    for v in range(inst.n):
        if len(through[v]) >= 2:
            labels = branch_labels(inst, v)
            pairs = []
            for d in through[v][:2]:
                if inst.in_support(v) and inst.colors[v] == d:
                    pairs.append((v, v))
                else:
                    pairs.append(_separated_pair(labels, terminals[d]))
            return CaseWitness(tag=CaseTag.PAIRS, center=v, pairs=tuple(pairs))
    return None


def four_tree_approx(inst: Instance) -> ApproxResult:
    """
    Local-ratio 4-approximation for trees built on intersecting carrier pairs
    """
    base = inst.derived_domain()
    current = base
    entries: List[TraceEntry] = []
    budget = len(base.support())

    while True:
        witness = find_intersecting_pairs(current)
        if witness is None:
            break
        if len(entries) >= budget:
            raise InvariantViolation(f"reduction exceeded {budget} rounds")
        current, entry = reduce(current, witness, len(entries))
        entries.append(entry)

    cover = _outside_support(current)
    if not is_cover(base, cover):
        raise InvariantViolation("pair reduction left intersecting carriers")
    return ApproxResult(
        algorithm="tree4",
        cover=cover,
        cost=cover.weight(base),
        trace=ReductionTrace(entries),
        rounds=len(entries),
    )
