"""
Rooted views of an instance tree
"""

from typing import List, Optional, Set, Tuple, Iterable

from models import Instance


class RootedTree:
    """Parent, depth and pre-order of an instance rooted at one vertex"""

    def __init__(self, inst: Instance, root: int = 0):
        n = inst.n
        self.root = root
        self.parent: List[Optional[int]] = [None] * n
        self.depth = [0] * n
        self.children: List[List[int]] = [[] for _ in range(n)]
        self.order: List[int] = []

        seen = [False] * n
        seen[root] = True
        stack = [root]
        while stack:
            v = stack.pop()
            self.order.append(v)
            for u in inst.adjacency[v]:
                if not seen[u]:
                    seen[u] = True
                    self.parent[u] = v
                    self.depth[u] = self.depth[v] + 1
                    self.children[v].append(u)
            # smallest child is visited first
            stack.extend(reversed(self.children[v]))

        self.tin = [0] * n
        for i, v in enumerate(self.order):
            self.tin[v] = i
        self.size = [1] * n
        for v in reversed(self.order):
            p = self.parent[v]
            if p is not None:
                self.size[p] += self.size[v]

    def post_order(self) -> List[int]:
        """Every vertex after all of its descendants"""
        return list(reversed(self.order))

    def in_subtree(self, u: int, v: int) -> bool:
        """True if u lies in the subtree rooted at v"""
        return self.tin[v] <= self.tin[u] < self.tin[v] + self.size[v]

    def subtree_vertices(self, v: int) -> List[int]:
        return self.order[self.tin[v]:self.tin[v] + self.size[v]]

    def subtree_sums(self, values: List) -> List:
        """Sum of `values` over each subtree"""
        sums = list(values)
        for v in reversed(self.order):
            p = self.parent[v]
            if p is not None:
                sums[p] = sums[p] + sums[v]
        return sums

    def carrier(self, members: Iterable[int]) -> Tuple[Set[int], Optional[int]]:
        """
        Minimal subtree spanning `members`

        Returns:
            (carrier vertices, topmost carrier vertex); (empty set, None) if no members
        """
        marks = [0] * len(self.order)
        total = 0
        for v in set(members):
            marks[v] = 1
            total += 1
        if total == 0:
            return set(), None

        counts = self.subtree_sums(marks)
        top = self.root
        for v in range(len(counts)):
            if counts[v] == total and self.depth[v] > self.depth[top]:
                top = v
        carrier = {v for v, cnt in enumerate(counts) if cnt > 0 and (cnt < total or v == top)}
        return carrier, top


def branch_labels(inst: Instance, center: int) -> List[int]:
    """
    Label every vertex by the neighbor of `center` whose branch contains it

    `center` itself is labelled -1.
    """
    labels = [-1] * inst.n
    for u in inst.adjacency[center]:
        labels[u] = u
        stack = [u]
        while stack:
            v = stack.pop()
            for w in inst.adjacency[v]:
                if w != center and labels[w] == -1:
                    labels[w] = u
                    stack.append(w)
    return labels


def induces_connected(inst: Instance, vertices: Iterable[int]) -> bool:
    """True if `vertices` induce a connected subgraph (the empty set counts as connected)"""
    vertex_set = set(vertices)
    if not vertex_set:
        return True
    start = min(vertex_set)
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for u in inst.adjacency[v]:
            if u in vertex_set and u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(vertex_set)
