"""
Seeded random instance generator
"""

from fractions import Fraction
from string import ascii_uppercase
from typing import List, Optional, Tuple

import networkx as nx
import numpy as np

from models import (
    Instance, InstanceKind, InstanceError, GenParams, GenShape
)


def palette_for(c: int) -> List[str]:
    if c <= len(ascii_uppercase):
        return list(ascii_uppercase[:c])
    return [f"C{i:03d}" for i in range(c)]


def minimum_size(shape: GenShape, c: int) -> int:
    """Smallest n the shape can be built with"""
    if shape is GenShape.CASE2_SPIDER:
        return 1 + 2 * c
    if shape is GenShape.CASE3B_FAMILY:
        return 6
    return 1


class InstanceGenerator:
    """Builds instances of a given shape from a PCG64 stream"""

    def __init__(self, params: GenParams):
        self._check(params)
        self.params = params
        self.rng = np.random.Generator(np.random.PCG64(params.seed))
        self.palette = palette_for(params.c)

    @staticmethod
    def _check(p: GenParams):
        if p.n < 1:
            raise InstanceError(f"n must be at least 1, got {p.n}")
        if p.c < 1:
            raise InstanceError(f"c must be at least 1, got {p.c}")
        if p.weight_max < 1:
            raise InstanceError(f"weight_max must be at least 1, got {p.weight_max}")
        if not 0 <= p.zero_weight_fraction <= 1:
            raise InstanceError(f"zero_weight_fraction must lie in [0, 1], got {p.zero_weight_fraction}")
        if p.shape is GenShape.CASE2_SPIDER and p.c < 3:
            raise InstanceError("case2-spider needs at least 3 colors")
        if p.shape is GenShape.CASE3B_FAMILY and p.c < 2:
            raise InstanceError("case3b-family needs at least 2 colors")
        if p.n < minimum_size(p.shape, p.c):
            raise InstanceError(
                f"{p.shape.value} with c={p.c} needs n >= {minimum_size(p.shape, p.c)}, got {p.n}"
            )

    def _weight(self) -> Fraction:
        return Fraction(int(self.rng.integers(1, self.params.weight_max + 1)))

    def _is_zero(self) -> bool:
        return self.params.zero_weight_fraction > 0 and self.rng.random() < self.params.zero_weight_fraction

    def _random_color(self) -> str:
        return self.palette[int(self.rng.integers(0, len(self.palette)))]

    def _random_labels(self, n: int) -> Tuple[List[Fraction], List[Optional[str]]]:
        weights, colors = [], []
        for _ in range(n):
            if self._is_zero():
                weights.append(Fraction(0))
                colors.append(None)
            else:
                weights.append(self._weight())
                colors.append(self._random_color())
        return weights, colors

    def generate(self) -> Instance:
        shape = self.params.shape
        if shape is GenShape.CASE2_SPIDER:
            edges, weights, colors = self._case2_spider()
        elif shape is GenShape.CASE3B_FAMILY:
            edges, weights, colors = self._case3b_family()
        else:
            edges = self._skeleton(shape)
            weights, colors = self._random_labels(self.params.n)

        if all(c is None for c in colors):
            weights[0] = self._weight()
            colors[0] = self._random_color()

        n = len(weights)
        kind = InstanceKind.STRING if shape is GenShape.PATH else InstanceKind.TREE
        return Instance(
            ids=tuple(f"v{i}" for i in range(n)),
            edges=tuple(sorted(edges)),
            weights=tuple(weights),
            colors=tuple(colors),
            kind=kind,
            palette=tuple(self.palette),
        )

    def _skeleton(self, shape: GenShape) -> List[Tuple[int, int]]:
        n = self.params.n
        if shape is GenShape.PATH or (shape is GenShape.RANDOM_TREE and n <= 2):
            return [(i, i + 1) for i in range(n - 1)]
        if shape is GenShape.RANDOM_TREE:
            sequence = [int(x) for x in self.rng.integers(0, n, size=n - 2)]
            tree = nx.from_prufer_sequence(sequence)
            return [tuple(sorted(edge)) for edge in tree.edges()]
        if shape is GenShape.STAR:
            return [(0, i) for i in range(1, n)]
        if shape is GenShape.CATERPILLAR:
            spine = max(1, (n + 1) // 2)
            edges = [(i, i + 1) for i in range(spine - 1)]
            for leaf in range(spine, n):
                edges.append((int(self.rng.integers(0, spine)), leaf))
            return edges
        raise InstanceError(f"unsupported shape {shape.value}")

    def _case2_spider(self):
        """
        Uncolored weight-0 center with two legs per color; each leg ends in a
        positive tip of its color. Extra vertices lengthen random legs.
        """
        n, c = self.params.n, self.params.c
        legs = [d for d in self.palette for _ in range(2)]
        lengths = [1] * len(legs)
        for _ in range(n - 1 - len(legs)):
            lengths[int(self.rng.integers(0, len(legs)))] += 1

        weights: List[Fraction] = [Fraction(0)]
        colors: List[Optional[str]] = [None]
        edges = []
        for color, length in zip(legs, lengths):
            previous = 0
            for step in range(length):
                v = len(weights)
                edges.append((previous, v))
                if step == length - 1:
                    weights.append(self._weight())
                    colors.append(color)
                else:
                    weights.append(Fraction(0))
                    colors.append(None)
                previous = v
        return edges, weights, colors

    def _case3b_family(self):
        """
        A path of convex color blocks ending in a d' block, then a weight-0
        parent s and junction a. Below a hang two or more monochromatic d0
        branches and at least one d' branch.
        """
        n = self.params.n
        d0, d_prime = self.palette[0], self.palette[1]
        top_colored = int(self.rng.integers(1, n - 4))
        below = n - top_colored - 2

        # path colors, bottom block first
        rest = [d for d in self.palette[2:]]
        self.rng.shuffle(rest)
        block_colors = [d_prime] + rest
        path_colors = []
        block = 0
        while len(path_colors) < top_colored:
            path_colors.append(block_colors[block])
            if block + 1 < len(block_colors) and self.rng.random() < 0.5:
                block += 1
        path_colors.reverse()

        weights: List[Fraction] = [self._weight() for _ in range(top_colored)]
        colors: List[Optional[str]] = list(path_colors)
        edges = [(i, i + 1) for i in range(top_colored)]
        s, a = top_colored, top_colored + 1
        weights += [Fraction(0), Fraction(0)]
        colors += [None, None]
        edges.append((s, a))

        d0_branches = int(self.rng.integers(2, max(2, below - 1) + 1))
        d0_branches = min(d0_branches, below - 1)
        branch_colors = [d0] * d0_branches + [d_prime] * (below - d0_branches)
        branch_count = int(self.rng.integers(d0_branches + 1, below + 1))
        branch_colors = branch_colors[:branch_count]
        sizes = [1] * branch_count
        for _ in range(below - branch_count):
            sizes[int(self.rng.integers(0, branch_count))] += 1

        for color, size in zip(branch_colors, sizes):
            members = []
            for step in range(size):
                v = len(weights)
                parent = a if step == 0 else members[int(self.rng.integers(0, len(members)))]
                edges.append((min(parent, v), max(parent, v)))
                members.append(v)
                if step > 0 and self._is_zero():
                    weights.append(Fraction(0))
                    colors.append(None)
                else:
                    weights.append(self._weight())
                    colors.append(color)
        return edges, weights, colors


def gen_instance(params: GenParams) -> Instance:
    """
    Deterministic instance for a parameter set

    Weight-0 vertices are generated uncolored so the coloring domain equals the support.
    """
    return InstanceGenerator(params).generate()
