"""
Data models for convex recoloring of weighted colored trees and strings
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Dict, List, Tuple, FrozenSet, Any


class InstanceError(ValueError):
    """Invalid instance, coloring, cover or parameter set"""


class InvariantViolation(AssertionError):
    """A proven guarantee did not hold - always a bug"""


class InstanceKind(Enum):
    """Shape tag of an instance"""
    STRING = "string"
    TREE = "tree"


class DomainPolicy(Enum):
    """How validation treats colored zero-weight and uncolored weighted vertices"""
    KEEP = "keep"
    DERIVE = "derive"
    ENFORCE = "enforce"


class Totality(Enum):
    PARTIAL = "partial"
    TOTAL = "total"


class ExportFormat(Enum):
    """Supported result export formats"""
    JSON = "json"
    CSV = "csv"


class CaseTag(Enum):
    """Classification of one reduction round"""
    COVER = "Cover"
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3A = "Case3a"
    CASE3B = "Case3b"
    PAIRS = "Pairs"  # rounds of the 4-approximation


class GenShape(Enum):
    RANDOM_TREE = "random-tree"
    PATH = "path"
    STAR = "star"
    CATERPILLAR = "caterpillar"
    CASE2_SPIDER = "case2-spider"
    CASE3B_FAMILY = "case3b-family"


def parse_rational(value: Any, context: str = "value") -> Fraction:
    """
    Parse an exact rational from "p/q", an integer string, a decimal string or a number

    Raises:
        InstanceError: If the value is not a rational
    """
    if isinstance(value, bool) or value is None:
        raise InstanceError(f"{context}: expected a rational, got {value!r}")
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError) as e:
        raise InstanceError(f"{context}: cannot parse rational {value!r} ({e})")


def format_rational(value: Fraction) -> str:
    """Render a rational as "p" or "p/q" """
    return str(Fraction(value))


@dataclass(frozen=True)
class Coloring:
    """A partial or total mapping from vertex indices to colors"""
    assignment: Tuple[Optional[str], ...]

    def __getitem__(self, v: int) -> Optional[str]:
        return self.assignment[v]

    def __len__(self) -> int:
        return len(self.assignment)

    @property
    def totality(self) -> Totality:
        if all(c is not None for c in self.assignment):
            return Totality.TOTAL
        return Totality.PARTIAL

    @property
    def is_total(self) -> bool:
        return self.totality is Totality.TOTAL

    @property
    def domain(self) -> List[int]:
        return [v for v, c in enumerate(self.assignment) if c is not None]

    def used_colors(self) -> List[str]:
        return sorted({c for c in self.assignment if c is not None})

    def classes(self) -> Dict[str, List[int]]:
        """Color classes, each listed in index order"""
        result: Dict[str, List[int]] = {}
        for v, c in enumerate(self.assignment):
            if c is not None:
                result.setdefault(c, []).append(v)
        return result

    def without(self, removed) -> 'Coloring':
        """Restriction to the complement of `removed`"""
        removed = set(removed)
        return Coloring(tuple(None if v in removed else c
                              for v, c in enumerate(self.assignment)))

    def to_dict(self, ids: Tuple[str, ...]) -> Dict[str, Optional[str]]:
        return {ids[v]: c for v, c in enumerate(self.assignment)}


@dataclass(frozen=True)
class Instance:
    """
    A weighted, partially colored tree (or string)

    Vertices are dense indices 0..n-1; `ids` is the symbol table back to the
    external vertex ids. For kind=STRING the indices follow the path order.
    """
    ids: Tuple[str, ...]
    edges: Tuple[Tuple[int, int], ...]
    weights: Tuple[Fraction, ...]
    colors: Tuple[Optional[str], ...]
    kind: InstanceKind = InstanceKind.TREE
    palette: Tuple[str, ...] = ()
    adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, compare=False, repr=False)
    index_of: Dict[str, int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        neighbors: List[List[int]] = [[] for _ in self.ids]
        for u, v in self.edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(nb)) for nb in neighbors))
        object.__setattr__(self, "index_of", {vid: i for i, vid in enumerate(self.ids)})
        used = {c for c in self.colors if c is not None}
        object.__setattr__(self, "palette", tuple(sorted(used | set(self.palette))))

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def total_weight(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def coloring(self) -> Coloring:
        return Coloring(self.colors)

    def in_support(self, v: int) -> bool:
        """Positive weight and colored (the coloring domain of the tree algorithms)"""
        return self.weights[v] > 0 and self.colors[v] is not None

    def support(self) -> FrozenSet[int]:
        return frozenset(v for v in range(self.n) if self.in_support(v))

    def weight_of(self, vertices) -> Fraction:
        return sum((self.weights[v] for v in vertices), Fraction(0))

    def with_weights_and_colors(self, weights, colors) -> 'Instance':
        return Instance(ids=self.ids, edges=self.edges, weights=tuple(weights),
                        colors=tuple(colors), kind=self.kind, palette=self.palette)

    def derived_domain(self) -> 'Instance':
        """Uncolor weight-0 vertices and zero the weight of uncolored ones"""
        colors = tuple(c if w > 0 else None for c, w in zip(self.colors, self.weights))
        weights = tuple(w if c is not None else Fraction(0) for c, w in zip(self.colors, self.weights))
        return self.with_weights_and_colors(weights, colors)

    def to_dict(self) -> Dict:
        """Convert to the instance-file JSON document"""
        data = {
            "kind": self.kind.value,
            "vertices": [
                {"id": vid, "weight": format_rational(w), "color": c}
                for vid, w, c in zip(self.ids, self.weights, self.colors)
            ],
            "edges": [[self.ids[u], self.ids[v]] for u, v in self.edges],
        }
        unused = sorted(set(self.palette) - {c for c in self.colors if c is not None})
        if unused:
            data["palette"] = list(self.palette)
        return data


@dataclass(frozen=True)
class Cover:
    """A vertex set whose removal from the coloring domain leaves a convex coloring"""
    members: FrozenSet[int] = frozenset()

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v: int) -> bool:
        return v in self.members

    def weight(self, inst: Instance) -> Fraction:
        return inst.weight_of(self.members)

    def to_ids(self, inst: Instance) -> List[str]:
        return [inst.ids[v] for v in sorted(self.members)]

    @classmethod
    def from_ids(cls, inst: Instance, ids) -> 'Cover':
        unknown = [i for i in ids if i not in inst.index_of]
        if unknown:
            raise InstanceError(f"cover mentions unknown vertices: {', '.join(map(str, unknown))}")
        return cls(frozenset(inst.index_of[i] for i in ids))


@dataclass(frozen=True)
class BlockChoice:
    """Best block of one color and its penalty"""
    color: str
    best_block: FrozenSet[int]
    p_star: Fraction
    interval: Optional[Tuple[int, int]] = None  # strings only, inclusive

    def to_dict(self, inst: Instance) -> Dict:
        return {
            "best_block": [inst.ids[v] for v in sorted(self.best_block)],
            "p_star": format_rational(self.p_star),
        }


@dataclass
class PenaltyReport:
    """Per-color best blocks and the aggregate lower bound"""
    per_color: Dict[str, BlockChoice]
    sum_p_star: Fraction
    lower_bound: Fraction

    def to_dict(self, inst: Instance) -> Dict:
        return {
            "per_color": {d: choice.to_dict(inst) for d, choice in sorted(self.per_color.items())},
            "sum_p_star": format_rational(self.sum_p_star),
            "lower_bound": format_rational(self.lower_bound),
        }

    def to_rows(self, inst: Instance) -> List[Dict]:
        return [
            {
                "color": d,
                "p_star": format_rational(choice.p_star),
                "best_block": " ".join(inst.ids[v] for v in sorted(choice.best_block)),
            }
            for d, choice in sorted(self.per_color.items())
        ]


@dataclass(frozen=True)
class CaseWitness:
    """
    Witness of a reduction round

    Case1: `triple` (x, y, z) with y on the x-z path.
    Case2 / Pairs: `center` and the designated `pairs`.
    Case3a / Case3b: `subtree_root` (r_d0), `color` (d0), `other_color` (d'),
    `parent` (s, None when r_d0 is the root) and `subtree` (the vertices below r_d0).
    """
    tag: CaseTag
    triple: Optional[Tuple[int, int, int]] = None
    center: Optional[int] = None
    pairs: Tuple[Tuple[int, int], ...] = ()
    subtree_root: Optional[int] = None
    color: Optional[str] = None
    other_color: Optional[str] = None
    parent: Optional[int] = None
    subtree: FrozenSet[int] = frozenset()

    def designated(self) -> List[int]:
        """Distinct vertices whose weights a local-ratio round lowers"""
        if self.triple is not None:
            return sorted(set(self.triple))
        return sorted({v for pair in self.pairs for v in pair})

    def to_dict(self, inst: Instance) -> Dict:
        ids = inst.ids
        data: Dict[str, Any] = {"tag": self.tag.value}
        if self.triple is not None:
            data["triple"] = [ids[v] for v in self.triple]
        if self.center is not None:
            data["center"] = ids[self.center]
        if self.pairs:
            data["pairs"] = [[ids[a], ids[b]] for a, b in self.pairs]
        if self.subtree_root is not None:
            data["subtree_root"] = ids[self.subtree_root]
            data["color"] = self.color
            data["other_color"] = self.other_color
            data["parent"] = ids[self.parent] if self.parent is not None else None
            data["subtree"] = [ids[v] for v in sorted(self.subtree)]
        return data


@dataclass(frozen=True)
class GadgetRecord:
    """Case-3b bookkeeping; overwrite sets hold external ids of the reduced subtree"""
    d0: str
    d_prime: str
    c_high: Fraction
    c_medium: Fraction
    c_min: Fraction
    x_high: FrozenSet[str]
    x_medium: FrozenSet[str]
    x_min: FrozenSet[str]
    root_id: str
    v0_id: str
    removed: FrozenSet[str]

    @property
    def root_weight(self) -> Fraction:
        return self.c_medium - self.c_min

    @property
    def v0_weight(self) -> Fraction:
        return self.c_high - self.c_min

    def to_dict(self) -> Dict:
        return {
            "d0": self.d0,
            "d_prime": self.d_prime,
            "costs": [format_rational(c) for c in (self.c_high, self.c_medium, self.c_min)],
            "gadget_weights": [format_rational(self.root_weight), format_rational(self.v0_weight)],
            "x_high": sorted(self.x_high),
            "x_medium": sorted(self.x_medium),
            "x_min": sorted(self.x_min),
            "gadget": [self.root_id, self.v0_id],
            "removed": sorted(self.removed),
        }


@dataclass(frozen=True)
class TraceEntry:
    """One REDUCE step; `before`/`after` are the instances it maps between"""
    round: int
    witness: CaseWitness
    before: Instance = field(compare=False, repr=False)
    after: Instance = field(compare=False, repr=False)
    epsilon: Optional[Fraction] = None
    gadget: Optional[GadgetRecord] = None
    zeroed: FrozenSet[str] = frozenset()
    removed: FrozenSet[str] = frozenset()

    def to_dict(self) -> Dict:
        data: Dict[str, Any] = {
            "round": self.round,
            "witness": self.witness.to_dict(self.before),
            "epsilon": format_rational(self.epsilon) if self.epsilon is not None else None,
            "zeroed": sorted(self.zeroed),
            "removed": sorted(self.removed),
        }
        if self.gadget is not None:
            data["gadget"] = self.gadget.to_dict()
        return data


@dataclass
class ReductionTrace:
    """Ordered REDUCE records, consumed in reverse by UPDATE"""
    entries: List[TraceEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def to_dict(self) -> List[Dict]:
        return [entry.to_dict() for entry in self.entries]


@dataclass
class ApproxResult:
    """Output of one algorithm run"""
    algorithm: str
    cover: Cover
    cost: Fraction
    coloring: Optional[Coloring] = None
    trace: Optional[ReductionTrace] = None
    rounds: int = 0

    def to_dict(self, inst: Instance, lower_bound: Optional[Fraction] = None,
                opt: Optional[Fraction] = None, include_trace: bool = False) -> Dict:
        """Convert to the result-file JSON document"""
        data: Dict[str, Any] = {
            "algorithm": self.algorithm,
            "cost": format_rational(self.cost),
            "cover": self.cover.to_ids(inst),
            "coloring": self.coloring.to_dict(inst.ids) if self.coloring is not None else None,
            "lower_bound": format_rational(lower_bound) if lower_bound is not None else None,
            "opt": format_rational(opt) if opt is not None else None,
        }
        if include_trace:
            data["trace"] = self.trace.to_dict() if self.trace is not None else []
        return data

    def to_rows(self, inst: Instance) -> List[Dict]:
        """One row per vertex for CSV export"""
        rows = []
        for v, vid in enumerate(inst.ids):
            rows.append({
                "id": vid,
                "weight": format_rational(inst.weights[v]),
                "color": inst.colors[v] or "",
                "recolored": (self.coloring[v] or "") if self.coloring is not None else "",
                "in_cover": v in self.cover,
            })
        return rows


@dataclass
class GenParams:
    """Parameters of the seeded instance generator"""
    n: int
    c: int
    weight_max: int = 8
    shape: GenShape = GenShape.RANDOM_TREE
    zero_weight_fraction: Fraction = Fraction(0)
    seed: int = 0

    def to_dict(self) -> Dict:
        return {
            "n": self.n,
            "c": self.c,
            "weight_max": self.weight_max,
            "shape": self.shape.value,
            "zero_weight_fraction": format_rational(self.zero_weight_fraction),
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'GenParams':
        return cls(
            n=int(data["n"]),
            c=int(data["c"]),
            weight_max=int(data.get("weight_max", 8)),
            shape=GenShape(data.get("shape", GenShape.RANDOM_TREE.value)),
            zero_weight_fraction=parse_rational(data.get("zero_weight_fraction", "0"), "zero_weight_fraction"),
            seed=int(data.get("seed", 0)),
        )


@dataclass
class RatioRecord:
    index: int
    seed: int
    n: int
    algo_cost: Fraction
    opt: Fraction
    ratio: Optional[Fraction]
    violation: bool = False

    def to_dict(self) -> Dict:
        return {
            "index": self.index,
            "seed": self.seed,
            "n": self.n,
            "algo_cost": format_rational(self.algo_cost),
            "opt": format_rational(self.opt),
            "ratio": format_rational(self.ratio) if self.ratio is not None else None,
            "violation": self.violation,
        }


@dataclass
class RatioReport:
    """Approximation ratios of one algorithm against the exact oracle"""
    algorithm: str
    bound: int
    records: List[RatioRecord] = field(default_factory=list)

    @property
    def violations(self) -> int:
        return sum(1 for r in self.records if r.violation)

    @property
    def max_ratio(self) -> Fraction:
        return max((r.ratio for r in self.records if r.ratio is not None), default=Fraction(0))

    @property
    def mean_ratio(self) -> Fraction:
        ratios = [r.ratio for r in self.records if r.ratio is not None]
        if not ratios:
            return Fraction(0)
        return sum(ratios, Fraction(0)) / len(ratios)

    def to_dict(self) -> Dict:
        return {
            "algorithm": self.algorithm,
            "bound": self.bound,
            "count": len(self.records),
            "max_ratio": format_rational(self.max_ratio),
            "mean_ratio": format_rational(self.mean_ratio),
            "violations": self.violations,
            "instances": [r.to_dict() for r in self.records],
        }

    def to_rows(self) -> List[Dict]:
        return [r.to_dict() for r in self.records]


@dataclass
class SolverConfig:
    """Application configuration"""
    oracle_cap: int = 16
    domain_policy: str = DomainPolicy.DERIVE.value
    use_cache: bool = True
    cache_dir: str = "cache"
    cache_ttl_days: int = 30
    bench_workers: int = 1
    default_seed: int = 0
    output_format: str = ExportFormat.JSON.value

    @property
    def policy(self) -> DomainPolicy:
        return DomainPolicy(self.domain_policy)

    @property
    def export_format(self) -> ExportFormat:
        return ExportFormat(self.output_format)

    def to_dict(self) -> Dict:
        """Convert to dictionary for JSON serialization"""
        return {
            "oracle_cap": self.oracle_cap,
            "domain_policy": self.domain_policy,
            "use_cache": self.use_cache,
            "cache_dir": self.cache_dir,
            "cache_ttl_days": self.cache_ttl_days,
            "bench_workers": self.bench_workers,
            "default_seed": self.default_seed,
            "output_format": self.output_format,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'SolverConfig':
        """Create SolverConfig from dictionary"""
        config = cls(
            oracle_cap=int(data.get("oracle_cap", 16)),
            domain_policy=data.get("domain_policy", DomainPolicy.DERIVE.value),
            use_cache=bool(data.get("use_cache", True)),
            cache_dir=data.get("cache_dir", "cache"),
            cache_ttl_days=int(data.get("cache_ttl_days", 30)),
            bench_workers=int(data.get("bench_workers", 1)),
            default_seed=int(data.get("default_seed", 0)),
            output_format=data.get("output_format", ExportFormat.JSON.value),
        )
        # Fail early on unknown enum values
        config.policy
        config.export_format
        return config

    @classmethod
    def get_default_config(cls) -> 'SolverConfig':
        return cls()
