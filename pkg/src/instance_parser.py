"""
Parsing and validation of instance files (JSON documents and string shorthand)
"""

import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union, TextIO

import networkx as nx
from jsonschema import Draft7Validator

from models import (
    Instance, InstanceKind, InstanceError, DomainPolicy, parse_rational
)


INSTANCE_SCHEMA = {
    "type": "object",
    "required": ["vertices"],
    "properties": {
        "kind": {"enum": ["string", "tree"]},
        "vertices": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["id", "weight"],
                "properties": {
                    "id": {"type": ["string", "integer"]},
                    "weight": {"type": ["string", "integer", "number"]},
                    "color": {"type": ["string", "null"]},
                },
            },
        },
        "edges": {
            "type": "array",
            "items": {
                "type": "array",
                "minItems": 2,
                "maxItems": 2,
                "items": {"type": ["string", "integer"]},
            },
        },
        "colors": {
            "type": "object",
            "additionalProperties": {"type": ["string", "null"]},
        },
        "palette": {"type": "array", "items": {"type": "string"}},
    },
}

_SCHEMA_VALIDATOR = Draft7Validator(INSTANCE_SCHEMA)

UNCOLORED_MARKS = {"", "-", ".", "_"}


def validate_instance(raw: Dict, policy: DomainPolicy = DomainPolicy.KEEP) -> Instance:
    """
    Build a validated Instance from an instance-file document

    Args:
        raw: Parsed JSON document
        policy: Treatment of colored weight-0 and uncolored weighted vertices

    Returns:
        Instance with dense indices; strings are indexed in path order

    Raises:
        InstanceError: On any structural or value problem
    """
    errors = sorted(_SCHEMA_VALIDATOR.iter_errors(raw), key=lambda e: list(e.absolute_path))
    if errors:
        first = errors[0]
        location = "/".join(str(p) for p in first.absolute_path) or "document"
        raise InstanceError(f"{location}: {first.message}")

    ids: List[str] = []
    weights = []
    colors: List[Optional[str]] = []
    for entry in raw["vertices"]:
        vid = str(entry["id"])
        if vid in ids:
            raise InstanceError(f"duplicate vertex id {vid!r}")
        weight = parse_rational(entry["weight"], f"vertex {vid}: weight")
        if weight < 0:
            raise InstanceError(f"vertex {vid}: negative weight {weight}")
        color = entry.get("color")
        ids.append(vid)
        weights.append(weight)
        colors.append(color if color not in UNCOLORED_MARKS else None)

    index_of = {vid: i for i, vid in enumerate(ids)}
    for vid, color in raw.get("colors", {}).items():
        if vid not in index_of:
            raise InstanceError(f"color map mentions unknown vertex {vid!r}")
        colors[index_of[vid]] = color if color not in UNCOLORED_MARKS else None

    declared = raw.get("kind")
    if "edges" in raw:
        edges = _parse_edges(raw["edges"], index_of)
    elif declared == InstanceKind.STRING.value or len(ids) == 1:
        edges = [(i, i + 1) for i in range(len(ids) - 1)]
    else:
        raise InstanceError("tree instance requires an edge list")

    _check_tree(len(ids), edges, ids)

    degree = [0] * len(ids)
    for u, v in edges:
        degree[u] += 1
        degree[v] += 1
    is_path = max(degree) <= 2
    if declared == InstanceKind.STRING.value and not is_path:
        raise InstanceError("kind 'string' requires the edges to form a path")

    palette = tuple(raw.get("palette", ()))
    if is_path and declared != InstanceKind.TREE.value:
        order = _path_order(len(ids), edges, degree)
        inst = Instance(
            ids=tuple(ids[v] for v in order),
            edges=tuple((i, i + 1) for i in range(len(order) - 1)),
            weights=tuple(weights[v] for v in order),
            colors=tuple(colors[v] for v in order),
            kind=InstanceKind.STRING,
            palette=palette,
        )
    else:
        inst = Instance(
            ids=tuple(ids),
            edges=tuple(sorted(edges)),
            weights=tuple(weights),
            colors=tuple(colors),
            kind=InstanceKind.TREE,
            palette=palette,
        )

    if not inst.palette:
        raise InstanceError("instance uses no colors")

    return _apply_policy(inst, policy)


def _parse_edges(raw_edges: List, index_of: Dict[str, int]) -> List[Tuple[int, int]]:
    edges = []
    seen = set()
    for a, b in raw_edges:
        a, b = str(a), str(b)
        for endpoint in (a, b):
            if endpoint not in index_of:
                raise InstanceError(f"edge ({a}, {b}) mentions unknown vertex {endpoint!r}")
        if a == b:
            raise InstanceError(f"self-loop on vertex {a!r}")
        u, v = sorted((index_of[a], index_of[b]))
        if (u, v) in seen:
            raise InstanceError(f"duplicate edge ({a}, {b})")
        seen.add((u, v))
        edges.append((u, v))
    return edges


def _check_tree(n: int, edges: List[Tuple[int, int]], ids: List[str]):
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from(edges)
    if not nx.is_connected(graph):
        parts = sorted(len(part) for part in nx.connected_components(graph))
        raise InstanceError(f"graph is disconnected ({len(parts)} components)")
    if not nx.is_tree(graph):
        cycle = nx.find_cycle(graph)
        raise InstanceError("graph has a cycle through " + ", ".join(ids[u] for u, _ in cycle))


def _path_order(n: int, edges: List[Tuple[int, int]], degree: List[int]) -> List[int]:
    """Walk a path from its first-listed endpoint"""
    start = next(v for v in range(n) if degree[v] <= 1)
    neighbors: List[List[int]] = [[] for _ in range(n)]
    for u, v in edges:
        neighbors[u].append(v)
        neighbors[v].append(u)
    order = [start]
    previous = None
    current = start
    while len(order) < n:
        nxt = next(u for u in neighbors[current] if u != previous)
        previous, current = current, nxt
        order.append(current)
    return order


def _apply_policy(inst: Instance, policy: DomainPolicy) -> Instance:
    if policy is DomainPolicy.DERIVE:
        return inst.derived_domain()
    if policy is DomainPolicy.ENFORCE:
        for v in range(inst.n):
            if (inst.weights[v] > 0) != (inst.colors[v] is not None):
                state = "colored" if inst.colors[v] is not None else "uncolored"
                raise InstanceError(
                    f"vertex {inst.ids[v]}: {state} with weight {inst.weights[v]} "
                    f"(domain must equal support)"
                )
    return inst


def parse_string_shorthand(text: str) -> Dict:
    """
    Convert the line-oriented string format into an instance document

    Each non-empty line is "color<TAB>weight"; "-" marks an uncolored vertex and
    lines starting with "#" are comments. Vertices are named v1..vn.
    """
    vertices = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = line.split("\t") if "\t" in line else stripped.split()
        fields = [f.strip() for f in fields]
        if len(fields) != 2:
            raise InstanceError(f"line {lineno}: expected 'color<TAB>weight', got {line!r}")
        color, weight = fields
        vertices.append({
            "id": f"v{len(vertices) + 1}",
            "weight": weight,
            "color": None if color in UNCOLORED_MARKS else color,
        })
    if not vertices:
        raise InstanceError("string instance has no vertices")
    return {"kind": InstanceKind.STRING.value, "vertices": vertices}


def parse_instance_text(text: str, policy: DomainPolicy = DomainPolicy.KEEP,
                        shorthand: Optional[bool] = None) -> Instance:
    """
    Parse instance text in either format

    Args:
        text: JSON document or string shorthand
        policy: Domain policy passed to validation
        shorthand: Force (True) or forbid (False) the shorthand; None sniffs the text
    """
    if shorthand is None:
        shorthand = not text.lstrip().startswith("{")
    if shorthand:
        raw = parse_string_shorthand(text)
    else:
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as e:
            raise InstanceError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}")
    return validate_instance(raw, policy)


def parse_instance(source: Union[str, Path, TextIO], policy: DomainPolicy = DomainPolicy.KEEP) -> Instance:
    """
    Read and validate an instance from a path, "-" for stdin, or an open stream

    Files ending in .tsv or .txt are read as string shorthand.
    """
    shorthand = None
    if hasattr(source, "read"):
        text = source.read()
    elif str(source) == "-":
        text = sys.stdin.read()
    else:
        path = Path(source)
        if not path.exists():
            raise InstanceError(f"instance file not found: {path}")
        text = path.read_text(encoding="utf-8")
        if path.suffix.lower() in (".tsv", ".txt"):
            shorthand = True
        elif path.suffix.lower() == ".json":
            shorthand = False
    return parse_instance_text(text, policy, shorthand)


def serialize_instance(inst: Instance) -> str:
    """Canonical instance-file JSON for an Instance"""
    return json.dumps(inst.to_dict(), indent=2)
