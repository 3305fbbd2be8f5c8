"""Descent-tree assembly over roots and critical points.

Every critical point emits its full fan of descent branches; with p
critical points of multiplicities m_j this yields sum (m_j + 1) = s + p - 1
edges on the s + p vertices, which must form a connected acyclic graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import UnresolvedEdge
from .targets import CRITICAL, ROOT, AnalyticTarget
from .tracer import (
    DescentPath,
    TraceSettings,
    min_interior_separation,
    trace_all_branches,
)

VERTEX_MATCH_REL = 1e-8
EDGE_SEPARATION_REL = 1e-6


@dataclass(frozen=True)
class TreeVertex:
    location: complex
    kind: str  # ROOT or CRITICAL
    multiplicity: int


@dataclass(frozen=True)
class TreeEdge:
    source: int  # index of the critical vertex the branch leaves
    target: int
    branch_index: int
    path: DescentPath


@dataclass
class DescentTree:
    vertices: list[TreeVertex]
    edges: list[TreeEdge]
    scale: float

    @property
    def root_count(self) -> int:
        return sum(1 for v in self.vertices if v.kind == ROOT)

    @property
    def critical_count(self) -> int:
        return sum(1 for v in self.vertices if v.kind == CRITICAL)

    def vertex_index(self, location: complex, tol: float | None = None) -> int:
        tol = VERTEX_MATCH_REL * self.scale if tol is None else tol
        dists = [abs(v.location - complex(location)) for v in self.vertices]
        best = int(np.argmin(dists))
        if dists[best] > tol:
            raise ValueError(f"no vertex within {tol:.3e} of {location}")
        return best

    def to_json_dict(self) -> dict:
        return {
            "vertices": [
                {
                    "re": v.location.real,
                    "im": v.location.imag,
                    "kind": v.kind,
                    "multiplicity": v.multiplicity,
                }
                for v in self.vertices
            ],
            "edges": [
                {
                    "source": e.source,
                    "target": e.target,
                    "branch_index": e.branch_index,
                    "path": e.path.to_json_dict(),
                }
                for e in self.edges
            ],
        }


@dataclass(frozen=True)
class TreeReport:
    edge_count: int
    expected_edge_count: int
    vertex_count: int
    connected: bool
    acyclic: bool
    min_edge_separation: float
    duplicate_branch_targets: tuple[tuple[int, int], ...]  # (source, target)
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "edge_count": self.edge_count,
            "expected_edge_count": self.expected_edge_count,
            "vertex_count": self.vertex_count,
            "connected": self.connected,
            "acyclic": self.acyclic,
            "min_edge_separation": self.min_edge_separation,
            "duplicate_branch_targets": [list(x) for x in self.duplicate_branch_targets],
            "passed": self.passed,
        }


@dataclass
class TreeRoute:
    """Concatenated polyline between two vertices along the unique tree path."""

    zs: np.ndarray
    vertex_indices: list[int]
    critical_indices: list[int]
    length: float
    peak_abs_value: float


def build_descent_tree(
    target: AnalyticTarget, settings: TraceSettings | None = None
) -> DescentTree:
    """Trace every branch of every critical point and assemble the graph.

    Vertices are the special points sorted by (re, im); each branch becomes
    an edge from its critical point to the vertex its endpoint snapped to.
    """
    specials = target.special_points()
    if not any(s.kind == CRITICAL for s in specials):
        raise ValueError("target has no critical point")
    order = sorted(range(len(specials)), key=lambda i: (
        specials[i].location.real,
        specials[i].location.imag,
    ))
    vertices = [
        TreeVertex(specials[i].location, specials[i].kind, specials[i].multiplicity)
        for i in order
    ]
    tree = DescentTree(vertices, [], target.scale)
    match_tol = VERTEX_MATCH_REL * target.scale
    for vi, vert in enumerate(vertices):
        if vert.kind != CRITICAL:
            continue
        paths = trace_all_branches(
            target, (vert.location, vert.multiplicity), settings
        )
        for k, path in enumerate(paths):
            if path.endpoint_kind == "unresolved":
                raise UnresolvedEdge(
                    f"branch {k} of critical point {vert.location} ended "
                    f"unresolved at {path.endpoint_location}"
                )
            ti = tree.vertex_index(path.endpoint_location, match_tol)
            tree.edges.append(TreeEdge(vi, ti, k, path))
    return tree


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, a: int, b: int) -> bool:
        """Merge; returns False when a and b were already connected."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def verify_tree(tree: DescentTree) -> TreeReport:
    """Edge count, connectivity, acyclicity, and edge-interior separation."""
    s = tree.root_count
    p = tree.critical_count
    expected = s + p - 1
    uf = _UnionFind(len(tree.vertices))
    acyclic = True
    for e in tree.edges:
        if not uf.union(e.source, e.target):
            acyclic = False
    components = len({uf.find(i) for i in range(len(tree.vertices))})
    connected = components == 1

    min_sep = math.inf
    for i in range(len(tree.edges)):
        for j in range(i + 1, len(tree.edges)):
            d = min_interior_separation(
                tree.edges[i].path, tree.edges[j].path, tree.scale
            )
            min_sep = min(min_sep, d)

    dupes = []
    by_source: dict[int, dict[int, int]] = {}
    for e in tree.edges:
        seen = by_source.setdefault(e.source, {})
        seen[e.target] = seen.get(e.target, 0) + 1
    for src, targets in sorted(by_source.items()):
        for tgt, cnt in sorted(targets.items()):
            if cnt > 1:
                dupes.append((src, tgt))

    passed = (
        len(tree.edges) == expected
        and connected
        and acyclic
        and min_sep > EDGE_SEPARATION_REL * tree.scale
    )
    return TreeReport(
        edge_count=len(tree.edges),
        expected_edge_count=expected,
        vertex_count=len(tree.vertices),
        connected=connected,
        acyclic=acyclic,
        min_edge_separation=min_sep,
        duplicate_branch_targets=tuple(dupes),
        passed=passed,
    )


def _adjacency(tree: DescentTree) -> dict[int, list[tuple[int, int]]]:
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(len(tree.vertices))}
    for ei, e in enumerate(tree.edges):
        adj[e.source].append((e.target, ei))
        adj[e.target].append((e.source, ei))
    return adj


def tree_route(tree: DescentTree, start: int, goal: int) -> TreeRoute:
    """The unique tree path between two root vertices, as one polyline.

    Edge polylines are oriented along the traversal and concatenated; the
    returned peak value is max over samples of |f| = t * |f(anchor)|.
    """
    nv = len(tree.vertices)
    if not (0 <= start < nv and 0 <= goal < nv):
        raise ValueError("vertex index out of range")
    if start == goal:
        raise ValueError("route endpoints must differ")
    for idx in (start, goal):
        if tree.vertices[idx].kind != ROOT:
            raise ValueError(f"vertex {idx} is not a root vertex")
    adj = _adjacency(tree)
    prev: dict[int, tuple[int, int]] = {}
    frontier = [start]
    seen = {start}
    while frontier and goal not in seen:
        nxt = []
        for u in frontier:
            for v, ei in adj[u]:
                if v not in seen:
                    seen.add(v)
                    prev[v] = (u, ei)
                    nxt.append(v)
        frontier = nxt
    if goal not in seen:
        raise ValueError(f"no route between vertices {start} and {goal}")

    hops: list[tuple[int, int, int]] = []  # (from, to, edge index)
    v = goal
    while v != start:
        u, ei = prev[v]
        hops.append((u, v, ei))
        v = u
    hops.reverse()

    pieces: list[np.ndarray] = []
    peak = 0.0
    vertex_indices = [start]
    for u, v, ei in hops:
        e = tree.edges[ei]
        zs = e.path.zs
        peak = max(peak, float(np.abs(e.path.ts).max() * abs(e.path.anchor_value)))
        if e.source == u:
            seg = zs
        else:
            seg = zs[::-1]
        if pieces:
            seg = seg[1:]  # drop the duplicated join sample
        pieces.append(seg)
        vertex_indices.append(v)
    zs = np.concatenate(pieces)
    length = float(np.abs(np.diff(zs)).sum())
    criticals = [
        i for i in vertex_indices if tree.vertices[i].kind == CRITICAL
    ]
    return TreeRoute(zs, vertex_indices, criticals, length, peak)


def to_dot(tree: DescentTree) -> str:
    """Graphviz source with positioned, kind-tagged vertices."""
    lines = ["graph descent_tree {", "  node [shape=point];"]
    names = []
    r = c = 0
    for v in tree.vertices:
        if v.kind == ROOT:
            name = f"r{r}"
            r += 1
        else:
            name = f"c{c}"
            c += 1
        names.append(name)
        lines.append(
            f'  {name} [label="{name}", pos="{v.location.real:.9g},'
            f'{v.location.imag:.9g}!", kind="{v.kind}", mult={v.multiplicity}];'
        )
    for e in tree.edges:
        lines.append(
            f"  {names[e.source]} -- {names[e.target]} "
            f'[len={e.path.arc_length:.9g}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
