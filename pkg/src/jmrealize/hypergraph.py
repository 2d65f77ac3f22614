"""Joint-measurability hypergraphs: abstract simplicial complexes over named vertices.

Vertices stand for measurements; an edge marks a subset that is jointly
measurable, so the edge family is closed under taking subsets. The central
query is the enumeration of minimal incompatible sets: non-edges all of
whose proper subsets are edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

__all__ = [
    "JmHypergraph",
    "canonical_edge",
    "parse_hypergraph",
    "hypergraph_to_json",
    "is_edge",
    "facets",
    "minimal_incompatible_sets",
]


@dataclass(frozen=True)
class JmHypergraph:
    """Normalized hypergraph: vertex order fixed, edges downward closed.

    Edges are stored as tuples sorted by vertex position; the empty edge and
    every singleton are always present. Instances are immutable; all queries
    are pure.
    """

    vertices: tuple[str, ...]
    edges: frozenset[tuple[str, ...]]

    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}


def canonical_edge(index: dict[str, int], members: Iterable[str]) -> tuple[str, ...]:
    """Deduplicate and sort ``members`` by vertex position; reject unknown vertices."""
    unique = set(members)
    for v in unique:
        if v not in index:
            raise ValueError(f"unknown vertex {v!r}")
    return tuple(sorted(unique, key=index.__getitem__))


def _downward_closure(edges: set[tuple[str, ...]]) -> set[tuple[str, ...]]:
    closed: set[tuple[str, ...]] = set()
    stack = list(edges)
    while stack:
        e = stack.pop()
        if e in closed:
            continue
        closed.add(e)
        if len(e) > 1:
            stack.extend(combinations(e, len(e) - 1))
    closed.add(())
    return closed


def parse_hypergraph(document) -> JmHypergraph:
    """Parse and normalize a hypergraph document.

    ``document`` is JSON text or an already-decoded object of the form
    ``{"vertices": [...], "closure": "facets"|"explicit", "edges": [[...], ...]}``.
    In facets mode the downward closure of the listed edges is computed; in
    explicit mode the listed family must already be downward closed (missing
    subsets are an error). Normalization always adds the empty edge and all
    singletons, and merges duplicate edges.
    """
    if isinstance(document, (str, bytes)):
        document = json.loads(document)
    if not isinstance(document, dict):
        raise ValueError("hypergraph document must be a JSON object")
    for key in ("vertices", "edges"):
        if key not in document or not isinstance(document[key], list):
            raise ValueError(f"hypergraph document needs a list field {key!r}")
    closure = document.get("closure", "facets")
    if closure not in ("facets", "explicit"):
        raise ValueError(f"closure must be 'facets' or 'explicit', got {closure!r}")

    vertices: list[str] = []
    for v in document["vertices"]:
        if not isinstance(v, str) or not v:
            raise ValueError(f"vertex identifiers must be non-empty strings, got {v!r}")
        if v not in vertices:
            vertices.append(v)
    index = {v: i for i, v in enumerate(vertices)}

    declared: set[tuple[str, ...]] = set()
    for e in document["edges"]:
        if not isinstance(e, list):
            raise ValueError(f"edges must be lists of vertices, got {e!r}")
        declared.add(canonical_edge(index, e))

    if closure == "explicit":
        for e in declared:
            if len(e) < 2:
                continue
            for sub in combinations(e, len(e) - 1):
                if sub not in declared:
                    raise ValueError(
                        f"closure violation: edge {list(e)} declared without subset {list(sub)}"
                    )
        edges = set(declared)
        edges.add(())
    else:
        edges = _downward_closure(declared)
    edges.update((v,) for v in vertices)

    return JmHypergraph(vertices=tuple(vertices), edges=frozenset(edges))


def _sorted_edges(h: JmHypergraph) -> list[tuple[str, ...]]:
    index = h.vertex_index()
    return sorted(h.edges, key=lambda e: (len(e), tuple(index[v] for v in e)))


def hypergraph_to_json(h: JmHypergraph) -> dict:
    """Canonical explicit-closure document; deterministic edge order."""
    return {
        "vertices": list(h.vertices),
        "closure": "explicit",
        "edges": [list(e) for e in _sorted_edges(h)],
    }


def is_edge(h: JmHypergraph, members: Iterable[str]) -> bool:
    return canonical_edge(h.vertex_index(), members) in h.edges


def facets(h: JmHypergraph) -> list[tuple[str, ...]]:
    """Maximal edges, in canonical order."""
    index = h.vertex_index()
    result = []
    for e in h.edges:
        se = set(e)
        if not any(se < set(other) for other in h.edges):
            result.append(e)
    return sorted(result, key=lambda e: (len(e), tuple(index[v] for v in e)))


def minimal_incompatible_sets(
    h: JmHypergraph, max_set_size: int | None = None
) -> list[tuple[str, ...]]:
    """Enumerate all minimal non-edges of size >= 2, canonically sorted.

    A set qualifies iff it is not an edge while every subset obtained by
    dropping one member is. Candidates of size k are generated by extending
    edges of size k-1 by one vertex, so shallow complexes never touch the
    full subset lattice. With ``max_set_size`` set, enumeration refuses to
    look past that size and raises instead; the refusal is conservative (it
    can trigger even when no oversized minimal set exists).
    """
    index = h.vertex_index()
    by_size: dict[int, set[tuple[str, ...]]] = {}
    for e in h.edges:
        by_size.setdefault(len(e), set()).add(e)

    found: list[tuple[str, ...]] = []
    for k in range(2, len(h.vertices) + 1):
        smaller = by_size.get(k - 1)
        if not smaller:
            break
        if max_set_size is not None and k > max_set_size:
            raise ValueError(
                f"minimal-set enumeration reached size {k}, beyond the "
                f"max-set-size cap of {max_set_size}"
            )
        candidates: set[tuple[str, ...]] = set()
        for e in smaller:
            present = set(e)
            for v in h.vertices:
                if v not in present:
                    candidates.add(canonical_edge(index, e + (v,)))
        for c in candidates:
            if c in h.edges:
                continue
            if all(sub in h.edges for sub in combinations(c, k - 1)):
                found.append(c)

    found.sort(key=lambda s: (len(s), tuple(index[v] for v in s)))
    return found
