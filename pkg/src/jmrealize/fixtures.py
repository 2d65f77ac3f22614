"""Shipped hypergraph fixtures and the exhaustive small-instance generator."""

from __future__ import annotations

from itertools import combinations
from typing import Iterator

from .hypergraph import JmHypergraph, parse_hypergraph

__all__ = [
    "specker_document",
    "specker_hypergraph",
    "diamond_document",
    "diamond_hypergraph",
    "complete_simplex_document",
    "complete_simplex",
    "iter_hypergraphs",
]


def specker_document() -> dict:
    """Three binary measurements, pairwise compatible but not triplewise."""
    return {
        "vertices": ["M1", "M2", "M3"],
        "closure": "facets",
        "edges": [["M1", "M2"], ["M2", "M3"], ["M1", "M3"]],
    }


def specker_hypergraph() -> JmHypergraph:
    return parse_hypergraph(specker_document())


def diamond_document() -> dict:
    """Four vertices, all pairs except one; two overlapping triple scenarios."""
    return {
        "vertices": ["M1", "M2", "M3", "M4"],
        "closure": "facets",
        "edges": [["M1", "M2"], ["M1", "M4"], ["M2", "M4"], ["M2", "M3"], ["M3", "M4"]],
    }


def diamond_hypergraph() -> JmHypergraph:
    return parse_hypergraph(diamond_document())


def complete_simplex_document(n: int) -> dict:
    """All subsets compatible: a single facet containing every vertex."""
    if n < 1:
        raise ValueError(f"need at least one vertex, got {n}")
    vertices = [f"M{i}" for i in range(1, n + 1)]
    return {"vertices": vertices, "closure": "facets", "edges": [vertices]}


def complete_simplex(n: int) -> JmHypergraph:
    return parse_hypergraph(complete_simplex_document(n))


def iter_hypergraphs(n_vertices: int) -> Iterator[JmHypergraph]:
    """Every downward-closed hypergraph on ``n_vertices`` labeled vertices.

    Complexes correspond one-to-one with antichains of subsets of size >= 2
    (their maximal non-singleton faces), which keeps the enumeration far
    below the 2^(2^n) of raw edge families. Singletons are always edges.
    Yields deterministically, starting with the fully incompatible complex
    (no antichain members).
    """
    if n_vertices < 0:
        raise ValueError(f"vertex count must be nonnegative, got {n_vertices}")
    vertices = [f"M{i}" for i in range(1, n_vertices + 1)]
    candidates = [
        frozenset(c)
        for size in range(2, n_vertices + 1)
        for c in combinations(vertices, size)
    ]

    def emit(chosen: list[frozenset]) -> JmHypergraph:
        return parse_hypergraph(
            {
                "vertices": vertices,
                "closure": "facets",
                "edges": [sorted(c, key=vertices.index) for c in chosen],
            }
        )

    def walk(start: int, chosen: list[frozenset]) -> Iterator[JmHypergraph]:
        yield emit(chosen)
        for i in range(start, len(candidates)):
            c = candidates[i]
            if any(c <= other or other <= c for other in chosen):
                continue
            chosen.append(c)
            yield from walk(i + 1, chosen)
            chosen.pop()

    yield from walk(0, [])
