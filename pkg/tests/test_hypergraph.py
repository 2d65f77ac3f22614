import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jmrealize.fixtures import (
    complete_simplex,
    diamond_hypergraph,
    iter_hypergraphs,
    specker_document,
    specker_hypergraph,
)
from jmrealize.hypergraph import (
    facets,
    hypergraph_to_json,
    is_edge,
    minimal_incompatible_sets,
    parse_hypergraph,
)

from .oracles import all_subsets, brute_force_minimal_non_edges


def test_parse_specker_fixture():
    h = specker_hypergraph()
    assert h.vertices == ("M1", "M2", "M3")
    assert is_edge(h, ["M1", "M2"])
    assert is_edge(h, ["M2", "M3"])
    assert is_edge(h, ["M1", "M3"])
    assert not is_edge(h, ["M1", "M2", "M3"])
    assert is_edge(h, [])


def test_parse_accepts_json_text():
    h = parse_hypergraph(json.dumps(specker_document()))
    assert len(h.edges) == 1 + 3 + 3  # empty, singletons, pairs


def test_normalization_adds_singletons_and_empty_edge():
    h = parse_hypergraph({"vertices": ["A"], "closure": "facets", "edges": []})
    assert h.edges == frozenset({(), ("A",)})


def test_duplicate_edges_and_members_merge():
    h = parse_hypergraph(
        {
            "vertices": ["A", "B"],
            "closure": "facets",
            "edges": [["A", "B"], ["B", "A"], ["A", "A", "B"]],
        }
    )
    assert sum(1 for e in h.edges if len(e) == 2) == 1


def test_unknown_vertex_rejected():
    with pytest.raises(ValueError, match="unknown vertex"):
        parse_hypergraph({"vertices": ["A"], "closure": "facets", "edges": [["A", "B"]]})


def test_explicit_mode_closure_violation():
    with pytest.raises(ValueError, match="closure violation"):
        parse_hypergraph(
            {"vertices": ["A", "B"], "closure": "explicit", "edges": [["A", "B"], ["B"]]}
        )


def test_explicit_mode_accepts_closed_family():
    h = parse_hypergraph(
        {
            "vertices": ["A", "B"],
            "closure": "explicit",
            "edges": [["A", "B"], ["A"], ["B"]],
        }
    )
    assert is_edge(h, ["A", "B"])


@pytest.mark.parametrize(
    "document",
    [
        [],
        {"vertices": ["A"]},
        {"edges": []},
        {"vertices": "A", "edges": []},
        {"vertices": ["A"], "edges": [], "closure": "magic"},
        {"vertices": [""], "edges": []},
        {"vertices": [1], "edges": []},
        {"vertices": ["A"], "edges": ["A"]},
    ],
)
def test_malformed_documents_rejected(document):
    with pytest.raises(ValueError):
        parse_hypergraph(document)


def test_minimal_sets_diamond():
    sets = minimal_incompatible_sets(diamond_hypergraph())
    assert sets == [("M1", "M3"), ("M1", "M2", "M4"), ("M2", "M3", "M4")]


def test_minimal_sets_complete_simplex_empty():
    assert minimal_incompatible_sets(complete_simplex(3)) == []


def test_minimal_sets_specker_triple():
    assert minimal_incompatible_sets(specker_hypergraph()) == [("M1", "M2", "M3")]


def test_facets_of_diamond():
    assert facets(diamond_hypergraph()) == [
        ("M1", "M2"),
        ("M1", "M4"),
        ("M2", "M3"),
        ("M2", "M4"),
        ("M3", "M4"),
    ]


def test_minimal_set_invariants_via_is_edge():
    for h in (specker_hypergraph(), diamond_hypergraph(), complete_simplex(4)):
        for s in minimal_incompatible_sets(h):
            assert len(s) >= 2
            assert not is_edge(h, s)
            for p in all_subsets(s):
                if len(p) < len(s):
                    assert is_edge(h, p)


@pytest.mark.parametrize("n", range(0, 6))
def test_minimal_sets_match_brute_force_exhaustively(n):
    for h in iter_hypergraphs(n):
        expected = brute_force_minimal_non_edges(h.vertices, h.edges)
        assert minimal_incompatible_sets(h) == expected


@pytest.mark.parametrize("n", range(0, 6))
def test_non_edges_contain_a_minimal_set(n):
    for h in iter_hypergraphs(n):
        minimal = minimal_incompatible_sets(h)
        for s in all_subsets(h.vertices):
            if is_edge(h, s):
                continue
            members = set(s)
            assert any(set(m) <= members for m in minimal)


def test_normalization_idempotent():
    for h in (specker_hypergraph(), diamond_hypergraph(), complete_simplex(4)):
        again = parse_hypergraph(hypergraph_to_json(h))
        assert again == h


def test_empty_vertex_set_accepted():
    h = parse_hypergraph({"vertices": [], "closure": "facets", "edges": []})
    assert h.vertices == ()
    assert h.edges == frozenset({()})
    assert minimal_incompatible_sets(h) == []


def test_max_set_size_guard():
    h = specker_hypergraph()
    assert minimal_incompatible_sets(h, max_set_size=3) == [("M1", "M2", "M3")]
    with pytest.raises(ValueError, match="max-set-size"):
        minimal_incompatible_sets(h, max_set_size=2)


@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_minimal_sets_match_brute_force_random_families(data):
    # Random (not necessarily closed) facet declarations, normalized by parsing.
    n = data.draw(st.integers(min_value=1, max_value=5))
    vertices = [f"V{i}" for i in range(n)]
    n_edges = data.draw(st.integers(min_value=0, max_value=6))
    edges = [
        data.draw(st.lists(st.sampled_from(vertices), min_size=1, max_size=n, unique=True))
        for _ in range(n_edges)
    ]
    h = parse_hypergraph({"vertices": vertices, "closure": "facets", "edges": edges})
    assert minimal_incompatible_sets(h) == brute_force_minimal_non_edges(h.vertices, h.edges)
