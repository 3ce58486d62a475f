"""Exchange graphs, coverings, and finite-type recognition."""

import pytest

from clusteralg.exchange_graph import (
    CapExceeded,
    build_exchange_graph,
    covering_check,
    graph_from_spec,
    is_finite_type,
    mutation_class_finiteness,
    seed_canonical_form,
)
from clusteralg.mutation import (
    initial_geometric_seed,
    mutate_seed_geometric,
    named_matrix,
    principal_extension,
    rank2_matrix,
    trivial_extension,
)

A2 = named_matrix("A2")
A3 = named_matrix("A3")


def test_a2_graph_is_a_pentagon():
    g = graph_from_spec(A2, coeffs="principal")
    assert g["finite"]
    assert g["vertices"] == 5
    assert len(g["edges"]) == 5
    # every vertex has degree 2: a single 5-cycle
    deg = {}
    for u, v in g["edges"]:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    assert sorted(deg.values()) == [2, 2, 2, 2, 2]


def test_a2_trivial_coefficients_same_graph():
    g = graph_from_spec(A2, coeffs="trivial")
    assert g["vertices"] == 5 and len(g["edges"]) == 5


def test_a3_graph_and_cluster_variable_count():
    g = graph_from_spec(A3, coeffs="trivial")
    assert g["finite"]
    # the rank-3 associahedron: 14 clusters, 21 edges, 9 cluster variables
    assert g["vertices"] == 14
    assert len(g["edges"]) == 21
    assert len(g["cluster_variables"]) == 9


def test_seed_canonical_form_ignores_relabeling():
    seed = initial_geometric_seed(trivial_extension(A2))
    key0 = seed_canonical_form(seed)
    # mutating 1,2,1 in A2 reproduces the initial seed up to relabeling
    s = seed
    for k in (1, 2, 1, 2, 1):
        s = mutate_seed_geometric(s, k)
    assert seed_canonical_form(s) == key0


def test_covering_principal_over_trivial():
    for B in (A2, A3):
        ok, witness = covering_check(B, coeffs_other="trivial")
        assert ok, witness


def test_mutation_class_finite_for_a3():
    out = mutation_class_finiteness(trivial_extension(A3))
    assert out["finite"] and out["count"] >= 1


def test_mutation_class_cap_exceeded_for_markov_like_matrix():
    Bt = principal_extension(rank2_matrix(2, 2))
    out = mutation_class_finiteness(Bt, cap=1000)
    assert not out["finite"]


def test_is_finite_type():
    assert is_finite_type(A2)
    assert is_finite_type(A3)
    assert is_finite_type(named_matrix("B2"))
    assert is_finite_type(named_matrix("G2"))
    assert not is_finite_type(rank2_matrix(2, 2))
    assert not is_finite_type(rank2_matrix(1, 4))
