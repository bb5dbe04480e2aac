import math

import networkx as nx
import pytest

from errors import DomainError
from wells.bonds import bond_edges, bond_transposition, edges_by_class, ordering_graph, swap_positions
from wells.orderings import Ordering, letter_of, ordering_action


def letter_pairs(edges):
    return {frozenset((letter_of(e.a), letter_of(e.b))) for e in edges}


def test_three_particle_bond_classes():
    classes = edges_by_class(3)
    assert letter_pairs(classes[1]) == {frozenset("FA"), frozenset("BC"), frozenset("DE")}
    assert letter_pairs(classes[2]) == {frozenset("AB"), frozenset("CD"), frozenset("EF")}


def test_three_particle_graph_is_the_hexagon_abcdef():
    graph = ordering_graph(3)
    assert nx.is_isomorphic(graph, nx.cycle_graph(6))
    by_letter = nx.relabel_nodes(graph, {i: data["letter"] for i, data in graph.nodes(data=True)})
    for a, b in zip("ABCDEF", "BCDEFA"):
        assert by_letter.has_edge(a, b)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_edge_count_and_degree(n):
    edges = bond_edges(n)
    assert len(edges) == math.factorial(n) * (n - 1) // 2
    graph = ordering_graph(n)
    assert all(degree == n - 1 for _, degree in graph.degree())


def test_four_particle_edges():
    assert len(bond_edges(4)) == 36
    assert {len(edges) for edges in edges_by_class(4).values()} == {12}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_edges_join_wells_by_adjacent_position_swap(n):
    for edge in bond_edges(n):
        assert edge.b == ordering_action(bond_transposition(n, edge.bond), edge.a) or edge.a == ordering_action(
            bond_transposition(n, edge.bond), edge.b
        )


def test_graph_edges_carry_bond_class():
    graph = ordering_graph(4)
    assert sorted({data["bond"] for _, _, data in graph.edges(data=True)}) == [1, 2, 3]


def test_swap_positions_bounds():
    assert swap_positions(Ordering((1, 2, 3)), 2) == Ordering((1, 3, 2))
    with pytest.raises(DomainError):
        swap_positions(Ordering((1, 2, 3)), 3)


def test_edge_serialization():
    edge = bond_edges(2)[0]
    assert edge.to_dict() == {"a": [1, 2], "b": [2, 1], "bond": 1}
