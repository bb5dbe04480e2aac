import itertools

import networkx as nx
import numpy as np
import pytest

from analysis.tunneling import (
    RateVector,
    antisymmetric_shift,
    build_tunneling,
    closed_form_n3,
    edge_operator,
    parse_rates,
    tunneling_trace,
)
from errors import DimensionGuardError, DomainError, ParseError
from wells.bonds import bond_edges, ordering_graph
from wells.orderings import ordering_operator, particle_operator
from wells.permutation import Permutation, symmetric_group


def eigenvalues(n, rates):
    return np.linalg.eigvalsh(build_tunneling(n, rates))


def test_equal_rates_spectrum():
    np.testing.assert_allclose(eigenvalues(3, [1, 1]), [-6, -5, -5, -3, -3, -2], atol=1e-12)


def test_zero_rates_give_zero_matrix():
    assert not np.any(build_tunneling(3, [0, 0]))


def test_two_rate_closed_form():
    rng = np.random.default_rng(2024)
    for u, t in 1.0 - rng.uniform(size=(100, 2)):
        np.testing.assert_allclose(eigenvalues(3, [u, t]), closed_form_n3(t, u), atol=1e-9)


@pytest.mark.parametrize("u, t", [(2.5, 0.0), (1.0, 1.0)])
def test_closed_form_edge_cases(u, t):
    np.testing.assert_allclose(eigenvalues(3, [u, t]), closed_form_n3(t, u), atol=1e-12)


def test_rate_order_does_not_change_spectrum():
    np.testing.assert_allclose(eigenvalues(3, [0.4, 1.3]), eigenvalues(3, [1.3, 0.4]), atol=1e-12)


def test_operator_equals_literal_edge_sum():
    rates = [0.5, 1.5, 2.0]
    literal = np.zeros((24, 24))
    for edge in bond_edges(4):
        literal -= rates[edge.bond - 1] * edge_operator(edge).to_dense()
    np.testing.assert_allclose(build_tunneling(4, rates), literal, atol=1e-14)


def test_diagonal_counts_non_incident_edges():
    matrix = build_tunneling(3, [1.0, 2.0])
    np.testing.assert_allclose(np.diag(matrix), -(1.0 * 2 + 2.0 * 2))


def test_hexagon_identity():
    t = 0.7
    adjacency = nx.to_numpy_array(ordering_graph(3), nodelist=range(6))
    np.testing.assert_allclose(build_tunneling(3, [t, t]), -t * (4 * np.eye(6) + adjacency), atol=1e-14)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_trace_identity(n):
    rng = np.random.default_rng(100 + n)
    for rates in rng.uniform(0.0, 2.0, size=(20, n - 1)):
        assert np.trace(build_tunneling(n, rates)) == pytest.approx(tunneling_trace(n, rates), rel=1e-12)


def test_trace_of_equal_rates():
    assert tunneling_trace(3, [1, 1]) == -24
    assert tunneling_trace(2, [0.5]) == 0


@pytest.mark.parametrize("n", [2, 3, 4])
def test_commutes_with_particle_permutations(n):
    rng = np.random.default_rng(7)
    matrix = build_tunneling(n, rng.uniform(0.1, 2.0, n - 1))
    for p in symmetric_group(n):
        assert particle_operator(p).commutator_norm(matrix) <= 1e-12 * np.max(np.abs(matrix))


def test_unequal_rates_break_ordering_symmetry():
    matrix = build_tunneling(3, [1.0, 2.0])
    norms = [ordering_operator(q).commutator_norm(matrix) for q in symmetric_group(3)]
    assert max(norms) > 0.1


def test_antisymmetric_shift():
    assert antisymmetric_shift(3, [1.0, 2.0]) == pytest.approx(3.0)
    assert antisymmetric_shift(2, [1.5]) == pytest.approx(-1.5)
    sign = np.array([Permutation(w).sign() for w in itertools.permutations(range(1, 5))], dtype=float)
    matrix = build_tunneling(4, [1.0, 0.3, 0.6])
    np.testing.assert_allclose(matrix @ sign, -antisymmetric_shift(4, [1.0, 0.3, 0.6]) * sign, atol=1e-12)


def test_sparse_assembly_matches_dense():
    dense = build_tunneling(4, [1.0, 2.0, 3.0])
    sparse = build_tunneling(4, [1.0, 2.0, 3.0], sparse_format=True)
    np.testing.assert_allclose(sparse.toarray(), dense)


def test_dense_guard_and_sparse_six_particles():
    with pytest.raises(DimensionGuardError):
        build_tunneling(6, [1.0] * 5)
    assert build_tunneling(6, [1.0] * 5, sparse_format=True).shape == (720, 720)


def test_length_mismatch():
    with pytest.raises(DomainError):
        build_tunneling(3, [1.0])


def test_rate_vector_validation():
    with pytest.raises(ValueError):
        RateVector(t=[1.0, -0.1])
    with pytest.raises(ValueError):
        RateVector(t=[])
    assert RateVector(t=[1.0, 2.0, 1.0]).is_palindromic()
    assert not RateVector(t=[1.0, 2.0]).is_palindromic()
    assert RateVector(t=[1.0, 2.0]).scaled(0.5).t == [0.5, 1.0]


def test_parse_rates():
    assert parse_rates("1, 0.5,1").t == [1.0, 0.5, 1.0]
    with pytest.raises(ParseError) as info:
        parse_rates("1,x")
    assert info.value.position == 2
    with pytest.raises(DomainError):
        parse_rates("1,-2")
