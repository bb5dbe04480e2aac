import itertools

import numpy as np
import pytest

from errors import DimensionGuardError, DomainError
from wells.orderings import (
    Ordering,
    WellOperator,
    all_orderings,
    letter_map,
    letter_of,
    ordering_action,
    ordering_from_index,
    ordering_index,
    ordering_operator,
    parity_operator,
    particle_action,
    particle_operator,
    well_operator,
    well_transposition,
)
from wells.permutation import Permutation, parse_cycles, symmetric_group


def induced(action, group, n):
    return [well_operator(lambda w, p=p: action(p, w), n) for p in group]


def letters(n_map):
    """Induced well permutation as a set of letter pairs"""
    pairs = set()
    for w in all_orderings(3):
        image = n_map(w)
        if image != w:
            pairs.add(frozenset((letter_of(w), letter_of(image))))
    return pairs


def test_three_particle_orderings_are_lexicographic():
    assert [str(w) for w in all_orderings(3)] == ["<123>", "<132>", "<213>", "<231>", "<312>", "<321>"]


def test_ordering_counts():
    assert [w.seq for w in all_orderings(2)] == [(1, 2), (2, 1)]
    assert len(all_orderings(4)) == 24


@pytest.mark.parametrize("n, error", [(1, DomainError), (9, DimensionGuardError)])
def test_ordering_size_guard(n, error):
    with pytest.raises(error):
        all_orderings(n)


def test_letter_indices():
    index = {letter: ordering_index(w) for letter, w in letter_map().items()}
    assert index == {"A": 0, "B": 1, "F": 2, "E": 3, "C": 4, "D": 5}


def test_index_round_trip():
    for i, w in enumerate(all_orderings(4)):
        assert ordering_index(w) == i
        assert ordering_from_index(i, 4) == w


def test_particle_action_examples():
    w = Ordering((1, 2, 3))
    assert particle_action(parse_cycles("(12)", 3), w) == Ordering((2, 1, 3))
    assert particle_action(parse_cycles("(123)", 3), w) == Ordering((2, 3, 1))
    assert particle_action(Permutation.identity(3), w) == w


def test_particle_exchange_pairs_wells():
    p = parse_cycles("(12)", 3)
    assert letters(lambda w: particle_action(p, w)) == {frozenset("AF"), frozenset("BE"), frozenset("CD")}


def test_ordering_action_examples():
    assert ordering_action(parse_cycles("(12)", 3), Ordering((1, 2, 3))) == Ordering((2, 1, 3))
    assert ordering_action(parse_cycles("(23)", 3), Ordering((3, 1, 2))) == Ordering((3, 2, 1))
    q = parse_cycles("(12)", 3)
    assert letters(lambda w: ordering_action(q, w)) == {frozenset("AF"), frozenset("BC"), frozenset("DE")}


def test_action_size_mismatch():
    with pytest.raises(DomainError):
        particle_action(parse_cycles("(12)", 2), Ordering((1, 2, 3)))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_actions_commute(n):
    group = symmetric_group(n)
    for p, q in itertools.product(group, group):
        for w in all_orderings(n):
            assert particle_action(p, ordering_action(q, w)) == ordering_action(q, particle_action(p, w))
        P, Q = particle_operator(p), ordering_operator(q)
        assert P @ Q == Q @ P


@pytest.mark.parametrize("operator", [particle_operator, ordering_operator])
def test_homomorphism(operator):
    group = symmetric_group(3)
    for p, q in itertools.product(group, group):
        assert operator(p * q) == operator(p) @ operator(q)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_induced_subgroups_intersect_trivially(n):
    group = symmetric_group(n)
    particles = induced(particle_action, group, n)
    positions = induced(ordering_action, group, n)
    assert len(set(particles)) == len(set(positions)) == len(group)
    common = set(particles) & set(positions)
    assert len(common) == 1 and next(iter(common)).is_identity()


def test_well_transposition_matrix():
    wells = letter_map()
    swap = well_transposition(wells["A"], wells["B"])
    expected = np.eye(6)
    expected[[0, 1]] = expected[[1, 0]]
    np.testing.assert_array_equal(swap.to_dense(), expected)
    assert swap.apply(np.eye(6)[:, 0])[1] == 1.0


def test_particle_exchange_operator_has_zero_trace():
    operator = well_operator(lambda w: particle_action(parse_cycles("(12)", 3), w), 3)
    expected = (
        well_transposition(letter_map()["A"], letter_map()["F"])
        @ well_transposition(letter_map()["B"], letter_map()["E"])
        @ well_transposition(letter_map()["C"], letter_map()["D"])
    )
    assert operator == expected
    assert operator.trace() == 0


def test_identity_map_gives_identity():
    assert well_operator(lambda w: w, 3).is_identity()


def test_non_bijection_rejected():
    with pytest.raises(DomainError):
        well_operator(lambda w: Ordering((1, 2, 3)), 3)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_operators_are_orthogonal_permutation_matrices(n):
    for p in symmetric_group(n):
        matrix = particle_operator(p).to_dense()
        assert set(np.unique(matrix)) <= {0.0, 1.0}
        np.testing.assert_array_equal(matrix.T @ matrix, np.eye(matrix.shape[0]))
        assert particle_operator(p).trace() == int(np.trace(matrix))
        assert particle_operator(p).determinant() == round(np.linalg.det(matrix))


def test_parity_operator_matches_letter_pairs():
    assert letters(lambda w: w.reversed()) == {frozenset("AD"), frozenset("BE"), frozenset("CF")}
    assert parity_operator(3) @ parity_operator(3) == well_operator(lambda w: w, 3)


def test_dense_ceiling_and_sparse_form():
    operator = particle_operator(Permutation.transposition(6, 1, 2))
    with pytest.raises(DimensionGuardError):
        operator.to_dense()
    sparse = operator.to_sparse()
    assert sparse.shape == (720, 720) and sparse.nnz == 720


def test_commutator_norm_dense_and_sparse():
    p = particle_operator(parse_cycles("(12)", 3))
    q = ordering_operator(parse_cycles("(12)", 3))
    assert p.commutator_norm(q.to_dense()) == 0.0
    assert p.commutator_norm(q.to_sparse()) == 0.0
    swap = well_transposition(letter_map()["A"], letter_map()["B"])
    assert p.commutator_norm(swap.to_dense()) == 1.0


def test_images_must_be_bijection():
    with pytest.raises(DomainError):
        WellOperator(2, np.array([0, 0]))
