"""
Bond edges - pairs of wells joined by one adjacent exchange
Bond class k swaps the particles sitting at ordered positions k and k+1
"""

from dataclasses import dataclass
from typing import Dict, List

import networkx as nx

from errors import DomainError
from wells.orderings import Ordering, all_orderings, check_size, letter_of, ordering_index
from wells.permutation import Permutation


@dataclass(frozen=True)
class BondEdge:
    a: Ordering
    b: Ordering
    bond: int

    def to_dict(self) -> Dict:
        return {"a": self.a.to_list(), "b": self.b.to_list(), "bond": self.bond}


def swap_positions(w: Ordering, k: int) -> Ordering:
    if not 1 <= k < w.size:
        raise DomainError(f"bond {k} out of range 1..{w.size - 1}")
    seq = list(w.seq)
    seq[k - 1], seq[k] = seq[k], seq[k - 1]
    return Ordering(tuple(seq))


def bond_edges(n: int) -> List[BondEdge]:
    """Every edge once, sorted by bond class and then by well indices (a before b)"""
    check_size(n)
    edges = []
    for a in all_orderings(n):
        ia = ordering_index(a)
        for k in range(1, n):
            b = swap_positions(a, k)
            if ia < ordering_index(b):
                edges.append(BondEdge(a, b, k))
    edges.sort(key=lambda e: (e.bond, ordering_index(e.a), ordering_index(e.b)))
    return edges


def bond_transposition(n: int, k: int) -> Permutation:
    """Adjacent transposition (k k+1) acting on positions"""
    return Permutation.transposition(n, k, k + 1)


def edges_by_class(n: int) -> Dict[int, List[BondEdge]]:
    classes = {k: [] for k in range(1, n)}
    for edge in bond_edges(n):
        classes[edge.bond].append(edge)
    return classes


def ordering_graph(n: int) -> nx.Graph:
    """Permutohedron on the wells; nodes are well indices, edges carry their bond class"""
    graph = nx.Graph(n_particles=n)
    for index, w in enumerate(all_orderings(n)):
        attrs = {"ordering": w.to_list()}
        if n == 3:
            attrs["letter"] = letter_of(w)
        graph.add_node(index, **attrs)
    for edge in bond_edges(n):
        graph.add_edge(ordering_index(edge.a), ordering_index(edge.b), bond=edge.bond)
    return graph
