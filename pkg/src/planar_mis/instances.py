"""Small named test instances."""
from __future__ import annotations

import networkx as nx

from .graph import Graph


def complete4() -> Graph:
    return Graph.from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def cube() -> Graph:
    # vertices are 3-bit words, edges join words at Hamming distance 1
    edges = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]
    return Graph.from_edges(8, edges)


def prism(k: int) -> Graph:
    """Circular ladder C_k x K_2 (k=3: triangular prism, k=4: cube)."""
    edges = []
    for i in range(k):
        edges.append((i, (i + 1) % k))
        edges.append((k + i, k + (i + 1) % k))
        edges.append((i, k + i))
    return Graph.from_edges(2 * k, edges)


def k33() -> Graph:
    return Graph.from_edges(6, [(a, b) for a in range(3) for b in range(3, 6)])


def single_edge() -> Graph:
    return Graph.from_edges(2, [(0, 1)])


def from_networkx(h: nx.Graph) -> Graph:
    h = nx.convert_node_labels_to_integers(h, ordering="sorted")
    return Graph.from_edges(h.number_of_nodes(), h.edges())


def dodecahedron() -> Graph:
    return from_networkx(nx.dodecahedral_graph())


NAMED = {
    "K4": complete4,
    "Q3": cube,
    "prism3": lambda: prism(3),
    "prism5": lambda: prism(5),
    "prism6": lambda: prism(6),
    "K33": k33,
    "P2": single_edge,
    "dodecahedron": dodecahedron,
}

# cubic planar instances with n <= 12
SMALL_CUBIC_PLANAR = ("K4", "prism3", "Q3", "prism5", "prism6")
