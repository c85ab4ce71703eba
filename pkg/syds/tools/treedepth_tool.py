"""
Treedepth Tool
Validate, compute exactly (small graphs) or approximate treedepth decompositions
of a network's underlying undirected graph
"""

import logging
from typing import Dict, List, Optional, Tuple

import networkx as nx

from syds.config import get_settings
from syds.models.decomposition import TreedepthDecomposition
from syds.models.errors import ResourceCapError
from syds.models.system import Network

logger = logging.getLogger(__name__)


def validate_decomposition(net: Network, td: TreedepthDecomposition) -> bool:
    """True iff td is a rooted forest on the network's nodes whose closure covers every edge"""
    if td.node_count != net.node_count or not td.is_forest():
        return False
    ancestor_sets = [set(td.ancestors(v)) for v in range(td.node_count)]
    for u, v in net.undirected().edges():
        if u not in ancestor_sets[v] and v not in ancestor_sets[u]:
            return False
    return True


class _ExactSearch:
    """Memoized vertex-removal search over connected node sets encoded as bitmasks"""

    def __init__(self, graph: nx.Graph, n: int):
        self.adjacency = [0] * n
        for u, v in graph.edges():
            self.adjacency[u] |= 1 << v
            self.adjacency[v] |= 1 << u
        self.value: Dict[int, int] = {}
        self.choice: Dict[int, int] = {}

    def components(self, mask: int) -> List[int]:
        parts = []
        remaining = mask
        while remaining:
            seed = remaining & -remaining
            part = frontier = seed
            while frontier:
                bit = frontier & -frontier
                frontier ^= bit
                grown = self.adjacency[bit.bit_length() - 1] & mask & ~part
                part |= grown
                frontier |= grown
            parts.append(part)
            remaining &= ~part
        return parts

    def forest_depth(self, mask: int) -> int:
        return max((self.connected_depth(c) for c in self.components(mask)), default=0)

    def connected_depth(self, mask: int) -> int:
        if mask in self.value:
            return self.value[mask]
        if mask & (mask - 1) == 0:
            self.value[mask] = 1
            self.choice[mask] = mask.bit_length() - 1
            return 1
        best, best_root = None, None
        bits = mask
        while bits:
            bit = bits & -bits
            bits ^= bit
            depth = 1 + self.forest_depth(mask & ~bit)
            if best is None or depth < best:
                best, best_root = depth, bit.bit_length() - 1
                # connected with two or more nodes: 2 is optimal
                if best == 2:
                    break
        self.value[mask] = best
        self.choice[mask] = best_root
        return best

    def build(self, mask: int, parent: List[Optional[int]], above: Optional[int]) -> None:
        for part in self.components(mask):
            self.connected_depth(part)
            root = self.choice[part]
            parent[root] = above
            self.build(part & ~(1 << root), parent, root)


def compute_treedepth_exact(
    net: Network, max_nodes: Optional[int] = None
) -> TreedepthDecomposition:
    """
    Minimum-height treedepth decomposition by exhaustive search.

    td(G) = 1 + min over v of td(G - v) for connected G, and the maximum
    over components otherwise.

    Raises:
        ResourceCapError: If the network has more than max_nodes nodes
    """
    n = net.node_count
    cap = max_nodes if max_nodes is not None else get_settings().treedepth_exact_cap
    if n > cap:
        raise ResourceCapError(
            f"Exact treedepth over {n} nodes exceeds the cap of {cap} nodes", cap=cap
        )
    search = _ExactSearch(net.undirected(), n)
    parent: List[Optional[int]] = [None] * n
    search.build((1 << n) - 1, parent, None)
    td = TreedepthDecomposition(parent)
    logger.debug(f"Exact treedepth {td.height} over {n} nodes ({len(search.value)} sets)")
    return td


def heuristic_decomposition(net: Network) -> TreedepthDecomposition:
    """
    DFS-tree decomposition, one tree per connected component.

    Each DFS starts at the component's highest-degree node (lowest id on ties).
    Undirected DFS trees only leave back edges, so the closure covers every edge.
    """
    graph = net.undirected()
    parent: List[Optional[int]] = [None] * net.node_count
    for component in nx.connected_components(graph):
        root = min(component, key=lambda v: (-graph.degree(v), v))
        for child, pred in nx.dfs_predecessors(graph, source=root).items():
            parent[child] = pred
    return TreedepthDecomposition(parent)


def treedepth_of(td: TreedepthDecomposition) -> int:
    return td.height


def with_virtual_root(td: TreedepthDecomposition) -> Tuple[TreedepthDecomposition, Optional[int]]:
    """
    Join the trees of a disconnected decomposition under one extra node.

    Returns:
        (decomposition, index of the added root or None if td was already a tree)
    """
    roots = td.roots()
    if len(roots) <= 1:
        return td, None
    root = td.node_count
    parent = [root if p is None else p for p in td.parent] + [None]
    return TreedepthDecomposition(parent), root
