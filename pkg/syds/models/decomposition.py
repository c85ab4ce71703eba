"""
Treedepth decomposition model
"""

from typing import Dict, List, Optional, Sequence, Tuple


class TreedepthDecomposition:
    """
    Rooted forest over the network's nodes given by a parent map

    parent[v] is None for roots. Roots have depth 1. Depth and height
    are only meaningful once the parent map is known to be a forest.
    """

    def __init__(self, parent: Sequence[Optional[int]]):
        self.parent: Tuple[Optional[int], ...] = tuple(parent)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def is_forest(self) -> bool:
        """True iff every parent chain ends at a root without revisiting a node"""
        n = self.node_count
        state = [0] * n  # 0 unseen, 1 on current chain, 2 done
        for start in range(n):
            chain = []
            v: Optional[int] = start
            while v is not None and state[v] == 0:
                state[v] = 1
                chain.append(v)
                p = self.parent[v]
                if p is not None and not 0 <= p < n:
                    return False
                v = p
            if v is not None and state[v] == 1:
                return False
            for u in chain:
                state[u] = 2
        return True

    def roots(self) -> List[int]:
        return [v for v, p in enumerate(self.parent) if p is None]

    def children(self) -> List[List[int]]:
        kids: List[List[int]] = [[] for _ in range(self.node_count)]
        for v, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(v)
        return kids

    def depths(self) -> List[int]:
        depth: Dict[int, int] = {}
        for start in range(self.node_count):
            chain = []
            v: Optional[int] = start
            while v is not None and v not in depth:
                chain.append(v)
                v = self.parent[v]
            base = 0 if v is None else depth[v]
            for u in reversed(chain):
                base += 1
                depth[u] = base
        return [depth[v] for v in range(self.node_count)]

    def ancestors(self, v: int) -> List[int]:
        """Ancestors of v from its parent up to the root"""
        result = []
        p = self.parent[v]
        while p is not None:
            result.append(p)
            p = self.parent[p]
        return result

    @property
    def height(self) -> int:
        return max(self.depths(), default=0)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreedepthDecomposition):
            return NotImplemented
        return self.parent == other.parent

    def __repr__(self) -> str:
        return f"TreedepthDecomposition(parent={list(self.parent)})"
