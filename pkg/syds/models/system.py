"""
SyDS domain types
Network, local functions and the synchronous dynamic system itself
"""

from typing import Callable, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx


class NodeId(NamedTuple):
    index: int
    name: Optional[str] = None

    def label(self) -> str:
        return self.name if self.name is not None else f"v{self.index}"


class Network:
    """
    Directed network on nodes 0..n-1

    in_neighbors[v] is the canonical argument order of v's local function.
    The constructor stores what it is given; validate() reports violations.
    """

    def __init__(
        self,
        node_count: int,
        in_neighbors: Sequence[Sequence[int]],
        names: Optional[Sequence[Optional[str]]] = None,
    ):
        if node_count < 0:
            raise ValueError(f"node_count must be non-negative, got {node_count}")
        if len(in_neighbors) != node_count:
            raise ValueError(
                f"Expected {node_count} in-neighbor lists, got {len(in_neighbors)}"
            )
        self.node_count = node_count
        self.in_neighbors: Tuple[Tuple[int, ...], ...] = tuple(tuple(ins) for ins in in_neighbors)
        self.names: Tuple[Optional[str], ...] = (
            tuple(names) if names is not None else tuple(None for _ in range(node_count))
        )
        outs: List[List[int]] = [[] for _ in range(node_count)]
        for v, ins in enumerate(self.in_neighbors):
            for u in ins:
                if 0 <= u < node_count:
                    outs[u].append(v)
        self.out_neighbors: Tuple[Tuple[int, ...], ...] = tuple(tuple(o) for o in outs)

    @classmethod
    def from_arcs(
        cls,
        node_count: int,
        arcs: Iterable[Tuple[int, int]],
        names: Optional[Sequence[Optional[str]]] = None,
    ) -> "Network":
        """Build a network whose in-neighbor order follows the order the arcs are given in"""
        ins: List[List[int]] = [[] for _ in range(node_count)]
        for u, v in arcs:
            ins[v].append(u)
        return cls(node_count, ins, names)

    def node(self, index: int) -> NodeId:
        return NodeId(index, self.names[index])

    def label(self, index: int) -> str:
        return self.node(index).label()

    def arcs(self) -> List[Tuple[int, int]]:
        return [(u, v) for v, ins in enumerate(self.in_neighbors) for u in ins]

    def in_degree(self, v: int) -> int:
        return len(self.in_neighbors[v])

    @property
    def max_in_degree(self) -> int:
        return max((len(ins) for ins in self.in_neighbors), default=0)

    def to_networkx(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(range(self.node_count))
        graph.add_edges_from(
            (u, v) for u, v in self.arcs() if u != v and 0 <= u < self.node_count
        )
        return graph

    def undirected(self) -> nx.Graph:
        """Underlying simple graph, orientations forgotten"""
        return self.to_networkx().to_undirected()

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self.label(v) for v in range(self.node_count))

    def __eq__(self, other: object) -> bool:
        # an unnamed node equals one named after its default label
        if not isinstance(other, Network):
            return NotImplemented
        return (
            self.node_count == other.node_count
            and self.in_neighbors == other.in_neighbors
            and self.labels == other.labels
        )

    def __repr__(self) -> str:
        return f"Network(node_count={self.node_count}, arcs={len(self.arcs())})"


class LocalFunction:
    """
    Truth table of a node's local function

    Index bits: the node's own state is the most significant bit, followed by
    the in-neighbors in the network's declared order.
    """

    def __init__(self, table: str):
        self.table = table
        try:
            self._values: Tuple[int, ...] = tuple(int(ch) for ch in table)
        except ValueError:
            self._values = ()

    @property
    def arity(self) -> Optional[int]:
        size = len(self.table)
        if size == 0 or size & (size - 1):
            return None
        return size.bit_length() - 1

    @property
    def is_well_formed(self) -> bool:
        return self.arity is not None and all(ch in "01" for ch in self.table)

    @classmethod
    def from_callable(cls, arity: int, fn: Callable[..., int]) -> "LocalFunction":
        """
        Compile fn(self_state, *in_neighbor_states) into a table.

        Args:
            arity: 1 + number of in-neighbors
            fn: Returns a truthy value for output 1
        """
        chars = []
        for index in range(1 << arity):
            args = [(index >> (arity - 1 - k)) & 1 for k in range(arity)]
            chars.append("1" if fn(*args) else "0")
        return cls("".join(chars))

    @classmethod
    def identity(cls, in_degree: int = 0) -> "LocalFunction":
        return cls.from_callable(in_degree + 1, lambda s, *_: s)

    @classmethod
    def negation(cls, in_degree: int = 0) -> "LocalFunction":
        return cls.from_callable(in_degree + 1, lambda s, *_: 1 - s)

    @classmethod
    def constant(cls, value: int, in_degree: int = 0) -> "LocalFunction":
        return cls.from_callable(in_degree + 1, lambda *_: value)

    def index_of(self, self_state: int, args: Sequence[int]) -> int:
        index = self_state
        for bit in args:
            index = (index << 1) | bit
        return index

    def lookup(self, self_state: int, args: Sequence[int]) -> int:
        return self._values[self.index_of(self_state, args)]

    @property
    def values(self) -> Tuple[int, ...]:
        return self._values

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LocalFunction):
            return NotImplemented
        return self.table == other.table

    def __hash__(self) -> int:
        return hash(self.table)

    def __repr__(self) -> str:
        return f"LocalFunction({self.table!r})"


class SyDS:
    """Synchronous dynamic system over the binary domain"""

    domain_size = 2

    def __init__(self, network: Network, functions: Sequence[LocalFunction]):
        if len(functions) != network.node_count:
            raise ValueError(
                f"Expected {network.node_count} local functions, got {len(functions)}"
            )
        self.network = network
        self.functions: Tuple[LocalFunction, ...] = tuple(functions)
        self._compiled: Optional[List[Tuple[int, Tuple[int, ...], Tuple[int, ...]]]] = None

    @property
    def node_count(self) -> int:
        return self.network.node_count

    def compiled(self) -> List[Tuple[int, Tuple[int, ...], Tuple[int, ...]]]:
        """Per-node (node, in-neighbors, table values) triples used by the successor loop"""
        if self._compiled is None:
            self._compiled = [
                (v, self.network.in_neighbors[v], self.functions[v].values)
                for v in range(self.node_count)
            ]
        return self._compiled

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SyDS):
            return NotImplemented
        return self.network == other.network and self.functions == other.functions

    def __repr__(self) -> str:
        return f"SyDS(nodes={self.node_count}, arcs={len(self.network.arcs())})"
