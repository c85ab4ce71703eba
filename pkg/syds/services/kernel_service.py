"""
Kernel Service
Treedepth-based compression: sibling subtrees of the same type are collapsed to
one representative, applied bottom-up over the decomposition, plus the size
bounds of that process and a solve-via-kernel pipeline
"""

import json
import logging
from itertools import groupby, permutations, product
from math import factorial, prod
from typing import Dict, Iterator, List, Optional, Tuple

from syds.config import get_settings
from syds.models.decomposition import TreedepthDecomposition
from syds.models.errors import DecompositionError, ResourceCapError
from syds.models.schemas import KernelReport, ProblemInstance, ProblemType
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.solver_service import solve_conv, solve_reach
from syds.tools.treedepth_tool import (
    heuristic_decomposition,
    validate_decomposition,
    with_virtual_root,
)
from syds.utils.bit_utils import pack, unpack

logger = logging.getLogger(__name__)

# Bit-length guard for kernel_size_bound terms
MAX_BOUND_BITS = 1 << 24
# Arrangements of tied children tried when canonizing one subtree
MAX_CANONICAL_ORDERS = 1 << 16


class SubtreeSignature:
    """Canonical code of a decomposition subtree; order lists its nodes canonically"""

    def __init__(self, code: bytes, order: List[int]):
        self.code = code
        self.order = order

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SubtreeSignature):
            return NotImplemented
        return self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __repr__(self) -> str:
        return f"SubtreeSignature(nodes={len(self.order)}, code={len(self.code)} bytes)"


class _Encoded:
    """Minimal struct of a subtree and every node order that realizes it"""

    __slots__ = ("struct", "key", "orders")

    def __init__(self, struct: list, key: str, orders: List[List[int]]):
        self.struct = struct
        self.key = key
        self.orders = orders

    @property
    def order(self) -> List[int]:
        return self.orders[0]


class _Workspace:
    """
    Mutable copy of an instance and its decomposition

    A disconnected decomposition gets a virtual root (depth 0) that carries
    no SyDS node; real roots keep depth 1.
    """

    def __init__(self, inst: ProblemInstance, td: TreedepthDecomposition):
        syds = inst.syds
        n = syds.node_count
        self.node_count = n
        self.names = list(syds.network.names)
        self.ins: List[List[int]] = [list(ins) for ins in syds.network.in_neighbors]
        self.outs: List[set] = [set(outs) for outs in syds.network.out_neighbors]
        self.tables: List[List[int]] = [list(f.values) for f in syds.functions]
        self.start = unpack(inst.start, n) if inst.start is not None else [0] * n
        self.has_start = inst.start is not None
        self.target = unpack(inst.target, n) if inst.target is not None else None
        self.horizon = inst.horizon
        joined, self.virtual = with_virtual_root(td)
        self.parent: List[Optional[int]] = list(joined.parent)
        self.alive = [True] * len(self.parent)
        self.depth = self._depths()
        self.trivial_no = False

    def _depths(self) -> List[int]:
        depth: Dict[int, int] = {}
        if self.virtual is not None:
            depth[self.virtual] = 0
        for start in range(len(self.parent)):
            chain = []
            v: Optional[int] = start
            while v is not None and v not in depth:
                chain.append(v)
                v = self.parent[v]
            base = 0 if v is None else depth[v]
            for u in reversed(chain):
                base += 1
                depth[u] = base
        return [depth[v] for v in range(len(self.parent))]

    def children_of(self, v: int) -> List[int]:
        return [c for c, p in enumerate(self.parent) if p == v and self.alive[c]]

    def encode(self, z: int) -> _Encoded:
        """
        Rooted-tree canonization of the subtree at z with per-node payloads.

        Children are sorted by code. Children with equal codes, and the
        alternative canonical orders inside each child, are tried in every
        arrangement; the smallest resulting struct is the code of z.
        """
        kids = sorted((self.encode(c) for c in self.children_of(z)), key=lambda item: item.key)
        groups = [list(group) for _, group in groupby(kids, key=lambda item: item.key)]
        kid_structs = [kid.struct for kid in kids]

        best_key: Optional[str] = None
        best_struct: list = []
        best_orders: List[List[int]] = []
        for below in self._arrangements(z, groups):
            order = [z] + below
            struct = self._payload(z, order) + [kid_structs]
            key = json.dumps(struct, separators=(",", ":"))
            if best_key is None or key < best_key:
                best_key, best_struct, best_orders = key, struct, [order]
            elif key == best_key:
                best_orders.append(order)
        return _Encoded(best_struct, best_key, self._distinct_for_ancestors(z, best_orders))

    def _distinct_for_ancestors(self, z: int, orders: List[List[int]]) -> List[List[int]]:
        """Keep one order per placement of the nodes that feed ancestors of z"""
        dz = self.depth[z]
        seen = set()
        kept = []
        for order in orders:
            visible = tuple(
                u if any(self.depth[a] < dz for a in self.outs[u]) else -1 for u in order
            )
            if visible not in seen:
                seen.add(visible)
                kept.append(order)
        return kept

    def _arrangements(self, z: int, groups: List[List[_Encoded]]) -> Iterator[List[int]]:
        total = 1
        for group in groups:
            total *= factorial(len(group)) * prod(len(kid.orders) for kid in group)
        if total > MAX_CANONICAL_ORDERS:
            raise ResourceCapError(
                f"Canonizing the subtree at node {z} needs {total} arrangements, "
                f"more than the cap of {MAX_CANONICAL_ORDERS}",
                cap=MAX_CANONICAL_ORDERS,
            )
        per_group = []
        for group in groups:
            options = []
            for arranged in permutations(group):
                for choice in product(*(kid.orders for kid in arranged)):
                    options.append([node for kid_order in choice for node in kid_order])
            per_group.append(options)
        for combination in product(*per_group):
            yield [node for part in combination for node in part]

    def _payload(self, z: int, order: List[int]) -> list:
        """Start state, argument keys, ancestor arcs and re-indexed table of z"""
        position = {node: i for i, node in enumerate(order)}
        dz = self.depth[z]

        keys = []
        for u in self.ins[z]:
            if self.depth[u] < dz:
                keys.append((0, self.depth[u]))
            else:
                keys.append((1, position[u]))
        canonical = sorted(range(len(keys)), key=lambda j: keys[j])
        k = len(keys)
        table = self.tables[z]
        reindexed = []
        for index in range(1 << (k + 1)):
            original = (index >> k) << k
            for slot, j in enumerate(canonical):
                if (index >> (k - 1 - slot)) & 1:
                    original |= 1 << (k - 1 - j)
            reindexed.append("1" if table[original] else "0")
        out_ancestors = sorted(self.depth[a] for a in self.outs[z] if self.depth[a] < dz)

        return [
            self.start[z],
            [list(keys[j]) for j in canonical],
            out_ancestors,
            "".join(reindexed),
        ]

    def compress_at(
        self, v: int, max_subtree_size: Optional[int] = None
    ) -> List[Tuple[int, int]]:
        children = self.children_of(v)
        encoded = {c: self.encode(c) for c in children}
        if max_subtree_size is not None:
            for c, enc in encoded.items():
                if len(enc.order) > max_subtree_size:
                    raise DecompositionError(
                        f"Subtree at child {c} of node {v} has {len(enc.order)} nodes, "
                        f"more than the allowed {max_subtree_size}"
                    )
        groups: Dict[str, List[int]] = {}
        for c in sorted(children):
            groups.setdefault(encoded[c].key, []).append(c)

        image: Dict[int, int] = {}
        classes: List[Tuple[int, int]] = []
        for members in groups.values():
            if len(members) < 2:
                continue
            representative = members[0]
            classes.append((representative, len(members)))
            for other in members[1:]:
                for kept, deleted in zip(encoded[representative].order, encoded[other].order):
                    image[deleted] = kept
        if not image:
            return []

        if self.target is not None:
            for deleted, kept in image.items():
                if self.target[deleted] != self.target[kept]:
                    self.trivial_no = True

        for deleted in image:
            self.alive[deleted] = False
        for a in range(self.node_count):
            if not self.alive[a]:
                continue
            if any(u in image for u in self.ins[a]):
                self._restrict(a, image)
        for deleted in image:
            for u in self.ins[deleted]:
                self.outs[u].discard(deleted)
            self.outs[deleted] = set()
        logger.debug(f"🗜️  Compressed at node {v}: removed {len(image)} nodes in {len(classes)} classes")
        return classes

    def _restrict(self, a: int, image: Dict[int, int]) -> None:
        """Shrink a's table to its surviving in-neighbors through the true extension"""
        old_ins = self.ins[a]
        keep = [u for u in old_ins if self.alive[u]]
        slot = {u: i for i, u in enumerate(keep)}
        k_old, k_new = len(old_ins), len(keep)
        for u in old_ins:
            if not self.alive[u] and image.get(u) not in slot:
                raise DecompositionError(
                    f"Node {a} reads deleted node {u} but not its representative"
                )
        table = self.tables[a]
        restricted = []
        for index in range(1 << (k_new + 1)):
            original = index >> k_new
            for u in old_ins:
                source = u if self.alive[u] else image[u]
                bit = (index >> (k_new - 1 - slot[source])) & 1
                original = (original << 1) | bit
            restricted.append(table[original])
        self.ins[a] = keep
        self.tables[a] = restricted

    def export(self) -> Tuple[ProblemInstance, TreedepthDecomposition]:
        survivors = [v for v in range(self.node_count) if self.alive[v]]
        index = {old: new for new, old in enumerate(survivors)}
        network = Network(
            len(survivors),
            [[index[u] for u in self.ins[old]] for old in survivors],
            [self.names[old] for old in survivors],
        )
        functions = [
            LocalFunction("".join(str(b) for b in self.tables[old])) for old in survivors
        ]
        parent: List[Optional[int]] = []
        for old in survivors:
            p = self.parent[old]
            parent.append(None if p is None or p == self.virtual else index[p])
        inst = ProblemInstance(
            syds=SyDS(network, functions),
            start=pack(self.start[old] for old in survivors) if self.has_start else None,
            target=(
                pack(self.target[old] for old in survivors) if self.target is not None else None
            ),
            horizon=self.horizon,
        )
        return inst, TreedepthDecomposition(parent)


def _trivial_no() -> Tuple[ProblemInstance, TreedepthDecomposition]:
    network = Network(1, [[]], ["trivial_no"])
    syds = SyDS(network, [LocalFunction.identity()])
    return ProblemInstance(syds=syds, start=0, target=1), TreedepthDecomposition([None])


def _check_decomposition(inst: ProblemInstance, td: TreedepthDecomposition) -> None:
    if not validate_decomposition(inst.syds.network, td):
        raise DecompositionError("Treedepth decomposition is not valid for this network")


def signature(
    inst: ProblemInstance, td: TreedepthDecomposition, u: int
) -> SubtreeSignature:
    """Canonical code of the decomposition subtree rooted at u"""
    _check_decomposition(inst, td)
    encoded = _Workspace(inst, td).encode(u)
    return SubtreeSignature(encoded.key.encode("utf-8"), encoded.order)


def compress_at(
    inst: ProblemInstance,
    td: TreedepthDecomposition,
    v: int,
    max_subtree_size: Optional[int] = None,
) -> Tuple[ProblemInstance, TreedepthDecomposition, KernelReport]:
    """
    Keep one child subtree of v per type, rewriting the survivors' functions.

    Raises:
        DecompositionError: If td is invalid or a child subtree exceeds max_subtree_size
    """
    _check_decomposition(inst, td)
    workspace = _Workspace(inst, td)
    classes = workspace.compress_at(v, max_subtree_size)
    return _finish(inst, workspace, [classes] if classes else [])


def _finish(
    inst: ProblemInstance, workspace: _Workspace, classes: List[List[Tuple[int, int]]]
) -> Tuple[ProblemInstance, TreedepthDecomposition, KernelReport]:
    original = inst.node_count
    if workspace.trivial_no:
        logger.info("🚫 Target disagrees inside a merged class, returning a trivial NO instance")
        kernel, kernel_td = _trivial_no()
        discarded = True
    else:
        kernel, kernel_td = workspace.export()
        discarded = False
    report = KernelReport(
        removed_nodes=original - kernel.node_count,
        classes=classes,
        discarded_as_trivial_no=discarded,
        original_nodes=original,
        kernel_nodes=kernel.node_count,
    )
    return kernel, kernel_td, report


def kernelize(
    inst: ProblemInstance, td: TreedepthDecomposition
) -> Tuple[ProblemInstance, TreedepthDecomposition, KernelReport]:
    """Apply compress_at to every node, deepest levels first"""
    _check_decomposition(inst, td)
    workspace = _Workspace(inst, td)
    deepest = max(workspace.depth, default=0)
    classes: List[List[Tuple[int, int]]] = []
    for level in range(deepest - 1, -1, -1):
        for v in range(len(workspace.parent)):
            if workspace.alive[v] and workspace.depth[v] == level:
                merged = workspace.compress_at(v)
                if merged:
                    classes.append(merged)
        if workspace.trivial_no:
            break
    kernel, kernel_td, report = _finish(inst, workspace, classes)
    logger.info(f"📦 Kernel: {report.original_nodes} -> {report.kernel_nodes} nodes")
    return kernel, kernel_td, report


def _guard(bits: int, what: str) -> None:
    if bits > MAX_BOUND_BITS:
        raise ResourceCapError(
            f"{what} would need about {bits} bits, beyond the {MAX_BOUND_BITS}-bit guard",
            cap=MAX_BOUND_BITS,
        )


def type_count_bound(L: int, m: int) -> int:
    """Upper bound m^(m-2) * (4^(L+m) * 2^(L+m+1))^m on the number of sibling types"""
    if L < 1 or m < 1:
        raise ValueError(f"Need L >= 1 and m >= 1, got L={L}, m={m}")
    _guard(m * (3 * (L + m) + 1) + max(m - 2, 0) * m.bit_length(), "type_count_bound")
    trees = m ** (m - 2) if m >= 2 else 1
    return trees * (4 ** (L + m) * 2 ** (L + m + 1)) ** m


def kernel_size_bound(L: int, l: int) -> int:
    """
    Subtree size bound g(L, l) after compressing levels bottom-up.

    g(L, 1) = 1 and g(L, l+1) = g^(g-1) * (4^(L+g) * 2^(L+g+1))^g + 1.
    h(L) = g(L, L). Levels past L are still computed, g(1, 2) = 129.

    Raises:
        ResourceCapError: If a term outgrows the bit-length guard
    """
    if L < 1 or l < 1:
        raise ValueError(f"Need L >= 1 and l >= 1, got L={L}, l={l}")
    g = 1
    for _ in range(l - 1):
        _guard((g - 1) * g.bit_length() + g * (3 * (L + g) + 1), "kernel_size_bound")
        g = g ** (g - 1) * (4 ** (L + g) * 2 ** (L + g + 1)) ** g + 1
    return g


def solve_via_kernel(
    inst: ProblemInstance,
    td: Optional[TreedepthDecomposition] = None,
    problem: str = ProblemType.REACH,
) -> bool:
    """
    Kernelize, then decide Reachability or Convergence on the kernel.

    Without a decomposition the DFS heuristic provides one.

    Raises:
        ValueError: For Convergence Guarantee, which has no kernel
        OrbitMemoryError: If the kernel's orbit outgrows the memory cap
    """
    if problem not in (ProblemType.REACH, ProblemType.CONV):
        raise ValueError(f"solve_via_kernel supports reach and conv, not {problem!r}")
    if problem == ProblemType.CONV:
        # the target plays no part in convergence
        inst = inst.model_copy(update={"target": None})
    if td is None:
        td = heuristic_decomposition(inst.syds.network)
        logger.info(f"🌲 Using heuristic decomposition of height {td.height}")
    kernel, _, report = kernelize(inst, td)
    if report.discarded_as_trivial_no:
        return False
    cap = get_settings().orbit_memory_cap
    if problem == ProblemType.REACH:
        return solve_reach(kernel, memory_cap=cap, allow_fallback=False)[0]
    return solve_conv(kernel, memory_cap=cap, allow_fallback=False)[0]
