"""
QBF Reduction Tool
Compiles a quantified 3-CNF into a SyDS that reaches the all-one configuration
(equivalently, converges) iff the formula is true

Layout shared by both variants:
- a control node z read by every other node; z = 1 forces every node to 1
- counter nodes u_1..u_(n+1) whose states at step t >= 1 spell (t-1) mod 2^(n+1),
  each driven by private truncated copies of the path counter started at x^1
- clause nodes over private counter nodes, one per literal occurrence
- subformula nodes s_1..s_n evaluating the quantifier prefix as the counter runs
- z latches to 1 once the counter reads 2^n + n while s_n holds 1

The constant-degree variant rebuilds every wide node from two-input links,
relays and select nodes, so each node reads z plus at most two others and the
network minus z is a directed forest.
"""

import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

from syds.models.errors import GadgetError
from syds.models.formulas import QbfFormula, Quantifier
from syds.models.schemas import ProblemInstance
from syds.models.system import LocalFunction, Network, SyDS
from syds.services.dynamics_service import simulate
from syds.tools.path_counter_tool import check_tuple_positions
from syds.tools.shape_tool import check_reduction_shape
from syds.utils.bit_utils import all_ones, pack

logger = logging.getLogger(__name__)

AND = "and"
OR = "or"


class _Wire(NamedTuple):
    """A node carrying a signal delayed by lag steps, optionally read negated"""

    node: int
    lag: int
    negated: bool = False

    def inverted(self) -> "_Wire":
        return _Wire(self.node, self.lag, not self.negated)


class QbfReduction(NamedTuple):
    instance: ProblemInstance
    control: int
    counters: List[int]  # u_1..u_(n+1)
    subformulas: List[int]  # s_1..s_n
    constant_degree: bool


def _gate(fn: Callable[..., int]) -> Callable[..., int]:
    def gated(s, z, *args):
        return 1 if z else fn(s, *args)

    return gated


def _combine(op: str, x: int, y: int) -> int:
    return x & y if op == AND else x | y


def _quantifier_op(q: str) -> str:
    return OR if q == Quantifier.EXISTS else AND


class _Builder:
    def __init__(self):
        self.in_neighbors: List[List[int]] = [[]]
        self.fns: List[Callable[..., int]] = [lambda s: s]
        self.names: List[str] = ["z"]
        self.start: List[int] = [0]
        self.control = 0

    def node(
        self,
        kind: str,
        inputs: List[int],
        fn: Callable[..., int],
        start: int = 0,
        name: Optional[str] = None,
    ) -> int:
        index = len(self.names)
        self.in_neighbors.append([self.control] + list(inputs))
        self.fns.append(_gate(fn))
        self.names.append(name if name is not None else f"{kind}_{index}")
        self.start.append(start)
        return index

    def copy(self, j: int) -> int:
        """Private path-counter prefix ending at its j-th significant node, started at x^1"""
        length = 1 if j == 1 else 2 * j - 2
        last = self.node("p", [], lambda s: 1 - s, start=1)
        for k in range(2, length + 1):
            if k % 2 == 0:
                last = self.node("p", [last], lambda s, a: 1 if s == a else 0, start=1)
            else:
                last = self.node("p", [last], lambda s, a: a & (1 - s), start=0)
        return last

    def starter(self) -> _Wire:
        """0 at step 0, then 1 forever"""
        return _Wire(self.node("one", [], lambda s: 1), 1)

    def relay(self, w: _Wire) -> _Wire:
        if w.negated:
            node = self.node("r", [w.node], lambda s, a: 1 - a)
        else:
            node = self.node("r", [w.node], lambda s, a: a)
        return _Wire(node, w.lag + 1)

    def pad(self, w: _Wire, lag: int) -> _Wire:
        if w.lag > lag:
            raise GadgetError(f"Cannot pad a wire of lag {w.lag} down to {lag}")
        while w.lag < lag:
            w = self.relay(w)
        return w

    def link(self, a: _Wire, b: _Wire, op: str, name: Optional[str] = None) -> _Wire:
        target = max(a.lag, b.lag)
        a, b = self.pad(a, target), self.pad(b, target)
        na, nb = int(a.negated), int(b.negated)
        node = self.node(
            "l", [a.node, b.node], lambda s, x, y: _combine(op, x ^ na, y ^ nb), name=name
        )
        return _Wire(node, target + 1)

    def and_chain(self, wires: List[_Wire]) -> _Wire:
        layer = list(wires)
        while len(layer) > 1:
            merged = [self.link(layer[k], layer[k + 1], AND) for k in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                merged.append(layer[-1])
            layer = merged
        return layer[0]

    def flip_counter(self, i: int, name: Optional[str] = None) -> _Wire:
        """u_i as a flip node toggled every 2^(i-1) steps by a padded AND chain"""
        if i == 1:
            trigger = self.starter()
        else:
            sig = [_Wire(self.copy(j), 0) for j in range(1, i)]
            trigger = self.pad(self.and_chain(sig), 2 ** (i - 1))
        return _Wire(self.node("u", [trigger.node], lambda s, a: s ^ a, name=name), 0)

    def decode_counter(
        self, i: int, positions: Dict[Tuple[int, ...], int], name: Optional[str] = None
    ) -> _Wire:
        """u_i read off the position of the tuple on i private copies' significant nodes"""
        sig = [self.copy(j) for j in range(1, i + 1)]
        period = 2**i

        def fn(s, *bits):
            return (((positions[tuple(bits)] - 1) % period) >> (i - 1)) & 1

        return _Wire(self.node("u", sig, fn, name=name), 0)

    def build(self) -> Tuple[SyDS, int]:
        functions = [
            LocalFunction.from_callable(len(ins) + 1, fn)
            for ins, fn in zip(self.in_neighbors, self.fns)
        ]
        network = Network(len(self.names), self.in_neighbors, self.names)
        return SyDS(network, functions), pack(self.start)


def _counter_literals(
    counter: Callable[..., _Wire], value: int, bits: int, names: Optional[List[str]] = None
) -> List[_Wire]:
    """Private counter wires u_1..u_bits signed so that their AND means 'counter == value'"""
    wires = []
    for k in range(1, bits + 1):
        wire = counter(k, names[k - 1]) if names else counter(k)
        wires.append(wire if (value >> (k - 1)) & 1 else wire.inverted())
    return wires


def _build_unrestricted(f: QbfFormula, b: _Builder) -> Tuple[List[int], List[int]]:
    n = f.variable_count
    positions = check_tuple_positions(n)

    def counter(i: int, name: Optional[str] = None) -> _Wire:
        return b.decode_counter(i, positions[i], name)

    counters = [counter(i, f"u{i}").node for i in range(1, n + 2)]

    clause_nodes = []
    for c, clause in enumerate(f.clauses, start=1):
        literals = [counter(abs(l)).node for l in clause]
        negations = [int(l < 0) for l in clause]

        def clause_fn(s, *values, negations=negations):
            return int(any(v ^ neg for v, neg in zip(values, negations)))

        clause_nodes.append(b.node("c", literals, clause_fn, name=f"c{c}"))

    subformulas = []
    op = _quantifier_op(f.quantifier_of(1))

    def first_fn(s, u1, *clauses, op=op):
        value = int(all(clauses))
        return value if u1 else _combine(op, s, value)

    subformulas.append(b.node("s", [counters[0]] + clause_nodes, first_fn, name="s1"))

    for i in range(2, n + 1):
        op = _quantifier_op(f.quantifier_of(i))
        copy_at, apply_at = 2 ** (i - 1) + i - 1, i - 1

        def spine_fn(s, previous, *us, op=op, copy_at=copy_at, apply_at=apply_at):
            value = sum(bit << k for k, bit in enumerate(us))
            if value == copy_at:
                return previous
            if value == apply_at:
                return _combine(op, s, previous)
            return s

        inputs = [subformulas[-1]] + counters[:i]
        subformulas.append(b.node("s", inputs, spine_fn, name=f"s{i}"))

    fire_at = 2**n + n

    def control_fn(s, *args):
        value = sum(bit << k for k, bit in enumerate(args[:-1]))
        return 1 if s or (value == fire_at and args[-1]) else 0

    b.in_neighbors[b.control] = counters + [subformulas[-1]]
    b.fns[b.control] = control_fn
    return counters, subformulas


def _select_fn(op: str) -> Callable[..., int]:
    def select(s, x, y):
        return x if y else _combine(op, s, x)

    return select


def _build_constant_degree(f: QbfFormula, b: _Builder) -> Tuple[List[int], List[int]]:
    n = f.variable_count
    counter = b.flip_counter

    clause_wires = []
    for c, clause in enumerate(f.clauses, start=1):
        literals = [counter(abs(l)) for l in clause]
        literals = [w.inverted() if l < 0 else w for w, l in zip(literals, clause)]
        pair = b.link(literals[0], literals[1], OR)
        clause_wires.append(b.link(pair, literals[2], OR, name=f"c{c}"))
    conjunction = b.and_chain(clause_wires) if clause_wires else b.starter()

    # s_1 reads the counter one step later than the clause conjunction's inputs
    lag = conjunction.lag - 1
    trigger = b.pad(counter(1), lag)
    op = _quantifier_op(f.quantifier_of(1))
    spine = _Wire(
        b.node("s", [conjunction.node, trigger.node], _select_fn(op), name="s1"), lag
    )
    subformulas = [spine.node]

    for i in range(2, n + 1):
        at_apply = b.and_chain(_counter_literals(counter, i - 1, i - 1))
        at_copy = b.and_chain(_counter_literals(counter, i - 1, i - 1) + [counter(i)])
        lag = max(spine.lag + 1, at_apply.lag + 1, at_copy.lag)
        at_apply = b.pad(at_apply, lag - 1)
        previous = b.pad(spine, lag - 1)
        if f.quantifier_of(i) == Quantifier.EXISTS:
            data = b.link(at_apply, previous, AND)
        else:
            data = b.link(at_apply.inverted(), previous, OR)
        trigger = b.pad(at_copy, lag)
        op = _quantifier_op(f.quantifier_of(i))
        spine = _Wire(b.node("s", [data.node, trigger.node], _select_fn(op), name=f"s{i}"), lag)
        subformulas.append(spine.node)

    names = [f"u{k}" for k in range(1, n + 2)]
    at_fire = b.and_chain(_counter_literals(counter, 2**n + n, n + 1, names))
    lag = max(spine.lag, at_fire.lag)
    fire = b.link(b.pad(at_fire, lag), b.pad(spine, lag), AND)

    b.in_neighbors[b.control] = [fire.node]
    b.fns[b.control] = lambda s, w: s | w
    counters = [b.names.index(name) for name in names]
    return counters, subformulas


def build_qbf_reduction(f: QbfFormula, constant_degree: bool = False) -> QbfReduction:
    """
    Build the reduction and return it with its node roles.

    Start: path-counter copies at x^1, everything else 0. Target: all ones.

    Raises:
        GadgetError: If the constant-degree output fails its shape check
    """
    builder = _Builder()
    if constant_degree:
        counters, subformulas = _build_constant_degree(f, builder)
    else:
        counters, subformulas = _build_unrestricted(f, builder)
    syds, start = builder.build()
    instance = ProblemInstance(syds=syds, start=start, target=all_ones(syds.node_count))

    if constant_degree:
        shape = check_reduction_shape(syds.network, control=builder.control)
        if shape.max_in_degree > 3 or not shape.forest_without_control:
            raise GadgetError(f"Constant-degree reduction has an unexpected shape: {shape}")
    logger.info(
        f"🧩 QBF reduction ({'constant degree' if constant_degree else 'unrestricted'}): "
        f"{syds.node_count} nodes for {f.variable_count} variables, {len(f.clauses)} clauses"
    )
    return QbfReduction(instance, builder.control, counters, subformulas, constant_degree)


def gen_qbf_reduction(f: QbfFormula, constant_degree: bool = False) -> ProblemInstance:
    return build_qbf_reduction(f, constant_degree).instance


def counter_positions(inst: ProblemInstance, steps: Optional[int] = None) -> List[int]:
    """
    Decode the counter u_(n+1)..u_1 at every step 0..steps.

    Counter nodes are found by their names u1, u2, ...; steps defaults to 2^(n+2).
    """
    names = inst.syds.network.names
    index = {name: v for v, name in enumerate(names) if name is not None}
    counters = []
    while f"u{len(counters) + 1}" in index:
        counters.append(index[f"u{len(counters) + 1}"])
    if not counters:
        raise ValueError("Instance has no counter nodes named u1, u2, ...")
    if steps is None:
        steps = 2 ** (len(counters) + 1)
    history = simulate(inst.syds, inst.start, steps)
    return [
        sum(((x >> v) & 1) << k for k, v in enumerate(counters)) for x in history
    ]
