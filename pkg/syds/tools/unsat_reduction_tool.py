"""
unSAT Reduction Tool
Compiles a 3-CNF into an acyclic SyDS that has the Convergence Guarantee
iff the formula is unsatisfiable
"""

import logging
from typing import List

from syds.models.errors import GadgetError
from syds.models.formulas import CnfFormula
from syds.models.system import LocalFunction, Network, SyDS
from syds.tools.shape_tool import check_reduction_shape

logger = logging.getLogger(__name__)

AND2 = LocalFunction.from_callable(3, lambda s, a, b: a & b)
FLIP_IF = LocalFunction.from_callable(2, lambda s, a: s ^ a)


def _clause_function(clause, variables: List[int]) -> LocalFunction:
    def fn(s, *values):
        assignment = dict(zip(variables, values))
        return int(any(
            assignment[abs(l)] if l > 0 else 1 - assignment[abs(l)] for l in clause
        ))

    return LocalFunction.from_callable(len(variables) + 1, fn)


def gen_unsat_reduction(f: CnfFormula) -> SyDS:
    """
    Build the network: variable sources y_k (keep their state), clause nodes
    w_c (value of their clause), an AND chain u_1..u_(m-1) over the clauses, and
    a sink v0 that flips exactly while the chain reports all clauses true.

    Node order: y_1..y_N, w_1..w_m, u_1..u_(m-1), v0.
    """
    n, m = f.variable_count, len(f.clauses)
    in_neighbors: List[List[int]] = []
    names: List[str] = []
    functions: List[LocalFunction] = []

    for k in range(1, n + 1):
        in_neighbors.append([])
        names.append(f"y{k}")
        functions.append(LocalFunction.identity())

    clause_nodes = []
    for c, clause in enumerate(f.clauses, start=1):
        variables = list(dict.fromkeys(abs(l) for l in clause))
        clause_nodes.append(len(names))
        in_neighbors.append([v - 1 for v in variables])
        names.append(f"w{c}")
        functions.append(_clause_function(clause, variables))

    last = clause_nodes[0] if clause_nodes else None
    for k in range(1, m):
        in_neighbors.append([last, clause_nodes[k]])
        names.append(f"u{k}")
        functions.append(AND2)
        last = len(names) - 1

    names.append("v0")
    if last is None:
        # empty formula: satisfiable, the sink always flips
        in_neighbors.append([])
        functions.append(LocalFunction.negation())
    else:
        in_neighbors.append([last])
        functions.append(FLIP_IF)

    syds = SyDS(Network(len(names), in_neighbors, names), functions)
    shape = check_reduction_shape(syds.network)
    if not shape.is_dag or shape.max_in_degree > 3:
        raise GadgetError(f"unSAT reduction has an unexpected shape: {shape}")
    logger.debug(f"unSAT reduction: {syds.node_count} nodes for {m} clauses")
    return syds
