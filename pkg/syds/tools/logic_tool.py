"""
Logic Tool
Brute-force truth of QBF and satisfiability of CNF formulas
"""

from itertools import product
from typing import Dict, Optional, Sequence

from syds.config import get_settings
from syds.models.errors import ResourceCapError
from syds.models.formulas import CnfFormula, QbfFormula, Quantifier


def _check_cap(variable_count: int, max_variables: Optional[int]) -> None:
    cap = max_variables if max_variables is not None else get_settings().logic_variable_cap
    if variable_count > cap:
        raise ResourceCapError(
            f"Formula has {variable_count} variables, more than the cap of {cap}", cap=cap
        )


def literal_value(literal: int, assignment: Dict[int, int]) -> int:
    value = assignment[abs(literal)]
    return value if literal > 0 else 1 - value


def clauses_hold(clauses: Sequence[Sequence[int]], assignment: Dict[int, int]) -> bool:
    return all(any(literal_value(l, assignment) for l in clause) for clause in clauses)


def eval_qbf(f: QbfFormula, max_variables: Optional[int] = None) -> bool:
    """Truth of the QBF by recursion over its prefix, outermost quantifier first"""
    _check_cap(f.variable_count, max_variables)
    n = f.variable_count
    assignment: Dict[int, int] = {}

    def solve(position: int) -> bool:
        if position == n:
            return clauses_hold(f.clauses, assignment)
        variable = n - position
        for value in (0, 1):
            assignment[variable] = value
            outcome = solve(position + 1)
            if f.quantifiers[position] == Quantifier.EXISTS and outcome:
                return True
            if f.quantifiers[position] == Quantifier.FORALL and not outcome:
                return False
        return f.quantifiers[position] == Quantifier.FORALL

    return solve(0)


def eval_cnf_sat(f: CnfFormula, max_variables: Optional[int] = None) -> bool:
    """Satisfiability by enumerating every assignment"""
    _check_cap(f.variable_count, max_variables)
    for bits in product((0, 1), repeat=f.variable_count):
        assignment = {i + 1: b for i, b in enumerate(bits)}
        if clauses_hold(f.clauses, assignment):
            return True
    return False
