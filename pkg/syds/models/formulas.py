"""
Formula models
Quantified and plain 3-CNF formulas with signed integer literals
"""

from typing import List, Sequence, Tuple

Clause = Tuple[int, int, int]


class Quantifier:
    EXISTS = "e"
    FORALL = "a"


QUANTIFIERS = (Quantifier.EXISTS, Quantifier.FORALL)


def _check_clauses(clauses: Sequence[Sequence[int]], variable_count: int) -> List[Clause]:
    checked: List[Clause] = []
    for position, clause in enumerate(clauses):
        if len(clause) != 3:
            raise ValueError(
                f"Clause {position} has {len(clause)} literals; exactly 3 are required"
            )
        for literal in clause:
            if literal == 0 or abs(literal) > variable_count:
                raise ValueError(
                    f"Clause {position} has literal {literal} outside 1..{variable_count}"
                )
        checked.append((int(clause[0]), int(clause[1]), int(clause[2])))
    return checked


class QbfFormula:
    """
    Prenex QBF Q_n x_n ... Q_1 x_1 phi

    quantifiers[0] binds x_n (outermost) and quantifiers[-1] binds x_1
    (innermost). Literal +i / -i refers to x_i.
    """

    def __init__(self, quantifiers: Sequence[str], clauses: Sequence[Sequence[int]]):
        for q in quantifiers:
            if q not in QUANTIFIERS:
                raise ValueError(f"Unknown quantifier {q!r}. Expected 'e' or 'a'.")
        if not quantifiers:
            raise ValueError("A QBF needs at least one quantified variable")
        self.quantifiers: Tuple[str, ...] = tuple(quantifiers)
        self.clauses: Tuple[Clause, ...] = tuple(_check_clauses(clauses, len(quantifiers)))

    @property
    def variable_count(self) -> int:
        return len(self.quantifiers)

    def quantifier_of(self, i: int) -> str:
        """Quantifier binding x_i (1-based, x_1 innermost)"""
        return self.quantifiers[self.variable_count - i]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QbfFormula):
            return NotImplemented
        return self.quantifiers == other.quantifiers and self.clauses == other.clauses

    def __repr__(self) -> str:
        prefix = "".join(
            f"{'∃' if q == Quantifier.EXISTS else '∀'}x{self.variable_count - k}"
            for k, q in enumerate(self.quantifiers)
        )
        return f"QbfFormula({prefix}, clauses={list(self.clauses)})"


class CnfFormula:
    """3-CNF over variables y_1..y_variable_count"""

    def __init__(self, variable_count: int, clauses: Sequence[Sequence[int]]):
        if variable_count < 0:
            raise ValueError(f"variable_count must be non-negative, got {variable_count}")
        self.variable_count = variable_count
        self.clauses: Tuple[Clause, ...] = tuple(_check_clauses(clauses, variable_count))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CnfFormula):
            return NotImplemented
        return self.variable_count == other.variable_count and self.clauses == other.clauses

    def __repr__(self) -> str:
        return f"CnfFormula(variables={self.variable_count}, clauses={list(self.clauses)})"
