"""
DIMACS and QDIMACS readers for 3-CNF and prenex QBF files

QDIMACS lists quantifier blocks outermost first. The k-th quantified variable
on disk (counting from 0) becomes x_(n-k), so the innermost variable is x_1.
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from syds.models.errors import FormatError
from syds.models.formulas import CnfFormula, QbfFormula, Quantifier

logger = logging.getLogger(__name__)


class _Parsed:
    def __init__(self):
        self.variable_count: Optional[int] = None
        self.clause_count = 0
        self.prefix: List[Tuple[str, int, int]] = []  # (quantifier, variable, line)
        self.clauses: List[Tuple[List[int], int]] = []  # (literals, line of first literal)


def _parse(text: str, allow_prefix: bool) -> _Parsed:
    parsed = _Parsed()
    pending: List[int] = []
    pending_line = 0

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line == "%":
            continue
        tokens = line.split()
        head = tokens[0]

        if head == "p":
            if parsed.variable_count is not None:
                raise FormatError("Duplicate problem line", line=line_no)
            if len(tokens) != 4 or tokens[1] != "cnf":
                raise FormatError(f"Expected 'p cnf <variables> <clauses>', got {line!r}", line=line_no)
            try:
                parsed.variable_count, parsed.clause_count = int(tokens[2]), int(tokens[3])
            except ValueError:
                raise FormatError(f"Non-integer counts in problem line {line!r}", line=line_no)
            continue

        if parsed.variable_count is None:
            raise FormatError("Missing 'p cnf' problem line before content", line=line_no)

        if head in (Quantifier.EXISTS, Quantifier.FORALL):
            if not allow_prefix:
                raise FormatError("Quantifier lines are not allowed in DIMACS", line=line_no)
            if parsed.clauses or pending:
                raise FormatError("Quantifier line after the first clause", line=line_no)
            variables = _integers(tokens[1:], line_no)
            if not variables or variables[-1] != 0:
                raise FormatError("Quantifier line must end with 0", line=line_no)
            for variable in variables[:-1]:
                if not 1 <= variable <= parsed.variable_count:
                    raise FormatError(f"Quantified variable {variable} out of range", line=line_no)
                parsed.prefix.append((head, variable, line_no))
            continue

        for literal in _integers(tokens, line_no):
            if literal == 0:
                if len(pending) != 3:
                    raise FormatError(
                        f"Clause has {len(pending)} literals; exactly 3 are required",
                        line=pending_line or line_no,
                    )
                parsed.clauses.append((pending, pending_line))
                pending = []
                pending_line = 0
                continue
            if abs(literal) > parsed.variable_count:
                raise FormatError(f"Literal {literal} exceeds the declared variable count", line=line_no)
            if not pending:
                pending_line = line_no
            pending.append(literal)

    if parsed.variable_count is None:
        raise FormatError("Missing 'p cnf' problem line")
    if pending:
        raise FormatError("Last clause is not terminated by 0", line=pending_line)
    if len(parsed.clauses) != parsed.clause_count:
        logger.warning(
            f"⚠️  Header declares {parsed.clause_count} clauses, found {len(parsed.clauses)}"
        )
    return parsed


def _integers(tokens: List[str], line_no: int) -> List[int]:
    try:
        return [int(token) for token in tokens]
    except ValueError:
        raise FormatError(f"Expected integers, got {' '.join(tokens)!r}", line=line_no)


def parse_qdimacs(text: str) -> QbfFormula:
    """
    Parse a QDIMACS file into a QBF with x_1 innermost.

    Raises:
        FormatError: On syntax errors, non-3-literal clauses or unquantified variables
    """
    parsed = _parse(text, allow_prefix=True)
    n = len(parsed.prefix)
    index: Dict[int, int] = {}
    for position, (_, variable, line_no) in enumerate(parsed.prefix):
        if variable in index:
            raise FormatError(f"Variable {variable} is quantified twice", line=line_no)
        index[variable] = n - position
    for variable in range(1, parsed.variable_count + 1):
        if variable not in index:
            raise FormatError(f"Variable {variable} is not quantified")
    clauses = []
    for literals, line_no in parsed.clauses:
        clauses.append([index[abs(l)] if l > 0 else -index[abs(l)] for l in literals])
    try:
        return QbfFormula([q for q, _, _ in parsed.prefix], clauses)
    except ValueError as e:
        raise FormatError(str(e))


def parse_dimacs(text: str) -> CnfFormula:
    """
    Parse a DIMACS CNF file.

    Raises:
        FormatError: On syntax errors or non-3-literal clauses
    """
    parsed = _parse(text, allow_prefix=False)
    return CnfFormula(parsed.variable_count, [literals for literals, _ in parsed.clauses])


def read_qdimacs_file(path: str) -> QbfFormula:
    return parse_qdimacs(Path(path).read_text(encoding="utf-8"))


def read_dimacs_file(path: str) -> CnfFormula:
    return parse_dimacs(Path(path).read_text(encoding="utf-8"))
