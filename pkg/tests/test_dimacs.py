"""
Tests for the DIMACS and QDIMACS readers
"""

import logging

import pytest

from syds.api.dimacs import parse_dimacs, parse_qdimacs, read_dimacs_file, read_qdimacs_file
from syds.models.errors import FormatError
from syds.models.formulas import Quantifier

QDIMACS = """c forall x2 exists x1 : x1 xor x2
p cnf 2 2
a 2 0
e 1 0
1 2 2 0
-1 -2 -2 0
"""


def test_parse_qdimacs_orders_prefix_innermost_last():
    f = parse_qdimacs(QDIMACS)
    assert f.quantifiers == (Quantifier.FORALL, Quantifier.EXISTS)
    assert f.quantifier_of(2) == Quantifier.FORALL
    assert f.quantifier_of(1) == Quantifier.EXISTS
    # file variable 2 is outermost (x2), file variable 1 innermost (x1)
    assert f.clauses == ((1, 2, 2), (-1, -2, -2))


def test_parse_qdimacs_renumbers_by_prefix_position():
    text = "p cnf 2 1\ne 1 0\na 2 0\n1 -2 1 0\n"
    f = parse_qdimacs(text)
    # file variable 1 is outermost so it becomes x2
    assert f.quantifiers == (Quantifier.EXISTS, Quantifier.FORALL)
    assert f.clauses == ((2, -1, 2),)


def test_clause_may_span_lines_and_blank_lines_are_ignored():
    f = parse_qdimacs("p cnf 1 1\n\ne 1 0\n1\n1 1 0\n")
    assert f.clauses == ((1, 1, 1),)


@pytest.mark.parametrize(
    "text, line",
    [
        ("e 1 0\np cnf 1 0\n", 1),
        ("p cnf 1 1\ne 1 0\n1 1 0\n", 3),
        ("p cnf 1 1\ne 1 0\n1 1 1 1 0\n", 3),
        ("p cnf 1 1\ne 1 0\n1 2 1 0\n", 3),
        ("p cnf 1 1\ne 1\n", 2),
        ("p cnf 2 1\ne 1 0\n1 1 1 0\na 2 0\n", 4),
        ("p dnf 1 1\n", 1),
    ],
)
def test_qdimacs_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as exc_info:
        parse_qdimacs(text)
    assert exc_info.value.line == line


def test_every_variable_must_be_quantified_once():
    with pytest.raises(FormatError):
        parse_qdimacs("p cnf 2 0\ne 1 0\n")
    with pytest.raises(FormatError):
        parse_qdimacs("p cnf 1 0\ne 1 0\na 1 0\n")


def test_unterminated_clause():
    with pytest.raises(FormatError):
        parse_qdimacs("p cnf 1 1\ne 1 0\n1 1 1\n")


def test_clause_count_mismatch_only_warns(caplog):
    caplog.set_level(logging.WARNING)
    f = parse_qdimacs("p cnf 1 3\ne 1 0\n1 1 1 0\n")
    assert len(f.clauses) == 1
    assert "Header declares 3 clauses" in caplog.text


def test_parse_dimacs():
    f = parse_dimacs("c example\np cnf 3 2\n1 -2 3 0\n-1 -1 2 0\n")
    assert f.variable_count == 3
    assert f.clauses == ((1, -2, 3), (-1, -1, 2))


def test_dimacs_rejects_quantifiers():
    with pytest.raises(FormatError):
        parse_dimacs("p cnf 1 1\ne 1 0\n1 1 1 0\n")


def test_read_files(tmp_path):
    qdimacs = tmp_path / "f.qdimacs"
    qdimacs.write_text(QDIMACS)
    assert read_qdimacs_file(str(qdimacs)).variable_count == 2
    dimacs = tmp_path / "f.cnf"
    dimacs.write_text("p cnf 1 1\n1 1 -1 0\n")
    assert read_dimacs_file(str(dimacs)).clauses == ((1, 1, -1),)


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
