import pytest

from compatsat.cnf import Formula
from compatsat.dimacs import (
    BadLiteral,
    CountMismatch,
    DimacsError,
    MissingHeader,
    VarOutOfRange,
    emit_dimacs,
    parse_dimacs,
    read_dimacs,
)
from compatsat.generate import GenSpec, paper_example, random_ksat


def test_ex1_text():
    text = "p cnf 4 4\n1 2 3 0\n-1 2 -3 0\n1 -2 4 0\n-1 -3 -4 0\n"
    assert parse_dimacs(text) == paper_example("ex1")


def test_contradiction_with_comment():
    assert parse_dimacs("c comment\np cnf 1 2\n1 0\n-1 0\n") == paper_example("contradiction")


def test_emit_ex2():
    text = emit_dimacs(paper_example("ex2"))
    lines = text.splitlines()
    assert lines[0] == "p cnf 4 5" and len(lines) == 6
    assert lines[1] == "1 2 3 0"


def test_emit_empty():
    assert emit_dimacs(Formula((), 0)) == "p cnf 0 0\n"
    assert parse_dimacs("p cnf 0 0\n") == Formula((), 0)


def test_layout_variants():
    expect = Formula.from_ints([[1, -2], [2, 3], [-3]], 3)
    assert parse_dimacs("p cnf 3 3\n1 -2 0 2 3 0\n-3 0\n") == expect
    assert parse_dimacs("p cnf 3 3\n1\n-2 0\n2 3\n0 -3 0\n") == expect
    assert parse_dimacs("p cnf 3 3\r\n1 -2 0\r\n2 3 0\r\n-3 0\r\n") == expect
    assert parse_dimacs("c x\n\n  p  cnf 3 3 \n\t1 -2 0\nc mid\n2 3 0\n-3\n") == expect
    assert parse_dimacs("p cnf 3 3\n1 -2 0\n2 3 0\n-3 0\n%\n0\n\n") == expect


def test_empty_clause_and_unused_vars():
    f = parse_dimacs("p cnf 5 2\n0\n1 0\n")
    assert f.n == 5 and f.to_ints() == [[], [1]]


@pytest.mark.parametrize(
    "text, exc, line",
    [
        ("1 2 0\n", MissingHeader, 1),
        ("c only\n", MissingHeader, 1),
        ("", MissingHeader, 1),
        ("p cnf 2\n1 0\n", MissingHeader, 1),
        ("p dnf 2 1\n1 0\n", MissingHeader, 1),
        ("p cnf x 1\n1 0\n", MissingHeader, 1),
        ("p cnf 2 1\np cnf 2 1\n1 0\n", MissingHeader, 2),
        ("p cnf 2 1\n1 a 0\n", BadLiteral, 2),
        ("c\np cnf 2 1\n1 2.5 0\n", BadLiteral, 3),
        ("p cnf 2 1\n1 3 0\n", VarOutOfRange, 2),
        ("p cnf 2 1\n-3 0\n", VarOutOfRange, 2),
        ("p cnf 2 2\n1 0\n", CountMismatch, 2),
        ("p cnf 2 1\n1 0\n2 0\n", CountMismatch, 3),
    ],
)
def test_errors_with_line_numbers(text, exc, line):
    with pytest.raises(exc) as info:
        parse_dimacs(text)
    assert isinstance(info.value, DimacsError)
    assert info.value.diagnostics.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_round_trip_many():
    for seed in range(1000):
        spec = GenSpec(1 + seed % 15, seed % 40, 1 + seed % 3 if seed % 15 >= 2 else 1, seed)
        f = random_ksat(spec)
        assert parse_dimacs(emit_dimacs(f)) == f


def test_data_files_match_examples():
    from pathlib import Path

    root = Path(__file__).resolve().parents[1] / "data"
    for name in ("ex1", "ex2", "ex3", "ex4_f1", "ex4_f2", "contradiction"):
        assert read_dimacs(root / f"{name}.cnf") == paper_example(name)
