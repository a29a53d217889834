"""DIMACS CNF reading and writing."""

from __future__ import annotations

from dataclasses import dataclass

from .cnf import Clause, Formula, Literal


@dataclass(frozen=True)
class ParseDiagnostics:
    line: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}: {self.message}"


class DimacsError(ValueError):
    def __init__(self, line: int, message: str):
        self.diagnostics = ParseDiagnostics(max(1, line), message)
        super().__init__(str(self.diagnostics))


class MissingHeader(DimacsError):
    pass


class BadLiteral(DimacsError):
    pass


class CountMismatch(DimacsError):
    pass


class VarOutOfRange(DimacsError):
    pass


def parse_dimacs(text: str) -> Formula:
    """Parse DIMACS CNF text.

    Comment lines start with ``c``. Clauses may span lines and several may
    share a line. A ``%`` line ends the input (SATLIB files append ``%`` and
    ``0`` after the last clause). A final clause missing its terminating ``0``
    is accepted.
    """
    n = m = None
    header_line = 0
    clauses: list[tuple[Literal, ...]] = []
    current: list[Literal] = []
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        last_line = lineno
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if n is not None:
                raise MissingHeader(lineno, "duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise MissingHeader(lineno, f"malformed problem line {line!r}; expected 'p cnf <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise MissingHeader(lineno, f"non-integer counts in problem line {line!r}") from None
            if n < 0 or m < 0:
                raise MissingHeader(lineno, "negative counts in problem line")
            header_line = lineno
            continue
        if n is None:
            raise MissingHeader(lineno, "clause data before 'p cnf' problem line")
        for tok in line.split():
            try:
                x = int(tok)
            except ValueError:
                raise BadLiteral(lineno, f"not an integer literal: {tok!r}") from None
            if x == 0:
                clauses.append(tuple(current))
                current = []
                continue
            if abs(x) > n:
                raise VarOutOfRange(lineno, f"variable {abs(x)} exceeds declared n={n}")
            current.append(Literal.from_int(x))
    if n is None:
        raise MissingHeader(last_line or 1, "no 'p cnf' problem line")
    if current:
        clauses.append(tuple(current))
    if len(clauses) != m:
        raise CountMismatch(last_line or header_line, f"header declares {m} clauses, found {len(clauses)}")
    return Formula(tuple(Clause(c) for c in clauses), n)


def emit_dimacs(formula: Formula) -> str:
    lines = [f"p cnf {formula.n} {formula.m}"]
    for c in formula.clauses:
        lines.append(" ".join([str(x) for x in c.to_ints()] + ["0"]))
    return "\n".join(lines) + "\n"


def read_dimacs(path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse_dimacs(fh.read())
