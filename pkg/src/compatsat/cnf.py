"""CNF data model, clause truth tables and row-level assignment semantics.

Rows of a clause's truth table are enumerated canonically: the clause scope
is sorted by variable id and row ``r`` read as a ``width``-bit binary number
gives the values, with the smallest-id variable as the most significant bit.
Row indices are 0-based everywhere in the API; renderings add 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

MAX_WIDTH = 16

Assignment = dict[int, bool]


class CnfError(ValueError):
    """Base class for CNF model errors."""


class WidthExceeded(CnfError):
    pass


class RowOutOfRange(CnfError):
    pass


class PartialAssignment(CnfError):
    pass


@dataclass(frozen=True, order=True)
class Literal:
    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise CnfError(f"variable ids are 1-based, got {self.var}")

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise CnfError("0 is not a literal")
        return cls(abs(lit), lit < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def __neg__(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def __str__(self) -> str:
        return str(self.to_int())


@dataclass(frozen=True)
class Clause:
    """Disjunction of literals. ``scope`` is the ascending list of distinct variables."""

    literals: tuple[Literal, ...]
    scope: tuple[int, ...] = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))
        object.__setattr__(self, "scope", tuple(sorted({lit.var for lit in self.literals})))

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        return cls(tuple(Literal.from_int(x) for x in lits))

    @property
    def width(self) -> int:
        return len(self.scope)

    def to_ints(self) -> list[int]:
        return [lit.to_int() for lit in self.literals]

    def evaluate(self, assignment: Mapping[int, bool]) -> bool:
        return any(assignment[lit.var] != lit.negated for lit in self.literals)

    def __str__(self) -> str:
        return "(" + " v ".join(str(x) for x in self.to_ints()) + ")"


@dataclass(frozen=True)
class Formula:
    clauses: tuple[Clause, ...]
    n: int

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))
        if self.n < 0:
            raise CnfError("variable count must be nonnegative")
        for i, c in enumerate(self.clauses, 1):
            if c.scope and c.scope[-1] > self.n:
                raise CnfError(f"clause {i} mentions variable {c.scope[-1]} > n={self.n}")

    @classmethod
    def from_ints(cls, clauses: Iterable[Iterable[int]], n: int | None = None) -> "Formula":
        cs = tuple(Clause.from_ints(c) for c in clauses)
        if n is None:
            n = max((c.scope[-1] for c in cs if c.scope), default=0)
        return cls(cs, n)

    @property
    def m(self) -> int:
        return len(self.clauses)

    def to_ints(self) -> list[list[int]]:
        return [c.to_ints() for c in self.clauses]

    def subformula(self, indices: Iterable[int]) -> "Formula":
        """Clauses at the given 1-based indices, in ascending order, over the same n."""
        return Formula(tuple(self.clauses[i - 1] for i in sorted(indices)), self.n)


@dataclass(frozen=True)
class TruthTable:
    clause: Clause
    sat: np.ndarray = field(repr=False, compare=False)

    @property
    def row_count(self) -> int:
        return 1 << self.clause.width

    @property
    def sat_mask(self) -> int:
        """Satisfying rows as an integer bitset (bit r set iff row r satisfies)."""
        return sum(1 << int(r) for r in np.flatnonzero(self.sat))

    def sat_rows(self) -> list[int]:
        return [int(r) for r in np.flatnonzero(self.sat)]


def row_values(width: int) -> np.ndarray:
    """(2**width, width) 0/1 array; column p holds the value of scope variable p."""
    r = np.arange(1 << width, dtype=np.int64)[:, None]
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)[None, :]
    return ((r >> shifts) & 1).astype(np.uint8)


def _check_width(clause: Clause, max_width: int) -> None:
    if clause.width > max_width:
        raise WidthExceeded(f"clause width {clause.width} exceeds cap {max_width}")


def truth_table(clause: Clause, max_width: int = MAX_WIDTH) -> TruthTable:
    _check_width(clause, max_width)
    values = row_values(clause.width)
    sat = np.zeros(1 << clause.width, dtype=bool)
    pos = {v: p for p, v in enumerate(clause.scope)}
    for lit in clause.literals:
        col = values[:, pos[lit.var]].astype(bool)
        sat |= ~col if lit.negated else col
    return TruthTable(clause, sat)


def row_assignment(clause: Clause, r: int) -> Assignment:
    w = clause.width
    if not 0 <= r < (1 << w):
        raise RowOutOfRange(f"row {r} outside [0, {1 << w}) for {clause}")
    return {v: bool((r >> (w - 1 - p)) & 1) for p, v in enumerate(clause.scope)}


def row_index(clause: Clause, assignment: Mapping[int, bool]) -> int:
    """Inverse of :func:`row_assignment`; extra variables in ``assignment`` are ignored."""
    r = 0
    for v in clause.scope:
        r = (r << 1) | int(bool(assignment[v]))
    return r


def rows_compatible(ci: Clause, ri: int, cj: Clause, rj: int) -> bool:
    a = row_assignment(ci, ri)
    b = row_assignment(cj, rj)
    return all(a[v] == b[v] for v in a.keys() & b.keys())


def is_model(formula: Formula, a: Mapping[int, bool]) -> bool:
    missing = [v for v in range(1, formula.n + 1) if v not in a]
    if missing:
        raise PartialAssignment(f"assignment leaves variables unbound: {missing[:8]}")
    return all(c.evaluate(a) for c in formula.clauses)


def assignment_from_ints(lits: Sequence[int]) -> Assignment:
    return {abs(x): x > 0 for x in lits if x != 0}


def assignment_to_ints(a: Mapping[int, bool]) -> list[int]:
    return [v if a[v] else -v for v in sorted(a)]
