"""Ground-truth SAT decisions by exhaustive enumeration, with a backtracking fallback.

Assignments are enumerated in lexicographic order with variable 1 as the most
significant bit and false before true, so the reported witness is always the
lexicographically first model. The backtracking search visits assignments in
the same order and therefore returns the same witness.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .cnf import Assignment, Formula

N_MAX = 26
BACKTRACK_ABOVE = 20
_CHUNK = 1 << 16


class TooManyVariables(ValueError):
    pass


class InvalidIndices(ValueError):
    pass


class Status(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass(frozen=True)
class OracleResult:
    status: Status
    model_count: int | None = None
    witness: Assignment | None = None

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


def _incidence(formula: Formula) -> tuple[np.ndarray, np.ndarray]:
    pos = np.zeros((formula.n, formula.m), dtype=np.float32)
    neg = np.zeros((formula.n, formula.m), dtype=np.float32)
    for j, c in enumerate(formula.clauses):
        for lit in c.literals:
            (neg if lit.negated else pos)[lit.var - 1, j] = 1.0
    return pos, neg


def _chunks(formula: Formula) -> Iterator[tuple[int, np.ndarray, np.ndarray]]:
    """Yield ``(start, values, is_model)`` blocks over all 2**n assignments."""
    n = formula.n
    pos, neg = _incidence(formula)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    total = 1 << n
    for start in range(0, total, _CHUNK):
        t = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        vals = ((t[:, None] >> shifts[None, :]) & 1).astype(np.float32)
        if formula.m == 0:
            ok = np.ones(len(t), dtype=bool)
        else:
            hits = vals @ pos + (1.0 - vals) @ neg
            ok = (hits > 0).all(axis=1)
        yield start, vals.astype(bool), ok


def _as_assignment(row: np.ndarray) -> Assignment:
    return {v + 1: bool(x) for v, x in enumerate(row)}


def all_models(formula: Formula) -> np.ndarray:
    """Every model as a ``(count, n)`` bool array, in lexicographic order."""
    if formula.n > N_MAX:
        raise TooManyVariables(f"n={formula.n} exceeds N_MAX={N_MAX}")
    parts = [vals[ok] for _, vals, ok in _chunks(formula)]
    return np.concatenate(parts) if parts else np.zeros((0, formula.n), dtype=bool)


def _enumerate(formula: Formula, count_models: bool) -> OracleResult:
    count = 0
    witness = None
    for _, vals, ok in _chunks(formula):
        if witness is None and ok.any():
            witness = _as_assignment(vals[int(np.argmax(ok))])
            if not count_models:
                break
        count += int(ok.sum())
    status = Status.SAT if witness is not None else Status.UNSAT
    return OracleResult(status, count if count_models else None, witness)


def backtrack_solve(formula: Formula) -> OracleResult:
    """Depth-first search in ascending variable order, false first.

    A clause can only become falsified once its largest variable is bound, so
    after binding variable ``v`` just the clauses whose largest variable is
    ``v`` are checked.
    """
    n = formula.n
    by_last: list[list[list[int]]] = [[] for _ in range(n + 1)]
    for c in formula.clauses:
        by_last[c.scope[-1] if c.scope else 0].append(c.to_ints())
    if by_last[0]:
        return OracleResult(Status.UNSAT)

    values = [False] * (n + 1)

    def falsified(v: int) -> bool:
        for lits in by_last[v]:
            if not any(values[abs(x)] == (x > 0) for x in lits):
                return True
        return False

    # stack holds the next value to try at each depth: 0 -> try false, 1 -> try true, 2 -> exhausted
    tried = [0] * (n + 2)
    v = 1
    while True:
        if v > n:
            return OracleResult(Status.SAT, None, {i: values[i] for i in range(1, n + 1)})
        if v == 0:
            return OracleResult(Status.UNSAT)
        if tried[v] == 2:
            tried[v] = 0
            v -= 1
            continue
        values[v] = tried[v] == 1
        tried[v] += 1
        if not falsified(v):
            v += 1


def enumerate_solve(formula: Formula, count_models: bool = False) -> OracleResult:
    if count_models:
        if formula.n > N_MAX:
            raise TooManyVariables(f"model counting needs n <= {N_MAX}, got {formula.n}")
        return _enumerate(formula, True)
    if formula.n > BACKTRACK_ABOVE:
        return backtrack_solve(formula)
    return _enumerate(formula, False)


def solve_subformula(formula: Formula, indices: Iterable[int], count_models: bool = False) -> OracleResult:
    idx = set(indices)
    bad = [i for i in idx if not 1 <= i <= formula.m]
    if bad:
        raise InvalidIndices(f"clause indices {sorted(bad)} outside 1..{formula.m}")
    return enumerate_solve(formula.subformula(idx), count_models)
