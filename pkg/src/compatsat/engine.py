"""Pairwise compatibility matrices and the step-wise depletion decision procedure.

For clauses ``c_i`` and ``c_j`` the compatibility matrix ``C_ij`` has entry
``(a, b)`` true iff row ``a`` of ``c_i``'s truth table satisfies ``c_i``, row
``b`` satisfies ``c_j``, and the two rows agree on shared variables.  Step
``s`` pivots on clause ``s`` and shrinks every later pair::

    C_jk <- (C_sj^T x C_sk) & C_jk        for s < j < k

where ``x`` is the Boolean (OR, AND) matrix product.  A matrix that becomes
all-false proves the formula unsatisfiable.  Running all ``m - 2`` steps
without one yields :attr:`Outcome.CLAIMED_SATISFIABLE`, which is *not* a
guarantee of satisfiability.

Clause indices in the public API are 1-based, matrix rows/columns 0-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from . import _kernels
from ._kernels import pack_rows, unpack_rows, words_for
from .cnf import (
    MAX_WIDTH,
    Assignment,
    Clause,
    Formula,
    WidthExceeded,
    is_model,
    row_values,
    truth_table,
)
from .trace import TraceEvent


class EngineError(ValueError):
    pass


class DimensionMismatch(EngineError):
    pass


class StepOutOfOrder(EngineError):
    pass


class NotUnsat(EngineError):
    pass


class InvalidIndices(EngineError):
    pass


class PreconditionViolated(EngineError):
    pass


class CompatMatrix:
    """Boolean matrix stored as one packed uint64 bitset per row."""

    __slots__ = ("words", "cols")

    def __init__(self, words: np.ndarray, cols: int):
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.cols = int(cols)
        if self.words.ndim != 2 or self.words.shape[1] != words_for(self.cols):
            raise DimensionMismatch(f"word array {self.words.shape} does not fit {cols} columns")

    @classmethod
    def from_bool(cls, bits) -> "CompatMatrix":
        bits = np.asarray(bits, dtype=bool)
        if bits.ndim != 2:
            raise DimensionMismatch("expected a 2-D array")
        return cls(pack_rows(bits), bits.shape[1])

    @classmethod
    def from_strings(cls, rows: Iterable[str]) -> "CompatMatrix":
        rows = list(rows)
        return cls.from_bool([[ch == "1" for ch in r] for r in rows])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "CompatMatrix":
        return cls(np.zeros((rows, words_for(cols)), dtype=np.uint64), cols)

    @classmethod
    def identity(cls, n: int) -> "CompatMatrix":
        return cls.from_bool(np.eye(n, dtype=bool))

    @property
    def rows(self) -> int:
        return self.words.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def to_bool(self) -> np.ndarray:
        return unpack_rows(self.words, self.cols)

    def to_strings(self) -> tuple[str, ...]:
        return tuple("".join("1" if b else "0" for b in row) for row in self.to_bool())

    def true_entries(self) -> list[tuple[int, int]]:
        """True positions as 1-based ``(row, col)`` pairs, row-major."""
        return [(int(a) + 1, int(b) + 1) for a, b in np.argwhere(self.to_bool())]

    def is_false(self) -> bool:
        return not self.words.any()

    @property
    def T(self) -> "CompatMatrix":
        return transpose(self)

    def __getitem__(self, idx: tuple[int, int]) -> bool:
        a, b = idx
        if not (0 <= a < self.rows and 0 <= b < self.cols):
            raise IndexError(f"entry {idx} outside {self.shape}")
        return bool((int(self.words[a, b >> 6]) >> (b & 63)) & 1)

    def __and__(self, other: "CompatMatrix") -> "CompatMatrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} & {other.shape}")
        return CompatMatrix(self.words & other.words, self.cols)

    def __matmul__(self, other: "CompatMatrix") -> "CompatMatrix":
        return bool_mat_mul(self, other)

    def __le__(self, other: "CompatMatrix") -> bool:
        """Pointwise implication: every true entry of self is true in other."""
        return self.shape == other.shape and not (self.words & ~other.words).any()

    def __eq__(self, other) -> bool:
        if not isinstance(other, CompatMatrix):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.words, other.words)

    def __hash__(self):
        return hash((self.shape, self.words.tobytes()))

    def __repr__(self) -> str:
        return f"CompatMatrix({self.rows}x{self.cols}, true={self.true_entries()})"


def _clause_arrays(clause: Clause, max_width: int):
    tt = truth_table(clause, max_width)
    return row_values(clause.width), tt.sat


def compat_matrix(ci: Clause, cj: Clause, max_width: int = MAX_WIDTH) -> CompatMatrix:
    vi, si = _clause_arrays(ci, max_width)
    vj, sj = _clause_arrays(cj, max_width)
    ok = si[:, None] & sj[None, :]
    pos_j = {v: q for q, v in enumerate(cj.scope)}
    for p, v in enumerate(ci.scope):
        q = pos_j.get(v)
        if q is not None:
            ok &= vi[:, p][:, None] == vj[:, q][None, :]
    return CompatMatrix.from_bool(ok)


def transpose(M: CompatMatrix) -> CompatMatrix:
    return CompatMatrix.from_bool(M.to_bool().T)


def bool_mat_mul(A: CompatMatrix, B: CompatMatrix) -> CompatMatrix:
    """Boolean product over (OR, AND); each result row ORs the B rows selected by an A row."""
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    sel = A.to_bool()
    picked = np.where(sel[:, :, None], B.words[None, :, :], np.uint64(0))
    if A.cols == 0:
        return CompatMatrix.zeros(A.rows, B.cols)
    return CompatMatrix(np.bitwise_or.reduce(picked, axis=1), B.cols)


class BoxState:
    """All pairwise compatibility matrices of a formula plus the step counter.

    ``bits[i, j]`` (0-based, ``i < j``) holds ``C_{i+1, j+1}``; the lower
    triangle is unused and kept zero.
    """

    def __init__(self, bits: np.ndarray, nrows: np.ndarray, step: int = 0):
        self.bits = bits
        self.nrows = nrows
        self.step = step

    @property
    def m(self) -> int:
        return self.bits.shape[0]

    def pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(1, self.m + 1) for j in range(i + 1, self.m + 1)]

    def matrix(self, i: int, j: int) -> CompatMatrix:
        """``C_ij`` for 1-based ``i < j``; ``i > j`` gives the transpose of ``C_ji``."""
        if i == j or not (1 <= i <= self.m and 1 <= j <= self.m):
            raise InvalidIndices(f"no matrix for pair ({i},{j}) in a box of {self.m} clauses")
        if i > j:
            return transpose(self.matrix(j, i))
        r, c = int(self.nrows[i - 1]), int(self.nrows[j - 1])
        return CompatMatrix(self.bits[i - 1, j - 1, :r, : words_for(c)].copy(), c)

    @property
    def matrices(self) -> dict[tuple[int, int], CompatMatrix]:
        return {p: self.matrix(*p) for p in self.pairs()}

    def copy(self) -> "BoxState":
        return BoxState(self.bits.copy(), self.nrows, self.step)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BoxState):
            return NotImplemented
        return self.step == other.step and np.array_equal(self.bits, other.bits)

    def __le__(self, other: "BoxState") -> bool:
        return self.bits.shape == other.bits.shape and not (self.bits & ~other.bits).any()


def _encode(formula: Formula, max_width: int):
    for c in formula.clauses:
        if c.width > max_width:
            raise WidthExceeded(f"clause width {c.width} exceeds cap {max_width}")
    m = formula.m
    wmax = max((c.width for c in formula.clauses), default=0)
    R = 1 << wmax
    scope = np.zeros((m, max(wmax, 1)), dtype=np.int64)
    width = np.zeros(m, dtype=np.int64)
    values = np.zeros((m, R, max(wmax, 1)), dtype=np.uint8)
    sat = np.zeros((m, R), dtype=bool)
    nrows = np.zeros(m, dtype=np.int64)
    for i, c in enumerate(formula.clauses):
        w = c.width
        width[i] = w
        nrows[i] = 1 << w
        scope[i, :w] = c.scope
        values[i, : 1 << w, :w] = row_values(w)
        sat[i, : 1 << w] = truth_table(c, max_width).sat
    return scope, width, values, sat, nrows


def init_box(formula: Formula, max_width: int = MAX_WIDTH) -> BoxState:
    scope, width, values, sat, nrows = _encode(formula, max_width)
    m = formula.m
    R = sat.shape[1] if m else 1
    bits = np.zeros((m, m, R, words_for(R)), dtype=np.uint64)
    if m >= 2:
        _kernels.active().fill_compat(bits, scope, width, values, sat, nrows)
    return BoxState(bits, nrows, 0)


def _deplete(box: BoxState, s: int) -> int:
    changed, nfalse = _kernels.active().deplete_pivot(box.bits, box.nrows, s - 1, s, True)
    box.step = s
    return int(nfalse)


def deplete_step(box: BoxState, s: int, inplace: bool = False) -> BoxState:
    """Pivot on clause ``s``: shrink every ``C_jk`` with ``s < j < k``.

    Uses the current (stage ``s - 1``) matrices of row ``s``. Returns a new
    box unless ``inplace`` is set.
    """
    if box.step != s - 1 or not 1 <= s <= box.m - 2:
        raise StepOutOfOrder(f"cannot run step {s} on a box at step {box.step} with m={box.m}")
    out = box if inplace else box.copy()
    _deplete(out, s)
    return out


def scan_false(box: BoxState) -> list[tuple[int, int]]:
    m = box.m
    if m < 2:
        return []
    empty = ~box.bits.any(axis=(2, 3))
    iu, ju = np.triu_indices(m, 1)
    hit = empty[iu, ju]
    return [(int(i) + 1, int(j) + 1) for i, j in zip(iu[hit], ju[hit])]


def _full_bits(box: BoxState) -> np.ndarray:
    """Both orientations: ``F[j, i] = C_ij^T`` below the diagonal."""
    R = box.bits.shape[2]
    dense = unpack_rows(box.bits, R)
    full = dense | dense.transpose(1, 0, 3, 2)
    return pack_rows(full, box.bits.shape[3])


def backward_closure(box: BoxState, inplace: bool = False) -> BoxState:
    """Fixpoint of the depletion rule over every ordered triple of distinct clauses."""
    out = box if inplace else box.copy()
    m = out.m
    if m < 3:
        return out
    F = np.ascontiguousarray(_full_bits(out))
    deplete = _kernels.active().deplete_pivot
    changed = True
    while changed:
        changed = False
        for a in range(m):
            ch, _ = deplete(F, out.nrows, a, 0, False)
            changed |= bool(ch)
    out.bits[...] = np.triu(np.ones((m, m), dtype=bool), 1)[:, :, None, None] * F
    return out


class Outcome(str, enum.Enum):
    UNSAT_DETECTED = "UnsatDetected"
    CLAIMED_SATISFIABLE = "ClaimedSatisfiable"


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    step: int
    false_pairs: tuple[tuple[int, int], ...] = ()
    core_candidates: Mapping[tuple[int, int], frozenset[int]] = field(default_factory=dict)
    model: Assignment | None = None
    box: BoxState | None = field(default=None, repr=False, compare=False)

    @property
    def unsat(self) -> bool:
        return self.outcome is Outcome.UNSAT_DETECTED

    def summary(self) -> str:
        if self.unsat:
            pairs = ",".join(f"({j},{k})" for j, k in self.false_pairs)
            return f"UNSAT-PATTERN step={self.step} pairs=[{pairs}]"
        return f"CLAIMED-SAT steps={self.step}"


def _cores(step: int, pairs) -> dict[tuple[int, int], frozenset[int]]:
    return {p: frozenset(range(1, step + 1)) | frozenset(p) for p in pairs}


def _unsat(step, pairs, box) -> Verdict:
    pairs = tuple(pairs)
    return Verdict(Outcome.UNSAT_DETECTED, step, pairs, _cores(step, pairs), box=box)


StageHook = Callable[[object, BoxState], None]


def decide(
    formula: Formula,
    trace: Callable[[TraceEvent], None] | None = None,
    *,
    backward: bool = False,
    on_stage: StageHook | None = None,
    max_width: int = MAX_WIDTH,
) -> Verdict:
    """Run the forward depletion pass and report the first all-false stage.

    ``trace`` receives :class:`TraceEvent` objects (start first, verdict
    last). ``on_stage(label, box)`` is called with the live box after Start
    (label 0), after every step (label ``s``) and after the backward closure
    (label ``"closure"``); it must not mutate the box. With ``backward`` a
    claimed-satisfiable run is followed by the backward closure and a greedy
    model extraction, stored in ``Verdict.model``.
    """
    emit = trace if trace is not None else (lambda ev: None)
    m = formula.m
    emit(TraceEvent("start", payload={"m": m, "n": formula.n, "backend": _kernels.active().name}))

    def finish(v: Verdict) -> Verdict:
        emit(
            TraceEvent(
                "verdict",
                step=v.step,
                payload={
                    "outcome": v.outcome.value,
                    "pairs": [list(p) for p in v.false_pairs],
                    "cores": [sorted(v.core_candidates[p]) for p in v.false_pairs],
                },
            )
        )
        return v

    if m == 1:
        emit(TraceEvent("step", step=0))
        if not truth_table(formula.clauses[0], max_width).sat.any():
            emit(TraceEvent("false_matrix", step=0, pair=(1, 1)))
            return finish(_unsat(0, [(1, 1)], None))

    box = init_box(formula, max_width)
    if m == 0 or m == 1:
        v = Verdict(Outcome.CLAIMED_SATISFIABLE, 0, box=box)
        if backward:
            v = _with_model(v, box, formula, emit, on_stage, trace is not None)
        return finish(v)

    emit(TraceEvent("step", step=0))
    if trace is not None:
        _emit_matrices(emit, box, 0, box.pairs())
    if on_stage is not None:
        on_stage(0, box)
    found = scan_false(box)
    for s in range(1, m - 1):
        if found:
            break
        nfalse = _deplete(box, s)
        emit(TraceEvent("step", step=s, payload={"pivot": s}))
        if trace is not None:
            _emit_matrices(emit, box, s, [(j, k) for j in range(s + 1, m + 1) for k in range(j + 1, m + 1)])
        if on_stage is not None:
            on_stage(s, box)
        if nfalse:
            found = scan_false(box)
    if found:
        for p in found:
            emit(TraceEvent("false_matrix", step=box.step, pair=p))
        return finish(_unsat(box.step, found, box))

    v = Verdict(Outcome.CLAIMED_SATISFIABLE, box.step, box=box)
    if backward:
        v = _with_model(v, box, formula, emit, on_stage, trace is not None)
    return finish(v)


def _with_model(v: Verdict, box: BoxState, formula: Formula, emit, on_stage, trace_on: bool) -> Verdict:
    closed = backward_closure(box)
    emit(TraceEvent("closure", step=closed.step))
    if trace_on:
        _emit_matrices(emit, closed, closed.step, closed.pairs())
    if on_stage is not None:
        on_stage("closure", closed)
    try:
        model = extract_model(closed, formula)
    except PreconditionViolated:
        model = None
    emit(TraceEvent("model", payload={"model": None if model is None else _model_ints(model)}))
    return Verdict(v.outcome, v.step, v.false_pairs, v.core_candidates, model, closed)


def _model_ints(a: Assignment) -> list[int]:
    return [v if a[v] else -v for v in sorted(a)]


def _emit_matrices(emit, box: BoxState, step: int, pairs) -> None:
    for p in pairs:
        emit(TraceEvent("matrix", step=step, pair=p, rows=box.matrix(*p).to_strings()))


def extract_model(box: BoxState, formula: Formula) -> Assignment | None:
    """Greedy model read-off from a (closed) box; ``None`` when it fails.

    Clauses are fixed in index order, each to the lowest surviving row that
    agrees with the partial assignment and is compatible with every row
    already fixed. Unbound variables default to false. The result is only
    returned if it is verified to be a model.
    """
    if scan_false(box):
        raise PreconditionViolated("box holds an all-false matrix")
    m = formula.m
    if m != box.m:
        raise PreconditionViolated("box and formula disagree on clause count")
    tables = [truth_table(c) for c in formula.clauses]
    if m == 1 and not tables[0].sat.any():
        raise PreconditionViolated("the only clause is unsatisfiable")
    R = box.bits.shape[2]
    dense = unpack_rows(box.bits, R)
    full = dense | dense.transpose(1, 0, 3, 2)

    assignment: Assignment = {}
    chosen: list[int] = []
    for i, clause in enumerate(formula.clauses):
        rows = 1 << clause.width
        alive = tables[i].sat.copy()
        for j in range(m):
            if j != i:
                alive &= full[i, j, :rows].any(axis=1)
        for i2, r2 in enumerate(chosen):
            alive &= full[i2, i, r2, :rows]
        pick = None
        for r in np.flatnonzero(alive):
            vals = {v: bool((int(r) >> (clause.width - 1 - p)) & 1) for p, v in enumerate(clause.scope)}
            if all(assignment.get(v, b) == b for v, b in vals.items()):
                pick = int(r)
                assignment.update(vals)
                break
        if pick is None:
            return None
        chosen.append(pick)
    for v in range(1, formula.n + 1):
        assignment.setdefault(v, False)
    return assignment if is_model(formula, assignment) else None


def unsat_core_candidate(verdict: Verdict, pair: tuple[int, int]) -> frozenset[int]:
    if not verdict.unsat:
        raise NotUnsat("verdict is not UnsatDetected")
    pair = tuple(pair)
    if pair not in verdict.false_pairs:
        raise InvalidIndices(f"{pair} is not a reported false pair {verdict.false_pairs}")
    return frozenset(range(1, verdict.step + 1)) | frozenset(pair)


def reorder_for_core(formula: Formula, core: Iterable[int]) -> Formula:
    """Permute clauses so the core comes first; relative order is kept in both parts."""
    core = set(core)
    if not core or not all(1 <= i <= formula.m for i in core):
        raise InvalidIndices(f"core {sorted(core)} invalid for {formula.m} clauses")
    order = sorted(core) + [i for i in range(1, formula.m + 1) if i not in core]
    return Formula(tuple(formula.clauses[i - 1] for i in order), formula.n)
