"""Differential testing of the depletion procedure against the brute-force oracle.

Every generated instance is decided by the engine and by the oracle. The
checks split into two kinds:

* soundness (must never fail): an UNSAT pattern on a satisfiable formula, an
  oracle model whose matrix entries get eliminated at some stage, or a matrix
  entry that turns from false to true. Any of these aborts the run.
* findings (recorded, never fatal): formulas the engine claims satisfiable
  but the oracle refutes, and core candidates the oracle finds satisfiable.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .cnf import Formula
from .dimacs import emit_dimacs
from .engine import BoxState, decide
from .generate import GenSpec, random_ksat
from .oracle import TooManyVariables, all_models, solve_subformula

FUZZ_N_MAX = 20


class SoundnessViolation(RuntimeError):
    def __init__(self, result: "InstanceResult"):
        self.result = result
        super().__init__(f"soundness violation on instance {result.index} (seed {result.spec['seed']}): {result.problems}")


@dataclass
class InstanceResult:
    index: int
    spec: dict
    dimacs: str
    algorithm: str
    step: int
    oracle: str
    model_count: int
    false_pairs: list = field(default_factory=list)
    core_checks: list = field(default_factory=list)  # [pair, core, oracle status or None]
    problems: list = field(default_factory=list)  # soundness problems, empty when clean
    survival_checks: int = 0
    monotonicity_checks: int = 0

    @property
    def category(self) -> str:
        if self.problems:
            return "soundness_violation"
        if self.oracle == "SAT":
            return "agree_sat"
        if self.algorithm == "ClaimedSatisfiable":
            return "discrepancy"
        if any(status == "SAT" for _, _, status in self.core_checks):
            return "core_violation"
        return "agree_unsat"


def _clause_rows(formula: Formula, models: np.ndarray) -> np.ndarray:
    """Row index of every model restricted to every clause, shape (count, m)."""
    out = np.zeros((len(models), formula.m), dtype=np.int64)
    for i, c in enumerate(formula.clauses):
        for p, v in enumerate(c.scope):
            out[:, i] |= models[:, v - 1].astype(np.int64) << (c.width - 1 - p)
    return out


class _StageChecker:
    """``on_stage`` hook checking model survival and monotonicity at every stage.

    The entries every oracle model needs are collected once into a bit array
    shaped like the box, so each stage costs one masked comparison.
    """

    def __init__(self, formula: Formula, models: np.ndarray):
        self.rows = _clause_rows(formula, models)
        self.iu, self.ju = np.triu_indices(formula.m, 1)
        self.required: np.ndarray | None = None
        self.prev: np.ndarray | None = None
        self.problems: list[str] = []
        self.survival_checks = 0
        self.monotonicity_checks = 0

    def _build_required(self, shape) -> np.ndarray:
        req = np.zeros(shape, dtype=np.uint64)
        if len(self.rows) and len(self.iu):
            ri = self.rows[:, self.iu]
            rj = self.rows[:, self.ju]
            iu = np.broadcast_to(self.iu, ri.shape)
            ju = np.broadcast_to(self.ju, ri.shape)
            bit = np.left_shift(np.uint64(1), (rj & 63).astype(np.uint64))
            np.bitwise_or.at(req, (iu, ju, ri, rj >> 6), bit)
        return req

    def __call__(self, label, box: BoxState) -> None:
        bits = box.bits
        if self.required is None:
            self.required = self._build_required(bits.shape)
        if self.prev is not None:
            self.monotonicity_checks += 1
            if (bits & ~self.prev).any():
                self.problems.append(f"monotonicity: entry became true at stage {label}")
        self.prev = bits.copy()
        if len(self.rows):
            self.survival_checks += 1
            lost = self.required & ~bits
            if lost.any():
                i, j = np.argwhere(lost.any(axis=(2, 3)))[0]
                self.problems.append(f"model survival: entry of a model lost at pair ({i + 1},{j + 1}) stage {label}")


def check_instance(formula: Formula, index: int = 0, spec: dict | None = None) -> InstanceResult:
    if formula.n > FUZZ_N_MAX:
        raise TooManyVariables(f"fuzzing needs n <= {FUZZ_N_MAX} for an exact oracle")
    models = all_models(formula)
    checker = _StageChecker(formula, models)
    verdict = decide(formula, backward=True, on_stage=checker)
    problems = list(checker.problems)
    oracle = "SAT" if len(models) else "UNSAT"
    if verdict.unsat and oracle == "SAT":
        problems.append("UNSAT pattern reported on a satisfiable formula")
    if verdict.model is not None and not len(models):
        problems.append("extracted a model for an unsatisfiable formula")
    core_checks = []
    if verdict.unsat:
        for pair in verdict.false_pairs:
            core = sorted(verdict.core_candidates[pair])
            try:
                status = solve_subformula(formula, core).status.value
            except TooManyVariables:
                status = None
            core_checks.append([list(pair), core, status])
    return InstanceResult(
        index=index,
        spec=spec or {},
        dimacs=emit_dimacs(formula),
        algorithm=verdict.outcome.value,
        step=verdict.step,
        oracle=oracle,
        model_count=len(models),
        false_pairs=[list(p) for p in verdict.false_pairs],
        core_checks=core_checks,
        problems=problems,
        survival_checks=checker.survival_checks,
        monotonicity_checks=checker.monotonicity_checks,
    )


def _run_spec(item: tuple[int, GenSpec]) -> InstanceResult:
    index, spec = item
    return check_instance(random_ksat(spec), index, asdict(spec))


@dataclass
class FuzzSummary:
    instances: int = 0
    agree_sat: int = 0
    agree_unsat: int = 0
    discrepancies: int = 0
    core_violations: int = 0
    soundness_violations: int = 0
    core_checks: int = 0
    core_checks_completed: int = 0
    survival_checks: int = 0
    monotonicity_checks: int = 0
    seconds: float = 0.0

    def add(self, r: InstanceResult) -> None:
        self.instances += 1
        cat = r.category
        if cat == "agree_sat":
            self.agree_sat += 1
        elif cat == "agree_unsat":
            self.agree_unsat += 1
        elif cat == "discrepancy":
            self.discrepancies += 1
        elif cat == "core_violation":
            self.core_violations += 1
        else:
            self.soundness_violations += 1
        self.core_checks += len(r.core_checks)
        self.core_checks_completed += sum(status is not None for _, _, status in r.core_checks)
        self.survival_checks += r.survival_checks
        self.monotonicity_checks += r.monotonicity_checks

    @property
    def core_completion(self) -> float:
        return self.core_checks_completed / self.core_checks if self.core_checks else 1.0

    def partitions(self) -> bool:
        parts = self.agree_sat + self.agree_unsat + self.discrepancies + self.core_violations
        return parts + self.soundness_violations == self.instances

    def lines(self) -> list[str]:
        return [
            f"instances={self.instances}",
            f"agree_sat={self.agree_sat}",
            f"agree_unsat={self.agree_unsat}",
            f"discrepancies={self.discrepancies}",
            f"core_violations={self.core_violations}",
            f"soundness_violations={self.soundness_violations}",
            f"core_checks={self.core_checks} completed={self.core_checks_completed}",
            f"survival_checks={self.survival_checks} monotonicity_checks={self.monotonicity_checks}",
            f"seconds={self.seconds:.1f}",
        ]


def finding_records(r: InstanceResult) -> list[dict]:
    """Report lines for one instance: completeness discrepancies and core violations."""
    base = {"index": r.index, "spec": r.spec, "dimacs": r.dimacs, "step": r.step}
    out = []
    if r.category == "discrepancy":
        out.append({"kind": "discrepancy", **base, "algorithm": r.algorithm, "oracle": r.oracle})
    for pair, core, status in r.core_checks:
        if status == "SAT":
            out.append({"kind": "core_violation", **base, "pair": pair, "core": core, "oracle": status})
    if r.problems:
        out.append({"kind": "soundness_violation", **base, "algorithm": r.algorithm,
                    "oracle": r.oracle, "problems": r.problems})
    return out


def instance_specs(n: int, m: int, k: int, count: int, seed: int) -> list[GenSpec]:
    """Instance ``i`` uses generator seed ``seed + i`` (mod 2**64)."""
    return [GenSpec(n, m, k, (seed + i) & ((1 << 64) - 1)) for i in range(count)]


def fuzz(
    specs: Sequence[GenSpec],
    report: IO[str] | None = None,
    workers: int = 1,
    keep_results: bool = False,
) -> tuple[FuzzSummary, list[InstanceResult]]:
    """Check every spec in order; raise :class:`SoundnessViolation` on the first soundness failure.

    Findings are appended to ``report`` as JSON lines in spec order, whatever
    the worker count.
    """
    for s in specs:
        if s.n > FUZZ_N_MAX:
            raise TooManyVariables(f"fuzzing needs n <= {FUZZ_N_MAX}, got {s.n}")
    summary = FuzzSummary()
    kept: list[InstanceResult] = []
    t0 = time.perf_counter()
    items = list(enumerate(specs))
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results: Iterable[InstanceResult] = pool.map(_run_spec, items, chunksize=32)
            _collect(results, summary, report, kept, keep_results)
    else:
        _collect(map(_run_spec, items), summary, report, kept, keep_results)
    summary.seconds = time.perf_counter() - t0
    return summary, kept


def _collect(results, summary, report, kept, keep_results):
    for r in results:
        summary.add(r)
        if report is not None:
            for rec in finding_records(r):
                report.write(json.dumps(rec) + "\n")
        if keep_results:
            kept.append(r)
        if r.problems:
            raise SoundnessViolation(r)
