import io
import json
from pathlib import Path

import numpy as np
import pytest

from compatsat.dimacs import read_dimacs
from compatsat.engine import decide
from compatsat.generate import GenSpec, paper_example, random_ksat
from compatsat.harness import (
    FuzzSummary,
    InstanceResult,
    SoundnessViolation,
    _StageChecker,
    check_instance,
    finding_records,
    fuzz,
    instance_specs,
)
from compatsat.oracle import TooManyVariables, all_models, enumerate_solve

GAP = Path(__file__).parent / "data" / "completeness_gap_n10_m43_seed153.cnf"


def test_instance_specs_seeds():
    specs = instance_specs(5, 9, 3, 4, 10)
    assert [s.seed for s in specs] == [10, 11, 12, 13]
    assert instance_specs(5, 9, 3, 2, 2**64 - 1)[1].seed == 0


def test_check_instance_examples():
    r = check_instance(paper_example("ex1"))
    assert r.category == "agree_sat" and r.model_count == 9 and r.survival_checks > 0
    r = check_instance(paper_example("ex3"))
    assert r.category == "agree_unsat"
    assert r.core_checks == [[[2, 4], [1, 2, 4], "UNSAT"], [[3, 5], [1, 3, 5], "UNSAT"]]
    r = check_instance(paper_example("contradiction"))
    assert r.category == "agree_unsat" and r.step == 0


def test_completeness_gap_regression():
    f = read_dimacs(GAP)
    assert f == random_ksat(GenSpec(10, 43, 3, 153))
    assert not enumerate_solve(f).sat
    v = decide(f, backward=True)
    assert not v.unsat and v.model is None
    r = check_instance(f)
    assert r.category == "discrepancy" and not r.problems
    (rec,) = finding_records(r)
    assert rec["kind"] == "discrepancy" and rec["algorithm"] == "ClaimedSatisfiable" and rec["oracle"] == "UNSAT"


def test_stage_checker_flags_lost_model_entry():
    f = paper_example("ex1")
    checker = _StageChecker(f, all_models(f))
    v = decide(f)
    box = v.box.copy()
    checker("Start", box)
    assert checker.problems == []
    box.bits[:] = 0
    checker("Step 1", box)
    assert any("model survival" in p for p in checker.problems)


def test_stage_checker_flags_resurrection():
    f = paper_example("ex2")
    checker = _StageChecker(f, all_models(f))
    v = decide(f)
    checker("a", v.box)
    grown = v.box.copy()
    grown.bits[3, 4, 0, 0] |= np.uint64(2)
    checker("b", grown)
    assert any("monotonicity" in p for p in checker.problems)


def test_summary_partitions_and_order():
    specs = instance_specs(10, 43, 3, 200, 100)
    buf = io.StringIO()
    summary, results = fuzz(specs, buf, keep_results=True)
    assert summary.instances == 200 and summary.partitions()
    assert summary.soundness_violations == 0
    assert [r.index for r in results] == list(range(200))
    recs = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert len([r for r in recs if r["kind"] == "discrepancy"]) == summary.discrepancies
    assert [r["index"] for r in recs] == sorted(r["index"] for r in recs)
    assert summary.core_completion == 1.0


def test_parallel_matches_serial():
    specs = instance_specs(8, 34, 3, 80, 5)
    a, b = io.StringIO(), io.StringIO()
    s1, _ = fuzz(specs, a)
    s2, _ = fuzz(specs, b, workers=2)
    assert a.getvalue() == b.getvalue()
    assert s1.lines()[:-1] == s2.lines()[:-1]


def test_fuzz_rejects_large_n():
    with pytest.raises(TooManyVariables):
        fuzz([GenSpec(21, 5, 3)])
    with pytest.raises(TooManyVariables):
        check_instance(random_ksat(GenSpec(21, 5, 3)))


def test_soundness_violation_raised(monkeypatch):
    from compatsat import harness

    real = harness.check_instance
    monkeypatch.setattr(harness, "check_instance", lambda f, i=0, s=None: _with_problem(real(f, i, s)))
    with pytest.raises(SoundnessViolation) as info:
        fuzz(instance_specs(4, 4, 3, 5, 0))
    assert info.value.result.index == 0


def _with_problem(r: InstanceResult) -> InstanceResult:
    r.problems.append("injected")
    return r


def test_summary_arithmetic():
    s = FuzzSummary()
    for cat_args in [("SAT", "ClaimedSatisfiable", []), ("UNSAT", "UnsatDetected", []),
                     ("UNSAT", "ClaimedSatisfiable", []), ("UNSAT", "UnsatDetected", [[[1, 2], [1, 2], "SAT"]])]:
        oracle, alg, cores = cat_args
        s.add(InstanceResult(0, {}, "", alg, 0, oracle, 0, core_checks=cores))
    assert (s.agree_sat, s.agree_unsat, s.discrepancies, s.core_violations) == (1, 1, 1, 1)
    assert s.partitions() and s.core_checks == 1 and s.core_checks_completed == 1
