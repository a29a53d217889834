import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compatsat.cnf import Formula, is_model
from compatsat.generate import GenSpec, paper_example, random_ksat
from compatsat.oracle import (
    InvalidIndices,
    Status,
    TooManyVariables,
    all_models,
    backtrack_solve,
    enumerate_solve,
    solve_subformula,
)


def naive_models(f: Formula) -> list[tuple[bool, ...]]:
    out = []
    for bits in itertools.product([False, True], repeat=f.n):
        a = dict(zip(range(1, f.n + 1), bits))
        if all(any(a[abs(x)] == (x > 0) for x in c) for c in f.to_ints()):
            out.append(bits)
    return out


def test_examples():
    r = enumerate_solve(paper_example("ex1"), count_models=True)
    assert r.status is Status.SAT and r.model_count == 9
    assert is_model(paper_example("ex1"), r.witness)
    assert enumerate_solve(paper_example("ex2")).status is Status.UNSAT
    assert not enumerate_solve(paper_example("ex4_f2")).sat
    assert enumerate_solve(paper_example("ex4_f1"), count_models=True).model_count == 1
    r = enumerate_solve(Formula((), 0), count_models=True)
    assert r.sat and r.model_count == 1 and r.witness == {}


def test_ex1_models_match_truth_table_rows():
    from compatsat.golden import EX1_MODELS

    rows = [1 + int("".join("1" if b else "0" for b in m), 2) for m in all_models(paper_example("ex1"))]
    assert tuple(rows) == EX1_MODELS


def test_solve_subformula():
    ex3 = paper_example("ex3")
    assert not solve_subformula(ex3, {1, 2, 4}).sat
    assert not solve_subformula(ex3, {2, 3, 6}).sat
    assert solve_subformula(ex3, set()).sat
    assert solve_subformula(ex3, {4, 5, 6}, count_models=True).model_count == 4
    with pytest.raises(InvalidIndices):
        solve_subformula(ex3, {0})
    with pytest.raises(InvalidIndices):
        solve_subformula(ex3, {7})


def test_too_many_variables():
    f = Formula.from_ints([[1, 27]], n=27)
    with pytest.raises(TooManyVariables):
        enumerate_solve(f, count_models=True)
    with pytest.raises(TooManyVariables):
        all_models(f)
    # the decision itself falls back to backtracking
    assert enumerate_solve(f).sat


def test_empty_clause_is_unsat():
    from compatsat.cnf import Clause

    f = Formula((Clause.from_ints([1]), Clause(())), 1)
    assert not enumerate_solve(f).sat
    assert not backtrack_solve(f).sat


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 8), st.integers(0, 40), st.integers(1, 3), st.integers(0, 2**32))
def test_count_matches_naive_loop(n, m, k, seed):
    f = random_ksat(GenSpec(n, m, min(k, n), seed))
    expect = naive_models(f)
    r = enumerate_solve(f, count_models=True)
    assert r.model_count == len(expect)
    assert [tuple(x) for x in all_models(f).tolist()] == expect
    if expect:
        assert tuple(r.witness[v] for v in range(1, n + 1)) == expect[0]
        assert is_model(f, r.witness)
    else:
        assert r.witness is None


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 14), st.floats(1.0, 7.0), st.integers(0, 2**32))
def test_backtracking_agrees_with_enumeration(n, ratio, seed):
    f = random_ksat(GenSpec(n, round(ratio * n), min(3, n), seed))
    a, b = backtrack_solve(f), enumerate_solve(f)
    assert a.status == b.status
    assert a.witness == b.witness


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 9), st.integers(1, 30), st.integers(0, 2**32), st.data())
def test_subformula_monotonicity(n, m, seed, data):
    f = random_ksat(GenSpec(n, m, 3, seed))
    big = set(data.draw(st.sets(st.integers(1, m))))
    small = set(data.draw(st.sets(st.sampled_from(sorted(big))))) if big else set()
    if solve_subformula(f, big).sat:
        assert solve_subformula(f, small).sat


def test_large_n_backtracking():
    f = random_ksat(GenSpec(24, 60, 3, 3))
    r = enumerate_solve(f)
    assert r.sat and is_model(f, r.witness)
