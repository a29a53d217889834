"""Reference matrices for the worked examples, used by ``compatsat example`` and the tests.

Each matrix is written row by row, rows separated by ``/``, ``1`` for true.
Keys are 1-based clause pairs under the variable mapping p=1, q=2, r=3, s=4.
"""

from __future__ import annotations

TABLES: dict[str, dict[str, dict[tuple[int, int], str]]] = {
    "ex1": {
        "Start": {
            (1, 2): "00000000/01000000/00100000/00010000/00001000/00000000/00000010/00000001",
            (1, 3): "00000000/11000000/00010000/00010000/00001100/00001100/00000011/00000011",
            (1, 4): "00000000/00110000/11000000/00110000/00001100/00000010/00001100/00000010",
            (2, 3): "11000000/11000000/00010000/00010000/00001100/00000000/00000011/00000011",
            (2, 4): "11000000/00110000/11000000/00110000/00001100/00000000/00001100/00000010",
            (3, 4): "10100000/01010000/00000000/01010000/00001010/00000100/00001010/00000100",
        },
        "Step 1": {
            (1, 2): "00000000/01000000/00100000/00010000/00001000/00000000/00000010/00000001",
            (1, 3): "00000000/11000000/00010000/00010000/00001100/00001100/00000011/00000011",
            (1, 4): "00000000/00110000/11000000/00110000/00001100/00000010/00001100/00000010",
            (2, 3): "00000000/11000000/00010000/00010000/00001100/00000000/00000011/00000011",
            (2, 4): "00000000/00110000/11000000/00110000/00001100/00000000/00001100/00000010",
            (3, 4): "00100000/00010000/00000000/01010000/00001010/00000100/00001010/00000100",
        },
        "Step 2": {
            (1, 2): "00000000/01000000/00100000/00010000/00001000/00000000/00000010/00000001",
            (1, 3): "00000000/11000000/00010000/00010000/00001100/00001100/00000011/00000011",
            (1, 4): "00000000/00110000/11000000/00110000/00001100/00000010/00001100/00000010",
            (2, 3): "00000000/11000000/00010000/00010000/00001100/00000000/00000011/00000011",
            (2, 4): "00000000/00110000/11000000/00110000/00001100/00000000/00001100/00000010",
            (3, 4): "00100000/00010000/00000000/01010000/00001000/00000100/00001010/00000100",
        },
        "All solutions": {
            (1, 2): "00000000/01000000/00100000/00010000/00001000/00000000/00000010/00000001",
            (1, 3): "00000000/11000000/00010000/00010000/00001100/00000000/00000011/00000010",
            (1, 4): "00000000/00110000/01000000/00010000/00001100/00000000/00001100/00000010",
            (2, 3): "00000000/11000000/00010000/00010000/00001100/00000000/00000011/00000010",
            (2, 4): "00000000/00110000/01000000/00010000/00001100/00000000/00001100/00000010",
            (3, 4): "00100000/00010000/00000000/01010000/00001000/00000100/00001010/00000100",
        },
    },
    "ex2": {
        "Start": {
            (1, 2): "00000000/00000000/00100000/00010000/00001000/00000100/00000010/00000001",
            (1, 3): "0000/1100/1100/1100/0001/0001/0001/0001",
            (1, 4): "0000/1100/1100/1100/0010/0010/0010/0010",
            (1, 5): "00/10/00/00/10/10/00/00",
            (2, 3): "1100/0000/1100/1100/0001/0001/0001/0001",
            (2, 4): "1100/0000/1100/1100/0010/0010/0010/0010",
            (2, 5): "10/00/00/00/10/10/00/00",
            (3, 4): "1000/0100/0000/0000",
            (3, 5): "10/10/00/10",
            (4, 5): "10/10/10/00",
        },
        "Step 1": {
            (1, 2): "00000000/00000000/00100000/00010000/00001000/00000100/00000010/00000001",
            (1, 3): "0000/1100/1100/1100/0001/0001/0001/0001",
            (1, 4): "0000/1100/1100/1100/0010/0010/0010/0010",
            (1, 5): "00/10/00/00/10/10/00/00",
            (2, 3): "0000/0000/1100/1100/0001/0001/0001/0001",
            (2, 4): "0000/0000/1100/1100/0010/0010/0010/0010",
            (2, 5): "00/00/00/00/10/10/00/00",
            (3, 4): "1000/0100/0000/0000",
            (3, 5): "10/10/00/10",
            (4, 5): "10/10/10/00",
        },
        "Step 2": {
            (1, 2): "00000000/00000000/00100000/00010000/00001000/00000100/00000010/00000001",
            (1, 3): "0000/1100/1100/1100/0001/0001/0001/0001",
            (1, 4): "0000/1100/1100/1100/0010/0010/0010/0010",
            (1, 5): "00/10/00/00/10/10/00/00",
            (2, 3): "0000/0000/1100/1100/0001/0001/0001/0001",
            (2, 4): "0000/0000/1100/1100/0010/0010/0010/0010",
            (2, 5): "00/00/00/00/10/10/00/00",
            (3, 4): "1000/0100/0000/0000",
            (3, 5): "00/00/00/10",
            (4, 5): "00/00/10/00",
        },
        "Step 3": {
            (1, 2): "00000000/00000000/00100000/00010000/00001000/00000100/00000010/00000001",
            (1, 3): "0000/1100/1100/1100/0001/0001/0001/0001",
            (1, 4): "0000/1100/1100/1100/0010/0010/0010/0010",
            (1, 5): "00/10/00/00/10/10/00/00",
            (2, 3): "0000/0000/1100/1100/0001/0001/0001/0001",
            (2, 4): "0000/0000/1100/1100/0010/0010/0010/0010",
            (2, 5): "00/00/00/00/10/10/00/00",
            (3, 4): "1000/0100/0000/0000",
            (3, 5): "00/00/00/10",
            (4, 5): "00/00/00/00",
        },
    },
    "ex3": {
        "Start": {
            (1, 2): "10/00",
            (1, 3): "10/00",
            (1, 4): "0100/0000",
            (1, 5): "0100/0000",
            (1, 6): "0111/0000",
            (2, 3): "10/00",
            (2, 4): "0010/0000",
            (2, 5): "0111/0000",
            (2, 6): "0100/0000",
            (3, 4): "0111/0000",
            (3, 5): "0010/0000",
            (3, 6): "0010/0000",
            (4, 5): "0000/0100/0011/0011",
            (4, 6): "0000/0011/0100/0011",
            (5, 6): "0000/0101/0010/0101",
        },
        "Step 1": {
            (1, 2): "10/00",
            (1, 3): "10/00",
            (1, 4): "0100/0000",
            (1, 5): "0100/0000",
            (1, 6): "0111/0000",
            (2, 3): "10/00",
            (2, 4): "0000/0000",
            (2, 5): "0100/0000",
            (2, 6): "0100/0000",
            (3, 4): "0100/0000",
            (3, 5): "0000/0000",
            (3, 6): "0010/0000",
            (4, 5): "0000/0100/0000/0000",
            (4, 6): "0000/0011/0000/0000",
            (5, 6): "0000/0101/0000/0000",
        },
    },
}

# product (C_14^T x C_15) at Start of ex2, and its two factors as displayed
EX2_C14_T = "01110000/01110000/00001111/00000000"
EX2_C15 = "00/10/00/00/10/10/00/00"
EX2_PRODUCT = "10/10/10/00"

# ex1 truth-table rows (1-based, variable order p q r s) with f = 1
EX1_MODELS = (3, 4, 6, 8, 9, 10, 13, 14, 15)


def rows(table: str) -> tuple[str, ...]:
    return tuple(table.split("/"))


def ex4_diagonal(i: int, j: int) -> str:
    """8x8 Start matrix of ex4: diagonal, false exactly at positions i and j."""
    return "/".join(
        "".join("1" if (c == r and r not in (i, j)) else "0" for c in range(1, 9)) for r in range(1, 9)
    )


def verify_example(name: str) -> list[tuple[str, bool, str]]:
    """Re-run a worked example with a full trace and compare against the tables above.

    Returns ``(label, passed, detail)`` per check.
    """
    from .engine import CompatMatrix, decide, transpose
    from .generate import paper_example
    from .oracle import enumerate_solve
    from .trace import TraceRecorder, replay

    formula = paper_example(name)
    rec = TraceRecorder()
    verdict = decide(formula, rec, backward=True)
    stages = replay(rec)
    checks: list[tuple[str, bool, str]] = []

    for stage, expected in TABLES.get(name, {}).items():
        got = stages.get(stage, {})
        bad = [p for p, table in expected.items() if got.get(p) != rows(table)]
        checks.append((stage, not bad, f"mismatched pairs {bad}" if bad else f"{len(expected)} matrices"))

    if name in ("ex4_f1", "ex4_f2"):
        got = stages["Start"]
        bad = [p for p in got if got[p] != rows(ex4_diagonal(*p))]
        checks.append(("Start diagonal", not bad, f"mismatched pairs {bad}" if bad else f"{len(got)} matrices"))

    expect = {
        "ex1": ("ClaimedSatisfiable", None, None),
        "ex2": ("UnsatDetected", 3, [(4, 5)]),
        "ex3": ("UnsatDetected", 1, [(2, 4), (3, 5)]),
        "ex4_f1": ("ClaimedSatisfiable", None, None),
        "ex4_f2": ("UnsatDetected", None, None),
        "contradiction": ("UnsatDetected", 0, [(1, 2)]),
    }[name]
    ok = verdict.outcome.value == expect[0]
    if expect[1] is not None:
        ok &= verdict.step == expect[1] and list(verdict.false_pairs) == expect[2]
    if name == "ex4_f2":
        ok &= verdict.step <= 6
    checks.append(("verdict", ok, verdict.summary()))

    if name == "ex1":
        res = enumerate_solve(formula, count_models=True)
        checks.append(("brute force", res.model_count == len(EX1_MODELS), f"models={res.model_count}"))
        checks.append(("model", verdict.model is not None, _fmt_model(verdict.model)))
    if name == "ex2":
        c14 = CompatMatrix.from_strings(stages["Start"][(1, 4)])
        c15 = CompatMatrix.from_strings(stages["Start"][(1, 5)])
        ok = transpose(c14).to_strings() == rows(EX2_C14_T) and c15.to_strings() == rows(EX2_C15)
        ok &= (transpose(c14) @ c15).to_strings() == rows(EX2_PRODUCT)
        checks.append(("worked product", ok, "C14^T x C15"))
    if name == "ex4_f1":
        want = {1: True, 2: True, 3: True}
        checks.append(("model", verdict.model == want, _fmt_model(verdict.model)))
    return checks


def _fmt_model(model) -> str:
    if model is None:
        return "no model"
    return " ".join(str(v if model[v] else -v) for v in sorted(model))
