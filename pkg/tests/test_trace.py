import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compatsat.engine import backward_closure, decide, deplete_step, init_box
from compatsat.generate import GenSpec, paper_example, random_ksat
from compatsat.trace import (
    JsonlTraceWriter,
    TraceEvent,
    TraceRecorder,
    read_trace,
    replay,
    validate_sequence,
)


def test_event_round_trip():
    ev = TraceEvent("matrix", 2, (3, 4), ("01", "10"), {"note": 1})
    d = ev.to_dict()
    assert d == {"event": "matrix", "step": 2, "pair": [3, 4], "rows": ["01", "10"], "note": 1}
    assert TraceEvent.from_dict(json.loads(ev.to_json())) == ev
    with pytest.raises(ValueError):
        TraceEvent("bogus")


def test_jsonl_writer_and_reader():
    buf = io.StringIO()
    v = decide(paper_example("ex2"), JsonlTraceWriter(buf))
    lines = buf.getvalue().splitlines()
    assert all(json.loads(line)["event"] for line in lines)
    events = list(read_trace(lines))
    validate_sequence(events)
    assert events[-1].payload["outcome"] == "UnsatDetected"
    assert events[-1].step == v.step == 3
    false = [e for e in events if e.kind == "false_matrix"]
    assert [e.pair for e in false] == [(4, 5)] and false[0].step == 3


def test_validate_sequence_rejects():
    with pytest.raises(ValueError):
        validate_sequence([])
    with pytest.raises(ValueError):
        validate_sequence([TraceEvent("verdict")])
    with pytest.raises(ValueError):
        validate_sequence([TraceEvent("start")])
    with pytest.raises(ValueError):
        validate_sequence([TraceEvent("start"), TraceEvent("verdict"), TraceEvent("verdict")])


def test_no_sink_emits_nothing_but_still_decides():
    assert decide(paper_example("ex1")).step == 2


def test_event_kinds_backward():
    rec = TraceRecorder()
    decide(paper_example("ex4_f1"), rec, backward=True)
    kinds = [e.kind for e in rec]
    assert kinds[0] == "start" and kinds[-1] == "verdict"
    assert "closure" in kinds and "model" in kinds
    assert kinds.index("closure") < kinds.index("model") < kinds.index("verdict")
    model = next(e for e in rec if e.kind == "model")
    assert model.payload


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 7), st.integers(2, 10), st.integers(0, 2**32), st.booleans())
def test_replay_equals_engine_state(n, m, seed, backward):
    f = random_ksat(GenSpec(n, m, min(3, n), seed))
    rec = TraceRecorder()
    v = decide(f, rec, backward=backward)
    validate_sequence(list(rec))
    stages = replay(rec)
    box = init_box(f)
    assert stages["Start"] == {p: M.to_strings() for p, M in box.matrices.items()}
    for s in range(1, v.step + 1):
        box = deplete_step(box, s)
        assert stages[f"Step {s}"] == {p: M.to_strings() for p, M in box.matrices.items()}
    assert f"Step {v.step + 1}" not in stages
    if backward and not v.unsat:
        box = backward_closure(box)
        assert stages["All solutions"] == {p: M.to_strings() for p, M in box.matrices.items()}
