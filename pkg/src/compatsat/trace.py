"""JSON-lines trace events emitted by :func:`compatsat.engine.decide`.

One JSON object per line. Every object has an ``event`` key, one of
``start``, ``step``, ``matrix``, ``false_matrix``, ``closure``, ``model``,
``verdict``. Matrix rows are strings of ``0``/``1`` with column 1 first; clause
pairs are 1-based ``[i, j]`` with ``i < j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Any, Iterable, Iterator

KINDS = ("start", "step", "matrix", "false_matrix", "closure", "model", "verdict")


@dataclass(frozen=True)
class TraceEvent:
    kind: str
    step: int | None = None
    pair: tuple[int, int] | None = None
    rows: tuple[str, ...] | None = None
    payload: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown trace event kind {self.kind!r}")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"event": self.kind}
        if self.step is not None:
            d["step"] = self.step
        if self.pair is not None:
            d["pair"] = list(self.pair)
        if self.rows is not None:
            d["rows"] = list(self.rows)
        d.update(self.payload)
        return d

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "TraceEvent":
        d = dict(d)
        kind = d.pop("event")
        step = d.pop("step", None)
        pair = d.pop("pair", None)
        rows = d.pop("rows", None)
        return cls(
            kind,
            step,
            tuple(pair) if pair is not None else None,
            tuple(rows) if rows is not None else None,
            d,
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


class JsonlTraceWriter:
    """Callable trace sink writing one event per line to a text stream."""

    def __init__(self, stream: IO[str]):
        self.stream = stream

    def __call__(self, event: TraceEvent) -> None:
        self.stream.write(event.to_json() + "\n")


class TraceRecorder(list):
    """In-memory sink; handy for tests and golden comparison."""

    def __call__(self, event: TraceEvent) -> None:
        self.append(event)


def read_trace(lines: Iterable[str]) -> Iterator[TraceEvent]:
    for line in lines:
        line = line.strip()
        if line:
            yield TraceEvent.from_dict(json.loads(line))


def replay(events: Iterable[TraceEvent]) -> dict[str, dict[tuple[int, int], tuple[str, ...]]]:
    """Rebuild the full box after every stage from a trace.

    Returns ``{"Start": {...}, "Step 1": {...}, ..., "All solutions": {...}}``
    where each value maps every pair to its matrix rows at that stage. Step
    events only carry the matrices they changed; the rest are carried over.
    """
    stages: dict[str, dict[tuple[int, int], tuple[str, ...]]] = {}
    current: dict[tuple[int, int], tuple[str, ...]] = {}
    label = None
    for ev in events:
        if ev.kind == "step":
            if label is not None:
                stages[label] = dict(current)
            label = "Start" if ev.step == 0 else f"Step {ev.step}"
        elif ev.kind == "closure":
            if label is not None:
                stages[label] = dict(current)
            label = "All solutions"
        elif ev.kind == "matrix":
            current[ev.pair] = ev.rows
    if label is not None:
        stages[label] = dict(current)
    return stages


def validate_sequence(events: list[TraceEvent]) -> None:
    """Raise ValueError unless the run starts with ``start`` and ends with ``verdict``."""
    if not events:
        raise ValueError("empty trace")
    if events[0].kind != "start":
        raise ValueError(f"trace must begin with a start event, got {events[0].kind}")
    if events[-1].kind != "verdict":
        raise ValueError(f"trace must end with a verdict event, got {events[-1].kind}")
    if sum(ev.kind == "verdict" for ev in events) != 1:
        raise ValueError("trace must contain exactly one verdict")
