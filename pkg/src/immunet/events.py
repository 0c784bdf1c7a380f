"""Append-only event log with a stable line format.

Every observable fact about a run (injections, forwards, detections,
infections, ...) is an Event line; metrics and audits are computed from
the log alone so every run is replayable from its persisted log.
"""

from __future__ import annotations

from dataclasses import dataclass

# Closed set of event kinds; the line format is a stable external interface.
KINDS = (
    "Step",
    "Inject",
    "Forward",
    "Deliver",
    "Drop",
    "Evict",
    "Detect",
    "Infect",
    "Disinfect",
    "Identify",
    "CellMove",
    "SubstanceSend",
    "SubstanceOpen",
    "Spawn",
)


@dataclass(frozen=True)
class Event:
    step: int
    kind: str
    fields: tuple[tuple[str, object], ...]

    def get(self, key: str, default=None):
        for k, v in self.fields:
            if k == key:
                return v
        return default

    def to_line(self) -> str:
        parts = [f"step={self.step}", f"kind={self.kind}"]
        parts.extend(f"{k}={_fmt(v)}" for k, v in self.fields)
        return " ".join(parts)


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".6g")
    if isinstance(value, bytes):
        return value.hex() or "-"
    if value is None:
        return "-"
    return str(value)


class EventLog:
    """Ordered sequence of events for one run."""

    def __init__(self):
        self.events: list[Event] = []

    def append(self, step: int, kind: str, **fields) -> Event:
        if kind not in KINDS:
            raise ValueError(f"unknown event kind: {kind}")
        ev = Event(step, kind, tuple(fields.items()))
        self.events.append(ev)
        return ev

    def __iter__(self):
        return iter(self.events)

    def __len__(self):
        return len(self.events)

    def to_text(self) -> str:
        return "\n".join(ev.to_line() for ev in self.events) + ("\n" if self.events else "")

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_text())


def parse_line(line: str) -> Event:
    """Parse one `step=<int> kind=<enum> key=value ...` record."""
    tokens = line.split()
    if len(tokens) < 2 or not tokens[0].startswith("step=") or not tokens[1].startswith("kind="):
        raise ValueError(f"malformed event line: {line!r}")
    step = int(tokens[0][5:])
    kind = tokens[1][5:]
    if kind not in KINDS:
        raise ValueError(f"unknown event kind in line: {line!r}")
    fields = []
    for tok in tokens[2:]:
        key, _, raw = tok.partition("=")
        fields.append((key, _parse_value(raw)))
    return Event(step, kind, tuple(fields))


def _parse_value(raw: str):
    if raw == "-":
        return None
    try:
        return int(raw)
    except ValueError:
        pass
    try:
        return float(raw)
    except ValueError:
        pass
    return raw


def load_log(path) -> list[Event]:
    events = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                events.append(parse_line(line))
    return events
