"""Run metrics, computed solely from the event log so any run can be
replayed from its persisted log and yield identical numbers.

Rates with zero denominators are reported as None, never as fake zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from statistics import median


@dataclass
class Metrics:
    steps: int = 0
    injected_total: int = 0
    injected_attack: int = 0
    destroyed_attack: int = 0
    delivered_attack: int = 0
    prevention_rate: float | None = None
    worm_entries: int = 0
    infections_total: int = 0
    infections_per_event: float | None = None
    identification_latency_median: float | None = None
    identified_episodes: int = 0
    unidentified_episodes: int = 0
    disinfection_latency_median: float | None = None
    overhead: float | None = None
    false_positive_detections: int = 0
    false_disinfections: int = 0
    dropped_total: int = 0

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def compute_metrics(events) -> Metrics:
    m = Metrics()
    steps = 0
    forwards_total = 0
    forwards_immune = 0
    infected_nodes: set[int] = set()
    entry_nodes: set[int] = set()
    # open infection episodes: node -> infect step (awaiting an Identify)
    open_infections: dict[int, int] = {}
    open_identifies: dict[int, int] = {}
    ident_latencies: list[int] = []
    disinf_latencies: list[int] = []

    for ev in events:
        kind = ev.kind
        if kind == "Step":
            steps += 1
        elif kind == "Inject":
            m.injected_total += 1
            if ev.get("attack") is not None:
                m.injected_attack += 1
        elif kind == "Forward":
            forwards_total += 1
            if ev.get("klass") == "Immune":
                forwards_immune += 1
        elif kind == "Detect":
            if ev.get("attack") is not None:
                m.destroyed_attack += 1
            else:
                m.false_positive_detections += 1
        elif kind == "Deliver":
            if ev.get("attack") is not None:
                m.delivered_attack += 1
        elif kind == "Drop":
            if ev.get("pid") is not None:
                m.dropped_total += 1
        elif kind == "Infect":
            if ev.get("ok") != 1:
                continue
            node = ev.get("node")
            if ev.get("via") == "entry":
                m.worm_entries += 1
                entry_nodes.add(node)
            else:
                infected_nodes.add(node)
            if node not in open_infections:
                open_infections[node] = ev.step
        elif kind == "Identify":
            node = ev.get("node")
            start = open_infections.pop(node, None)
            if start is not None:
                ident_latencies.append(ev.step - start)
                open_identifies.setdefault(node, ev.step)
        elif kind == "Disinfect":
            if ev.get("ok") == 1:
                node = ev.get("node")
                ident_step = open_identifies.pop(node, None)
                if ident_step is not None:
                    disinf_latencies.append(ev.step - ident_step)
            else:
                m.false_disinfections += 1

    m.steps = steps
    m.infections_total = len(infected_nodes - entry_nodes)
    if m.injected_attack:
        m.prevention_rate = m.destroyed_attack / m.injected_attack
    if m.worm_entries:
        m.infections_per_event = m.infections_total / m.worm_entries
    if ident_latencies:
        m.identification_latency_median = float(median(ident_latencies))
    m.identified_episodes = len(ident_latencies)
    m.unidentified_episodes = len(open_infections)
    if disinf_latencies:
        m.disinfection_latency_median = float(median(disinf_latencies))
    if forwards_total:
        m.overhead = forwards_immune / forwards_total
    return m
