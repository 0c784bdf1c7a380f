"""Time-stepped packet transport: bounded two-lane priority queues and the step loop.

One step runs a fixed phase order: (1) traffic injection, (2) per-node
dequeue and forwarding within per-link bandwidth budgets, (3) arrival
checking and admission, (4) infected-node emission, (5) cell actions,
(6) pheromone evaporation, (7) station actions, (8) sampling. Packets
injected during a step become forwardable the next step, so a packet
needs exactly one step per hop.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Callable

from .events import Event, EventLog
from .topology import Network, UnknownNode

IMMUNE = "Immune"
DATA = "Data"

ACCEPTED = "Accepted"
DROPPED = "Dropped"


class ConservationViolation(AssertionError):
    def __init__(self, pid: int, reason: str):
        super().__init__(f"packet {pid}: {reason}")
        self.pid = pid
        self.reason = reason


@dataclass
class Packet:
    pid: int
    src: int
    dst: int
    klass: str
    payload: bytes = b""
    attack: int | None = None
    hop_count: int = 0
    injected_at: int = -1
    cargo: object = None  # in-simulation freight: a cell or a sealed substance

    def __post_init__(self):
        if self.klass not in (IMMUNE, DATA):
            raise ValueError(f"bad packet class {self.klass!r}")


class NodeQueue:
    """Bounded queue with a strict-priority immune lane over the data lane."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self.immune: deque[Packet] = deque()
        self.data: deque[Packet] = deque()
        self._seq = 0
        self._enq_seq: dict[int, int] = {}

    def occupancy(self) -> int:
        return len(self.immune) + len(self.data)

    def lane(self, klass: str) -> deque[Packet]:
        return self.immune if klass == IMMUNE else self.data

    def mark_enqueued(self, pkt: Packet) -> None:
        self._enq_seq[pkt.pid] = self._seq
        self._seq += 1

    def enqueue_seq(self, pkt: Packet) -> int:
        return self._enq_seq.get(pkt.pid, -1)


@dataclass
class StepHooks:
    """Per-phase callbacks supplied by the orchestration layer.

    All callbacks run synchronously inside step() in phase order; the
    transport layer itself never consumes randomness.
    """

    inject: Callable = lambda state: None
    on_forward: Callable = lambda state, pkt, u, v: None
    on_arrival: Callable = lambda state, node, pkt, from_node: False  # True = destroyed
    on_deliver: Callable = lambda state, pkt, node: None
    emit: Callable = lambda state: None
    cells: Callable = lambda state: None
    evaporate: Callable = lambda state: None
    stations: Callable = lambda state: None
    sample: Callable = lambda state: None


class TransportState:
    """Clock, queues, routing, and event log for one run."""

    def __init__(self, network: Network, routing: dict[tuple[int, int], int],
                 capacity: int, log: EventLog | None = None):
        self.network = network
        self.routing = routing
        self.clock = 0
        self.log = log if log is not None else EventLog()
        self.queues: dict[int, NodeQueue] = {n: NodeQueue(capacity) for n in network.nodes}
        self._next_pid = 0
        self._staged_injections: list[tuple[int, Packet]] = []
        self.strict_checks = False

    def new_pid(self) -> int:
        pid = self._next_pid
        self._next_pid += 1
        return pid

    def make_packet(self, src: int, dst: int, klass: str, payload: bytes = b"",
                    attack: int | None = None, cargo: object = None) -> Packet:
        return Packet(self.new_pid(), src, dst, klass, payload, attack,
                      injected_at=self.clock, cargo=cargo)

    def stage_injection(self, node: int, pkt: Packet) -> None:
        """Log an injection; the packet enters the node's queue at the end of
        the current dequeue phase and becomes forwardable next step."""
        if not self.network.has_node(node):
            raise UnknownNode(node)
        self.log.append(self.clock, "Inject", pid=pkt.pid, node=node, src=pkt.src,
                        dst=pkt.dst, klass=pkt.klass, attack=pkt.attack)
        self._staged_injections.append((node, pkt))

    def enqueue(self, node: int, pkt: Packet) -> str:
        """Admit a packet to a node queue; returns Accepted or Dropped.

        A full queue drops the newcomer, except that an immune packet
        evicts the newest queued data packet when one exists.
        """
        if not self.network.has_node(node):
            raise UnknownNode(node)
        q = self.queues[node]
        if q.occupancy() < q.capacity:
            q.lane(pkt.klass).append(pkt)
            q.mark_enqueued(pkt)
            self._check_capacity(q)
            return ACCEPTED
        if pkt.klass == IMMUNE and q.data:
            victim = q.data.pop()
            self.log.append(self.clock, "Evict", pid=victim.pid, node=node,
                            klass=victim.klass, attack=victim.attack, by=pkt.pid)
            q.immune.append(pkt)
            q.mark_enqueued(pkt)
            self._check_capacity(q)
            return ACCEPTED
        self.log.append(self.clock, "Drop", pid=pkt.pid, node=node,
                        klass=pkt.klass, attack=pkt.attack, reason="overflow")
        return DROPPED

    def _check_capacity(self, q: NodeQueue) -> None:
        if self.strict_checks:
            assert q.occupancy() <= q.capacity, "queue over capacity"

    def in_flight(self) -> int:
        return sum(q.occupancy() for q in self.queues.values()) + len(self._staged_injections)


def step(state: TransportState, hooks: StepHooks | None = None) -> None:
    """Advance the simulation by exactly one time step."""
    hooks = hooks or StepHooks()
    now = state.clock

    # phase 1: injection (staged; admitted after the dequeue sweep)
    hooks.inject(state)

    # phase 2: per-node dequeue, ascending node id, immune lane strictly first
    arrivals: list[tuple[int, int, Packet]] = []
    for node in state.network.nodes:
        q = state.queues[node]
        budgets = {nbr: state.network.link_bandwidth(node, nbr)
                   for nbr in state.network.neighbors(node)}
        immune_blocked = False
        last_seq = -1
        while q.immune:
            pkt = q.immune[0]
            nh = state.routing[(node, pkt.dst)]
            if budgets[nh] <= 0:
                immune_blocked = True
                break
            budgets[nh] -= 1
            q.immune.popleft()
            if state.strict_checks:
                seq = q.enqueue_seq(pkt)
                assert seq > last_seq, "immune lane FIFO violated"
                last_seq = seq
            _forward(state, hooks, pkt, node, nh)
            arrivals.append((node, nh, pkt))
        if immune_blocked or q.immune:
            continue  # strict priority: data waits while immune packets remain
        last_seq = -1
        while q.data:
            pkt = q.data[0]
            nh = state.routing[(node, pkt.dst)]
            if budgets[nh] <= 0:
                break
            budgets[nh] -= 1
            q.data.popleft()
            if state.strict_checks:
                assert not q.immune, "data forwarded while immune queued"
                seq = q.enqueue_seq(pkt)
                assert seq > last_seq, "data lane FIFO violated"
                last_seq = seq
            _forward(state, hooks, pkt, node, nh)
            arrivals.append((node, nh, pkt))

    # phase 3: arrivals are checked, then delivered or admitted
    for from_node, node, pkt in arrivals:
        destroyed = hooks.on_arrival(state, node, pkt, from_node)
        if destroyed:
            continue
        if node == pkt.dst:
            state.log.append(now, "Deliver", pid=pkt.pid, node=node,
                             klass=pkt.klass, attack=pkt.attack, hops=pkt.hop_count)
            hooks.on_deliver(state, pkt, node)
        else:
            state.enqueue(node, pkt)
    for node, pkt in state._staged_injections:
        state.enqueue(node, pkt)
    state._staged_injections.clear()

    # phases 4-8
    hooks.emit(state)
    hooks.cells(state)
    hooks.evaporate(state)
    hooks.stations(state)
    hooks.sample(state)

    state.log.append(now, "Step")
    state.clock += 1


def _forward(state: TransportState, hooks: StepHooks, pkt: Packet, node: int, nh: int) -> None:
    pkt.hop_count += 1
    state.log.append(state.clock, "Forward", pid=pkt.pid, src=node, dst=nh,
                     klass=pkt.klass, attack=pkt.attack)
    hooks.on_forward(state, pkt, node, nh)


@dataclass
class AuditReport:
    injected: Counter = field(default_factory=Counter)
    delivered: Counter = field(default_factory=Counter)
    dropped: Counter = field(default_factory=Counter)  # includes evictions
    evicted: Counter = field(default_factory=Counter)
    destroyed: Counter = field(default_factory=Counter)
    in_flight: Counter = field(default_factory=Counter)

    def total(self, counter_name: str) -> int:
        return sum(getattr(self, counter_name).values())


_TERMINAL = {"Deliver": "delivered", "Drop": "dropped", "Evict": "dropped", "Detect": "destroyed"}


def conservation_audit(events) -> AuditReport:
    """Check injected = delivered + dropped + destroyed + in-flight, per class.

    Raises ConservationViolation naming the first offending packet.
    """
    report = AuditReport()
    state: dict[int, tuple[str, str]] = {}  # pid -> (lifecycle, class)
    for ev in events:
        if not isinstance(ev, Event):
            raise TypeError("audit wants Event records")
        pid = ev.get("pid")
        if pid is None:
            continue
        if ev.kind == "Inject":
            if pid in state:
                raise ConservationViolation(pid, "injected twice")
            state[pid] = ("live", ev.get("klass"))
            report.injected[ev.get("klass")] += 1
        elif ev.kind in _TERMINAL:
            if pid not in state:
                raise ConservationViolation(pid, f"{ev.kind} without Inject")
            phase, klass = state[pid]
            if phase != "live":
                raise ConservationViolation(pid, f"{ev.kind} after terminal event")
            state[pid] = ("done", klass)
            getattr(report, _TERMINAL[ev.kind])[klass] += 1
            if ev.kind == "Evict":
                report.evicted[klass] += 1
        elif ev.kind == "Forward":
            if pid not in state or state[pid][0] != "live":
                raise ConservationViolation(pid, "Forward outside live lifecycle")
    for pid, (phase, klass) in state.items():
        if phase == "live":
            report.in_flight[klass] += 1
    for klass in report.injected:
        lhs = report.injected[klass]
        rhs = (report.delivered[klass] + report.dropped[klass]
               + report.destroyed[klass] + report.in_flight[klass])
        if lhs != rhs:
            raise ConservationViolation(-1, f"class {klass}: {lhs} injected vs {rhs} accounted")
    return report
