"""Run orchestration: builds a world from a scenario config and steps it.

Everything random is drawn from named child streams of the run seed
(topology, vulnerability, placement, background, per-cell walks, and
per-(node, step) worm emissions), so a run is a pure function of
(config, seed) and paired runs stay comparable when one subsystem is
toggled.
"""

from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import dataclass
from random import Random

from . import adversary, defense, receptors, stations, transport
from .adversary import AttackDef, InjectionGate, NodeHealth, TrafficModel
from .cells import (ANT, DETECTOR, DISINFECTOR, MONITOR, AntCell, ArtificialCell,
                    CellPopulation, DetectorCell, DisinfectorCell, MonitorCell)
from .events import EventLog
from .metrics import Metrics, compute_metrics
from .pheromone import PheromoneMap, choose_move
from .scenario import ScenarioConfig, TopologySpec
from .signatures import CompressedSignatureDb
from .stations import (ADMIN, LYMPH, NURSERY, AdminStation, LymphStation,
                       NurseryStation, Station, nearest_station, next_station)
from .topology import (Network, UnknownNode, bfs_distances, build_network,
                       compute_routing, diameter, erdos_renyi, line_network,
                       ring_network, star_network, top_betweenness)
from .transport import IMMUNE, StepHooks, TransportState


class SeedTree:
    """Named deterministic child streams of one master seed."""

    def __init__(self, master: int):
        self.master = int(master)

    def derive_seed(self, *labels) -> int:
        text = f"{self.master}|" + "|".join(str(x) for x in labels)
        return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")

    def stream(self, *labels) -> Random:
        return Random(self.derive_seed(*labels))


def build_topology(spec: TopologySpec, rng: Random, bandwidth: int) -> Network:
    if spec.kind == "erdos_renyi":
        return erdos_renyi(spec.nodes, spec.edge_prob, rng, bandwidth)
    if spec.kind == "line":
        return line_network(spec.nodes, bandwidth)
    if spec.kind == "ring":
        return ring_network(spec.nodes, bandwidth)
    if spec.kind == "star":
        return star_network(spec.nodes, bandwidth)
    if spec.kind == "explicit":
        links = [tuple(link) if len(link) == 3 else (link[0], link[1], bandwidth)
                 for link in spec.links]
        node_ids = sorted({n for link in links for n in link[:2]})
        if isinstance(spec.nodes, int) and spec.nodes > len(node_ids):
            node_ids = sorted(set(node_ids) | set(range(spec.nodes)))
        return build_network(node_ids, links)
    raise ValueError(f"unknown topology kind {spec.kind!r}")


@dataclass
class RunResult:
    config: ScenarioConfig
    seed: int
    log: EventLog
    metrics: Metrics
    audit: transport.AuditReport


class World:
    """All mutable state for one simulation run."""

    def __init__(self, config: ScenarioConfig, seed: int,
                 drop_stations: tuple[int, ...] = (), strict_checks: bool = False):
        self.config = config
        self.seed = seed
        self.seeds = SeedTree(seed)
        cfg_tr = config.transport

        self.network = build_topology(config.topology, self.seeds.stream("topology"),
                                      cfg_tr.link_bandwidth)
        self.routing = compute_routing(self.network)
        self.dist = {}
        for node in self.network.nodes:
            for other, d in bfs_distances(self.network, node).items():
                self.dist[(node, other)] = d
        self.state = TransportState(self.network, self.routing, cfg_tr.queue_capacity)
        self.state.strict_checks = strict_checks
        self.log = self.state.log

        self.attacks: dict[int, AttackDef] = {}
        for a in config.attacks:
            self.attacks[a.attack_id] = AttackDef(a.attack_id, a.signature_bytes(),
                                                  a.infects, a.fanout)
        self.signature_set = [a.signature for a in self.attacks.values()]

        vuln_rng = self.seeds.stream("vulnerability")
        prob = config.vulnerability.probability
        self.health = {n: NodeHealth(vulnerable=vuln_rng.random() < prob)
                       for n in self.network.nodes}

        self.worm_entry: tuple[int, int, int] | None = None  # (step, attack_id, node)
        if config.worm.enabled and config.worm.attack_id in self.attacks:
            if config.worm.entry == "random":
                entry = self.network.nodes[
                    self.seeds.stream("worm-entry").randrange(len(self.network.nodes))]
                self.health[entry].vulnerable = True  # the hole the worm gets in through
            else:
                entry = int(config.worm.entry)
                if not self.network.has_node(entry):
                    raise UnknownNode(entry)
            self.worm_entry = (config.worm.entry_step, config.worm.attack_id, entry)

        self.traffic = TrafficModel(
            background_rate=config.traffic.background_rate,
            distribution=config.traffic.distribution,
            payload_len=config.traffic.payload_len,
            attack_mix=[(self.attacks[e["attack_id"]], e["rate"])
                        for e in config.traffic.attack_mix],
        )
        self.background_rng = self.seeds.stream("background")
        self.gate = InjectionGate(self.network)

        self.defense = defense.DefenseStack(self.network)
        self.pheromone = PheromoneMap(config.pheromone.evaporation,
                                      config.pheromone.deposit,
                                      config.pheromone.threshold)
        self.quorum = config.pheromone.quorum

        self.receptor_rng = self.seeds.stream("receptors")
        self.population = CellPopulation()
        self._component_seq = 0
        self._substance_seq = 0
        self._last_identify: dict[int, int] = {}
        self._cell_rng_cache: dict[int, Random] = {}

        self._setup_filters()
        self._setup_static_ids()
        self._setup_stations(drop_stations)
        self._setup_cells()

    # ------------------------------------------------------------- setup

    def _next_component_id(self) -> int:
        cid = self._component_seq
        self._component_seq += 1
        return cid

    def _setup_filters(self) -> None:
        by_node: dict[int, list[defense.FilterRule]] = {}
        for rule in self.config.filters:
            fr = defense.FilterRule(
                action=rule.action,
                src=frozenset(rule.src) if rule.src is not None else None,
                dst=frozenset(rule.dst) if rule.dst is not None else None,
                klass=rule.klass,
            )
            by_node.setdefault(rule.node, []).append(fr)
        for node in sorted(by_node):
            self.defense.register(node, defense.PacketFilter(self._next_component_id(),
                                                             by_node[node]))

    def _setup_static_ids(self) -> None:
        cfg = self.config.static_ids
        if cfg.count <= 0:
            return
        if isinstance(cfg.placement, str):
            nodes = top_betweenness(self.network, cfg.count)
        else:
            nodes = list(cfg.placement)[:cfg.count]
        for node in nodes:
            self.defense.register(node, defense.StaticIDS(self._next_component_id(),
                                                          self.signature_set))

    def _setup_stations(self, drop_stations) -> None:
        cfg = self.config.stations
        want = cfg.lymph + cfg.nurseries + 1  # + admin
        if isinstance(cfg.placement, str):
            rng = self.seeds.stream("placement", "stations")
            pool = list(self.network.nodes)
            nodes = rng.sample(pool, want) if want <= len(pool) else \
                [pool[rng.randrange(len(pool))] for _ in range(want)]
        else:
            nodes = list(cfg.placement)
        if cfg.admin_node is not None:
            nodes[-1] = cfg.admin_node

        self.lymph_receptor = receptors.gen_receptor(self.receptor_rng)
        self.nursery_receptor = receptors.gen_receptor(self.receptor_rng)
        self.admin_receptor = receptors.gen_receptor(self.receptor_rng)

        all_stations: list[Station] = []
        sid = 0
        trained = list(self.signature_set) if self.config.detectors.initial_signatures == "all" else []
        for i in range(cfg.lymph):
            all_stations.append(LymphStation(sid, LYMPH, nodes[i], self.lymph_receptor,
                                             signature_feed=list(self.signature_set)))
            sid += 1
        for i in range(cfg.nurseries):
            all_stations.append(NurseryStation(sid, NURSERY, nodes[cfg.lymph + i],
                                               self.nursery_receptor,
                                               period=cfg.release_period,
                                               mix=dict(cfg.release_mix),
                                               trained_signatures=list(trained)))
            sid += 1
        all_stations.append(AdminStation(sid, ADMIN, nodes[-1], self.admin_receptor))
        self.stations = [st for st in all_stations if st.station_id not in set(drop_stations)]

        self.substance_ttl = cfg.substance_ttl
        if self.substance_ttl is None:
            self.substance_ttl = 4 * diameter(self.network)

        self.caps = {
            DETECTOR: cfg.caps.get("Detector", self.config.detectors.count),
            ANT: cfg.caps.get("Ant", self.config.ants.count),
            MONITOR: cfg.caps.get("Monitor", self.config.monitors.count),
        }

    def _place_cells(self, count: int, placement, label: str) -> list[int]:
        if isinstance(placement, list):
            return list(placement)[:count]
        rng = self.seeds.stream("placement", label)
        pool = self.network.nodes
        return [pool[rng.randrange(len(pool))] for _ in range(count)]

    def _cell_rng(self, cell_id: int) -> Random:
        rng = self._cell_rng_cache.get(cell_id)
        if rng is None:
            rng = self.seeds.stream("cell", cell_id)
            self._cell_rng_cache[cell_id] = rng
        return rng

    def _setup_cells(self) -> None:
        cfg = self.config
        for node in self._place_cells(cfg.detectors.count, cfg.detectors.placement, "detectors"):
            self._spawn_detector(node, self.signature_set
                                 if cfg.detectors.initial_signatures == "all" else [],
                                 by="init")
        for node in self._place_cells(cfg.ants.count, "random", "ants"):
            self._spawn_cell(AntCell, ANT, node, by="init",
                             memory=_memory(cfg.ants.memory), epsilon=cfg.ants.epsilon)
        for node in self._place_cells(cfg.monitors.count, "random", "monitors"):
            self._spawn_cell(MonitorCell, MONITOR, node, by="init",
                             flush_period=cfg.monitors.flush_period)

    def _spawn_cell(self, cls, kind: str, node: int, by, replaces: int | None = None,
                    **extra) -> ArtificialCell:
        cid = self.population.new_id()
        cell = cls(cell_id=cid, kind=kind, location=node,
                   receptor=receptors.gen_receptor(self.receptor_rng),
                   rng=self._cell_rng(cid), born_at=self.state.clock, **extra)
        self.population.add(cell)
        self.log.append(self.state.clock, "Spawn", cell=cid, cellkind=kind, node=node,
                        by=by, replaces=replaces)
        return cell

    def _spawn_detector(self, node: int, signatures, by, replaces: int | None = None) -> DetectorCell:
        db = CompressedSignatureDb(signatures, self.config.detectors.target_fpr) \
            if signatures else None
        cell = self._spawn_cell(DetectorCell, DETECTOR, node, by, replaces,
                                db=db, p_move=self.config.detectors.p_move)
        component = defense.DetectorComponent(10_000 + cell.cell_id, cell)
        cell.component = component
        self.defense.register(node, component)
        return cell

    def _spawn_disinfector(self, node: int, target: int, by) -> DisinfectorCell:
        return self._spawn_cell(DisinfectorCell, DISINFECTOR, node, by, target=target)

    # ------------------------------------------------------------- phases

    def inject(self, state: TransportState) -> None:
        self.gate.begin_step(state)
        if self.worm_entry and state.clock == self.worm_entry[0]:
            _step, attack_id, entry = self.worm_entry
            adversary.spawn_worm(state, self.health, self.attacks[attack_id], entry)
        packets = adversary.inject_background(state, self.traffic, self.background_rng,
                                              forbidden=self.signature_set)
        for pkt in packets:
            self.gate.offer(state, pkt.src, [pkt])

    def on_forward(self, state: TransportState, pkt, u: int, v: int) -> None:
        cargo = pkt.cargo
        if isinstance(cargo, ArtificialCell):
            cargo.in_transit = True
            cargo.location = None
            if cargo.kind == DETECTOR and cargo.alive:
                self.defense.deregister(u, cargo.component.component_id)

    def on_arrival(self, state: TransportState, node: int, pkt, from_node: int) -> bool:
        outcome = self.defense.check_all(node, pkt)
        if not outcome.destroyed:
            return False
        state.log.append(state.clock, "Detect", pid=pkt.pid, node=node,
                         src=from_node, psrc=pkt.src, klass=pkt.klass,
                         attack=pkt.attack, by=outcome.by, bykind=outcome.by_kind,
                         cell=outcome.by_cell)
        if outcome.by_kind in ("StaticIDS", "Cell"):
            # signature-layer detection feeds the ant colony
            self.pheromone.deposit((from_node, node), pkt.attack)
        cargo = pkt.cargo
        if isinstance(cargo, ArtificialCell):
            self.population.retire(cargo.cell_id)
        return True

    def on_deliver(self, state: TransportState, pkt, node: int) -> None:
        cargo = pkt.cargo
        if isinstance(cargo, ArtificialCell):
            if cargo.alive:
                self._arrive_cell(cargo, node)
            return
        if isinstance(cargo, receptors.Substance):
            st = self._station_at(node)
            if st is not None:
                st.inbox.append(cargo)
            else:
                state.log.append(state.clock, "Drop", sid=cargo.sid, node=node,
                                 reason="no-station")
            return
        if pkt.attack is not None:
            adversary.on_attack_delivery(state, self.health, node, pkt, self.attacks)

    def _arrive_cell(self, cell: ArtificialCell, node: int) -> None:
        cell.location = node
        cell.in_transit = False
        cell.pending_move = False
        if cell.kind == ANT:
            cell.memory.append(node)
        if cell.kind == DETECTOR:
            self.defense.register(node, cell.component)
        self.log.append(self.state.clock, "CellMove", cell=cell.cell_id,
                        cellkind=cell.kind, node=node)

    def emit(self, state: TransportState) -> None:
        for node in self.network.nodes:
            h = self.health[node]
            if not h.infected:
                continue
            attack = self.attacks.get(h.infected_by)
            if attack is None or attack.fanout <= 0:
                continue
            rng = self.seeds.stream("worm", node, state.clock)
            packets = adversary.worm_emit(state, self.health, node, attack, rng,
                                          self.traffic.payload_len)
            self.gate.offer(state, node, packets)

    def cells(self, state: TransportState) -> None:
        for cell in self.population.alive_sorted():
            if not cell.alive or cell.in_transit or getattr(cell, "pending_move", False):
                continue
            if cell.location is None:
                continue
            if cell.kind == DETECTOR:
                if cell.rng.random() < cell.p_move:
                    self._move_cell(cell, self._random_neighbor(cell))
            elif cell.kind == ANT:
                nxt = choose_move(self.pheromone, cell.location,
                                  self.network.neighbors(cell.location),
                                  cell.memory, cell.epsilon, cell.rng)
                self._move_cell(cell, nxt)
            elif cell.kind == MONITOR:
                self._monitor_collect(cell)
                self._move_cell(cell, self._random_neighbor(cell))
            elif cell.kind == DISINFECTOR:
                if cell.location == cell.target:
                    self._disinfect(cell)
                else:
                    self._move_cell(cell, self.routing[(cell.location, cell.target)])
        self._declaration_pass(state)

    def _random_neighbor(self, cell: ArtificialCell) -> int:
        nbrs = self.network.neighbors(cell.location)
        return nbrs[cell.rng.randrange(len(nbrs))]

    def _move_cell(self, cell: ArtificialCell, to: int) -> None:
        pkt = self.state.make_packet(cell.location, to, IMMUNE, cargo=cell)
        self.state.log.append(self.state.clock, "Inject", pid=pkt.pid, node=cell.location,
                              src=pkt.src, dst=pkt.dst, klass=pkt.klass, attack=None)
        if self.state.enqueue(cell.location, pkt) == transport.ACCEPTED:
            cell.pending_move = True
        # on Drop the cell simply stays put and retries next step

    def _monitor_collect(self, cell: MonitorCell) -> None:
        node = cell.location
        cell.buffer.append({
            "step": self.state.clock,
            "node": node,
            "occupancy": self.state.queues[node].occupancy(),
            "pheromone": round(self.pheromone.node_mass(node), 9),
        })
        if (self.state.clock - cell.born_at + 1) % cell.flush_period == 0 and cell.buffer:
            payload = json.dumps({"kind": "monitor", "cell": cell.cell_id,
                                  "rows": cell.buffer}, sort_keys=True).encode()
            cell.buffer = []
            self._send_substance(node, payload, {self.admin_receptor.public}, what="monitor")

    def _disinfect(self, cell: DisinfectorCell) -> None:
        h = self.health[cell.target]
        if h.infected:
            attack = h.infected_by
            h.infected_by = None
            h.infected_at = None
            self.gate.clear_deferred(cell.target)
            self.log.append(self.state.clock, "Disinfect", node=cell.target, ok=1,
                            attack=attack, cell=cell.cell_id)
        else:
            self.log.append(self.state.clock, "Disinfect", node=cell.target, ok=0,
                            attack=None, cell=cell.cell_id)
        self.population.retire(cell.cell_id)

    def _declaration_pass(self, state: TransportState) -> None:
        ants_present: Counter = Counter()
        for cell in self.population.of_kind(ANT):
            if cell.location is not None and not cell.in_transit:
                ants_present[cell.location] += 1
        declared = self.pheromone.declare(ants_present, self.quorum)
        # rate-limit per node so persistent evidence re-reports once per window
        redeclare = self.config.stations.dedup_window
        for node in declared:
            last = self._last_identify.get(node)
            if last is not None and state.clock - last < redeclare:
                continue
            attack = self.pheromone.dominant_attack(node)
            state.log.append(state.clock, "Identify", node=node, attack=attack)
            self._last_identify[node] = state.clock
            payload = json.dumps({"kind": "report", "node": node, "attack": attack},
                                 sort_keys=True).encode()
            self._send_substance(node, payload, {self.lymph_receptor.public}, what="report")

    def evaporate(self, state: TransportState) -> None:
        self.pheromone.evaporate()

    def station_actions(self, state: TransportState) -> None:
        for st in sorted(self.stations, key=lambda s: s.station_id):
            inbox, st.inbox = st.inbox, []
            for sub in inbox:
                self._station_handle(st, sub)
            if st.kind == NURSERY and (state.clock + 1) % st.period == 0:
                self._nursery_release(st)

    def _station_handle(self, st: Station, sub: receptors.Substance) -> None:
        payload = receptors.try_open(sub, {st.receptor.private})
        if payload is None:
            self._lymph_forward(st, sub)
            return
        self.log.append(self.state.clock, "SubstanceOpen", sid=sub.sid,
                        station=st.station_id, node=st.node)
        message = json.loads(payload.decode())
        if message.get("kind") == "report" and st.kind == LYMPH:
            self._lymph_on_report(st, message)
        elif message.get("kind") == "monitor" and st.kind == ADMIN:
            st.received.append(payload)

    def _lymph_forward(self, st: Station, sub: receptors.Substance) -> None:
        sub.visited.add(st.station_id)
        if sub.hop_ttl <= 0:
            self.log.append(self.state.clock, "Drop", sid=sub.sid, node=st.node,
                            reason="ttl")
            return
        target = next_station(self.stations, st, sub, self.dist)
        if target is None:
            self.log.append(self.state.clock, "Drop", sid=sub.sid, node=st.node,
                            reason="no-opener")
            return
        sub.hop_ttl -= 1
        self._transmit_substance(st.node, target.node, sub)

    def _lymph_on_report(self, st: LymphStation, message: dict) -> None:
        node = message["node"]
        attack = message.get("attack")
        key = (node, attack)
        last = st.last_spawn.get(key)
        if last is not None and self.state.clock - last < self.config.stations.dedup_window:
            return
        st.last_spawn[key] = self.state.clock
        self._spawn_disinfector(st.node, node, by=st.station_id)
        self._immunize(st, node, attack)

    def _immunize(self, st: LymphStation, around: int, attack: int | None) -> None:
        """Local immunization: push the attack signature to every detector
        within the configured radius of the reported node, and refresh the
        nurseries' trained sets. Pushes are sealed/opened same-step."""
        if attack is None or attack not in self.attacks:
            return
        sig = self.attacks[attack].signature
        if sig not in st.signature_feed:
            st.signature_feed.append(sig)
        radius = self.config.stations.immunization_radius
        for cell in self.population.of_kind(DETECTOR):
            if cell.location is None or self.dist.get((cell.location, around), 99) > radius:
                continue
            sub = self._make_substance(st.node, sig, {cell.receptor.public})
            self.log.append(self.state.clock, "SubstanceSend", sid=sub.sid,
                            src=st.node, dst=cell.location, what="immunize",
                            cell=cell.cell_id)
            opened = receptors.try_open(sub, {cell.receptor.private})
            if opened is not None:
                self.log.append(self.state.clock, "SubstanceOpen", sid=sub.sid,
                                station=None, node=cell.location, cell=cell.cell_id)
                if cell.db is None:
                    cell.db = CompressedSignatureDb([opened], self.config.detectors.target_fpr)
                else:
                    cell.db.add(opened)
        for other in self.stations:
            if isinstance(other, NurseryStation) and sig not in other.trained_signatures:
                sub = self._make_substance(st.node, sig, {other.receptor.public})
                self.log.append(self.state.clock, "SubstanceSend", sid=sub.sid,
                                src=st.node, dst=other.node, what="immunize",
                                station=other.station_id)
                if receptors.try_open(sub, {other.receptor.private}) is not None:
                    self.log.append(self.state.clock, "SubstanceOpen", sid=sub.sid,
                                    station=other.station_id, node=other.node)
                    other.trained_signatures.append(sig)

    def _nursery_release(self, st: NurseryStation) -> None:
        kind_names = {"Detector": DETECTOR, "Ant": ANT, "Monitor": MONITOR}
        for kind_key in sorted(st.mix):
            kind = kind_names[kind_key]
            cap = self.caps.get(kind, 0)
            for _ in range(st.mix[kind_key]):
                replaces = None
                if cap and self.population.count(kind) >= cap:
                    victim = self.population.oldest(kind, 1)[0]
                    self._retire_cell(victim)
                    replaces = victim.cell_id
                if kind == DETECTOR:
                    self._spawn_detector(st.node, list(st.trained_signatures),
                                         by=st.station_id, replaces=replaces)
                elif kind == ANT:
                    self._spawn_cell(AntCell, ANT, st.node, by=st.station_id,
                                     replaces=replaces,
                                     memory=_memory(self.config.ants.memory),
                                     epsilon=self.config.ants.epsilon)
                else:
                    self._spawn_cell(MonitorCell, MONITOR, st.node, by=st.station_id,
                                     replaces=replaces,
                                     flush_period=self.config.monitors.flush_period)

    def _retire_cell(self, cell: ArtificialCell) -> None:
        if cell.kind == DETECTOR and cell.location is not None and not cell.in_transit:
            self.defense.deregister(cell.location, cell.component.component_id)
        self.population.retire(cell.cell_id)

    # --------------------------------------------------------- substances

    def _make_substance(self, origin: int, payload: bytes, required) -> receptors.Substance:
        sub = receptors.seal(payload, required, self.substance_ttl, origin)
        sub.sid = self._substance_seq
        self._substance_seq += 1
        return sub

    def _send_substance(self, origin: int, payload: bytes, required,
                        what: str) -> None:
        """Seal and hand off to the nearest station, travelling as an
        immune-class packet when the station is elsewhere."""
        if not self.stations:
            return
        sub = self._make_substance(origin, payload, required)
        target = nearest_station(self.stations, origin, self.dist)
        self.log.append(self.state.clock, "SubstanceSend", sid=sub.sid, src=origin,
                        dst=target.node, what=what, station=target.station_id)
        if target.node == origin:
            target.inbox.append(sub)
            return
        self._enqueue_substance(origin, target.node, sub)

    def _transmit_substance(self, src: int, dst: int, sub: receptors.Substance) -> None:
        self.log.append(self.state.clock, "SubstanceSend", sid=sub.sid, src=src,
                        dst=dst, what="relay", station=self._station_at(dst).station_id)
        if src == dst:
            self._station_at(dst).inbox.append(sub)
            return
        self._enqueue_substance(src, dst, sub)

    def _enqueue_substance(self, src: int, dst: int, sub: receptors.Substance) -> None:
        pkt = self.state.make_packet(src, dst, IMMUNE, payload=sub.ciphertext, cargo=sub)
        self.state.log.append(self.state.clock, "Inject", pid=pkt.pid, node=src,
                              src=src, dst=dst, klass=IMMUNE, attack=None)
        self.state.enqueue(src, pkt)

    def _station_at(self, node: int) -> Station | None:
        for st in self.stations:
            if st.node == node:
                return st
        return None

    # -------------------------------------------------------------- run

    def hooks(self) -> StepHooks:
        return StepHooks(
            inject=self.inject,
            on_forward=self.on_forward,
            on_arrival=self.on_arrival,
            on_deliver=self.on_deliver,
            emit=self.emit,
            cells=self.cells,
            evaporate=self.evaporate,
            stations=self.station_actions,
        )

    def step(self) -> None:
        transport.step(self.state, self.hooks())

    def run(self, horizon: int | None = None) -> RunResult:
        steps = self.config.horizon if horizon is None else horizon
        hooks = self.hooks()
        for _ in range(steps):
            transport.step(self.state, hooks)
        audit = transport.conservation_audit(self.log.events)
        metrics = compute_metrics(self.log.events)
        return RunResult(self.config, self.seed, self.log, metrics, audit)


def _memory(maxlen: int):
    from collections import deque
    return deque(maxlen=max(1, maxlen))


def run(config: ScenarioConfig, seed: int, horizon: int | None = None,
        drop_stations: tuple[int, ...] = (), strict_checks: bool = False) -> RunResult:
    """Execute one full simulation; pure function of its arguments."""
    world = World(config, seed, drop_stations=drop_stations, strict_checks=strict_checks)
    return world.run(horizon)
