"""Fixed stations: lymph nodes, cell nurseries, and the administrator sink.

Stations route substances among themselves: a station that cannot open a
substance forwards it to the nearest station not yet tried, so anything
openable somewhere reaches an opener within station-count legs. Lymph
nodes react to infection reports by spawning disinfectors and pushing
signatures to nearby detectors; nurseries periodically release fresh
cells carrying the current signature feed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .receptors import Receptor, Substance

LYMPH = "Lymph"
NURSERY = "Nursery"
ADMIN = "Admin"


@dataclass
class Station:
    station_id: int
    kind: str
    node: int
    receptor: Receptor
    inbox: list[Substance] = field(default_factory=list)


@dataclass
class LymphStation(Station):
    signature_feed: list[bytes] = field(default_factory=list)
    # (node, attack) -> last disinfector spawn step, for deduplication
    last_spawn: dict[tuple[int, int | None], int] = field(default_factory=dict)


@dataclass
class NurseryStation(Station):
    period: int = 100
    mix: dict[str, int] = field(default_factory=dict)
    trained_signatures: list[bytes] = field(default_factory=list)


@dataclass
class AdminStation(Station):
    received: list[bytes] = field(default_factory=list)


def next_station(stations: list[Station], current: Station, sub: Substance,
                 dist: dict[tuple[int, int], int]) -> Station | None:
    """Nearest station the substance has not tried yet; ties go to the
    smaller station id. None when every station has been visited."""
    best = None
    best_key = None
    for st in stations:
        if st.station_id == current.station_id or st.station_id in sub.visited:
            continue
        hop = 0 if st.node == current.node else dist[(current.node, st.node)]
        key = (hop, st.station_id)
        if best_key is None or key < best_key:
            best = st
            best_key = key
    return best


def nearest_station(stations: list[Station], node: int,
                    dist: dict[tuple[int, int], int],
                    kinds: tuple[str, ...] | None = None) -> Station | None:
    best = None
    best_key = None
    for st in stations:
        if kinds is not None and st.kind not in kinds:
            continue
        hop = 0 if st.node == node else dist[(node, st.node)]
        key = (hop, st.station_id)
        if best_key is None or key < best_key:
            best = st
            best_key = key
    return best
