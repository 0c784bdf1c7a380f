"""Mobile artificial cells: detectors, ants, monitors, disinfectors.

Cells are data acted on by the step loop in ascending cell id. They move
by riding immune-class packets, one hop per step, so movement competes
for the same bandwidth as everything else.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from random import Random

from .receptors import Receptor
from .signatures import CompressedSignatureDb

DETECTOR = "Detector"
ANT = "Ant"
MONITOR = "Monitor"
DISINFECTOR = "Disinfector"


@dataclass
class ArtificialCell:
    cell_id: int
    kind: str
    location: int | None  # None while riding a transport packet
    receptor: Receptor
    rng: Random
    born_at: int
    alive: bool = True
    in_transit: bool = False
    pending_move: bool = False  # move packet queued but not yet forwarded


@dataclass
class DetectorCell(ArtificialCell):
    db: CompressedSignatureDb | None = None
    p_move: float = 0.5
    component: object = None  # its entry in the defense registry


@dataclass
class AntCell(ArtificialCell):
    memory: deque = field(default_factory=lambda: deque(maxlen=4))
    epsilon: float = 0.01


@dataclass
class MonitorCell(ArtificialCell):
    buffer: list = field(default_factory=list)
    flush_period: int = 25


@dataclass
class DisinfectorCell(ArtificialCell):
    target: int = -1


class CellPopulation:
    """Registry supporting spawn and retirement without invalidating an
    in-progress iteration pass (iterate over a sorted snapshot)."""

    def __init__(self):
        self._cells: dict[int, ArtificialCell] = {}
        self._next_id = 0

    def new_id(self) -> int:
        cid = self._next_id
        self._next_id += 1
        return cid

    def add(self, cell: ArtificialCell) -> None:
        if cell.cell_id in self._cells:
            raise ValueError(f"cell id {cell.cell_id} already present")
        self._cells[cell.cell_id] = cell

    def get(self, cell_id: int) -> ArtificialCell | None:
        return self._cells.get(cell_id)

    def retire(self, cell_id: int) -> None:
        cell = self._cells.pop(cell_id, None)
        if cell is not None:
            cell.alive = False

    def alive_sorted(self) -> list[ArtificialCell]:
        return [self._cells[cid] for cid in sorted(self._cells)]

    def of_kind(self, kind: str) -> list[ArtificialCell]:
        return [c for c in self.alive_sorted() if c.kind == kind]

    def count(self, kind: str) -> int:
        return sum(1 for c in self._cells.values() if c.kind == kind)

    def oldest(self, kind: str, count: int) -> list[ArtificialCell]:
        ranked = sorted(self.of_kind(kind), key=lambda c: (c.born_at, c.cell_id))
        return ranked[:count]

    def __len__(self) -> int:
        return len(self._cells)
