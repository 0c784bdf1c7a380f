"""Compressed signature store for detector cells.

An approximate-membership bit array over fixed-length signature byte
patterns: member signatures always test positive, non-members may rarely
false-positive. Payload scanning slides windows of each registered
signature length across the payload. Sized at twice the classic
1.44*n*log2(1/p) bit bound, which buys an empirical false-positive rate
well under the configured target even after windowed scanning.
"""

from __future__ import annotations

import hashlib
import math


class EmptySignatureSet(ValueError):
    pass


_SALT = b"sigdb-probe-v1"


def _probe_positions(key: bytes, count: int, size: int) -> list[int]:
    """`count` distinct probe positions in [0, size).

    Distinctness keeps the false-positive rate tight on the tiny arrays a
    near-singleton store gets; colliding probes would make the realised
    rate a per-signature lottery.
    """
    positions: list[int] = []
    seen: set[int] = set()
    block = 0
    while len(positions) < count:
        digest = hashlib.blake2b(key, digest_size=64, salt=_SALT,
                                 person=block.to_bytes(8, "big")).digest()
        for i in range(0, 64, 4):
            pos = int.from_bytes(digest[i:i + 4], "big") % size
            if pos not in seen:
                seen.add(pos)
                positions.append(pos)
                if len(positions) == count:
                    break
        block += 1
    return positions


class CompressedSignatureDb:
    """Approximate-membership structure over signature byte patterns."""

    def __init__(self, signatures, target_fpr: float):
        sigs = [bytes(s) for s in signatures]
        if not sigs:
            raise EmptySignatureSet("need at least one signature")
        if any(len(s) == 0 for s in sigs):
            raise EmptySignatureSet("signatures must be non-empty")
        if not 0.0 < target_fpr < 1.0:
            raise ValueError("target_fpr must be in (0, 1)")
        self.target_fpr = target_fpr
        self._members: set[bytes] = set()
        self._bits = 0
        self._capacity = 0
        self._rebuild(set(sigs))

    def _rebuild(self, members: set[bytes]) -> None:
        n = len(members)
        self._capacity = n
        self.size_bits = 2 * math.ceil(1.44 * n * math.log2(1.0 / self.target_fpr))
        self.num_probes = min(max(1, round(self.size_bits / n * math.log(2))),
                              self.size_bits)
        self._bits = 0
        self._members = set()
        for sig in sorted(members):
            self._insert(sig)
        self._fingerprint = None

    def _insert(self, sig: bytes) -> None:
        for pos in _probe_positions(sig, self.num_probes, self.size_bits):
            self._bits |= 1 << pos
        self._members.add(sig)

    def add(self, sig: bytes) -> None:
        """Insert one signature, resizing so the fpr target keeps holding."""
        sig = bytes(sig)
        if not sig:
            raise EmptySignatureSet("signatures must be non-empty")
        if sig in self._members:
            return
        if len(self._members) + 1 > self._capacity:
            self._rebuild(self._members | {sig})
        else:
            self._insert(sig)
            self._fingerprint = None

    @property
    def signature_count(self) -> int:
        return len(self._members)

    @property
    def window_lengths(self) -> tuple[int, ...]:
        return tuple(sorted({len(s) for s in self._members}))

    def contains(self, key: bytes) -> bool:
        bits = self._bits
        return all((bits >> pos) & 1
                   for pos in _probe_positions(key, self.num_probes, self.size_bits))

    def fingerprint(self) -> tuple:
        # identifies db contents so identical stores can share scan results
        if self._fingerprint is None:
            digest = hashlib.blake2b(
                self._bits.to_bytes((self.size_bits + 7) // 8, "big"),
                digest_size=8).digest()
            self._fingerprint = (self.size_bits, self.num_probes, digest)
        return self._fingerprint

    def scan(self, payload: bytes) -> bool:
        """True when any payload window of a registered length tests positive."""
        for length in self.window_lengths:
            if length > len(payload):
                continue
            for off in range(len(payload) - length + 1):
                if self.contains(payload[off:off + length]):
                    return True
        return False


def contains_signature(signatures, payload: bytes) -> bool:
    """Exact substring oracle over a full signature set."""
    return any(sig in payload for sig in signatures)
