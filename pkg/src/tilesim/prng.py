"""PCG32 pseudo-random generator with explicit, copyable state.

This is the XSH-RR 64/32 member of O'Neill's PCG family, reimplemented
so that the exact stream is pinned down by this file rather than by
whatever the host language ships. Replays and undo both depend on being
able to capture and restore the generator mid-run, and the engine
serializes `state` into every history entry.

Seeding follows the reference implementation: with the stream selector
`seq`, the increment is (seq << 1) | 1 and the initial state is derived
by stepping once, adding the seed, and stepping again. The default
stream (seq=54) reproduces the published demo output for seed 42.
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_MULT = 6364136223846793005


class Pcg32:
    __slots__ = ("state", "inc")

    def __init__(self, seed: int, seq: int = 54) -> None:
        self.inc = (((seq << 1) | 1) & _MASK64)
        self.state = 0
        self._advance()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self._advance()

    def _advance(self) -> None:
        self.state = (self.state * _MULT + self.inc) & _MASK64

    def next_u32(self) -> int:
        old = self.state
        self._advance()
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << (32 - rot & 31))) & 0xFFFFFFFF

    def randrange(self, n: int) -> int:
        """Uniform integer in [0, n), rejection-sampled so there is no bias."""
        if n <= 0:
            raise ValueError("randrange needs a positive bound")
        threshold = (1 << 32) % n
        while True:
            r = self.next_u32()
            if r >= threshold:
                return r % n

    def weighted_index(self, weights: list[int]) -> int:
        """Index chosen with probability weight[i] / sum(weights); exact integers."""
        total = 0
        for w in weights:
            if w <= 0:
                raise ValueError("weights must be positive")
            total += w
        r = self.randrange(total)
        acc = 0
        for i, w in enumerate(weights):
            acc += w
            if r < acc:
                return i
        raise AssertionError("unreachable")

    def getstate(self) -> tuple[int, int]:
        return (self.state, self.inc)

    def setstate(self, st: tuple[int, int]) -> None:
        self.state, self.inc = st
