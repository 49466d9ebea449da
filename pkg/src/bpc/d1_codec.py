"""Rate-1 balanced codec built from two half-range orderings.

The encoder splits {1, ..., n} into a low half and a high half, orders each
half by an input permutation, and emits whichever half pulls the running
average back toward (n+1)/2.  Its streaming twin starts from the interleaving
of the two orderings and fixes one position per step, reinserting a symbol by
adjacent transpositions whenever the slot disagrees with the mandated half.
Both emit identical codewords; the decoder is the half-membership projection.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import IndexOutOfRange, OddLength, ParamInvalid, SourceExhausted
from .perm_core import Permutation, rank, unrank

__all__ = [
    "D1Input",
    "SourceState",
    "TranspositionStep",
    "TranspositionTrace",
    "interleave",
    "encode_d1",
    "encode_d1_streaming",
    "decode_d1",
    "d1_message_input",
    "d1_message_encode",
    "d1_message_decode",
]

LOW = 1
HIGH = 2


@dataclass(frozen=True)
class D1Input:
    """Two orderings of the half ranges; total codeword length is even."""

    gamma1: Permutation
    gamma2: Permutation

    def __post_init__(self):
        if self.gamma1.n != self.gamma2.n:
            raise ParamInvalid("the two orderings must have equal length")

    @property
    def n(self) -> int:
        return 2 * self.gamma1.n


@dataclass
class SourceState:
    """Mutable working state of one encoding run (single use, single thread).

    ``o1`` holds the unemitted low symbols (values in [1, n/2]) and ``o2``
    the unemitted high symbols, each in emission order.  ``dev_twice`` is
    twice the running deviation from the mean prefix sum, kept doubled so the
    update per emitted symbol stays in exact integer arithmetic.
    """

    n: int
    o1: deque[int]
    o2: deque[int]
    emitted: int = 0
    dev_twice: int = 0

    @classmethod
    def from_input(cls, inp: D1Input) -> "SourceState":
        half = inp.gamma1.n
        return cls(
            n=2 * half,
            o1=deque(inp.gamma1.values),
            o2=deque(v + half for v in inp.gamma2.values),
        )

    @property
    def dev(self) -> Fraction:
        return Fraction(self.dev_twice, 2)

    def mandated_source(self) -> int:
        """LOW when the running sum is above the mean, HIGH otherwise (ties high)."""
        return LOW if self.dev_twice > 0 else HIGH

    def take(self, source: int) -> int:
        queue = self.o1 if source == LOW else self.o2
        if not queue:
            raise SourceExhausted(
                f"source {source} empty after {self.emitted} symbols"
                " (encoder invariant broken)",
                n=self.n, emitted=self.emitted, dev_twice=self.dev_twice,
                remaining_low=len(self.o1), remaining_high=len(self.o2),
            )
        v = queue.popleft()
        self.emitted += 1
        self.dev_twice += 2 * v - (self.n + 1)
        return v


def encode_d1(inp: D1Input) -> Permutation:
    """Greedy encoder: one pass, deviation maintained incrementally.

    The first symbol is unconditionally the head of the low ordering; every
    later step takes from the half mandated by the sign of the deviation.
    """
    state = SourceState.from_input(inp)
    out = [state.take(LOW)]
    for _ in range(1, state.n):
        out.append(state.take(state.mandated_source()))
    return Permutation(tuple(out))


@dataclass(frozen=True)
class TranspositionStep:
    """One reinsert performed by the streaming encoder.

    ``position`` is the 1-based slot the symbol was moved into; the move is
    realized by adjacent transpositions from the symbol's previous slot.
    """

    position: int
    moved_symbol: int


@dataclass(frozen=True)
class TranspositionTrace:
    """All reinserts of one streaming run, in emission order."""

    steps: tuple[TranspositionStep, ...] = ()


def interleave(inp: D1Input) -> Permutation:
    """The streaming encoder's start state: orderings merged alternately."""
    half = inp.gamma1.n
    merged = []
    for a, b in zip(inp.gamma1.values, inp.gamma2.values):
        merged.append(a)
        merged.append(b + half)
    return Permutation(tuple(merged))


def encode_d1_streaming(inp: D1Input) -> tuple[Permutation, TranspositionTrace]:
    """In-place encoder over the interleaving; equivalent to ``encode_d1``.

    State beyond the working sequence is two source queues and the doubled
    deviation.  Position 1 is fixed by construction; for each later slot, if
    the symbol sitting there is not the mandated source's next candidate,
    that candidate is deleted and reinserted at the slot (one trace entry).
    """
    n = inp.n
    half = n // 2
    work = list(interleave(inp).values)
    low = deque(inp.gamma1.values)
    high = deque(v + half for v in inp.gamma2.values)
    low.popleft()  # slot 1 already holds it
    dev2 = 2 * work[0] - (n + 1)
    steps = []
    for j in range(2, n + 1):
        source = low if dev2 > 0 else high
        if not source:
            raise SourceExhausted(
                f"mandated source empty at slot {j} (encoder invariant broken)",
                n=n, slot=j, dev_twice=dev2,
                remaining_low=len(low), remaining_high=len(high),
            )
        v = source.popleft()
        slot = j - 1
        # The candidate is the first of its half in the unfixed region, so
        # the scan never passes another same-half symbol.
        p = work.index(v, slot)
        if p != slot:
            del work[p]
            work.insert(slot, v)
            steps.append(TranspositionStep(position=j, moved_symbol=v))
        dev2 += 2 * v - (n + 1)
    return Permutation(tuple(work)), TranspositionTrace(tuple(steps))


def decode_d1(pi: Permutation) -> D1Input:
    """Project a permutation of even length onto its two half orderings.

    Total on all even-length permutations, codeword or not; on codewords it
    inverts both encoders.
    """
    n = pi.n
    if n % 2 != 0:
        raise OddLength(f"length {n} is odd")
    half = n // 2
    lows = tuple(v for v in pi.values if v <= half)
    highs = tuple(v - half for v in pi.values if v > half)
    return D1Input(Permutation(lows), Permutation(highs))


def d1_message_input(i1: int, i2: int, n: int) -> D1Input:
    """The ordering pair whose codeword carries ranks (i1, i2), each below (n/2)!."""
    if n < 2 or n % 2 != 0:
        raise OddLength(f"length {n} is not a positive even integer")
    half = n // 2
    bound = factorial(half)
    for name, i in (("i1", i1), ("i2", i2)):
        if not 0 <= i < bound:
            raise IndexOutOfRange(f"{name}={i} outside [0, {half}!)")
    return D1Input(unrank(i1, half), unrank(i2, half))


def d1_message_encode(i1: int, i2: int, n: int) -> Permutation:
    """Encode a pair of lexicographic ranks, each below (n/2)!."""
    return encode_d1(d1_message_input(i1, i2, n))


def d1_message_decode(pi: Permutation) -> tuple[int, int]:
    """Recover the rank pair; exact inverse of ``d1_message_encode``."""
    inp = decode_d1(pi)
    return rank(inp.gamma1), rank(inp.gamma2)
