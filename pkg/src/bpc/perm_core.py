"""Permutation values, windowed-sum balance verifiers, discrepancy, and
lexicographic rank/unrank.

Symbols are 1-based throughout: a permutation of length ``n`` holds each of
``{1, ..., n}`` exactly once, and window/position arguments follow the same
convention.  All deviation arithmetic is exact (`fractions.Fraction` with
denominator at most 2); the verifiers never touch floating point, so their
verdicts are bit-identical across platforms.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Mapping

from .errors import (
    IndexOutOfRange,
    NotPermutation,
    ParamInvalid,
    SpecMismatch,
)

__all__ = [
    "Permutation",
    "make_permutation",
    "identity",
    "parse_permutation",
    "format_permutation",
    "window_sum",
    "prefix_deviation",
    "prefix_deviations_doubled",
    "disc",
    "BalanceSpec",
    "d1_preset",
    "d2_preset",
    "NeighborSpec",
    "BalanceViolation",
    "NeighborViolation",
    "ViolationReport",
    "verify_balance",
    "check_two_neighbor",
    "rank",
    "unrank",
]


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1, ..., n} in one-line notation.

    >>> Permutation((2, 1, 3)).n
    3
    """

    values: tuple[int, ...]

    def __post_init__(self):
        values = self.values
        n = len(values)
        if n == 0:
            raise NotPermutation("a permutation must have length >= 1")
        seen = [False] * n
        for v in values:
            if not isinstance(v, int) or isinstance(v, bool):
                raise NotPermutation(f"symbol {v!r} is not an integer")
            if not 1 <= v <= n:
                raise NotPermutation(f"symbol {v} outside [1, {n}]")
            if seen[v - 1]:
                raise NotPermutation(f"symbol {v} appears more than once")
            seen[v - 1] = True

    @property
    def n(self) -> int:
        return len(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __str__(self) -> str:
        return format_permutation(self)


def make_permutation(values: Iterable[int]) -> Permutation:
    """Validate ``values`` as a bijection of {1, ..., len(values)}."""
    return Permutation(tuple(values))


def identity(n: int) -> Permutation:
    """The identity permutation (1, 2, ..., n)."""
    if n < 1:
        raise ParamInvalid("length must be >= 1")
    return Permutation(tuple(range(1, n + 1)))


def parse_permutation(text: str) -> Permutation:
    """Parse the text format: 1-based integers separated by spaces or commas.

    >>> parse_permutation("3,1,2").values
    (3, 1, 2)

    Raises ``NotPermutation`` on malformed tokens or non-bijections.
    """
    tokens = text.replace(",", " ").split()
    if not tokens:
        raise NotPermutation("empty permutation text")
    try:
        values = tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise NotPermutation(f"bad symbol in {text!r}") from exc
    return Permutation(values)


def format_permutation(pi: Permutation) -> str:
    """Render to the canonical text format (space-separated, no padding)."""
    return " ".join(str(v) for v in pi.values)


def _prefix_sums(values: tuple[int, ...]) -> list[int]:
    sums = [0]
    acc = 0
    for v in values:
        acc += v
        sums.append(acc)
    return sums


def window_sum(pi: Permutation, j: int, b: int) -> int:
    """Sum of the length-``b`` window starting at position ``j`` (1-based)."""
    n = pi.n
    if not 1 <= b <= n:
        raise IndexOutOfRange(f"block length {b} outside [1, {n}]")
    if not 1 <= j <= n - b + 1:
        raise IndexOutOfRange(f"window start {j} outside [1, {n - b + 1}]")
    return sum(pi.values[j - 1:j + b - 1])


def prefix_deviation(pi: Permutation, j: int) -> Fraction:
    """Running sum of the first ``j`` symbols minus ``j*(n+1)/2``, exact."""
    n = pi.n
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"prefix length {j} outside [1, {n}]")
    return Fraction(2 * sum(pi.values[:j]) - j * (n + 1), 2)


def prefix_deviations_doubled(pi: Permutation) -> list[int]:
    """All doubled prefix deviations ``2*sum(pi[:j]) - j*(n+1)`` for j=0..n.

    Doubling keeps the sequence integral for every ``n``; position 0 is
    always 0.  Batch checkers use this to get O(1) window deviations.
    """
    n = pi.n
    out = [0]
    acc = 0
    for j, v in enumerate(pi.values, 1):
        acc += v
        out.append(2 * acc - j * (n + 1))
    return out


def disc(pi: Permutation, b: int) -> Fraction:
    """Maximum absolute deviation of any ``b``-window sum from ``b*(n+1)/2``.

    Every window start ``j`` in ``[1, n-b+1]`` is considered.  The result is
    an integer when ``b*(n+1)`` is even and a half-integer otherwise.
    """
    n = pi.n
    if not 1 <= b <= n:
        raise IndexOutOfRange(f"block length {b} outside [1, {n}]")
    sums = _prefix_sums(pi.values)
    target2 = b * (n + 1)
    worst = 0
    for j in range(0, n - b + 1):
        dev2 = abs(2 * (sums[j + b] - sums[j]) - target2)
        if dev2 > worst:
            worst = dev2
    return Fraction(worst, 2)


@dataclass(frozen=True)
class BalanceSpec:
    """A set of window lengths plus the allowed deviation for each.

    ``dev_max[b]`` bounds ``|window_sum - b*(n+1)/2|`` for every length-``b``
    window.  Deviations are non-negative exact rationals.
    """

    n: int
    blocks: tuple[int, ...]
    dev_max: Mapping[int, Fraction]

    def __post_init__(self):
        if self.n < 1:
            raise ParamInvalid("spec length must be >= 1")
        blocks = tuple(self.blocks)
        if any(b2 <= b1 for b1, b2 in zip(blocks, blocks[1:])):
            raise ParamInvalid("block lengths must be strictly increasing")
        if blocks and not (1 <= blocks[0] and blocks[-1] <= self.n):
            raise ParamInvalid(f"block lengths must lie in [1, {self.n}]")
        if set(self.dev_max) != set(blocks):
            raise ParamInvalid("dev_max keys must match the block set")
        dev = {b: Fraction(self.dev_max[b]) for b in blocks}
        if any(v < 0 for v in dev.values()):
            raise ParamInvalid("allowed deviations must be non-negative")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "dev_max", dev)


def d1_preset(n: int) -> BalanceSpec:
    """Every window length 1..n, allowed deviation 2*(n+1)."""
    if n < 1:
        raise ParamInvalid("preset length must be >= 1")
    allowed = Fraction(2 * (n + 1))
    blocks = tuple(range(1, n + 1))
    return BalanceSpec(n, blocks, {b: allowed for b in blocks})


def d2_preset(n: int, num_blocks: int) -> BalanceSpec:
    """Even window lengths 2..2*(n/N - 1), allowed deviation 8*(n+1)/N.

    ``num_blocks`` (N) must divide ``n`` and be a positive multiple of 4.
    """
    _validate_block_split(n, num_blocks)
    allowed = Fraction(8 * (n + 1), num_blocks)
    blocks = tuple(range(2, 2 * (n // num_blocks - 1) + 1, 2))
    return BalanceSpec(n, blocks, {b: allowed for b in blocks})


def _validate_block_split(n: int, num_blocks: int) -> None:
    if num_blocks < 4 or num_blocks % 4 != 0:
        raise ParamInvalid(f"block count {num_blocks} must be a multiple of 4")
    if n < 1 or n % num_blocks != 0:
        raise ParamInvalid(f"block count {num_blocks} must divide n={n}")


@dataclass(frozen=True)
class NeighborSpec:
    """Two-neighbor distance bound ``k``."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ParamInvalid("neighbor bound k must be >= 1")


@dataclass(frozen=True)
class BalanceViolation:
    """One window whose sum strayed further than the spec allows."""

    b: int
    j: int
    window_sum: int
    target: Fraction
    allowed_dev: Fraction
    actual_dev: Fraction

    def to_json_dict(self) -> dict:
        return {
            "b": self.b,
            "j": self.j,
            "sum": self.window_sum,
            "target": str(self.target),
            "allowed": str(self.allowed_dev),
            "actual": str(self.actual_dev),
        }


@dataclass(frozen=True)
class NeighborViolation:
    """An interior position with both adjacent symbol distances above k."""

    i: int
    left_diff: int
    right_diff: int
    allowed: int

    def to_json_dict(self) -> dict:
        return {
            "i": self.i,
            "left": self.left_diff,
            "right": self.right_diff,
            "allowed": self.allowed,
        }


@dataclass(frozen=True)
class ViolationReport:
    """Deterministic, machine-readable verifier outcome.

    ``entries`` is empty exactly when the permutation satisfies the spec;
    balance entries are sorted by (b, j), neighbor entries by position.
    """

    entries: tuple[BalanceViolation | NeighborViolation, ...]

    @property
    def is_valid(self) -> bool:
        return not self.entries

    def to_json_dict(self) -> dict:
        return {
            "valid": self.is_valid,
            "violations": [e.to_json_dict() for e in self.entries],
        }


def verify_balance(pi: Permutation, spec: BalanceSpec) -> ViolationReport:
    """Check every window of every spec'd length against its deviation bound."""
    n = pi.n
    if spec.n != n:
        raise SpecMismatch(f"spec is for n={spec.n}, permutation has n={n}")
    sums = _prefix_sums(pi.values)
    entries = []
    for b in spec.blocks:
        allowed = spec.dev_max[b]
        target2 = b * (n + 1)
        # |w - target2/2| > allowed  <=>  |2w - target2| * q > 2p, exact in ints
        p, q = allowed.numerator, allowed.denominator
        for j in range(1, n - b + 2):
            w = sums[j + b - 1] - sums[j - 1]
            dev2 = abs(2 * w - target2)
            if dev2 * q > 2 * p:
                entries.append(BalanceViolation(
                    b=b, j=j, window_sum=w,
                    target=Fraction(target2, 2),
                    allowed_dev=allowed,
                    actual_dev=Fraction(dev2, 2),
                ))
    return ViolationReport(tuple(entries))


def check_two_neighbor(pi: Permutation, spec: NeighborSpec) -> ViolationReport:
    """Check that each interior position has a neighbor within distance k."""
    n = pi.n
    if n < 3:
        raise SpecMismatch("two-neighbor check needs n >= 3")
    if not 1 <= spec.k <= n - 1:
        raise SpecMismatch(f"neighbor bound {spec.k} outside [1, {n - 1}]")
    k = spec.k
    v = pi.values
    entries = []
    for i in range(2, n):
        left = abs(v[i - 1] - v[i - 2])
        right = abs(v[i - 1] - v[i])
        if left > k and right > k:
            entries.append(NeighborViolation(i=i, left_diff=left,
                                             right_diff=right, allowed=k))
    return ViolationReport(tuple(entries))


def rank(pi: Permutation) -> int:
    """Lexicographic index of ``pi`` among all permutations of its length.

    The identity has rank 0; results are exact for any ``n``.

    >>> rank(Permutation((3, 2, 1)))
    5
    """
    remaining = list(range(1, pi.n + 1))
    r = 0
    for i, v in enumerate(pi.values):
        d = bisect_left(remaining, v)
        r = r * (pi.n - i) + d
        remaining.pop(d)
    return r


def unrank(index: int, n: int) -> Permutation:
    """The permutation at lexicographic position ``index`` in S_n.

    >>> unrank(5, 3).values
    (3, 2, 1)
    """
    if n < 1:
        raise ParamInvalid("length must be >= 1")
    if not 0 <= index < factorial(n):
        raise IndexOutOfRange(f"rank {index} outside [0, {n}!)")
    remaining = list(range(1, n + 1))
    out = []
    f = factorial(n - 1)
    for i in range(n):
        d, index = divmod(index, f)
        out.append(remaining.pop(d))
        if i < n - 1:
            f //= n - 1 - i
    return Permutation(tuple(out))
