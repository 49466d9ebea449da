"""Shared golden data, independent reference encoders, and input generators.

The reference encoders recompute every decision statistic from scratch
(full re-summation, Fraction comparisons against the mean) so they share no
arithmetic shortcuts with the production encoders they are checked against.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from bpc import (
    D1Input,
    D2Input,
    D2Params,
    Permutation,
    TnInput,
    TnParams,
)

# Golden two-source example: n=12.
EX1_GAMMA1 = (3, 4, 1, 2, 5, 6)
EX1_GAMMA2 = (6, 5, 4, 3, 2, 1)
EX1_CODEWORD = (3, 12, 4, 11, 1, 10, 2, 9, 8, 5, 7, 6)
EX1_INTERLEAVING = (3, 12, 4, 11, 1, 10, 2, 9, 5, 8, 6, 7)

# Golden block-codec example: n=32, N=8, given as full orderings.
EX3_ORDERINGS = (
    (2, 3, 4, 1),
    (8, 7, 6, 5),
    (11, 10, 12, 9),
    (16, 13, 14, 15),
    (17, 20, 19, 18),
    (22, 23, 21, 24),
    (25, 26, 28, 27),
    (32, 29, 30, 31),
)
EX3_CODEWORD = (
    2, 25, 8, 32, 3, 26, 7, 29, 4, 28, 6, 30, 1, 27, 5, 31,
    11, 17, 16, 22, 10, 20, 13, 23, 12, 19, 14, 21, 9, 18, 15, 24,
)

# The eight length-4 permutations keeping every 2-window within 1 of its mean.
MIN_DISC_SET_N4 = (
    (1, 3, 2, 4), (1, 4, 2, 3), (2, 3, 1, 4), (2, 4, 1, 3),
    (3, 1, 4, 2), (3, 2, 4, 1), (4, 1, 3, 2), (4, 2, 3, 1),
)

# Golden neighbor-constrained example: n=24, k=4.
EX4_ORDERINGS = (
    (3, 4, 1, 2),
    (8, 7, 6, 5),
    (9, 10, 12, 11),
    (13, 16, 14, 15),
    (20, 19, 18, 17),
    (21, 22, 23, 24),
)
EX4_SELECTOR = (1, 4, 5, 2, 6, 1, 5, 6, 2, 3, 4, 3)
EX4_CODEWORD = (
    3, 4, 13, 16, 20, 19, 8, 7, 21, 22, 1, 2,
    18, 17, 23, 24, 6, 5, 9, 10, 14, 15, 12, 11,
)


def ex1_input() -> D1Input:
    return D1Input(Permutation(EX1_GAMMA1), Permutation(EX1_GAMMA2))


def sigmas_from_orderings(orderings, block_size):
    return tuple(
        Permutation(tuple(v - i * block_size for v in ordering))
        for i, ordering in enumerate(orderings)
    )


def ex3_input() -> D2Input:
    return D2Input(D2Params(32, 8), sigmas_from_orderings(EX3_ORDERINGS, 4))


def ex4_input() -> TnInput:
    return TnInput(TnParams(24, 4), sigmas_from_orderings(EX4_ORDERINGS, 4),
                   EX4_SELECTOR)


def reference_encode_d1(gamma1, gamma2):
    """Re-summation oracle for the two-source rule: first symbol from the
    low ordering, then low iff the running average exceeds the mean."""
    half = len(gamma1)
    n = 2 * half
    mean = Fraction(n + 1, 2)
    low = list(gamma1)
    high = [v + half for v in gamma2]
    out = [low.pop(0)]
    while len(out) < n:
        average = Fraction(sum(out), len(out))
        out.append(low.pop(0) if average > mean else high.pop(0))
    return tuple(out)


def reference_encode_d2(inp: D2Input):
    """Re-summation oracle for the block rule: cells pair sources
    (2c-1, N-2c+1) and (2c, N-2c+2); an average >= the mean takes the lower
    pair, below the mean the upper pair; the very first visit is lower."""
    params = inp.params
    n, N, size = params.n, params.N, params.block_size
    mean = Fraction(n + 1, 2)
    sources = {i: list(inp.ordering(i)) for i in range(1, N + 1)}
    out = []
    for c in range(1, N // 4 + 1):
        lower = (2 * c - 1, N - 2 * c + 1)
        upper = (2 * c, N - 2 * c + 2)
        for visit in range(2 * size):
            if not out:
                pair = lower
            else:
                pair = lower if Fraction(sum(out), len(out)) >= mean else upper
            for i in pair:
                out.append(sources[i].pop(0))
    return tuple(out)


def reference_encode_tn(inp: TnInput):
    """Re-summation oracle for the neighbor-constrained rule; returns None
    when the selector contradicts a mandated half or an empty set."""
    params = inp.params
    n, m, k = params.n, params.m, params.k
    mean = Fraction(n + 1, 2)
    sources = {i: list(inp.ordering(i)) for i in range(1, m + 1)}
    out = []
    for sel in inp.selector:
        low_half = Fraction(sum(out), len(out)) >= mean if out else True
        if (sel <= m // 2) != low_half or len(sources[sel]) < 2:
            return None
        out.append(sources[sel].pop(0))
        out.append(sources[sel].pop(0))
    return tuple(out)


def brute_window_max_dev(values, b) -> Fraction:
    """Direct slice-and-sum discrepancy oracle over all window starts."""
    n = len(values)
    target = Fraction(b * (n + 1), 2)
    return max(abs(sum(values[j:j + b]) - target) for j in range(n - b + 1))


def all_d1_inputs(n):
    half = n // 2
    base = list(itertools.permutations(range(1, half + 1)))
    for g1 in base:
        for g2 in base:
            yield D1Input(Permutation(g1), Permutation(g2))


def all_d2_inputs(params: D2Params):
    base = list(itertools.permutations(range(1, params.block_size + 1)))
    for combo in itertools.product(base, repeat=params.N):
        yield D2Input(params, tuple(Permutation(s) for s in combo))


def random_d1_input(rng: random.Random, n: int) -> D1Input:
    half = n // 2
    g1 = list(range(1, half + 1))
    g2 = list(range(1, half + 1))
    rng.shuffle(g1)
    rng.shuffle(g2)
    return D1Input(Permutation(tuple(g1)), Permutation(tuple(g2)))


def random_d2_input(rng: random.Random, params: D2Params) -> D2Input:
    sigmas = []
    for _ in range(params.N):
        vals = list(range(1, params.block_size + 1))
        rng.shuffle(vals)
        sigmas.append(Permutation(tuple(vals)))
    return D2Input(params, tuple(sigmas))


def random_permutation(rng: random.Random, n: int) -> Permutation:
    vals = list(range(1, n + 1))
    rng.shuffle(vals)
    return Permutation(tuple(vals))
