"""Independent brute-force reference implementations.

These deliberately avoid the library's code paths: ranks come from pairwise
comparison counts, rounding goes through the decimal module, percentiles use
the midpoint-of-worse-items counting argument, and quartile surpluses come
from exact enumeration of the size distribution. Tests freeze their outputs
or compare them against the package directly.
"""
from __future__ import annotations

import decimal
from fractions import Fraction


def competition_ranks(values) -> list[int]:
    """Rank of each value in input order: one plus the number of strictly
    better values."""
    return [1 + sum(1 for other in values if other > v) for v in values]


def positional_quartiles(n: int) -> list[int]:
    """Quartile of each of n descending positions, bucket b covering
    positions floor((b-1)n/4) exclusive through floor(bn/4) inclusive."""
    bounds = [b * n // 4 for b in range(5)]
    out = []
    for pos in range(1, n + 1):
        for b in range(1, 5):
            if pos <= bounds[b]:
                out.append(b)
                break
    return out


def quartiles_with_ties(metrics) -> list[int]:
    """Quartile per input item: positional quartile of the first (best)
    position of the item's tie block."""
    n = len(metrics)
    positional = positional_quartiles(n)
    ranks = competition_ranks(metrics)
    return [positional[r - 1] for r in ranks]


def midpoint_percentile(metrics, index) -> Fraction:
    """Share of the list at or below the item, counting the item itself as
    half. Matches the rank-based formula whenever metrics are distinct."""
    me = metrics[index]
    worse = sum(1 for other in metrics if other < me)
    return Fraction(100) * (Fraction(worse) + Fraction(1, 2)) / len(metrics)


def decimal_half_up(value: Fraction) -> int:
    """Round to the nearest integer, halves away from zero, via decimal."""
    d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return int(d.quantize(decimal.Decimal(1), rounding=decimal.ROUND_HALF_UP))


def quota_threshold(counts, percent: Fraction):
    """(quota, threshold, above, ties) for the top ``percent`` of counts."""
    ordered = sorted(counts, reverse=True)
    quota = decimal_half_up(Fraction(percent) * len(ordered) / 100)
    threshold = ordered[quota - 1]
    above = sum(1 for c in ordered if c > threshold)
    ties = sum(1 for c in ordered if c == threshold)
    return quota, threshold, above, ties


def ws_weights(counts, percent: Fraction):
    """Per-paper selection weights: 1 above the threshold, the solved
    fractional weight on the tie block, 0 below; weights sum to the quota."""
    quota, threshold, above, ties = quota_threshold(counts, percent)
    tie_weight = Fraction(quota - above, ties)
    return [
        Fraction(1) if c > threshold else (tie_weight if c == threshold else Fraction(0))
        for c in counts
    ]


def uniform_remainder_weights(low: int, high: int):
    """P(size mod 4 = r) for a uniform integer size, by enumeration."""
    sizes = range(low, high + 1)
    return tuple(
        Fraction(sum(1 for n in sizes if n % 4 == r), len(sizes)) for r in range(4)
    )


def surplus_by_enumeration(num_categories: int, total_journals: int, weights=None):
    """Expected Q2/Q3/Q4 extras and integer per-quartile totals.

    Extras follow from which quartiles receive a unit at each remainder
    (r=1 feeds Q4, r=2 feeds Q2 and Q4, r=3 feeds Q2, Q3 and Q4); totals
    split the remaining journals evenly and repair the floor loss by giving
    spare units to the smallest exact totals.
    """
    if weights is None:
        weights = (Fraction(1, 4),) * 4
    gains = {0: (), 1: (3,), 2: (1, 3), 3: (1, 2, 3)}
    expected = [Fraction(0)] * 4
    for r, w in enumerate(weights):
        for q in gains[r]:
            expected[q] += w
    extras = tuple(decimal_half_up(num_categories * e) for e in expected[1:])
    base = Fraction(total_journals - sum(extras), 4)
    exact = [base, base + extras[0], base + extras[1], base + extras[2]]
    totals = [int(x) for x in exact]
    spare = total_journals - sum(totals)
    for i in sorted(range(4), key=lambda i: (exact[i], i))[:spare]:
        totals[i] += 1
    return extras, tuple(totals)
