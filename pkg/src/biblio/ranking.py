"""Per-category journal ranking, percentile positions, quartile partitions.

Journals in a category are ranked by a per-year metric, descending, with
competition ranking: tied journals all carry the minimal rank of their tie
block. The percentile of rank r among N journals is (N - (r - 0.5)) / N x 100,
kept as an exact rational; display rounds half-up to one decimal.

Quartile boundaries fall at floor(N/4), floor(N/2), floor(3N/4) positions, so
any remainder lands on the later quartiles (never Q1 first). The sole journal
of a one-journal category therefore sits in Q4; that rule is applied verbatim,
and tiny categories can only be excluded via the explicit minimum-size gate.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction

from .corpus import Corpus
from .errors import ComputationError, EmptyInputError
from .rounding import decimal_str, rational_json


class Quartile(IntEnum):
    Q1 = 1
    Q2 = 2
    Q3 = 3
    Q4 = 4

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class QuartileBounds:
    """Rank cut positions for a category of n journals."""

    n: int
    cut1: int
    cut2: int
    cut3: int

    @property
    def counts(self) -> tuple[int, int, int, int]:
        return (
            self.cut1,
            self.cut2 - self.cut1,
            self.cut3 - self.cut2,
            self.n - self.cut3,
        )


def quartile_partition(n: int) -> QuartileBounds:
    if n < 1:
        raise EmptyInputError("a category must contain at least one ranked journal")
    return QuartileBounds(n=n, cut1=n // 4, cut2=n // 2, cut3=3 * n // 4)


def quartile_of_rank(rank: int, bounds: QuartileBounds) -> Quartile:
    if not 1 <= rank <= bounds.n:
        raise ComputationError(f"rank {rank} outside 1..{bounds.n}")
    if rank <= bounds.cut1:
        return Quartile.Q1
    if rank <= bounds.cut2:
        return Quartile.Q2
    if rank <= bounds.cut3:
        return Quartile.Q3
    return Quartile.Q4


@dataclass(frozen=True)
class RankedEntry:
    journal_id: str
    metric: Fraction
    rank: int


@dataclass(frozen=True)
class RankedCategory:
    schema: str
    category: str
    year: int
    entries: tuple[RankedEntry, ...]
    excluded: tuple[str, ...]  # members with no metric for the year

    @property
    def n(self) -> int:
        return len(self.entries)

    def rank_of(self, journal_id: str) -> int:
        for e in self.entries:
            if e.journal_id == journal_id:
                return e.rank
        raise ComputationError(
            f"journal {journal_id!r} is not ranked in "
            f"{self.category!r} ({self.schema}, {self.year})"
        )


def rank_category(corpus: Corpus, schema: str, category: str, year: int) -> RankedCategory:
    """Competition-rank a category's journals by their metric for ``year``."""
    members = corpus.journals_in_category(schema, category)
    if not members:
        raise EmptyInputError(f"category {category!r} has no journals under {schema!r}")
    ranked = [(j.metric_by_year[year], j.id) for j in members if year in j.metric_by_year]
    excluded = tuple(sorted(j.id for j in members if year not in j.metric_by_year))
    if not ranked:
        raise ComputationError(
            f"no journal in {category!r} has a metric for {year}"
        )
    ranked.sort(key=lambda pair: (-pair[0], pair[1]))
    entries: list[RankedEntry] = []
    rank = 0
    for position, (metric, jid) in enumerate(ranked, start=1):
        if rank == 0 or metric != entries[-1].metric:
            rank = position
        entries.append(RankedEntry(journal_id=jid, metric=metric, rank=rank))
    return RankedCategory(
        schema=schema, category=category, year=year,
        entries=tuple(entries), excluded=excluded,
    )


def percentile(rank: int, n: int) -> Fraction:
    """Exact percentile position of rank ``rank`` among ``n`` journals.

    Ranks map to the midpoints of n equal slices of (0, 100], so the best
    possible position in a category of one is 50, not 100, and
    percentile(r, n) + percentile(n + 1 - r, n) == 100 exactly.
    """
    if n < 1 or not 1 <= rank <= n:
        raise ComputationError(f"rank {rank} outside 1..{n}")
    return (Fraction(n) - (Fraction(rank) - Fraction(1, 2))) / n * 100


def average_percentile(corpus: Corpus, schema: str, journal_id: str, year: int) -> Fraction:
    """Mean of the journal's exact percentiles across all its categories."""
    cats = corpus.categories_of(journal_id, schema)
    if not cats:
        raise ComputationError(f"journal {journal_id!r} has no categories under {schema!r}")
    values = []
    for cat in cats:
        ranking = rank_category(corpus, schema, cat, year)
        values.append(percentile(ranking.rank_of(journal_id), ranking.n))
    return sum(values, Fraction(0)) / len(values)


def assign_quartiles(ranking: RankedCategory) -> dict[str, Quartile]:
    """Quartile labels per journal; a tie block shares its minimal rank's label."""
    bounds = quartile_partition(ranking.n)
    return {e.journal_id: quartile_of_rank(e.rank, bounds) for e in ranking.entries}


@dataclass(frozen=True)
class BoundaryTie:
    """A tie block whose positions straddle a quartile cut.

    Everything in the block got the quartile of the shared minimal rank; the
    flag exists so reports can show where that decision actually mattered.
    """

    category: str
    rank: int
    size: int
    label: Quartile


def boundary_ties(ranking: RankedCategory) -> tuple[BoundaryTie, ...]:
    bounds = quartile_partition(ranking.n)
    cuts = (bounds.cut1, bounds.cut2, bounds.cut3)
    blocks: dict[int, int] = {}
    for e in ranking.entries:
        blocks[e.rank] = blocks.get(e.rank, 0) + 1
    flagged = []
    for rank, size in sorted(blocks.items()):
        if size < 2:
            continue
        first, last = rank, rank + size - 1
        if any(first <= cut < last for cut in cuts):
            flagged.append(
                BoundaryTie(
                    category=ranking.category,
                    rank=rank,
                    size=size,
                    label=quartile_of_rank(rank, bounds),
                )
            )
    return tuple(flagged)


def best_quartile(corpus: Corpus, schema: str, journal_id: str, year: int) -> Quartile:
    """The best (lowest) quartile across every category the journal is in."""
    cats = corpus.categories_of(journal_id, schema)
    if not cats:
        raise ComputationError(f"journal {journal_id!r} has no categories under {schema!r}")
    best: Quartile | None = None
    for cat in cats:
        ranking = rank_category(corpus, schema, cat, year)
        label = assign_quartiles(ranking)[journal_id]
        if best is None or label < best:
            best = label
    return best


@dataclass(frozen=True)
class DistributionReport:
    """How journals or papers spread across quartiles.

    per_category counts each journal (or its papers) once per category, so
    multi-category journals are counted several times; database_best counts
    each exactly once, at its best quartile anywhere.
    """

    schema: str
    year: int
    level: str  # "journals" | "papers"
    mode: str  # "per_category" | "database_best"
    counts: dict[Quartile, int]
    excluded_journals: tuple[str, ...]
    skipped_categories: tuple[str, ...]
    ties_at_cuts: tuple[BoundaryTie, ...]

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def share(self, q: Quartile) -> Fraction:
        if self.total == 0:
            return Fraction(0)
        return Fraction(self.counts[q], self.total)

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema,
            "year": self.year,
            "level": self.level,
            "mode": self.mode,
            "total": self.total,
            "quartiles": {
                str(q): {"count": self.counts[q], "share": rational_json(self.share(q), 4)}
                for q in Quartile
            },
            "excluded_journals": list(self.excluded_journals),
            "skipped_categories": list(self.skipped_categories),
            "ties_at_cuts": [
                {"category": t.category, "rank": t.rank, "size": t.size, "label": str(t.label)}
                for t in self.ties_at_cuts
            ],
        }

    def to_csv_text(self) -> str:
        lines = ["quartile,count,share"]
        for q in Quartile:
            lines.append(f"{q},{self.counts[q]},{decimal_str(self.share(q), 4)}")
        return "\n".join(lines) + "\n"


def quartile_distribution(
    corpus: Corpus,
    schema: str,
    year: int,
    level: str = "journals",
    mode: str = "per_category",
    min_category_size: int = 0,
) -> DistributionReport:
    """Distribution of journals or their papers over quartiles for one year.

    Papers are the ones published in ``year`` in journals ranked that year.
    ``min_category_size`` (default 0 = off) skips categories with fewer ranked
    journals; skipped categories are listed, never silently folded in.
    """
    if level not in ("journals", "papers"):
        raise ComputationError(f"unknown level {level!r}")
    if mode not in ("per_category", "database_best"):
        raise ComputationError(f"unknown mode {mode!r}")

    rankings: dict[str, RankedCategory] = {}
    skipped: list[str] = []
    excluded: set[str] = set()
    for cat in corpus.categories(schema):
        try:
            ranking = rank_category(corpus, schema, cat, year)
        except ComputationError:
            skipped.append(cat)
            continue
        excluded.update(ranking.excluded)
        if ranking.n < min_category_size:
            skipped.append(cat)
            continue
        rankings[cat] = ranking

    if not rankings:
        raise ComputationError(f"no rankable category under {schema!r} for {year}")

    papers_by_journal: dict[str, int] = {}
    if level == "papers":
        for p in corpus.papers.values():
            if p.year == year:
                papers_by_journal[p.journal_id] = papers_by_journal.get(p.journal_id, 0) + 1

    def weight(journal_id: str) -> int:
        return papers_by_journal.get(journal_id, 0) if level == "papers" else 1

    counts = {q: 0 for q in Quartile}
    ties: list[BoundaryTie] = []
    if mode == "per_category":
        for cat, ranking in sorted(rankings.items()):
            labels = assign_quartiles(ranking)
            for jid, label in labels.items():
                counts[label] += weight(jid)
            ties.extend(boundary_ties(ranking))
    else:
        best: dict[str, Quartile] = {}
        for cat, ranking in sorted(rankings.items()):
            labels = assign_quartiles(ranking)
            for jid, label in labels.items():
                if jid not in best or label < best[jid]:
                    best[jid] = label
            ties.extend(boundary_ties(ranking))
        for jid, label in best.items():
            counts[label] += weight(jid)

    return DistributionReport(
        schema=schema,
        year=year,
        level=level,
        mode=mode,
        counts=counts,
        excluded_journals=tuple(sorted(excluded)),
        skipped_categories=tuple(sorted(skipped)),
        ties_at_cuts=tuple(ties),
    )
