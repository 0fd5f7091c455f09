"""Field-normalized citation impact: baselines and CNCI.

The expected citation rate of a (field, year, doc_type) cell depends on the
counting scheme:

- whole: every paper in the cell counts fully, e = sum(c) / n
- fractional: a k-field paper contributes c/k citations and 1/k of a paper,
  e = sum(c/k) / sum(1/k)
- whole + split citations: citations are split across fields but papers count
  whole, e = sum(c/k) / n (used only by ratio-of-averages aggregation)

A paper's CNCI averages c/e over its k cells. Aggregating a paper set is
either average-of-ratios (mean CNCI) or ratio-of-averages (total observed
citation mass over total expected mass, field by field). On a closed corpus
every ratio-of-averages variant and fractional average-of-ratios equal exactly
1; whole counting with average-of-ratios does not, which is the anomaly these
dual routes exist to expose. All arithmetic is exact rational.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .corpus import CellKey, Corpus, Paper
from .errors import ComputationError, EmptyInputError, ZeroBaselineError
from .rounding import rational_str

logger = logging.getLogger(__name__)

WHOLE = "whole"
FRACTIONAL = "fractional"
AOR = "aor"
ROA = "roa"


@dataclass(frozen=True)
class CnciConfig:
    """Validated combination of counting scheme, aggregation, and splitting."""

    counting: str = WHOLE
    aggregation: str = AOR
    split_citations: bool = False

    def __post_init__(self):
        if self.counting not in (WHOLE, FRACTIONAL):
            raise ComputationError(f"unknown counting scheme {self.counting!r}")
        if self.aggregation not in (AOR, ROA):
            raise ComputationError(f"unknown aggregation {self.aggregation!r}")
        if self.split_citations and self.aggregation != ROA:
            raise ComputationError(
                "split_citations applies to ratio-of-averages aggregation only"
            )
        if self.split_citations and self.counting != WHOLE:
            raise ComputationError(
                "split_citations presumes whole paper counting; fractional "
                "counting already splits"
            )


@dataclass(frozen=True)
class BaselineCell:
    expected: Fraction
    weight: Fraction  # total paper weight: n (whole) or sum of 1/k (fractional)
    papers: int


@dataclass(frozen=True)
class BaselineTable:
    schema: str
    counting: str
    split_citations: bool
    cells: dict[CellKey, BaselineCell]

    @property
    def counting_label(self) -> str:
        return f"{self.counting}_split" if self.split_citations else self.counting

    def expected(self, key: CellKey) -> Fraction:
        cell = self.cells.get(key)
        if cell is None:
            raise ComputationError(f"no baseline for cell {key}")
        return cell.expected

    def to_csv_text(self) -> str:
        lines = ["schema,field,year,doc_type,counting,expected,weight"]
        for key in sorted(self.cells):
            cell = self.cells[key]
            lines.append(
                f"{self.schema},{key.field},{key.year},{key.doc_type},"
                f"{self.counting_label},{rational_str(cell.expected)},"
                f"{rational_str(cell.weight)}"
            )
        return "\n".join(lines) + "\n"


def compute_baselines(
    corpus: Corpus,
    schema: str,
    counting: str = WHOLE,
    *,
    split_citations: bool = False,
    papers: Iterable[Paper] | None = None,
) -> BaselineTable:
    """Expected citation rates per cell over the corpus (or a paper subset).

    ``papers`` restricts the pool the baselines are computed from; relative
    indicators use it to normalize against a reference set instead of the
    whole corpus. Cells with zero paper weight are absent, not zero.
    """
    if counting not in (WHOLE, FRACTIONAL):
        raise ComputationError(f"unknown counting scheme {counting!r}")
    if split_citations and counting != WHOLE:
        raise ComputationError("split_citations presumes whole paper counting")
    pool = corpus.papers.values() if papers is None else papers
    sums: dict[CellKey, list[Fraction]] = {}
    sizes: dict[CellKey, int] = {}
    for p in pool:
        fields = corpus.paper_fields(p, schema)
        if not fields:
            continue
        k = len(fields)
        c = corpus.citations(p.id)
        cite_mass = Fraction(c, k) if (counting == FRACTIONAL or split_citations) else Fraction(c)
        paper_mass = Fraction(1, k) if counting == FRACTIONAL else Fraction(1)
        for f in fields:
            key = CellKey(f, p.year, p.doc_type)
            cell = sums.setdefault(key, [Fraction(0), Fraction(0)])
            cell[0] += cite_mass
            cell[1] += paper_mass
            sizes[key] = sizes.get(key, 0) + 1
    cells = {
        key: BaselineCell(expected=cite / weight, weight=weight, papers=sizes[key])
        for key, (cite, weight) in sorted(sums.items())
        if weight > 0
    }
    return BaselineTable(
        schema=schema, counting=counting, split_citations=split_citations, cells=cells
    )


def cnci_paper(corpus: Corpus, paper: Paper, baselines: BaselineTable) -> Fraction:
    """Category-normalized citation impact of one paper: mean of c/e over its cells.

    An uncited paper in an uncited cell contributes 0 for that cell (it sits at
    the degenerate cell average); a cited paper over a zero baseline is an error.
    """
    fields = corpus.paper_fields(paper, baselines.schema)
    if not fields:
        raise ComputationError(
            f"paper {paper.id!r} has no categories under {baselines.schema!r}"
        )
    c = corpus.citations(paper.id)
    total = Fraction(0)
    for f in fields:
        e = baselines.expected(CellKey(f, paper.year, paper.doc_type))
        if e == 0:
            if c > 0:
                raise ZeroBaselineError(
                    f"paper {paper.id!r} has {c} citations in a zero-baseline cell"
                )
            continue
        total += Fraction(c) / e
    return total / len(fields)


def cnci_set(corpus: Corpus, papers: Iterable[Paper], baselines: BaselineTable) -> Fraction:
    """Average-of-ratios aggregate: unweighted mean of per-paper CNCI."""
    values = [cnci_paper(corpus, p, baselines) for p in papers]
    if not values:
        raise EmptyInputError("cannot average CNCI over an empty paper set")
    return sum(values, Fraction(0)) / len(values)


def nci_ratio_of_averages(
    corpus: Corpus, papers: Iterable[Paper], baselines: BaselineTable
) -> Fraction:
    """Ratio-of-averages aggregate: total observed over total expected mass.

    Per field, the set contributes its citation mass under the table's scheme
    (full c per field for whole counting, c/k when citations are split or
    counting is fractional) against the matching paper weight times the cell
    baseline. The brute-force definition; no cancellation shortcuts.
    """
    split = baselines.split_citations
    fractional = baselines.counting == FRACTIONAL
    observed = Fraction(0)
    expected = Fraction(0)
    empty = True
    for p in papers:
        empty = False
        fields = corpus.paper_fields(p, baselines.schema)
        if not fields:
            raise ComputationError(
                f"paper {p.id!r} has no categories under {baselines.schema!r}"
            )
        k = len(fields)
        c = corpus.citations(p.id)
        cite_mass = Fraction(c, k) if (split or fractional) else Fraction(c)
        paper_mass = Fraction(1, k) if fractional else Fraction(1)
        for f in fields:
            observed += cite_mass
            expected += paper_mass * baselines.expected(CellKey(f, p.year, p.doc_type))
    if empty:
        raise EmptyInputError("cannot aggregate an empty paper set")
    if expected == 0:
        raise ZeroBaselineError("total expected citation mass is zero")
    return observed / expected


def global_cnci(
    corpus: Corpus,
    schema: str,
    config: CnciConfig,
    years=None,
    doc_types=None,
) -> Fraction:
    """One number for a corpus slice under the given counting/aggregation regime.

    Baselines always come from the full corpus; because cells are keyed by
    (field, year, doc_type), a year/doc-type slice selects whole cells and the
    slice is closed with respect to its own baselines.
    """
    papers = _slice(corpus, schema, years, doc_types)
    baselines = compute_baselines(
        corpus, schema, config.counting, split_citations=config.split_citations
    )
    if config.aggregation == AOR:
        return cnci_set(corpus, papers, baselines)
    return nci_ratio_of_averages(corpus, papers, baselines)


def _slice(corpus: Corpus, schema: str, years, doc_types) -> list[Paper]:
    ys = set(years) if years is not None else None
    ts = set(doc_types) if doc_types is not None else None
    return [
        p
        for p in corpus.papers.values()
        if corpus.paper_fields(p, schema)
        and (ys is None or p.year in ys)
        and (ts is None or p.doc_type in ts)
    ]


def relative_cnci(
    corpus: Corpus,
    subunit: Iterable[Paper],
    reference: Iterable[Paper],
    schema: str,
    counting: str = WHOLE,
) -> Fraction:
    """Subunit impact normalized against a reference set's own baselines.

    Expected rates are computed from ``reference`` only; the result is the
    average-of-ratios over ``subunit``. Comparing a set against itself gives
    exactly 1 under fractional counting (and for single-field sets under any
    counting); whole counting inherits the usual multi-field drift. A subunit
    paper outside the reference set is legal but logged, since the comparison
    then mixes populations.
    """
    subunit = list(subunit)
    reference = list(reference)
    if not subunit or not reference:
        raise EmptyInputError("subunit and reference sets must be non-empty")
    ref_ids = {p.id for p in reference}
    outside = [p.id for p in subunit if p.id not in ref_ids]
    if outside:
        logger.warning(
            "relative CNCI: %d subunit paper(s) outside the reference set (e.g. %s)",
            len(outside),
            outside[0],
        )
    baselines = compute_baselines(corpus, schema, counting, papers=reference)
    return cnci_set(corpus, subunit, baselines)
