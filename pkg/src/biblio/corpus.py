"""Domain model for publication corpora.

A corpus is an immutable snapshot of journals, papers, and citation edges,
plus a registry of classification schemas mapping journals to subject
categories. Citation counts are derived from edge in-degrees; corpora without
edge-level data may instead carry explicit per-paper counts, at the cost of
every analysis that needs individual citing papers or citation dates (those
fail loudly rather than degrade).

Papers are sliced into (field, year, doc_type) cells per schema; a paper whose
journal holds k categories under a schema appears in k cells.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from fractions import Fraction

from .errors import ComputationError, EmptyInputError

DAY = "day"
MONTH = "month"


@dataclass(frozen=True)
class SchemaInfo:
    """A journal classification schema.

    Single-attribution schemas assign every journal exactly one category;
    multi-attribution schemas allow several, and downstream counting rules
    decide how to split credit.
    """

    name: str
    single_attribution: bool = False


@dataclass(frozen=True)
class AuthorCredit:
    """One author slot on a paper.

    An author with no entity affiliations still consumes one author share of
    the paper; that share is credited to no entity.
    """

    author_key: str
    entities: tuple[str, ...] = ()


@dataclass(frozen=True)
class Journal:
    id: str
    categories: dict[str, tuple[str, ...]]
    metric_by_year: dict[int, Fraction] = field(default_factory=dict)


@dataclass(frozen=True)
class Paper:
    """A publication.

    ``pub_date`` with precision ``MONTH`` stores day 01 of the issue month, so
    chronology comparisons can detect and report equal-precision ties instead
    of inventing day-level order that was never in the data.
    """

    id: str
    journal_id: str
    year: int
    doc_type: str
    online_date: date | None = None
    pub_date: date | None = None
    pub_date_precision: str = DAY
    authors: tuple[AuthorCredit, ...] = ()
    page_count: int | None = None

    def effective_date(self) -> tuple[date, str, str] | None:
        """Best chronology evidence: (date, precision, source).

        The online-first date wins when present; otherwise the issue date at
        whatever precision the corpus has. None when the paper is undatable.
        """
        if self.online_date is not None:
            return self.online_date, DAY, "online"
        if self.pub_date is not None:
            return self.pub_date, self.pub_date_precision, "issue"
        return None


@dataclass(frozen=True)
class CitationEdge:
    citing: str
    cited: str
    date: date | None = None


@dataclass(frozen=True, order=True)
class CellKey:
    """The (field, year, doc_type) slice baselines and thresholds run over."""

    field: str
    year: int
    doc_type: str

    def as_dict(self) -> dict:
        return {"field": self.field, "year": self.year, "doc_type": self.doc_type}


class Corpus:
    """Immutable corpus with derived citation and cell indexes.

    ``edges=None`` marks a corpus ingested without edge-level data; citation
    counts then come from ``citation_counts`` (explicit per-paper column) and
    operations needing citing papers or dates raise :class:`ComputationError`.
    """

    def __init__(
        self,
        schemas,
        journals,
        papers,
        edges=None,
        citation_counts: dict[str, int] | None = None,
        load_report=None,
    ):
        if isinstance(schemas, dict):
            self.schemas: dict[str, SchemaInfo] = dict(schemas)
        else:
            self.schemas = {s.name: s for s in schemas}
        self.journals: dict[str, Journal] = {j.id: j for j in journals}
        self.papers: dict[str, Paper] = {p.id: p for p in papers}
        self.edges: tuple[CitationEdge, ...] | None = (
            tuple(edges) if edges is not None else None
        )
        self.explicit_counts: dict[str, int] | None = (
            dict(citation_counts) if citation_counts is not None else None
        )
        self.load_report = load_report
        self._cell_cache: dict[str, dict[CellKey, tuple[Paper, ...]]] = {}
        self._counts: dict[str, int] | None = None
        self._in_edges: dict[str, tuple[CitationEdge, ...]] | None = None

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return (
            self.schemas == other.schemas
            and self.journals == other.journals
            and self.papers == other.papers
            and self.edges == other.edges
            and self.explicit_counts == other.explicit_counts
        )

    @property
    def has_edge_data(self) -> bool:
        return self.edges is not None

    def require_edges(self, what: str) -> tuple[CitationEdge, ...]:
        if self.edges is None:
            raise ComputationError(
                f"{what} needs edge-level citation data; this corpus was "
                "ingested with precomputed citation counts only"
            )
        return self.edges

    @property
    def citation_counts(self) -> dict[str, int]:
        if self._counts is None:
            counts = dict.fromkeys(self.papers, 0)
            if self.edges is not None:
                for e in self.edges:
                    if e.cited in counts:
                        counts[e.cited] += 1
            elif self.explicit_counts:
                for pid, c in self.explicit_counts.items():
                    if pid in counts:
                        counts[pid] = c
            self._counts = counts
        return self._counts

    def citations(self, paper_id: str) -> int:
        return self.citation_counts[paper_id]

    @property
    def in_edges(self) -> dict[str, tuple[CitationEdge, ...]]:
        """cited paper id -> its incoming edges (edge-based corpora only)."""
        if self._in_edges is None:
            edges = self.require_edges("building the citing-paper index")
            index: dict[str, list[CitationEdge]] = {pid: [] for pid in self.papers}
            for e in edges:
                if e.cited in index:
                    index[e.cited].append(e)
            self._in_edges = {pid: tuple(es) for pid, es in index.items()}
        return self._in_edges

    # -- schema-indexed views ------------------------------------------------

    def categories_of(self, journal_id: str, schema: str) -> tuple[str, ...]:
        journal = self.journals.get(journal_id)
        if journal is None:
            return ()
        return journal.categories.get(schema, ())

    def paper_fields(self, paper: Paper, schema: str) -> tuple[str, ...]:
        return self.categories_of(paper.journal_id, schema)

    def journals_in_category(self, schema: str, category: str) -> tuple[Journal, ...]:
        return tuple(
            j for j in self.journals.values() if category in j.categories.get(schema, ())
        )

    def categories(self, schema: str) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for j in self.journals.values():
            for cat in j.categories.get(schema, ()):
                seen.setdefault(cat, None)
        return tuple(sorted(seen))

    def cells(
        self, schema: str, years=None, doc_types=None
    ) -> dict[CellKey, tuple[Paper, ...]]:
        """Papers grouped into (field, year, doc_type) cells, sorted by key.

        A paper appears once per category its journal holds under ``schema``;
        papers whose journal has no category there are absent entirely.
        """
        if schema not in self._cell_cache:
            grouped: dict[CellKey, list[Paper]] = {}
            for p in self.papers.values():
                for f in self.paper_fields(p, schema):
                    grouped.setdefault(CellKey(f, p.year, p.doc_type), []).append(p)
            self._cell_cache[schema] = {
                k: tuple(v) for k, v in sorted(grouped.items())
            }
        full = self._cell_cache[schema]
        if years is None and doc_types is None:
            return full
        ys = set(years) if years is not None else None
        ts = set(doc_types) if doc_types is not None else None
        return {
            k: v
            for k, v in full.items()
            if (ys is None or k.year in ys) and (ts is None or k.doc_type in ts)
        }

    # -- entity attribution ----------------------------------------------------

    def entity_attribution(self, paper: Paper, entity: str) -> Fraction:
        """Fractional credit of ``paper`` to ``entity``.

        Each of the A authors holds 1/A of the paper and splits that share
        evenly across their affiliations; an unaffiliated author's share is
        credited nowhere. Authorless papers are rejected outright, never
        silently zero-weighted.
        """
        if not paper.authors:
            raise ComputationError(
                f"paper {paper.id!r} has no author credits; entity attribution rejected"
            )
        share = Fraction(0)
        a = len(paper.authors)
        for credit in paper.authors:
            if credit.entities and entity in credit.entities:
                share += Fraction(1, a * len(credit.entities))
        return share

    def papers_of_entity(self, entity: str) -> tuple[Paper, ...]:
        return tuple(
            p
            for p in self.papers.values()
            if any(entity in c.entities for c in p.authors)
        )

    # -- journal-level helper ----------------------------------------------------

    def two_year_metric(self, journal_id: str, year: int) -> Fraction:
        """Classic two-year citedness ratio, exact.

        Citations made by papers published in ``year`` to the journal's items
        of the two preceding years, divided by the item count. Provided for
        synthetic corpora and sanity checks; rankings accept any supplied
        journal metric.
        """
        edges = self.require_edges("the two-year citedness ratio")
        items = {
            p.id
            for p in self.papers.values()
            if p.journal_id == journal_id and p.year in (year - 1, year - 2)
        }
        if not items:
            raise EmptyInputError(
                f"journal {journal_id!r} published nothing in {year - 2}-{year - 1}"
            )
        cites = 0
        for e in edges:
            if e.cited in items:
                citing = self.papers.get(e.citing)
                if citing is not None and citing.year == year:
                    cites += 1
        return Fraction(cites, len(items))


# -- validation ---------------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    count: int
    examples: tuple[str, ...]


@dataclass(frozen=True)
class ValidationReport:
    """Per-invariant violation counts with the first few offending ids."""

    violations: tuple[CheckResult, ...]
    warnings: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        def rows(results):
            return [
                {"check": r.name, "count": r.count, "examples": list(r.examples)}
                for r in results
            ]

        return {
            "ok": self.ok,
            "violations": rows(self.violations),
            "warnings": rows(self.warnings),
        }


def validate(corpus: Corpus, max_examples: int = 5) -> ValidationReport:
    """Check every structural invariant; an all-clear report is empty.

    A publication-date month that precedes the online date is reported as a
    warning, not a violation: issue dates may legitimately trail online
    posting, only the reverse ordering smells like a data error.
    """
    found: dict[str, list[str]] = {}
    warned: dict[str, list[str]] = {}

    def hit(bucket, check, example):
        bucket.setdefault(check, []).append(example)

    for j in corpus.journals.values():
        for schema, cats in j.categories.items():
            info = corpus.schemas.get(schema)
            if info is None:
                hit(found, "unknown_schema", f"{j.id}:{schema}")
                continue
            if not cats:
                hit(found, "empty_category_list", f"{j.id}:{schema}")
            elif info.single_attribution and len(cats) != 1:
                hit(found, "single_attribution_violation", f"{j.id}:{schema}")
        for year, m in j.metric_by_year.items():
            if m < 0:
                hit(found, "negative_metric", f"{j.id}:{year}")

    for p in corpus.papers.values():
        if p.journal_id not in corpus.journals:
            hit(found, "unresolved_journal", p.id)
        if (
            p.online_date is not None
            and p.pub_date is not None
        ):
            if p.pub_date_precision == MONTH:
                early = (p.pub_date.year, p.pub_date.month) < (
                    p.online_date.year,
                    p.online_date.month,
                )
            else:
                early = p.pub_date < p.online_date
            if early:
                hit(warned, "issue_precedes_online", p.id)

    if corpus.edges is not None:
        seen: set[tuple[str, str]] = set()
        for e in corpus.edges:
            if e.citing == e.cited:
                hit(found, "self_citation_loop", e.citing)
            pair = (e.citing, e.cited)
            if pair in seen:
                hit(found, "duplicate_edge", f"{e.citing}->{e.cited}")
            seen.add(pair)
            for endpoint in pair:
                if endpoint not in corpus.papers:
                    hit(found, "unresolved_edge_endpoint", endpoint)
        if corpus.explicit_counts:
            derived = corpus.citation_counts
            for pid, c in corpus.explicit_counts.items():
                if pid in derived and derived[pid] != c:
                    hit(found, "citation_count_mismatch", pid)

    def results(bucket):
        return tuple(
            CheckResult(name, len(ids), tuple(ids[:max_examples]))
            for name, ids in sorted(bucket.items())
        )

    return ValidationReport(violations=results(found), warnings=results(warned))
