"""Highly cited paper selection: thresholds, tie-breaking, entity shares.

Within a (field, year, doc_type) cell, the citation threshold sits at the
descending-sorted position given by the rounded quota round_half_up(p * N /
100). Papers strictly above the threshold always qualify; papers exactly at it
are the borderline block, and the classification method decides their fate:
inclusive takes them all, exclusive none, fractional_ws gives each the weight
(quota - above) / ties, and quota mode picks exactly enough of them via an
ordered chain of tie-break methods.

A tie-break method resolves the cut only if the papers straddling the cut
boundary are strictly ordered; otherwise just the unresolved sub-tie passes to
the next method in the chain. An exhausted chain falls back to paper-id order,
loudly flagged in the trace.

The ESI-style low-threshold rule (threshold <= 2 means the cell selects
nothing) is a flag, on by default in the run orchestrator.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .corpus import MONTH, CellKey, Corpus, Paper
from .errors import ComputationError, EmptyInputError, MissingDateError
from .rounding import decimal_str, rational_json, rational_str, round_half_up

logger = logging.getLogger(__name__)

CHRONOLOGY = "chronology"
TRAJECTORY = "trajectory"
CITING_EXCELLENCE = "citing_excellence"

FULL = "full"
PARTIAL = "fractional"
NONE = "none"


@dataclass(frozen=True)
class ThresholdResult:
    cell: CellKey
    top_percent: Fraction
    quota: int
    threshold: int | None
    above_count: int
    tie_count: int

    def to_json_dict(self) -> dict:
        return {
            "cell": self.cell.as_dict(),
            "top_percent": rational_str(self.top_percent),
            "quota": self.quota,
            "threshold": self.threshold,
            "above_count": self.above_count,
            "tie_count": self.tie_count,
        }


@dataclass(frozen=True)
class HcpDecision:
    paper_id: str
    cell: CellKey
    status: str  # FULL | PARTIAL | NONE
    weight: Fraction
    method: str
    trace: tuple[dict, ...] | None = None  # present iff a tie-breaker fired

    def to_json_dict(self) -> dict:
        return {
            "paper": self.paper_id,
            "cell": self.cell.as_dict(),
            "status": self.status,
            "weight": rational_str(self.weight),
            "weight_decimal": decimal_str(self.weight, 2),
            "method": self.method,
            "trace": list(self.trace) if self.trace is not None else None,
        }


@dataclass(frozen=True)
class TiebreakMethod:
    """One link of a tie-break chain.

    Trajectory windows are (start, end) year offsets from the publication
    year, inclusive; the defaults compare the first five years against years
    six to ten. Windows must be disjoint with the early one first.
    """

    kind: str
    early_window: tuple[int, int] = (0, 4)
    late_window: tuple[int, int] = (5, 9)

    def __post_init__(self):
        if self.kind not in (CHRONOLOGY, TRAJECTORY, CITING_EXCELLENCE):
            raise ComputationError(f"unknown tie-break method {self.kind!r}")
        e0, e1 = self.early_window
        l0, l1 = self.late_window
        if not (e0 <= e1 < l0 <= l1):
            raise ComputationError(
                "trajectory windows must be disjoint with the early window first"
            )


def parse_tiebreak_chain(names: Iterable[str]) -> tuple[TiebreakMethod, ...]:
    return tuple(TiebreakMethod(kind=n.replace("-", "_")) for n in names)


def compute_threshold(
    corpus: Corpus,
    cell: CellKey,
    papers: Sequence[Paper],
    top_percent: Fraction | int | str = 1,
) -> ThresholdResult:
    """Quota, threshold, and borderline structure for one cell."""
    if not papers:
        raise EmptyInputError(f"cell {cell} is empty")
    share = Fraction(top_percent)
    if not 0 < share <= 100:
        raise ComputationError(f"top_percent must be in (0, 100], got {share}")
    n = len(papers)
    quota = round_half_up(share * n / 100)
    if quota == 0:
        return ThresholdResult(
            cell=cell, top_percent=share, quota=0,
            threshold=None, above_count=0, tie_count=0,
        )
    counts = sorted((corpus.citations(p.id) for p in papers), reverse=True)
    threshold = counts[quota - 1]
    above = sum(1 for c in counts if c > threshold)
    ties = sum(1 for c in counts if c == threshold)
    return ThresholdResult(
        cell=cell, top_percent=share, quota=quota,
        threshold=threshold, above_count=above, tie_count=ties,
    )


def _low_threshold(result: ThresholdResult, esi_low_threshold: bool) -> bool:
    return (
        esi_low_threshold
        and result.threshold is not None
        and result.threshold <= 2
    )


def classify(
    corpus: Corpus,
    result: ThresholdResult,
    papers: Sequence[Paper],
    method: str,
    esi_low_threshold: bool,
) -> list[HcpDecision]:
    """Inclusive, exclusive, or fractional (whole-set) borderline handling.

    Returns only the positive decisions; papers below the threshold (or an
    entire cell killed by the low-threshold rule) simply yield none.
    """
    if method not in ("inclusive", "exclusive", "fractional_ws"):
        raise ComputationError(f"unknown classification method {method!r}")
    if result.quota == 0 or _low_threshold(result, esi_low_threshold):
        return []
    threshold = result.threshold
    tie_weight = Fraction(result.quota - result.above_count, result.tie_count)
    decisions = []
    for p in sorted(papers, key=lambda p: (-corpus.citations(p.id), p.id)):
        c = corpus.citations(p.id)
        if c > threshold:
            decisions.append(
                HcpDecision(p.id, result.cell, FULL, Fraction(1), method)
            )
        elif c == threshold:
            if method == "inclusive":
                decisions.append(
                    HcpDecision(p.id, result.cell, FULL, Fraction(1), method)
                )
            elif method == "fractional_ws":
                decisions.append(
                    HcpDecision(p.id, result.cell, PARTIAL, tie_weight, method)
                )
    return decisions


# -- tie-break orderings --------------------------------------------------------


@dataclass(frozen=True)
class TiebreakOrdering:
    """Groups of paper ids, best first; a group of several is an unresolved tie."""

    method: str
    groups: tuple[tuple[str, ...], ...]
    evidence: dict[str, str]
    flags: tuple[str, ...]


def _group_by_key(papers, key, method, evidence, flag_note) -> TiebreakOrdering:
    buckets: dict = {}
    for p in papers:
        buckets.setdefault(key(p), []).append(p.id)
    groups = []
    flags = []
    for k in sorted(buckets):
        ids = tuple(sorted(buckets[k]))
        groups.append(ids)
        if len(ids) > 1:
            flags.append(f"{method}: {flag_note} for {', '.join(ids)}")
    return TiebreakOrdering(
        method=method, groups=tuple(groups), evidence=evidence, flags=tuple(flags)
    )


def tiebreak_chronology(papers: Sequence[Paper]) -> TiebreakOrdering:
    """Later effective date first; equal dates are an unresolved, flagged tie."""
    evidence = {}
    for p in papers:
        stamp = p.effective_date()
        if stamp is None:
            raise MissingDateError(f"paper {p.id!r} has no date for the chronology tie-break")
        when, precision, source = stamp
        shown = f"{when.year:04d}-{when.month:02d}" if precision == MONTH else when.isoformat()
        evidence[p.id] = f"{source}:{shown}"

    def key(p: Paper):
        when, _, _ = p.effective_date()
        return (-when.toordinal(),)

    return _group_by_key(papers, key, CHRONOLOGY, evidence, "equal effective dates")


def tiebreak_trajectory(
    corpus: Corpus,
    papers: Sequence[Paper],
    early_window: tuple[int, int] = (0, 4),
    late_window: tuple[int, int] = (5, 9),
) -> TiebreakOrdering:
    """Higher late-to-early citation ratio first.

    The ratio is extended-rational: anything over zero early citations ranks
    above every finite ratio, and a paper with no citations in either window
    (0/0) ranks below everything. Every in-edge of a candidate must be dated.
    """
    TiebreakMethod(TRAJECTORY, early_window, late_window)  # reuse window checks
    in_edges = corpus.in_edges
    keys: dict[str, tuple] = {}
    evidence: dict[str, str] = {}
    for p in papers:
        early = late = 0
        for e in in_edges[p.id]:
            if e.date is None:
                raise MissingDateError(
                    f"edge {e.citing!r}->{e.cited!r} is undated; the trajectory "
                    "tie-break needs dated edges for every candidate"
                )
            offset = e.date.year - p.year
            if early_window[0] <= offset <= early_window[1]:
                early += 1
            elif late_window[0] <= offset <= late_window[1]:
                late += 1
        evidence[p.id] = f"late/early={late}/{early}"
        if early > 0:
            keys[p.id] = (1, -Fraction(late, early))
        elif late > 0:
            keys[p.id] = (0, 0)  # infinite ratio, ahead of all finite ones
        else:
            keys[p.id] = (2, 0)  # 0/0, behind everything

    return _group_by_key(
        papers, lambda p: keys[p.id], TRAJECTORY, evidence, "equal citation trajectories"
    )


def tiebreak_citing_excellence(
    corpus: Corpus,
    papers: Sequence[Paper],
    provisional_hcp: frozenset[str] | set[str],
) -> TiebreakOrdering:
    """More citations from (provisionally) highly cited papers first."""
    in_edges = corpus.in_edges
    counts = {
        p.id: sum(1 for e in in_edges[p.id] if e.citing in provisional_hcp)
        for p in papers
    }
    evidence = {pid: f"citing_hcp={n}" for pid, n in counts.items()}
    return _group_by_key(
        papers,
        lambda p: -counts[p.id],
        CITING_EXCELLENCE,
        evidence,
        "equal citing-excellence counts",
    )


def provisional_hcp_ids(
    corpus: Corpus,
    schema: str,
    top_percent: Fraction | int | str = 1,
    esi_low_threshold: bool = True,
) -> frozenset[str]:
    """One global inclusive pass over all cells, borderline candidates included.

    This is the bootstrap set the citing-excellence tie-break counts against;
    it is computed once, before any tie-breaking, so selection order cannot
    feed back into the evidence.
    """
    selected: set[str] = set()
    for cell, papers in corpus.cells(schema).items():
        result = compute_threshold(corpus, cell, papers, top_percent)
        for d in classify(corpus, result, papers, "inclusive", esi_low_threshold):
            selected.add(d.paper_id)
    return frozenset(selected)


def _run_method(
    corpus: Corpus, method: TiebreakMethod, papers: Sequence[Paper],
    provisional_hcp: frozenset[str] | None,
) -> TiebreakOrdering:
    if method.kind == CHRONOLOGY:
        return tiebreak_chronology(papers)
    if method.kind == TRAJECTORY:
        return tiebreak_trajectory(corpus, papers, method.early_window, method.late_window)
    if provisional_hcp is None:
        raise ComputationError(
            "the citing-excellence tie-break needs a provisional HCP set"
        )
    return tiebreak_citing_excellence(corpus, papers, provisional_hcp)


def select_quota(
    corpus: Corpus,
    result: ThresholdResult,
    papers: Sequence[Paper],
    chain: Sequence[TiebreakMethod],
    provisional_hcp: frozenset[str] | None = None,
) -> list[HcpDecision]:
    """Exactly ``quota`` full decisions: everything above the threshold plus
    tie-broken borderline papers.

    Methods are applied in chain order; each resolves whole groups until one
    straddles the remaining cut, and only that unresolved sub-tie moves on to
    the next method. Exhausting the chain falls back to paper-id order with a
    loud flag in the trace.
    """
    if result.quota < 1:
        raise ComputationError(f"cell {result.cell} has quota 0; nothing to select")
    by_id = {p.id: p for p in papers}
    threshold = result.threshold
    above = sorted(
        (p for p in papers if corpus.citations(p.id) > threshold),
        key=lambda p: (-corpus.citations(p.id), p.id),
    )
    borderline = sorted(
        (p for p in papers if corpus.citations(p.id) == threshold),
        key=lambda p: p.id,
    )
    decisions = [
        HcpDecision(p.id, result.cell, FULL, Fraction(1), "quota") for p in above
    ]
    need = result.quota - len(above)

    def resolve(group: list[Paper], need: int, methods, steps) -> list[tuple[str, list[dict]]]:
        if need <= 0:
            return []
        if len(group) <= need:
            return [(p.id, [dict(s, evidence=s["evidence"].get(p.id, "")) for s in steps])
                    for p in sorted(group, key=lambda p: p.id)]
        if not methods:
            ordered = sorted(group, key=lambda p: p.id)
            logger.warning(
                "tie-break chain exhausted in cell %s; falling back to paper-id "
                "order for %s",
                result.cell,
                ", ".join(p.id for p in ordered),
            )
            chosen = []
            for p in ordered[:need]:
                trace = [dict(s, evidence=s["evidence"].get(p.id, "")) for s in steps]
                trace.append(
                    {"method": "id_order", "evidence": p.id, "tied": False,
                     "chain_exhausted": True}
                )
                chosen.append((p.id, trace))
            return chosen
        method = methods[0]
        ordering = _run_method(corpus, method, group, provisional_hcp)
        for flag in ordering.flags:
            logger.info("tie-break %s", flag)
        chosen: list[tuple[str, list[dict]]] = []
        for ids in ordering.groups:
            if need == 0:
                break
            members = [by_id[i] for i in ids]
            if len(ids) <= need:
                for p in sorted(members, key=lambda p: p.id):
                    trace = [dict(s, evidence=s["evidence"].get(p.id, "")) for s in steps]
                    trace.append(
                        {"method": ordering.method,
                         "evidence": ordering.evidence[p.id], "tied": False}
                    )
                    chosen.append((p.id, trace))
                need -= len(ids)
            else:
                step = {"method": ordering.method, "evidence": ordering.evidence,
                        "tied": True}
                chosen.extend(resolve(members, need, methods[1:], steps + [step]))
                need = 0
        return chosen

    for pid, trace in resolve(borderline, need, list(chain), []):
        decisions.append(
            HcpDecision(
                pid, result.cell, FULL, Fraction(1), "quota",
                trace=tuple(trace) if trace else None,
            )
        )
    decisions.sort(key=lambda d: (-corpus.citations(d.paper_id), d.paper_id))
    return decisions


# -- orchestration ----------------------------------------------------------------


def hcp_run(
    corpus: Corpus,
    schema: str,
    *,
    top_percent: Fraction | int | str = 1,
    method: str = "inclusive",
    esi_low_threshold: bool = True,
    tiebreak_chain: Sequence[TiebreakMethod] = (),
    years=None,
    doc_types=None,
) -> list[HcpDecision]:
    """Run threshold + classification (or quota selection) over every cell."""
    provisional: frozenset[str] | None = None
    if method == "quota" and any(m.kind == CITING_EXCELLENCE for m in tiebreak_chain):
        provisional = provisional_hcp_ids(corpus, schema, top_percent, esi_low_threshold)
    decisions: list[HcpDecision] = []
    for cell, papers in corpus.cells(schema, years, doc_types).items():
        result = compute_threshold(corpus, cell, papers, top_percent)
        if result.quota == 0 or _low_threshold(result, esi_low_threshold):
            continue
        if method == "quota":
            if not tiebreak_chain:
                raise ComputationError("quota selection needs a tie-break chain")
            decisions.extend(
                select_quota(corpus, result, papers, tiebreak_chain, provisional)
            )
        else:
            decisions.extend(classify(corpus, result, papers, method, esi_low_threshold))
    return decisions


@dataclass(frozen=True)
class EntityShare:
    entity: str
    counting: str
    hcp_weight: Fraction
    output_weight: Fraction

    @property
    def share(self) -> Fraction:
        return self.hcp_weight / self.output_weight

    def to_json_dict(self) -> dict:
        return {
            "entity": self.entity,
            "counting": self.counting,
            "hcp_weight": rational_json(self.hcp_weight, 2),
            "output_weight": rational_json(self.output_weight, 2),
            "share": rational_json(self.share, 4),
        }


def entity_hcp_share(
    corpus: Corpus,
    entity: str,
    decisions: Sequence[HcpDecision],
    counting: str = "whole",
) -> EntityShare:
    """Share of an entity's output that is highly cited.

    Whole counting credits a paper fully to every entity with at least one
    author slot on it; fractional counting uses the author-share attribution
    formula on both sides of the ratio. Fractional-status decisions contribute
    their decision weight, so whole-set weights keep summing to the quota.
    """
    if counting not in ("whole", "fractional"):
        raise ComputationError(f"unknown counting scheme {counting!r}")
    output = corpus.papers_of_entity(entity)
    if not output:
        raise EmptyInputError(f"entity {entity!r} has no attributable output")
    if counting == "whole":
        output_weight = Fraction(len(output))
    else:
        output_weight = sum(
            (corpus.entity_attribution(p, entity) for p in output), Fraction(0)
        )
        if output_weight == 0:
            raise EmptyInputError(
                f"entity {entity!r} has zero fractional output weight"
            )
    entity_ids = {p.id for p in output}
    hcp_weight = Fraction(0)
    for d in decisions:
        if d.paper_id in entity_ids and d.weight > 0:
            if counting == "whole":
                hcp_weight += d.weight
            else:
                hcp_weight += d.weight * corpus.entity_attribution(
                    corpus.papers[d.paper_id], entity
                )
    return EntityShare(
        entity=entity, counting=counting,
        hcp_weight=hcp_weight, output_weight=output_weight,
    )


@dataclass(frozen=True)
class FieldExcellenceRow:
    field: str
    total: int
    expected: int
    actual: Fraction

    @property
    def surplus(self) -> Fraction:
        return self.actual - self.expected

    @property
    def real_percent(self) -> Fraction:
        return Fraction(100) * self.actual / self.total


@dataclass(frozen=True)
class ExcellenceReport:
    schema: str
    top_percent: Fraction
    rows: tuple[FieldExcellenceRow, ...]

    def to_csv_text(self) -> str:
        lines = ["field,total,expected,actual,surplus,real_pct"]
        for r in self.rows:
            lines.append(
                f"{r.field},{r.total},{r.expected},{rational_str(r.actual)},"
                f"{rational_str(r.surplus)},{decimal_str(r.real_percent, 3)}"
            )
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> dict:
        return {
            "schema": self.schema,
            "top_percent": rational_str(self.top_percent),
            "rows": [
                {
                    "field": r.field,
                    "total": r.total,
                    "expected": r.expected,
                    "actual": rational_json(r.actual, 2),
                    "surplus": rational_json(r.surplus, 2),
                    "real_pct": rational_json(r.real_percent, 3),
                }
                for r in self.rows
            ],
        }


def hcp_report(
    corpus: Corpus,
    schema: str,
    decisions: Sequence[HcpDecision],
    top_percent: Fraction | int | str = 1,
    years=None,
    doc_types=None,
) -> ExcellenceReport:
    """Per-field expected-versus-actual excellence table.

    Expected is the rounded share of the field's paper total (summed over the
    same year/doc-type slice the decisions were computed on); actual sums the
    decision weights landing in the field.
    """
    share = Fraction(top_percent)
    totals: dict[str, int] = {}
    for cell, papers in corpus.cells(schema, years, doc_types).items():
        totals[cell.field] = totals.get(cell.field, 0) + len(papers)
    if not totals:
        raise EmptyInputError(f"no papers under schema {schema!r} in the given slice")
    actual: dict[str, Fraction] = {f: Fraction(0) for f in totals}
    for d in decisions:
        if d.cell.field in actual:
            actual[d.cell.field] += d.weight
    rows = tuple(
        FieldExcellenceRow(
            field=f,
            total=totals[f],
            expected=round_half_up(share * totals[f] / 100),
            actual=actual[f],
        )
        for f in sorted(totals)
    )
    return ExcellenceReport(schema=schema, top_percent=share, rows=rows)
