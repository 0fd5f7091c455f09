"""Synthetic corpora and Monte Carlo experiments.

The generator is deterministic: one config (whose seed is part of it) yields
byte-identical corpora, and each Monte Carlo trial draws from its own stream
seeded by (seed, trial index), so results do not depend on worker layout or
trial order. Streams come from :class:`random.Random` string seeding, which
hashes through SHA-512 and is documented stable across Python versions.

Generated corpora carry explicit citation counts rather than edge lists; the
corpus module accepts those, and nothing in these experiments needs individual
citing papers. The ``BIBLIO_THREADS`` environment variable caps how many
worker processes the Monte Carlo drivers may use (default 1, serial).
"""
from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .corpus import AuthorCredit, Corpus, Journal, Paper, SchemaInfo
from .errors import ComputationError
from .normalization import CnciConfig, global_cnci
from .ranking import quartile_partition
from .rounding import round_half_up

# Remainder r = n mod 4 decides which quartiles get one journal more than Q1.
_EXTRA_PATTERN = {0: (0, 0, 0), 1: (0, 0, 1), 2: (1, 0, 1), 3: (1, 1, 1)}


@dataclass(frozen=True)
class SizeDist:
    """Integer size distribution: a fixed value or a uniform inclusive range."""

    kind: str
    value: int = 0
    low: int = 0
    high: int = 0

    def __post_init__(self):
        if self.kind not in ("fixed", "uniform"):
            raise ComputationError(f"unknown size distribution {self.kind!r}")
        if self.kind == "uniform" and self.low > self.high:
            raise ComputationError("uniform range must have low <= high")

    @classmethod
    def fixed(cls, value: int) -> "SizeDist":
        return cls(kind="fixed", value=value)

    @classmethod
    def uniform(cls, low: int, high: int) -> "SizeDist":
        return cls(kind="uniform", low=low, high=high)

    @classmethod
    def from_config(cls, raw) -> "SizeDist":
        if isinstance(raw, int):
            return cls.fixed(raw)
        if "fixed" in raw:
            return cls.fixed(int(raw["fixed"]))
        if "uniform" in raw:
            low, high = raw["uniform"]
            return cls.uniform(int(low), int(high))
        raise ComputationError(f"unrecognized size distribution {raw!r}")

    def to_config(self):
        if self.kind == "fixed":
            return {"fixed": self.value}
        return {"uniform": [self.low, self.high]}

    def sample(self, rng: random.Random) -> int:
        if self.kind == "fixed":
            return self.value
        return rng.randint(self.low, self.high)

    def remainder_weights(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        """Exact distribution of size mod 4 under this spec."""
        if self.kind == "fixed":
            weights = [Fraction(0)] * 4
            weights[self.value % 4] = Fraction(1)
            return tuple(weights)
        span = self.high - self.low + 1
        counts = [0, 0, 0, 0]
        for r in range(4):
            first = self.low + (r - self.low) % 4
            if first <= self.high:
                counts[r] = (self.high - first) // 4 + 1
        return tuple(Fraction(c, span) for c in counts)


@dataclass(frozen=True)
class CitationModel:
    """Heavy-tailed nonnegative integer citation counts.

    ``lognormal`` is floor(exp(N(mu, sigma))) + shift and can emit zeros when
    the shift is 0; ``yule`` has support >= 1 + shift, which the closed-corpus
    mean pins rely on (a fully uncited cell degrades the average by design).
    """

    kind: str = "lognormal"
    mu: float = 0.5
    sigma: float = 1.0
    rho: float = 2.0
    shift: int = 0

    def __post_init__(self):
        if self.kind not in ("lognormal", "yule"):
            raise ComputationError(f"unknown citation model {self.kind!r}")

    @classmethod
    def from_config(cls, raw) -> "CitationModel":
        return cls(
            kind=raw.get("kind", "lognormal"),
            mu=float(raw.get("mu", 0.5)),
            sigma=float(raw.get("sigma", 1.0)),
            rho=float(raw.get("rho", 2.0)),
            shift=int(raw.get("shift", 0)),
        )

    def to_config(self):
        if self.kind == "lognormal":
            return {"kind": "lognormal", "mu": self.mu, "sigma": self.sigma, "shift": self.shift}
        return {"kind": "yule", "rho": self.rho, "shift": self.shift}

    def sample(self, rng: random.Random) -> int:
        if self.kind == "lognormal":
            return int(math.exp(rng.gauss(self.mu, self.sigma))) + self.shift
        # Yule via its exponential-geometric mixture representation.
        w = rng.expovariate(self.rho)
        p = math.exp(-w)
        u = rng.random()
        if p >= 1.0:
            return 1 + self.shift
        return 1 + int(math.log(1.0 - u) / math.log(1.0 - p)) + self.shift


@dataclass(frozen=True)
class GenConfig:
    """Everything the corpus generator needs, seed included."""

    seed: int
    num_categories: int
    journals_per_category: SizeDist
    papers_per_journal: SizeDist
    multi_attribution_prob: float = 0.0
    max_categories_per_journal: int = 3
    citation_model: CitationModel = field(default_factory=CitationModel)
    years: tuple[int, ...] = (2020,)
    doc_type_mix: tuple[tuple[str, float], ...] = (("article", 1.0),)
    correlate_volume_with_metric: bool = True
    multi_field_citation_boost: float = 1.0
    schema_name: str = "synthetic"

    def __post_init__(self):
        if self.num_categories < 1:
            raise ComputationError("need at least one category")
        if not 0.0 <= self.multi_attribution_prob <= 1.0:
            raise ComputationError("multi_attribution_prob must be in [0, 1]")
        if not 1 <= self.max_categories_per_journal <= 3:
            raise ComputationError("max_categories_per_journal must be 1..3")
        if not self.years:
            raise ComputationError("need at least one publication year")
        if not self.doc_type_mix:
            raise ComputationError("doc_type_mix must not be empty")

    @classmethod
    def from_dict(cls, raw: dict) -> "GenConfig":
        mix = raw.get("doc_type_mix", {"article": 1.0})
        return cls(
            seed=int(raw["seed"]),
            num_categories=int(raw["num_categories"]),
            journals_per_category=SizeDist.from_config(raw["journals_per_category"]),
            papers_per_journal=SizeDist.from_config(raw["papers_per_journal"]),
            multi_attribution_prob=float(raw.get("multi_attribution_prob", 0.0)),
            max_categories_per_journal=int(raw.get("max_categories_per_journal", 3)),
            citation_model=CitationModel.from_config(raw.get("citation_model", {})),
            years=tuple(int(y) for y in raw.get("years", [2020])),
            doc_type_mix=tuple(sorted((str(k), float(v)) for k, v in mix.items())),
            correlate_volume_with_metric=bool(raw.get("correlate_volume_with_metric", True)),
            multi_field_citation_boost=float(raw.get("multi_field_citation_boost", 1.0)),
            schema_name=str(raw.get("schema_name", "synthetic")),
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "num_categories": self.num_categories,
            "journals_per_category": self.journals_per_category.to_config(),
            "papers_per_journal": self.papers_per_journal.to_config(),
            "multi_attribution_prob": self.multi_attribution_prob,
            "max_categories_per_journal": self.max_categories_per_journal,
            "citation_model": self.citation_model.to_config(),
            "years": list(self.years),
            "doc_type_mix": {k: v for k, v in self.doc_type_mix},
            "correlate_volume_with_metric": self.correlate_volume_with_metric,
            "multi_field_citation_boost": self.multi_field_citation_boost,
            "schema_name": self.schema_name,
        }


def _stream(config: GenConfig, label: str) -> random.Random:
    return random.Random(f"{config.seed}/{label}")


def generate_corpus(config: GenConfig, trial: int | None = None) -> Corpus:
    """Build a synthetic corpus; identical (config, trial) gives identical bytes.

    Journals are homed in one category each and may gain up to two foreign
    categories with probability ``multi_attribution_prob`` per extra slot.
    When volume correlation is on, within each home category the journals with
    the higher metric publish the larger drawn volumes.
    """
    rng = _stream(config, "corpus" if trial is None else f"corpus/{trial}")
    cats = [f"cat{i:02d}" for i in range(1, config.num_categories + 1)]
    schema = config.schema_name

    journals: list[Journal] = []
    homes: dict[str, list[int]] = {c: [] for c in cats}
    memberships: list[list[str]] = []
    for cat in cats:
        for j in range(config.journals_per_category.sample(rng)):
            homes[cat].append(len(journals))
            memberships.append([cat])
            journals.append(None)  # placeholder; filled after categories settle
    for index, cat_list in enumerate(memberships):
        while (
            len(cat_list) < config.max_categories_per_journal
            and len(cat_list) < len(cats)
            and rng.random() < config.multi_attribution_prob
        ):
            foreign = [c for c in cats if c not in cat_list]
            cat_list.append(rng.choice(foreign))

    metrics: list[dict[int, Fraction]] = []
    for index, cat_list in enumerate(memberships):
        metrics.append(
            {y: Fraction(str(round(rng.lognormvariate(0.0, 0.5), 3))) for y in config.years}
        )
    for index, cat_list in enumerate(memberships):
        home = cat_list[0]
        jid = f"{home}-j{homes[home].index(index):03d}"
        journals[index] = Journal(
            id=jid, categories={schema: tuple(cat_list)}, metric_by_year=metrics[index]
        )

    papers: list[Paper] = []
    counts: dict[str, int] = {}
    doc_types = [t for t, _ in config.doc_type_mix]
    weights = [w for _, w in config.doc_type_mix]
    for year in config.years:
        for cat in cats:
            indexes = homes[cat]
            volumes = [config.papers_per_journal.sample(rng) for _ in indexes]
            if config.correlate_volume_with_metric:
                by_metric = sorted(
                    indexes, key=lambda i: (-metrics[i][year], journals[i].id)
                )
                paired = dict(zip(by_metric, sorted(volumes, reverse=True)))
            else:
                paired = dict(zip(indexes, volumes))
            for index in indexes:
                journal = journals[index]
                k = len(journal.categories[schema])
                for _ in range(paired[index]):
                    pid = f"p{len(papers):06d}"
                    doc_type = rng.choices(doc_types, weights=weights)[0]
                    c = config.citation_model.sample(rng)
                    if k >= 2 and config.multi_field_citation_boost != 1.0:
                        c = int(round(c * config.multi_field_citation_boost))
                    counts[pid] = c
                    papers.append(
                        Paper(
                            id=pid,
                            journal_id=journal.id,
                            year=year,
                            doc_type=doc_type,
                            authors=(
                                AuthorCredit(f"au-{pid}", (f"org-{journal.id}",)),
                            ),
                        )
                    )

    info = SchemaInfo(name=schema, single_attribution=config.multi_attribution_prob == 0.0)
    return Corpus(
        schemas=[info],
        journals=journals,
        papers=papers,
        edges=None,
        citation_counts=counts,
    )


# -- quartile surplus -----------------------------------------------------------


@dataclass(frozen=True)
class SurplusEstimate:
    """Analytic per-quartile journal counts when every category is cut at floors.

    ``extras`` are the expected surpluses of Q2, Q3, Q4 over Q1 across all
    categories; ``totals`` are integer per-quartile totals obtained from the
    exact solution by largest-remainder rounding, handing leftover units to
    the smallest exact totals first, so the grand total is always preserved.
    """

    num_categories: int
    total_journals: int
    extras: tuple[int, int, int]
    totals: tuple[int, int, int, int]
    exact_totals: tuple[Fraction, Fraction, Fraction, Fraction]
    max_relative_deviation: Fraction


def _expected_extras(
    num_categories: int, weights: tuple[Fraction, Fraction, Fraction, Fraction]
) -> tuple[int, int, int]:
    w0, w1, w2, w3 = weights
    expected = (w2 + w3, w3, w1 + w2 + w3)
    return tuple(round_half_up(Fraction(num_categories) * e) for e in expected)


def surplus_analytic(
    num_categories: int,
    total_journals: int,
    remainder_weights: tuple[Fraction, Fraction, Fraction, Fraction] | None = None,
) -> SurplusEstimate:
    """Expected quartile imbalance from floor cuts alone.

    With remainders uniform mod 4 the expected per-category extras over Q1 are
    (1/2, 1/4, 3/4) for (Q2, Q3, Q4); pass explicit remainder weights for a
    non-uniform size distribution.
    """
    if num_categories < 1 or total_journals < num_categories:
        raise ComputationError("need >= 1 category and >= 1 journal per category")
    if remainder_weights is None:
        remainder_weights = (Fraction(1, 4),) * 4
    if sum(remainder_weights) != 1:
        raise ComputationError("remainder weights must sum to 1")
    extras = _expected_extras(num_categories, remainder_weights)
    q1 = Fraction(total_journals - sum(extras), 4)
    if q1 < 0:
        raise ComputationError("too few journals for the floor-cut surplus model")
    exact = (q1, q1 + extras[0], q1 + extras[1], q1 + extras[2])
    floors = [int(x) for x in exact]
    leftover = total_journals - sum(floors)
    order = sorted(range(4), key=lambda i: (exact[i], i))
    totals = list(floors)
    for i in order[:leftover]:
        totals[i] += 1
    mean = Fraction(total_journals, 4)
    deviation = max(abs(Fraction(t) - mean) for t in totals) / mean
    return SurplusEstimate(
        num_categories=num_categories,
        total_journals=total_journals,
        extras=extras,
        totals=tuple(totals),
        exact_totals=exact,
        max_relative_deviation=deviation,
    )


def _env_workers() -> int:
    raw = os.environ.get("BIBLIO_THREADS", "").strip()
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _chunks(trials: int, workers: int):
    size = -(-trials // workers)
    return [(a, min(a + size, trials)) for a in range(0, trials, size)]


def _surplus_rows(config: GenConfig, start: int, stop: int):
    rows = []
    for t in range(start, stop):
        rng = _stream(config, f"surplus/{t}")
        totals = [0, 0, 0, 0]
        for _ in range(config.num_categories):
            counts = quartile_partition(config.journals_per_category.sample(rng)).counts
            for q in range(4):
                totals[q] += counts[q]
        rows.append(tuple(totals))
    return rows


def _mean_se(values: list[int]) -> tuple[Fraction, float | None]:
    n = len(values)
    mean = Fraction(sum(values), n)
    if n < 2:
        return mean, None
    var = sum((Fraction(v) - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(float(var) / n)


@dataclass(frozen=True)
class SurplusMonteCarlo:
    trials: int
    analytic_extras: tuple[int, int, int]
    mean_totals: tuple[Fraction, Fraction, Fraction, Fraction]
    se_totals: tuple[float | None, ...]
    mean_extras: tuple[Fraction, Fraction, Fraction]
    se_extras: tuple[float | None, ...]
    per_trial_totals: tuple[tuple[int, int, int, int], ...]
    flagged: tuple[str, ...]  # extras where the analytic value fell outside mean +- 3 SE

    @property
    def agrees(self) -> bool:
        return not self.flagged


def monte_carlo_surplus(
    config: GenConfig, trials: int, workers: int | None = None
) -> SurplusMonteCarlo:
    """Sample category sizes per trial and accumulate quartile totals.

    The analytic expectation uses the exact remainder distribution of the
    configured size spec, so fixed multiples of four really do predict zero
    extras. A quartile's surplus is flagged when the analytic value falls
    outside the Monte Carlo mean plus or minus three standard errors (for a
    zero-variance run, when it differs at all).
    """
    if trials < 1:
        raise ComputationError("need at least one trial")
    workers = _env_workers() if workers is None else max(1, workers)
    if workers > 1 and trials >= 2 * workers:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                _surplus_rows,
                *zip(*[(config, a, b) for a, b in _chunks(trials, workers)]),
            )
            rows = [row for part in parts for row in part]
    else:
        rows = _surplus_rows(config, 0, trials)

    analytic = _expected_extras(
        config.num_categories, config.journals_per_category.remainder_weights()
    )
    totals_stats = [_mean_se([r[q] for r in rows]) for q in range(4)]
    extras_rows = [(r[1] - r[0], r[2] - r[0], r[3] - r[0]) for r in rows]
    extras_stats = [_mean_se([r[i] for r in extras_rows]) for i in range(3)]
    flagged = []
    for i, label in enumerate(("Q2", "Q3", "Q4")):
        mean, se = extras_stats[i]
        if se is None or se == 0.0:
            if mean != analytic[i] and trials > 1:
                flagged.append(label)
        elif abs(float(mean) - analytic[i]) > 3 * se:
            flagged.append(label)
    return SurplusMonteCarlo(
        trials=trials,
        analytic_extras=analytic,
        mean_totals=tuple(s[0] for s in totals_stats),
        se_totals=tuple(s[1] for s in totals_stats),
        mean_extras=tuple(s[0] for s in extras_stats),
        se_extras=tuple(s[1] for s in extras_stats),
        per_trial_totals=tuple(rows),
        flagged=tuple(flagged),
    )


# -- global CNCI across counting regimes ------------------------------------------


REGIMES: tuple[tuple[str, str, str, bool], ...] = (
    ("whole_aor", "whole", "aor", False),
    ("fractional_aor", "fractional", "aor", False),
    ("whole_roa", "whole", "roa", False),
    ("whole_roa_split", "whole", "roa", True),
    ("fractional_roa", "fractional", "roa", False),
)

# Regimes the closed-corpus theorem pins to exactly 1 (when every cell holds a
# cited paper); violations are counted, never silently absorbed.
PINNED_REGIMES = ("fractional_aor", "whole_roa_split")


@dataclass(frozen=True)
class RegimeStats:
    name: str
    minimum: Fraction
    mean: Fraction
    maximum: Fraction
    pinned: bool
    violations: int


@dataclass(frozen=True)
class CnciMonteCarlo:
    trials: int
    regimes: dict[str, RegimeStats]

    @property
    def all_pins_hold(self) -> bool:
        return all(r.violations == 0 for r in self.regimes.values() if r.pinned)


def _cnci_rows(config: GenConfig, start: int, stop: int):
    rows = []
    for t in range(start, stop):
        corpus = generate_corpus(config, trial=t)
        row = {}
        for name, counting, aggregation, split in REGIMES:
            value = global_cnci(
                corpus,
                config.schema_name,
                CnciConfig(counting=counting, aggregation=aggregation, split_citations=split),
            )
            row[name] = value
        rows.append(row)
    return rows


def monte_carlo_global_cnci(
    config: GenConfig, trials: int, workers: int | None = None
) -> CnciMonteCarlo:
    """Global CNCI of freshly generated corpora under every counting regime."""
    if trials < 1:
        raise ComputationError("need at least one trial")
    workers = _env_workers() if workers is None else max(1, workers)
    if workers > 1 and trials >= 2 * workers:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(
                _cnci_rows,
                *zip(*[(config, a, b) for a, b in _chunks(trials, workers)]),
            )
            rows = [row for part in parts for row in part]
    else:
        rows = _cnci_rows(config, 0, trials)

    regimes = {}
    for name, *_ in REGIMES:
        values = [row[name] for row in rows]
        pinned = name in PINNED_REGIMES
        regimes[name] = RegimeStats(
            name=name,
            minimum=min(values),
            mean=sum(values, Fraction(0)) / len(values),
            maximum=max(values),
            pinned=pinned,
            violations=sum(1 for v in values if v != 1) if pinned else 0,
        )
    return CnciMonteCarlo(trials=trials, regimes=regimes)
