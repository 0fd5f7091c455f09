"""Exact-arithmetic bibliometric indicators.

Journal rankings with percentiles and quartiles, field-normalized citation
impact under whole and fractional counting, highly cited paper selection with
deterministic tie-breaking, and a seeded synthetic-corpus simulator. All
indicator math is exact rational; rounding happens only at the display edge.
"""
from .corpus import (
    AuthorCredit,
    CellKey,
    CitationEdge,
    Corpus,
    Journal,
    Paper,
    SchemaInfo,
    ValidationReport,
    validate,
)
from .errors import (
    BiblioError,
    ComputationError,
    EmptyInputError,
    LoadError,
    MissingDateError,
    ZeroBaselineError,
)
from .excellence import (
    EntityShare,
    ExcellenceReport,
    HcpDecision,
    ThresholdResult,
    TiebreakMethod,
    classify,
    compute_threshold,
    entity_hcp_share,
    hcp_report,
    hcp_run,
    parse_tiebreak_chain,
    provisional_hcp_ids,
    select_quota,
    tiebreak_chronology,
    tiebreak_citing_excellence,
    tiebreak_trajectory,
)
from .io import LoadReport, dump_corpus, load_corpus
from .normalization import (
    BaselineTable,
    CnciConfig,
    cnci_paper,
    cnci_set,
    compute_baselines,
    global_cnci,
    nci_ratio_of_averages,
    relative_cnci,
)
from .ranking import (
    Quartile,
    RankedCategory,
    assign_quartiles,
    average_percentile,
    best_quartile,
    boundary_ties,
    percentile,
    quartile_distribution,
    quartile_of_rank,
    quartile_partition,
    rank_category,
)
from .rounding import (
    decimal_str,
    parse_rational,
    rational_json,
    rational_str,
    round_half_up,
)
from .synthesis import (
    CitationModel,
    GenConfig,
    SizeDist,
    SurplusEstimate,
    generate_corpus,
    monte_carlo_global_cnci,
    monte_carlo_surplus,
    surplus_analytic,
)

__version__ = "0.1.0"

__all__ = [
    "AuthorCredit",
    "BaselineTable",
    "BiblioError",
    "CellKey",
    "CitationEdge",
    "CitationModel",
    "CnciConfig",
    "ComputationError",
    "Corpus",
    "EmptyInputError",
    "EntityShare",
    "ExcellenceReport",
    "GenConfig",
    "HcpDecision",
    "Journal",
    "LoadError",
    "LoadReport",
    "MissingDateError",
    "Paper",
    "Quartile",
    "RankedCategory",
    "SchemaInfo",
    "SizeDist",
    "SurplusEstimate",
    "ThresholdResult",
    "TiebreakMethod",
    "ValidationReport",
    "ZeroBaselineError",
    "assign_quartiles",
    "average_percentile",
    "best_quartile",
    "boundary_ties",
    "classify",
    "cnci_paper",
    "cnci_set",
    "compute_baselines",
    "compute_threshold",
    "decimal_str",
    "dump_corpus",
    "entity_hcp_share",
    "generate_corpus",
    "global_cnci",
    "hcp_report",
    "hcp_run",
    "load_corpus",
    "monte_carlo_global_cnci",
    "monte_carlo_surplus",
    "nci_ratio_of_averages",
    "parse_rational",
    "parse_tiebreak_chain",
    "percentile",
    "provisional_hcp_ids",
    "quartile_distribution",
    "quartile_of_rank",
    "quartile_partition",
    "rank_category",
    "rational_json",
    "rational_str",
    "relative_cnci",
    "round_half_up",
    "select_quota",
    "surplus_analytic",
    "tiebreak_chronology",
    "tiebreak_citing_excellence",
    "tiebreak_trajectory",
    "validate",
]
