"""
ontomatch-bench - Ontology matching benchmark construction and evaluation.

This library builds machine-learning-friendly ontology matching datasets
(ontology pruning, equivalence and subsumption reference mappings, negative
candidates, data splits) and evaluates matchers with local-ranking and
global-matching metrics, including an edit-distance baseline matcher.
"""

from __future__ import annotations

from ontomatch_bench.datasets import (
    HubTable,
    SubsumptionBuildResult,
    build_subsumption_dataset,
    extract_equivalence,
    prune,
)
from ontomatch_bench.editsim import EditSimMatcher, MatcherConfig, edit_similarity
from ontomatch_bench.exceptions import (
    EmptyInputError,
    InfeasiblePlanError,
    MalformedDocumentError,
    OntoBenchError,
    SchemaError,
    UnknownClassError,
)
from ontomatch_bench.importers import (
    ImportConfig,
    export_json,
    import_json,
    import_rdfxml_subset,
    preprocess,
)
from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from ontomatch_bench.metrics import (
    MatchReport,
    RankingReport,
    SplitBundle,
    global_matching_metrics,
    local_ranking_metrics,
    split_references,
)
from ontomatch_bench.ontology import ClassRecord, OntologySnapshot
from ontomatch_bench.sampling import (
    CandidateRecord,
    InvertedIndex,
    SamplingPlan,
    build_inverted_index,
    generate_negative_candidates,
)

__version__ = "0.3.0"
__all__ = [
    "CandidateRecord",
    "ClassRecord",
    "EditSimMatcher",
    "EmptyInputError",
    "HubTable",
    "ImportConfig",
    "InfeasiblePlanError",
    "InvertedIndex",
    "MalformedDocumentError",
    "Mapping",
    "MappingSet",
    "MatchReport",
    "MatcherConfig",
    "OntoBenchError",
    "OntologySnapshot",
    "RankingReport",
    "Relation",
    "SamplingPlan",
    "SchemaError",
    "SplitBundle",
    "SubsumptionBuildResult",
    "UnknownClassError",
    "build_inverted_index",
    "build_subsumption_dataset",
    "edit_similarity",
    "export_json",
    "extract_equivalence",
    "generate_negative_candidates",
    "global_matching_metrics",
    "import_json",
    "import_rdfxml_subset",
    "local_ranking_metrics",
    "preprocess",
    "prune",
    "split_references",
]
