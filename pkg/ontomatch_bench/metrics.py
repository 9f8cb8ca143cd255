"""
Evaluation metrics and reference splits.

This module provides deterministic splitting of reference mappings, the
local-ranking metrics (MRR, Hits@K) over scored candidate records and the
global-matching metrics (precision, recall, F-beta) over mapping sets,
including the adjusted precision used when only part of the references is
held out for evaluation.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from ontomatch_bench.exceptions import EmptyInputError
from ontomatch_bench.mappings import MappingSet, Relation
from ontomatch_bench.sampling import CandidateRecord
from ontomatch_bench.seeding import item_rng

logger = logging.getLogger(__name__)

DEFAULT_KS = (1, 5, 10)


# ----------------------------------------------------------------------
# Splits
# ----------------------------------------------------------------------


class SplitScheme(str, Enum):
    """Reference split schemes: 0/10/90 and 20/10/70 train/val/test."""

    UNSUPERVISED = "unsupervised"
    SEMI_SUPERVISED = "semi_supervised"

    @classmethod
    def parse(cls, value: str) -> "SplitScheme":
        """Accept ``semi`` and dashed spellings as well as the member values."""
        normalized = value.strip().lower().replace("-", "_")
        if normalized == "semi":
            normalized = cls.SEMI_SUPERVISED.value
        return cls(normalized)


@dataclass(frozen=True)
class SplitBundle:
    """
    Train/validation/test partition of a reference mapping set.

    Attributes:
        train: Training mappings (empty for the unsupervised scheme).
        val: Validation mappings.
        test: Test mappings.
        seed: Seed the shuffle was drawn with.
        scheme: Split scheme.
    """

    train: MappingSet
    val: MappingSet
    test: MappingSet
    seed: int
    scheme: SplitScheme

    @property
    def sizes(self) -> Dict[str, int]:
        return {"train": len(self.train), "val": len(self.val), "test": len(self.test)}

    def parts(self) -> Dict[str, MappingSet]:
        """Non-empty parts by name; the empty training set is left out."""
        named = {"train": self.train, "val": self.val, "test": self.test}
        if self.scheme is SplitScheme.UNSUPERVISED:
            del named["train"]
        return named


def _round_half_up(n: int, tenths: int) -> int:
    """Round ``n * tenths / 10`` half up, in integer arithmetic."""
    return (n * tenths + 5) // 10


def split_references(
    refs: MappingSet,
    scheme: Union[SplitScheme, str] = SplitScheme.UNSUPERVISED,
    seed: int = 42,
) -> SplitBundle:
    """
    Split reference mappings into train/validation/test sets.

    The references are sorted canonically, shuffled with the seed, and cut
    into consecutive slices: 10% validation and 90% test for the unsupervised
    scheme; 20% train, 10% validation and 70% test for the semi-supervised
    scheme. Slice sizes are rounded half up; the test set takes the rest.

    Args:
        refs: Reference mappings.
        scheme: Split scheme.
        seed: Shuffle seed.

    Returns:
        SplitBundle: Disjoint sets whose union is ``refs``.

    Raises:
        EmptyInputError: If ``refs`` is empty.

    Example:
        >>> bundle = split_references(refs_of_size_100, "semi_supervised")
        >>> bundle.sizes
        {'train': 20, 'val': 10, 'test': 70}
    """
    if not isinstance(scheme, SplitScheme):
        scheme = SplitScheme.parse(scheme)
    n = len(refs)
    if n == 0:
        raise EmptyInputError("cannot split an empty reference set")
    if n < 10:
        logger.warning(f"Splitting only {n} reference mappings; ratios are coarse")

    ordered = list(refs)
    order = item_rng(seed, "split").permutation(n)
    shuffled = [ordered[int(i)] for i in order]

    n_train = _round_half_up(n, 2) if scheme is SplitScheme.SEMI_SUPERVISED else 0
    n_val = _round_half_up(n, 1)
    bundle = SplitBundle(
        train=MappingSet(shuffled[:n_train], refs.relation),
        val=MappingSet(shuffled[n_train : n_train + n_val], refs.relation),
        test=MappingSet(shuffled[n_train + n_val :], refs.relation),
        seed=seed,
        scheme=scheme,
    )
    logger.info(f"Split {n} mappings ({scheme.value}): {bundle.sizes}")
    return bundle


# ----------------------------------------------------------------------
# Local ranking
# ----------------------------------------------------------------------


@dataclass
class RankingReport:
    """
    Local-ranking evaluation result.

    Attributes:
        mrr: Mean reciprocal rank of the positives.
        hits: K -> fraction of positives ranked within the top K.
        n: Number of evaluated reference mappings.
        excluded: Records left out because a score was missing.
    """

    mrr: float = 0.0
    hits: Dict[int, float] = field(default_factory=dict)
    n: int = 0
    excluded: int = 0

    def hits_at(self, k: int) -> float:
        """Hits@K for a K that was evaluated."""
        if k not in self.hits:
            raise KeyError(
                f"Hits@{k} was not evaluated; available: {sorted(self.hits)}"
            )
        return self.hits[k]


def rank_of_positive(tgt_score: float, scores: Sequence[float]) -> int:
    """
    Rank of the positive among its negatives, ties counted against it.

    Example:
        >>> rank_of_positive(0.5, [0.9, 0.5, 0.1])
        3
    """
    negatives = np.asarray(scores, dtype=np.float64)
    return 1 + int(np.count_nonzero(negatives >= tgt_score))


def local_ranking_metrics(
    records: Iterable[CandidateRecord], ks: Sequence[int] = DEFAULT_KS
) -> RankingReport:
    """
    Compute MRR and Hits@K over scored candidate records.

    Args:
        records: Scored candidate records.
        ks: Cut-offs for Hits@K.

    Returns:
        RankingReport: Metrics averaged over the records that carry scores.
        Records without a positive score or with a score list that does not
        match the candidates are excluded and counted.
    """
    ks = sorted({int(k) for k in ks})
    if not ks or ks[0] < 1:
        raise ValueError(f"ks must be positive integers, got {ks}")

    ranks: List[int] = []
    excluded = 0
    for record in records:
        if (
            record.tgt_score is None
            or record.scores is None
            or len(record.scores) != len(record.candidates)
        ):
            excluded += 1
            logger.debug(f"Excluding {record.mapping.key}: missing scores")
            continue
        ranks.append(rank_of_positive(record.tgt_score, record.scores))

    if excluded:
        logger.warning(f"Excluded {excluded} records without complete scores")
    if not ranks:
        logger.warning("No scored records to evaluate")
        return RankingReport(hits={k: 0.0 for k in ks}, excluded=excluded)

    rank_array = np.asarray(ranks, dtype=np.float64)
    report = RankingReport(
        mrr=float(np.mean(1.0 / rank_array)),
        hits={k: float(np.mean(rank_array <= k)) for k in ks},
        n=len(ranks),
        excluded=excluded,
    )
    logger.info(f"Ranking: MRR={report.mrr:.4f} over {report.n} mappings")
    return report


# ----------------------------------------------------------------------
# Global matching
# ----------------------------------------------------------------------


def f_beta_score(precision: float, recall: float, beta: float = 1.0) -> float:
    """
    Weighted harmonic mean of precision and recall; 0 when either is 0.

    Example:
        >>> round(f_beta_score(0.819, 0.499), 3)
        0.62
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    b2 = beta * beta
    denominator = b2 * precision + recall
    if precision == 0.0 or recall == 0.0 or denominator == 0.0:
        return 0.0
    return (1 + b2) * precision * recall / denominator


@dataclass
class MatchReport:
    """
    Global-matching evaluation result.

    Attributes:
        precision: Precision (adjusted when an evaluation subset was given).
        recall: Recall, or None where it is not reported (subsumption).
        f_beta: F-beta score, or None along with recall.
        beta: Weight of recall in the F score.
        n_out: Size of the precision denominator.
        n_ref: Number of reference (or evaluation) mappings.
        n_hit: Correct system mappings.
        precision_undefined: True if the precision denominator was empty.
    """

    precision: float
    recall: Optional[float]
    f_beta: Optional[float]
    beta: float = 1.0
    n_out: int = 0
    n_ref: int = 0
    n_hit: int = 0
    precision_undefined: bool = False

    @property
    def f_key(self) -> str:
        return f"F{self.beta:g}"


def global_matching_metrics(
    m_out: MappingSet,
    m_ref: MappingSet,
    m_eval: Optional[MappingSet] = None,
    beta: float = 1.0,
) -> MatchReport:
    """
    Compare a system's output mappings with the reference mappings.

    With an evaluation subset (e.g. the test split), output mappings that
    are references outside the subset are ignored when computing precision:
    ``P = |M_out & M_eval| / |M_out - (M_ref - M_eval)|``.

    Args:
        m_out: System output mappings.
        m_ref: Full reference mappings.
        m_eval: Optional evaluation subset of ``m_ref``.
        beta: Weight of recall in the F score.

    Returns:
        MatchReport: Precision, recall and F-beta. Recall and F-beta are
        None for subsumption references.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if m_eval is None:
        m_eval = m_ref
        considered = m_out
    else:
        stray = len(m_eval - m_ref)
        if stray:
            logger.warning(f"{stray} evaluation mappings are not reference mappings")
        considered = m_out - (m_ref - m_eval)

    n_hit = len(m_out & m_eval)
    precision_undefined = len(considered) == 0
    if precision_undefined:
        logger.warning(
            "System output is empty after exclusions; precision reported as 0"
        )
    precision = 0.0 if precision_undefined else n_hit / len(considered)

    recall: Optional[float] = None
    f_beta: Optional[float] = None
    if m_ref.relation is not Relation.SUBSUMPTION:
        recall = n_hit / len(m_eval) if len(m_eval) else 0.0
        f_beta = f_beta_score(precision, recall, beta)

    return MatchReport(
        precision=precision,
        recall=recall,
        f_beta=f_beta,
        beta=beta,
        n_out=len(considered),
        n_ref=len(m_eval),
        n_hit=n_hit,
        precision_undefined=precision_undefined,
    )


def hit_accuracy(m_out: MappingSet, m_eval: MappingSet) -> float:
    """Fraction of evaluation mappings found verbatim in the system output."""
    if not len(m_eval):
        return 0.0
    return len(m_eval & m_out) / len(m_eval)


def to_report_dict(
    ranking: Optional[RankingReport] = None,
    matching: Optional[MatchReport] = None,
    accuracy: Optional[float] = None,
) -> Dict[str, Any]:
    """
    Render evaluation results in the report JSON layout.

    Fields that were not computed are None.
    """
    f_key = matching.f_key if matching is not None else "F1"
    report: Dict[str, Any] = {
        "MRR": ranking.mrr if ranking else None,
        "Hits": {str(k): v for k, v in ranking.hits.items()} if ranking else None,
        "P": matching.precision if matching else None,
        "R": matching.recall if matching else None,
        f_key: matching.f_beta if matching else None,
    }
    if accuracy is not None:
        report["Accuracy"] = accuracy
    if ranking is not None:
        report["n"] = ranking.n
        report["excluded"] = ranking.excluded
    if matching is not None:
        report["precision_undefined"] = matching.precision_undefined
    return report
