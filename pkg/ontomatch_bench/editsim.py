"""
EditSim baseline matcher.

EditSim scores a pair of classes by the best normalized edit similarity over
all combinations of their labels. Matching retrieves candidate targets for
each source class from the sub-word inverted index, keeps pairs that reach a
threshold and emits the best target per source. The same scorer attaches
scores to candidate files for local-ranking evaluation.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, List, Optional, Sequence, Tuple

from rapidfuzz.distance import Levenshtein
from tqdm import tqdm

from ontomatch_bench.importers import DEFAULT_SYNONYM_PROPERTIES
from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from ontomatch_bench.metrics import MatchReport, global_matching_metrics
from ontomatch_bench.ontology import OntologySnapshot
from ontomatch_bench.sampling import CandidateRecord, InvertedIndex, idf_sample

logger = logging.getLogger(__name__)


def normalize_label(label: str) -> str:
    """Lowercase and collapse whitespace."""
    return " ".join(label.lower().split())


def _normalized(labels: Iterable[str]) -> List[str]:
    return list(dict.fromkeys(n for n in map(normalize_label, labels) if n))


def edit_similarity(labels_a: Iterable[str], labels_b: Iterable[str]) -> float:
    """
    Maximum normalized edit similarity over all label pairs.

    The similarity of two labels is ``1 - levenshtein(a, b) / max(|a|, |b|)``
    after lowercasing and whitespace collapsing.

    Args:
        labels_a: Labels of the first class.
        labels_b: Labels of the second class.

    Returns:
        float: Score in [0, 1]; 0 if either side has no usable label.

    Example:
        >>> round(edit_similarity(["kitten"], ["sitting"]), 4)
        0.5714
        >>> edit_similarity(["Cardiac arrest", "Heart  attack"], ["heart attack"])
        1.0
    """
    a = _normalized(labels_a)
    b = _normalized(labels_b)
    if not a or not b:
        return 0.0

    best = 0.0
    for left in a:
        for right in b:
            score = Levenshtein.normalized_similarity(left, right)
            if score > best:
                best = score
                if best >= 1.0:
                    return 1.0
    return best


@dataclass
class MatcherConfig:
    """
    EditSim settings.

    Attributes:
        threshold: Minimum score of an emitted mapping.
        candidate_k: Target candidates retrieved per source class.
        synonym_properties: Annotation properties whose values are labels.
        one_best: Emit only the best target per source class; otherwise
                  every pair reaching the threshold.
    """

    threshold: float = 0.9
    candidate_k: int = 200
    synonym_properties: Tuple[str, ...] = DEFAULT_SYNONYM_PROPERTIES
    one_best: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(
                f"threshold must be between 0.0 and 1.0, got {self.threshold}"
            )
        if self.candidate_k < 1:
            raise ValueError(f"candidate_k must be at least 1, got {self.candidate_k}")
        self.synonym_properties = tuple(self.synonym_properties)


@dataclass
class MatcherStats:
    """Counts of the last matching run."""

    sources: int = 0
    unlabelled: int = 0
    matched: int = 0


class EditSimMatcher:
    """
    Threshold-filtered edit similarity matcher.

    Example:
        >>> matcher = EditSimMatcher(MatcherConfig(threshold=0.9))
        >>> output = matcher.match(onto_src, onto_tgt, index)
        >>> matcher.stats.unlabelled
        0
    """

    def __init__(self, config: Optional[MatcherConfig] = None) -> None:
        self.config = config or MatcherConfig()
        self._stats = MatcherStats()

    @property
    def stats(self) -> MatcherStats:
        """
        Counts of the last ``match`` call.

        Note:
            Populated only after ``match`` returns.
        """
        return self._stats

    def match(
        self,
        onto_src: OntologySnapshot,
        onto_tgt: OntologySnapshot,
        index: InvertedIndex,
        jobs: int = 1,
        progress: bool = False,
    ) -> MappingSet:
        """
        Match every source class against the target ontology.

        Args:
            onto_src: Source ontology.
            onto_tgt: Target ontology.
            index: Inverted index of ``onto_tgt``.
            jobs: Worker threads.
            progress: Whether to show a progress bar.

        Returns:
            MappingSet: Scored equivalence mappings sorted by source; at
            most one per source class in one-best mode.
        """
        cfg = self.config
        properties = list(cfg.synonym_properties)

        def match_one(src: str) -> Optional[List[Mapping]]:
            labels = onto_src.get(src).label_strings(properties)
            if not _normalized(labels):
                return None
            query = index.tokenizer.tokenize(labels)
            scored: List[Tuple[float, str]] = []
            for tgt in idf_sample(index, query, cfg.candidate_k):
                score = edit_similarity(
                    labels, onto_tgt.get(tgt).label_strings(properties)
                )
                if score >= cfg.threshold:
                    scored.append((score, tgt))
            scored.sort(key=lambda pair: (-pair[0], pair[1]))
            if cfg.one_best:
                scored = scored[:1]
            logger.debug(f"{src}: {len(scored)} targets above {cfg.threshold}")
            return [Mapping(src, tgt, Relation.EQUIVALENCE, s) for s, tgt in scored]

        sources = list(onto_src.classes)
        bar = tqdm(total=len(sources), desc="EditSim matching", disable=not progress)
        found: List[Mapping] = []
        unlabelled = 0

        def collect(result: Optional[List[Mapping]]) -> None:
            nonlocal unlabelled
            if result is None:
                unlabelled += 1
            else:
                found.extend(result)
            bar.update()

        if jobs <= 1:
            for src in sources:
                collect(match_one(src))
        else:
            with ThreadPoolExecutor(max_workers=jobs) as executor:
                for result in executor.map(match_one, sources):
                    collect(result)
        bar.close()

        output = MappingSet(found, Relation.EQUIVALENCE)
        self._stats = MatcherStats(
            sources=len(sources), unlabelled=unlabelled, matched=len(output)
        )
        if unlabelled:
            logger.warning(f"Skipped {unlabelled} source classes without labels")
        logger.info(
            f"EditSim emitted {len(output)} mappings for {len(sources)} classes"
        )
        return output


def score_candidates(
    records: Sequence[CandidateRecord],
    onto_src: OntologySnapshot,
    onto_tgt: OntologySnapshot,
    synonym_properties: Optional[Iterable[str]] = None,
    progress: bool = False,
) -> List[CandidateRecord]:
    """
    Attach EditSim scores to the positive and every negative candidate.

    Records referencing a class absent from the ontologies are returned
    unscored, so ranking evaluation excludes and counts them. A class without
    labels scores 0 against everything; records whose source or positive has
    no labels are counted and reported in a warning.

    Args:
        records: Candidate records.
        onto_src: Source ontology.
        onto_tgt: Target ontology.
        synonym_properties: Label properties. Defaults to the standard set.
        progress: Whether to show a progress bar.

    Returns:
        List[CandidateRecord]: Scored copies of the records, same order.
    """
    properties = list(synonym_properties or DEFAULT_SYNONYM_PROPERTIES)
    scored: List[CandidateRecord] = []
    failed = 0
    unlabelled = 0

    for record in tqdm(records, desc="Scoring candidates", disable=not progress):
        iris = [record.mapping.tgt, *record.candidates]
        if record.mapping.src not in onto_src or any(i not in onto_tgt for i in iris):
            failed += 1
            logger.debug(f"Cannot score {record.mapping.key}: unknown class")
            scored.append(replace(record, scores=None, tgt_score=None))
            continue

        src_labels = onto_src.get(record.mapping.src).label_strings(properties)
        tgt_labels = onto_tgt.get(record.mapping.tgt).label_strings(properties)
        if not src_labels or not tgt_labels:
            unlabelled += 1
            logger.debug(f"{record.mapping.key} has an unlabelled class; scored 0")
        values = [
            edit_similarity(src_labels, onto_tgt.get(iri).label_strings(properties))
            for iri in iris
        ]
        scored.append(replace(record, tgt_score=values[0], scores=values[1:]))

    if failed:
        logger.warning(f"{failed} candidate records reference unknown classes")
    if unlabelled:
        logger.warning(
            f"{unlabelled} candidate records have an unlabelled source or positive"
        )
    return scored


@dataclass
class SweepPoint:
    """Evaluation of the matcher output filtered at one threshold."""

    threshold: float
    report: MatchReport = field(repr=False)


def threshold_sweep(
    scored_out: MappingSet,
    m_ref: MappingSet,
    m_eval: Optional[MappingSet] = None,
    thresholds: Iterable[float] = (0.8, 0.85, 0.9, 0.95, 1.0),
    beta: float = 1.0,
) -> List[SweepPoint]:
    """
    Evaluate a scored output at several filtering thresholds.

    Filtering the one-best output of a low threshold run at a higher
    threshold gives the output of a run at that higher threshold, so one
    matching run serves the whole sweep.

    Args:
        scored_out: Matcher output, produced at the lowest swept threshold.
        m_ref: Reference mappings.
        m_eval: Optional evaluation subset of ``m_ref``.
        thresholds: Thresholds to evaluate.
        beta: Weight of recall in the F score.

    Returns:
        List[SweepPoint]: One point per threshold, ascending.
    """
    points: List[SweepPoint] = []
    for threshold in sorted(set(thresholds)):
        if not 0.0 <= threshold <= 1.0:
            raise ValueError(f"threshold must be between 0.0 and 1.0, got {threshold}")
        kept = MappingSet(
            (m for m in scored_out if (m.score or 0.0) >= threshold),
            scored_out.relation,
        )
        points.append(
            SweepPoint(threshold, global_matching_metrics(kept, m_ref, m_eval, beta))
        )
    return points
