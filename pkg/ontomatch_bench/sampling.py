"""
Negative candidate generation for local-ranking evaluation.

For every reference mapping (c, c') the toolkit samples target classes that
are presumed not to match c: text-ambiguous ones through a sub-word inverted
index (idf sampling), hierarchy neighbours of c' (neighbour sampling) and
uniformly drawn ones (random sampling). The strategies are combined so each
mapping gets exactly the requested number of unique, valid negatives.
"""

from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np
from tqdm import tqdm

from ontomatch_bench.exceptions import InfeasiblePlanError, SchemaError
from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from ontomatch_bench.ontology import OntologySnapshot
from ontomatch_bench.seeding import item_rng
from ontomatch_bench.tokenization import Tokenizer

logger = logging.getLogger(__name__)

STRATEGIES = ("idf", "neighbour", "random")
DEFAULT_MAX_HOPS = 6


# ----------------------------------------------------------------------
# Inverted index and idf scoring
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class InvertedIndex:
    """
    Sub-word token -> classes whose labels contain the token.

    Attributes:
        postings: Token -> IRIs of the classes containing it (never empty).
        class_count: Number of classes of the indexed ontology, labelled or not.
        classes: All class IRIs of the indexed ontology, sorted.
        class_tokens: IRI -> token set of the class's labels.
        idf: Token -> log10(class_count / len(postings[token])).
        tokenizer: Tokenizer the index was built with.
    """

    postings: Dict[str, FrozenSet[str]]
    class_count: int
    classes: Tuple[str, ...]
    class_tokens: Dict[str, FrozenSet[str]]
    idf: Dict[str, float]
    tokenizer: Tokenizer = field(default_factory=Tokenizer, compare=False)

    def tokens_of(self, iri: str) -> FrozenSet[str]:
        return self.class_tokens.get(iri, frozenset())


def build_inverted_index(
    onto: OntologySnapshot,
    synonym_properties: Optional[Iterable[str]] = None,
    tokenizer: Optional[Tokenizer] = None,
) -> InvertedIndex:
    """
    Build the sub-word inverted index of an ontology's labels.

    Args:
        onto: The (target) ontology.
        synonym_properties: Annotation properties to index. None indexes all.
        tokenizer: Tokenizer to use. Defaults to word tokens.

    Returns:
        InvertedIndex: The index; ``class_count`` equals the snapshot size.
    """
    tokenizer = tokenizer or Tokenizer()
    properties = None if synonym_properties is None else list(synonym_properties)

    postings: Dict[str, Set[str]] = {}
    class_tokens: Dict[str, FrozenSet[str]] = {}
    for iri, record in onto.classes.items():
        tokens = frozenset(tokenizer.tokenize(record.label_strings(properties)))
        class_tokens[iri] = tokens
        for token in tokens:
            postings.setdefault(token, set()).add(iri)

    vocabulary = sorted(postings)
    sizes = np.array([len(postings[t]) for t in vocabulary], dtype=np.float64)
    weights = np.log10(len(onto) / sizes) if len(vocabulary) else np.array([])

    logger.info(f"Indexed {len(vocabulary)} tokens over {len(onto)} classes")
    return InvertedIndex(
        postings={t: frozenset(postings[t]) for t in vocabulary},
        class_count=len(onto),
        classes=tuple(onto.classes),
        class_tokens=class_tokens,
        idf={t: float(w) for t, w in zip(vocabulary, weights)},
        tokenizer=tokenizer,
    )


def idf_score(
    index: InvertedIndex, tokens_a: Iterable[str], tokens_b: Iterable[str]
) -> float:
    """
    Sum of the idf weights of the tokens two label sets share.

    Tokens unknown to the index contribute nothing; disjoint token sets
    score 0.
    """
    shared = sorted(set(tokens_a) & set(tokens_b))
    score = 0.0
    for token in shared:
        score += index.idf.get(token, 0.0)
    return score


def idf_sample(index: InvertedIndex, query_tokens: Iterable[str], n: int) -> List[str]:
    """
    Rank the indexed classes by idf score against the query tokens.

    Args:
        index: Inverted index of the target ontology.
        query_tokens: Tokens of the query class.
        n: Number of classes to return.

    Returns:
        List[str]: At most ``n`` IRIs by descending score, ties broken by IRI.
        Classes scoring 0 only appear to fill up to ``n``.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")

    scores: Dict[str, float] = {}
    for token in sorted(set(query_tokens)):
        weight = index.idf.get(token)
        if weight is None:
            continue
        for iri in index.postings[token]:
            scores[iri] = scores.get(iri, 0.0) + weight

    ranked = sorted(
        (iri for iri, score in scores.items() if score > 0.0),
        key=lambda iri: (-scores[iri], iri),
    )[:n]
    if len(ranked) < n:
        chosen = set(ranked)
        for iri in index.classes:
            if len(ranked) >= n:
                break
            if iri not in chosen:
                ranked.append(iri)
    return ranked


# ----------------------------------------------------------------------
# Neighbour and random sampling
# ----------------------------------------------------------------------


def _as_rng(seed: Union[int, np.random.Generator], *parts: str) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return item_rng(int(seed), *parts)


def neighbour_sample(
    onto: OntologySnapshot,
    anchor: str,
    n: int,
    max_hops: int = DEFAULT_MAX_HOPS,
    seed: Union[int, np.random.Generator] = 42,
) -> List[str]:
    """
    Collect hierarchy neighbours of a class by breadth-first search.

    The search runs over the undirected asserted-subsumption graph with the
    root excluded, one hop ring at a time, and stops once ``n`` classes are
    collected or ``max_hops`` rings are exhausted. If a ring holds more
    classes than still needed, the needed number is drawn from it uniformly.

    Args:
        onto: Target ontology.
        anchor: Class to start from; never part of the result.
        n: Number of neighbours wanted.
        max_hops: Largest hop distance searched.
        seed: Seed or random generator for ring sampling.

    Returns:
        List[str]: At most ``n`` IRIs, nearer rings first.

    Raises:
        UnknownClassError: If the anchor is absent.
    """
    onto.get(anchor)
    rng = _as_rng(seed, "neighbour", anchor)

    collected: List[str] = []
    for hop, layer in enumerate(nx.bfs_layers(onto.undirected, anchor)):
        if hop == 0:
            continue
        if hop > max_hops or len(collected) >= n:
            break
        ring = sorted(layer)
        needed = n - len(collected)
        if len(ring) > needed:
            picks = rng.choice(len(ring), size=needed, replace=False)
            ring = [ring[int(i)] for i in picks]
        collected.extend(ring)
    return collected


def random_sample(
    universe: Sequence[str],
    n: int,
    exclude: Iterable[str] = (),
    seed: Union[int, np.random.Generator] = 42,
) -> List[str]:
    """Draw up to ``n`` classes of ``universe`` outside ``exclude``, no repeats."""
    excluded = set(exclude)
    pool = [iri for iri in universe if iri not in excluded]
    size = min(n, len(pool))
    if size <= 0:
        return []
    rng = _as_rng(seed, "random")
    return [pool[int(i)] for i in rng.choice(len(pool), size=size, replace=False)]


# ----------------------------------------------------------------------
# Candidate generation
# ----------------------------------------------------------------------


@dataclass(frozen=True)
class SamplingPlan:
    """
    Ordered negative sampling strategies.

    Attributes:
        strategies: (strategy, count) pairs; a strategy may appear several times.
        max_hops: Largest hop distance for neighbour sampling.
        seed: Global seed.
    """

    strategies: Tuple[Tuple[str, int], ...]
    max_hops: int = DEFAULT_MAX_HOPS
    seed: int = 42

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "strategies", tuple((str(s), int(k)) for s, k in self.strategies)
        )
        for name, count in self.strategies:
            if name not in STRATEGIES:
                raise ValueError(f"strategy must be one of {STRATEGIES}, got {name!r}")
            if count < 1:
                raise ValueError(f"count of {name} must be positive, got {count}")
        if self.total < 1:
            raise ValueError("plan must request at least one negative candidate")
        if self.max_hops < 1:
            raise ValueError(f"max_hops must be positive, got {self.max_hops}")

    @property
    def total(self) -> int:
        return sum(count for _, count in self.strategies)


@dataclass
class CandidateRecord:
    """
    A reference mapping with its negative candidates.

    Attributes:
        mapping: The reference mapping; its target is the positive candidate.
        candidates: Negative candidate IRIs, unique and never the positive.
        scores: Scores of the candidates, parallel to ``candidates``.
        tgt_score: Score of the positive candidate.
    """

    mapping: Mapping
    candidates: List[str]
    scores: Optional[List[float]] = None
    tgt_score: Optional[float] = None

    @property
    def positive(self) -> str:
        return self.mapping.tgt

    @property
    def is_scored(self) -> bool:
        return self.scores is not None

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "src": self.mapping.src,
            "tgt": self.mapping.tgt,
            "candidates": list(self.candidates),
        }
        if self.scores is not None:
            data["scores"] = list(self.scores)
            data["tgt_score"] = self.tgt_score
        return data

    @classmethod
    def from_dict(
        cls, data: Any, relation: Relation = Relation.EQUIVALENCE, path: str = "$"
    ) -> "CandidateRecord":
        """
        Decode one JSON Lines object.

        Raises:
            SchemaError: If a field is missing or malformed.
        """
        if not isinstance(data, dict):
            raise SchemaError(path, "expected an object")
        for key in ("src", "tgt"):
            if not isinstance(data.get(key), str) or not data[key]:
                raise SchemaError(f"{path}.{key}", "expected a nonempty string")
        candidates = data.get("candidates")
        if not isinstance(candidates, list) or not all(
            isinstance(c, str) for c in candidates
        ):
            raise SchemaError(f"{path}.candidates", "expected a list of strings")

        scores = data.get("scores")
        if scores is not None:
            if not isinstance(scores, list) or len(scores) != len(candidates):
                raise SchemaError(
                    f"{path}.scores", "expected a list parallel to candidates"
                )
            scores = [float(s) for s in scores]
        tgt_score = data.get("tgt_score")
        return cls(
            mapping=Mapping(data["src"], data["tgt"], relation),
            candidates=list(candidates),
            scores=scores,
            tgt_score=None if tgt_score is None else float(tgt_score),
        )


def read_candidates(
    path: Union[str, Path], relation: Relation = Relation.EQUIVALENCE
) -> List[CandidateRecord]:
    """Read a JSON Lines candidate file."""
    records: List[CandidateRecord] = []
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as e:
                raise SchemaError(f"line {lineno}", f"invalid JSON: {e}") from e
            records.append(CandidateRecord.from_dict(data, relation, f"line {lineno}"))
    return records


def write_candidates(
    records: Iterable[CandidateRecord], path: Union[str, Path]
) -> None:
    """Write candidate records as JSON Lines, one reference mapping per line."""
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")


def compute_invalid_set(
    m: Mapping,
    refs: MappingSet,
    onto_tgt: OntologySnapshot,
    task: Optional[Relation] = None,
    equiv_refs: Optional[MappingSet] = None,
    equiv_tgt: Optional[OntologySnapshot] = None,
) -> Set[str]:
    """
    Target classes that must not be used as negatives for ``m``.

    For equivalence, these are all reference targets of ``m.src`` (the positive
    included). For subsumption, they further include the equivalence partners
    of ``m.src`` (from ``equiv_refs``) and every transitive subsumer, in the
    target ontology, of those partners and of the reference targets. An
    equivalence partner deleted while building the subsumption task is no
    longer in ``onto_tgt``; its subsumers are then taken from ``equiv_tgt``,
    the target the equivalence mappings were made against.

    Args:
        m: The reference mapping.
        refs: Reference mappings of the task.
        onto_tgt: Target ontology.
        task: Relation of the task. Defaults to ``refs.relation``.
        equiv_refs: Equivalence mappings accompanying subsumption references.
        equiv_tgt: Target ontology before subsumption construction.

    Returns:
        Set[str]: Invalid candidate IRIs.
    """
    task = Relation(task or refs.relation)
    invalid = {m.tgt} | refs.targets_of(m.src)
    if task is Relation.SUBSUMPTION:
        if equiv_refs is not None:
            invalid |= equiv_refs.targets_of(m.src)
        for anchor in list(invalid):
            for onto in (onto_tgt, equiv_tgt):
                if onto is not None and anchor in onto:
                    invalid |= onto.transitive_subsumers(anchor)
    return invalid


def generate_negative_candidates(
    m: Mapping,
    plan: SamplingPlan,
    refs: MappingSet,
    index: InvertedIndex,
    onto_tgt: OntologySnapshot,
    task: Optional[Relation] = None,
    equiv_refs: Optional[MappingSet] = None,
    equiv_tgt: Optional[OntologySnapshot] = None,
) -> CandidateRecord:
    """
    Generate the negative candidates of one reference mapping.

    Each strategy in turn draws ``|G| + |T| + N_i`` raw samples, drops those
    already collected (G) or invalid (T), keeps the first ``N_i`` and tops up
    with random draws when fewer remain. The result holds exactly
    ``plan.total`` unique negatives.

    Args:
        m: The reference mapping (c, c').
        plan: Sampling strategies and counts.
        refs: Reference mappings of the task.
        index: Inverted index of the target ontology.
        onto_tgt: Target ontology.
        task: Relation of the task. Defaults to ``refs.relation``.
        equiv_refs: Equivalence mappings accompanying subsumption references.
        equiv_tgt: Target ontology before subsumption construction.

    Returns:
        CandidateRecord: The mapping and its negatives.

    Raises:
        InfeasiblePlanError: If the target ontology has too few valid classes.
        UnknownClassError: If ``m.tgt`` is absent from the target ontology.
    """
    onto_tgt.get(m.tgt)
    invalid = compute_invalid_set(m, refs, onto_tgt, task, equiv_refs, equiv_tgt)
    available = len(onto_tgt) - len(invalid & set(onto_tgt.classes))
    if plan.total >= available:
        raise InfeasiblePlanError(
            f"plan requests {plan.total} negatives for {m.key} but only "
            f"{available} valid classes exist"
        )

    rng = item_rng(plan.seed, "candidates", m.src, m.tgt)
    generated: List[str] = []
    taken: Set[str] = set()

    for strategy, count in plan.strategies:
        raw_size = len(generated) + len(invalid) + count
        if strategy == "idf":
            raw = idf_sample(index, index.tokens_of(m.tgt), raw_size)
        elif strategy == "neighbour":
            raw = neighbour_sample(onto_tgt, m.tgt, raw_size, plan.max_hops, rng)
        else:
            raw = random_sample(index.classes, raw_size, (), rng)

        batch: List[str] = []
        for iri in raw:
            if iri not in taken and iri not in invalid and iri not in batch:
                batch.append(iri)
        batch = batch[:count]

        while len(batch) < count:
            extra = random_sample(
                index.classes, count - len(batch), taken | invalid | set(batch), rng
            )
            if not extra:
                raise InfeasiblePlanError(f"ran out of valid candidates for {m.key}")
            batch.extend(extra)

        logger.debug(f"{strategy} contributed {len(batch)} negatives for {m.key}")
        generated.extend(batch)
        taken.update(batch)

    return CandidateRecord(mapping=m, candidates=generated)


def generate_candidate_records(
    refs: MappingSet,
    plan: SamplingPlan,
    index: InvertedIndex,
    onto_tgt: OntologySnapshot,
    equiv_refs: Optional[MappingSet] = None,
    invalid_refs: Optional[MappingSet] = None,
    equiv_tgt: Optional[OntologySnapshot] = None,
    jobs: int = 1,
    progress: bool = False,
) -> List[CandidateRecord]:
    """
    Generate candidate records for every reference mapping.

    Generation is independent per mapping, so ``jobs > 1`` spreads it over a
    thread pool; the output is identical to a sequential run.

    Args:
        refs: Reference mappings to generate candidates for.
        plan: Sampling plan.
        index: Inverted index of the target ontology.
        onto_tgt: Target ontology.
        equiv_refs: Equivalence mappings accompanying subsumption references.
        invalid_refs: Reference set used to compute invalid candidates;
                      defaults to ``refs`` (pass the full reference set when
                      ``refs`` is one split of it).
        equiv_tgt: Target ontology the equivalence mappings refer to, when
                   subsumption construction deleted classes from it.
        jobs: Number of worker threads.
        progress: Whether to show a progress bar.

    Returns:
        List[CandidateRecord]: One record per mapping whose classes are known,
        in the order of ``refs``.
    """
    known = [m for m in refs if m.tgt in onto_tgt]
    if len(known) != len(refs):
        logger.warning(
            f"Skipping {len(refs) - len(known)} mappings whose target "
            "is not in the ontology"
        )
    basis = refs if invalid_refs is None else invalid_refs
    if refs.relation is Relation.SUBSUMPTION and equiv_refs is not None:
        missing = {t for m in known for t in equiv_refs.targets_of(m.src)}
        missing = {t for t in missing if t not in onto_tgt}
        if equiv_tgt is not None:
            missing = {t for t in missing if t not in equiv_tgt}
        if missing:
            logger.warning(
                f"{len(missing)} equivalence targets are not in the target "
                "ontology; their subsumers cannot be excluded from negatives"
            )

    def generate(m: Mapping) -> CandidateRecord:
        return generate_negative_candidates(
            m, plan, basis, index, onto_tgt, refs.relation, equiv_refs, equiv_tgt
        )

    bar = tqdm(total=len(known), desc="Sampling candidates", disable=not progress)
    records: List[CandidateRecord] = []
    if jobs <= 1:
        for m in known:
            records.append(generate(m))
            bar.update()
    else:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            for record in executor.map(generate, known):
                records.append(record)
                bar.update()
    bar.close()
    return records
