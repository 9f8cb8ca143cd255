"""
Cross-ontology mappings and their TSV file format.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Set, Tuple, Union

import pandas as pd

from ontomatch_bench.exceptions import SchemaError

logger = logging.getLogger(__name__)

TSV_COLUMNS = ["SrcEntity", "TgtEntity", "Score"]


class Relation(str, Enum):
    """Semantic relation of a mapping."""

    EQUIVALENCE = "equivalence"
    SUBSUMPTION = "subsumption"


@dataclass(frozen=True, order=True)
class Mapping:
    """
    A cross-ontology class pair.

    Two mappings are equal when source, target and relation are equal; the
    score does not take part in comparisons, so set arithmetic between system
    output and reference mappings ignores it.

    Attributes:
        src: IRI of the source class.
        tgt: IRI of the target class.
        relation: Equivalence or subsumption (target subsumes source).
        score: Optional confidence in [0, 1].
    """

    src: str
    tgt: str
    relation: Relation = Relation.EQUIVALENCE
    score: Optional[float] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.score is not None and not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score must be between 0.0 and 1.0, got {self.score}")

    @property
    def key(self) -> Tuple[str, str]:
        return (self.src, self.tgt)

    def with_score(self, score: Optional[float]) -> "Mapping":
        return replace(self, score=score)


class MappingSet:
    """
    An ordered, duplicate-free collection of mappings of one relation.

    Mappings are kept sorted by source then target IRI. Set operators
    (``&``, ``|``, ``-``) compare mappings by (source, target) and keep the
    scores of the left operand.

    Example:
        >>> refs = MappingSet([Mapping("a:1", "b:1"), Mapping("a:2", "b:2")])
        >>> out = MappingSet([Mapping("a:1", "b:1", score=0.9)])
        >>> len(out & refs)
        1
    """

    def __init__(
        self,
        mappings: Iterable[Mapping] = (),
        relation: Relation = Relation.EQUIVALENCE,
    ) -> None:
        self.relation = Relation(relation)
        unique: Dict[Tuple[str, str], Mapping] = {}
        for mapping in mappings:
            if mapping.relation != self.relation:
                mapping = replace(mapping, relation=self.relation)
            unique.setdefault(mapping.key, mapping)
        self._items: Tuple[Mapping, ...] = tuple(unique[k] for k in sorted(unique))
        self._keys: Set[Tuple[str, str]] = set(unique)
        self._by_source: Optional[Dict[str, List[str]]] = None

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[Mapping]:
        return iter(self._items)

    def __contains__(self, item: object) -> bool:
        if isinstance(item, Mapping):
            return item.key in self._keys
        return item in self._keys

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MappingSet):
            return NotImplemented
        return self.relation == other.relation and self._keys == other._keys

    def __repr__(self) -> str:
        return f"MappingSet({len(self)} {self.relation.value} mappings)"

    def __and__(self, other: "MappingSet") -> "MappingSet":
        return MappingSet((m for m in self if m.key in other._keys), self.relation)

    def __or__(self, other: "MappingSet") -> "MappingSet":
        return MappingSet([*self, *other], self.relation)

    def __sub__(self, other: "MappingSet") -> "MappingSet":
        return MappingSet((m for m in self if m.key not in other._keys), self.relation)

    def keys(self) -> Set[Tuple[str, str]]:
        return set(self._keys)

    def targets_of(self, src: str) -> Set[str]:
        """Targets mapped from ``src``."""
        return set(self.by_source().get(src, ()))

    def by_source(self) -> Dict[str, List[str]]:
        """Source IRI -> sorted target IRIs."""
        if self._by_source is None:
            index: Dict[str, List[str]] = {}
            for m in self._items:
                index.setdefault(m.src, []).append(m.tgt)
            self._by_source = index
        return self._by_source

    def to_dataframe(self, default_score: float = 1.0) -> pd.DataFrame:
        return pd.DataFrame(
            [
                (m.src, m.tgt, default_score if m.score is None else m.score)
                for m in self._items
            ],
            columns=TSV_COLUMNS,
        )


def read_mappings(
    path: Union[str, Path], relation: Relation = Relation.EQUIVALENCE
) -> MappingSet:
    """
    Read a TSV mapping file.

    The file has the header ``SrcEntity<TAB>TgtEntity<TAB>Score``; the score
    column may be empty.

    Raises:
        SchemaError: If a required column is missing or a row is malformed.
    """
    try:
        frame = pd.read_csv(path, sep="\t", dtype=str, keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SchemaError(str(path), f"unreadable TSV: {e}") from e
    missing = [c for c in TSV_COLUMNS[:2] if c not in frame.columns]
    if missing:
        raise SchemaError(str(path), f"missing columns {missing}")

    scores = frame["Score"] if "Score" in frame.columns else [""] * len(frame)
    rows = zip(frame["SrcEntity"], frame["TgtEntity"], scores)
    try:
        mappings = [
            Mapping(src, tgt, relation, float(score) if score else None)
            for src, tgt, score in rows
            if src and tgt
        ]
    except ValueError as e:
        raise SchemaError(str(path), str(e)) from e
    logger.debug(f"Read {len(mappings)} mappings from {path}")
    return MappingSet(mappings, relation)


def write_mappings(
    mappings: MappingSet, path: Union[str, Path], default_score: float = 1.0
) -> None:
    """Write a mapping set as TSV; mappings without a score get ``default_score``."""
    mappings.to_dataframe(default_score).to_csv(
        path, sep="\t", index=False, lineterminator="\n"
    )
