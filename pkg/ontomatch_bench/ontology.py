"""
Immutable named-class ontology model.

This module provides ClassRecord and OntologySnapshot, the in-memory ontology
representation every other part of the toolkit works on, together with the
hierarchy queries (asserted parents, transitive subsumers) and the
hierarchy-preserving class deletion used by preprocessing, pruning and
subsumption dataset construction.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    Mapping,
    Optional,
    Set,
    Tuple,
)

import networkx as nx
from rdflib.namespace import OWL

from ontomatch_bench.exceptions import UnknownClassError

logger = logging.getLogger(__name__)

OWL_THING = str(OWL.Thing)


@dataclass(frozen=True)
class ClassRecord:
    """
    A named class of an ontology.

    Attributes:
        iri: Absolute IRI of the class.
        labels: Annotation-property IRI -> label strings. Empty strings and
                duplicates within a property are removed on construction.
        parents: IRIs of the asserted subsumers. Never contains ``iri``.
        deprecated: Whether the class is marked as deprecated.
    """

    iri: str
    labels: Mapping[str, Tuple[str, ...]] = field(default_factory=dict, hash=False)
    parents: FrozenSet[str] = frozenset()
    deprecated: bool = False

    def __post_init__(self) -> None:
        if not isinstance(self.iri, str) or not self.iri:
            raise ValueError(f"iri must be a nonempty string, got {self.iri!r}")

        cleaned: Dict[str, Tuple[str, ...]] = {}
        for prop in sorted(self.labels):
            values = tuple(dict.fromkeys(v for v in self.labels[prop] if v))
            if values:
                cleaned[prop] = values
        object.__setattr__(self, "labels", MappingProxyType(cleaned))
        object.__setattr__(self, "parents", frozenset(self.parents) - {self.iri})

    def label_strings(self, properties: Optional[Iterable[str]] = None) -> List[str]:
        """
        Collect the label strings of this class.

        Args:
            properties: Annotation properties to read. None means all of them.

        Returns:
            List[str]: Labels in property order, duplicates removed.
        """
        props = sorted(self.labels) if properties is None else list(properties)
        values: List[str] = []
        for prop in props:
            values.extend(self.labels.get(prop, ()))
        return list(dict.fromkeys(values))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iri": self.iri,
            "labels": {prop: list(values) for prop, values in self.labels.items()},
            "parents": sorted(self.parents),
            "deprecated": self.deprecated,
        }


@dataclass(frozen=True)
class OntologyStats:
    """
    Size and shape statistics of a snapshot.

    Attributes:
        n_classes: Number of named classes.
        n_annotations: Number of label strings over all classes and properties.
        n_edges: Number of asserted parent edges, root edges excluded.
        avg_depth: Mean minimum number of subclass hops from a class to the root.
        max_depth: Largest such depth.
        unreachable: Classes that cannot reach the root (only through cycles).
    """

    n_classes: int
    n_annotations: int
    n_edges: int
    avg_depth: Optional[float]
    max_depth: Optional[int]
    unreachable: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "classes": self.n_classes,
            "annotations": self.n_annotations,
            "edges": self.n_edges,
            "avg_depth": self.avg_depth,
            "max_depth": self.max_depth,
            "unreachable": self.unreachable,
        }


@dataclass(frozen=True)
class OntologySnapshot:
    """
    Immutable set of named classes with their asserted hierarchy.

    Every parent IRI referenced by a class is either another class of the
    snapshot or the root IRI. Operations that change the ontology return a
    new snapshot and leave the receiver untouched, so a snapshot can be
    shared read-only between worker threads.

    Example:
        >>> onto = OntologySnapshot("http://ex.org/o", {
        ...     "http://ex.org/A": ClassRecord(
        ...         "http://ex.org/A", parents={"http://ex.org/B"}
        ...     ),
        ...     "http://ex.org/B": ClassRecord("http://ex.org/B"),
        ... })
        >>> onto.transitive_subsumers("http://ex.org/A")
        {'http://ex.org/B'}
    """

    ontology_iri: str
    classes: Mapping[str, ClassRecord] = field(hash=False)
    root_iri: str = OWL_THING

    def __post_init__(self) -> None:
        ordered: Dict[str, ClassRecord] = {}
        for iri in sorted(self.classes):
            record = self.classes[iri]
            if record.iri != iri:
                raise ValueError(
                    f"class key {iri!r} does not match record iri {record.iri!r}"
                )
            ordered[iri] = record

        if self.root_iri in ordered:
            raise ValueError(f"root_iri {self.root_iri!r} must not be a class")

        for iri, record in ordered.items():
            for parent in record.parents:
                if parent != self.root_iri and parent not in ordered:
                    raise ValueError(
                        f"parent {parent!r} of {iri!r} is neither a class nor the root"
                    )

        object.__setattr__(self, "classes", MappingProxyType(ordered))

    def __len__(self) -> int:
        return len(self.classes)

    def __contains__(self, iri: object) -> bool:
        return iri in self.classes

    def __iter__(self) -> Iterator[str]:
        return iter(self.classes)

    def get(self, iri: str) -> ClassRecord:
        """Return the record of ``iri`` or raise UnknownClassError."""
        try:
            return self.classes[iri]
        except KeyError:
            raise UnknownClassError(iri) from None

    # ------------------------------------------------------------------
    # Derived structures
    # ------------------------------------------------------------------

    @cached_property
    def graph(self) -> "nx.DiGraph":
        """Directed child -> parent graph over named classes (root excluded)."""
        g = nx.DiGraph()
        g.add_nodes_from(self.classes)
        for iri, record in self.classes.items():
            g.add_edges_from((iri, p) for p in record.parents if p != self.root_iri)
        return g

    @cached_property
    def undirected(self) -> "nx.Graph":
        """Undirected view of the asserted hierarchy (root excluded)."""
        return self.graph.to_undirected(as_view=True)

    # ------------------------------------------------------------------
    # Hierarchy queries
    # ------------------------------------------------------------------

    def asserted_parents(self, iri: str) -> Set[str]:
        """
        Get the asserted subsumers of a class.

        Args:
            iri: IRI of a class of this snapshot.

        Returns:
            Set[str]: Direct parents, the root excluded.

        Raises:
            UnknownClassError: If the class is absent.
        """
        return set(self.get(iri).parents) - {self.root_iri}

    def children(self, iri: str) -> Set[str]:
        """Get the direct asserted subclasses of a class."""
        self.get(iri)
        return set(self.graph.predecessors(iri))

    def transitive_subsumers(self, iri: str) -> Set[str]:
        """
        Get every class reachable from ``iri`` through one or more parent edges.

        The root is excluded. The class itself is only part of the result when
        the asserted graph contains a cycle through it.

        Raises:
            UnknownClassError: If the class is absent.
        """
        self.get(iri)
        reachable = nx.descendants(self.graph, iri)
        if any(p == iri or p in reachable for p in self.graph.predecessors(iri)):
            reachable.add(iri)
        return reachable

    # ------------------------------------------------------------------
    # Transformations
    # ------------------------------------------------------------------

    def delete_class(self, iri: str) -> "OntologySnapshot":
        """
        Delete a class while keeping the hierarchy.

        Every former child of the class is asserted as a subclass of each of
        its former parents; would-be self edges are skipped.

        Args:
            iri: IRI of the class to delete.

        Returns:
            OntologySnapshot: A new snapshot without the class.

        Raises:
            UnknownClassError: If the class is absent.
        """
        return self.delete_classes([iri])

    def delete_classes(self, iris: Iterable[str]) -> "OntologySnapshot":
        """
        Delete several classes while keeping the hierarchy.

        The result is the same as deleting the classes one at a time with
        delete_class, in any order: a surviving class inherits every surviving
        class reachable through a chain of deleted ones.

        Raises:
            UnknownClassError: If any class is absent.
        """
        doomed = set(iris)
        for iri in doomed:
            self.get(iri)
        if not doomed:
            return self

        survivors: Dict[str, ClassRecord] = {}
        for iri, record in self.classes.items():
            if iri in doomed:
                continue
            if not record.parents & doomed:
                survivors[iri] = record
                continue
            survivors[iri] = replace(
                record, parents=frozenset(self._relink(iri, record.parents, doomed))
            )

        logger.debug(f"Deleted {len(doomed)} classes from {self.ontology_iri}")
        return replace(self, classes=survivors)

    def _relink(self, iri: str, parents: Iterable[str], doomed: Set[str]) -> Set[str]:
        relinked: Set[str] = set()
        seen: Set[str] = set()
        stack = list(parents)
        while stack:
            parent = stack.pop()
            if parent in seen:
                continue
            seen.add(parent)
            if parent in doomed:
                stack.extend(self.classes[parent].parents)
            elif parent != iri:
                relinked.add(parent)
        return relinked

    def map_records(
        self, fn: Callable[[ClassRecord], ClassRecord]
    ) -> "OntologySnapshot":
        """Return a new snapshot with ``fn`` applied to every class record."""
        return replace(
            self, classes={iri: fn(record) for iri, record in self.classes.items()}
        )

    # ------------------------------------------------------------------
    # Serialisation helpers and statistics
    # ------------------------------------------------------------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ontology_iri": self.ontology_iri,
            "root_iri": self.root_iri,
            "classes": [record.to_dict() for record in self.classes.values()],
        }

    def fingerprint(self) -> str:
        """SHA-256 hex digest of the canonical JSON form of this snapshot."""
        payload = json.dumps(
            self.to_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":")
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def stats(self) -> OntologyStats:
        """
        Compute size and depth statistics.

        The depth of a class is the minimum number of subclass hops from the
        class to the root; classes without a named parent sit at depth 1.
        """
        top_down = self.graph.reverse(copy=True)
        top_down.add_node(self.root_iri)
        top_down.add_edges_from(
            (self.root_iri, iri)
            for iri in self.classes
            if not self.asserted_parents(iri)
        )
        depths = nx.single_source_shortest_path_length(top_down, self.root_iri)
        depths.pop(self.root_iri, None)

        n_annotations = sum(
            len(values)
            for record in self.classes.values()
            for values in record.labels.values()
        )
        return OntologyStats(
            n_classes=len(self.classes),
            n_annotations=n_annotations,
            n_edges=self.graph.number_of_edges(),
            avg_depth=sum(depths.values()) / len(depths) if depths else None,
            max_depth=max(depths.values()) if depths else None,
            unreachable=len(self.classes) - len(depths),
        )


def ancestry(
    onto: OntologySnapshot, among: Optional[Iterable[str]] = None
) -> Set[Tuple[str, str]]:
    """
    Compute the (class, subsumer) pairs of a snapshot's transitive closure.

    Args:
        onto: The snapshot.
        among: Restrict both sides of every pair to these classes.

    Returns:
        Set[Tuple[str, str]]: Ancestry relation, root excluded.
    """
    keep = set(onto.classes) if among is None else set(among) & set(onto.classes)
    return {
        (iri, sup)
        for iri in keep
        for sup in onto.transitive_subsumers(iri)
        if sup in keep
    }
