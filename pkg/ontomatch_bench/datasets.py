"""
Benchmark dataset construction.

This module prunes ontologies to a preserved class set, extracts equivalence
mappings from a hub cross-reference table (Mondo/UMLS style) and derives
subsumption mappings from equivalence mappings by deleting the equivalent
target class.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from itertools import product
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Set, Union

from ontomatch_bench.exceptions import SchemaError
from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from ontomatch_bench.ontology import OntologySnapshot
from ontomatch_bench.seeding import item_rng

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Pruning
# ----------------------------------------------------------------------


def read_preserved_set(path: Union[str, Path]) -> Set[str]:
    """Read a preserved-class file: one IRI per line (first TSV column)."""
    preserved: Set[str] = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        iri = line.split("\t", 1)[0].strip()
        if iri:
            preserved.add(iri)
    return preserved


def prune(onto: OntologySnapshot, preserve: Iterable[str]) -> OntologySnapshot:
    """
    Keep only the preserved classes, re-linking the hierarchy around the rest.

    Every non-preserved class is removed with hierarchy-preserving deletion, so
    ancestry among the preserved classes is unchanged.

    Args:
        onto: The ontology to prune.
        preserve: IRIs to keep. IRIs unknown to the ontology are reported and
                  ignored.

    Returns:
        OntologySnapshot: The pruned ontology.
    """
    preserve = set(preserve)
    unknown = preserve - set(onto.classes)
    if unknown:
        logger.warning(
            f"Ignoring {len(unknown)} preserved IRIs unknown to the ontology"
        )
    if not preserve - unknown:
        logger.warning("Preserved set is empty; pruning yields an empty ontology")

    doomed = [iri for iri in onto.classes if iri not in preserve]
    pruned = onto.delete_classes(doomed)
    logger.info(f"Pruned {len(doomed)} classes, {len(pruned)} remain")
    return pruned


# ----------------------------------------------------------------------
# Hub table and equivalence extraction
# ----------------------------------------------------------------------


@dataclass
class HubTable:
    """
    Cross-reference table of an integrating resource.

    Attributes:
        entries: Hub concept ID -> ontology ID -> class IRIs.
        invalid: Hub concepts that referenced empty or missing class IDs; the
                 offending references are dropped from ``entries``.
    """

    entries: Dict[str, Dict[str, List[str]]] = field(default_factory=dict)
    invalid: Set[str] = field(default_factory=set)

    @classmethod
    def from_dict(cls, data: Any) -> "HubTable":
        """
        Build a hub table from ``{concept_id: {ontology_id: [iris]}}``.

        Raises:
            SchemaError: If the structure does not match.
        """
        if not isinstance(data, dict):
            raise SchemaError("$", f"expected an object, got {type(data).__name__}")

        entries: Dict[str, Dict[str, List[str]]] = {}
        invalid: Set[str] = set()
        for concept, members in data.items():
            if not isinstance(members, dict):
                raise SchemaError(f"{concept}", "expected an object of ontology IDs")
            entry: Dict[str, List[str]] = {}
            for onto_id, iris in members.items():
                if iris is None:
                    invalid.add(concept)
                    continue
                if not isinstance(iris, list):
                    raise SchemaError(f"{concept}.{onto_id}", "expected a list of IRIs")
                valid = [i.strip() for i in iris if isinstance(i, str) and i.strip()]
                if len(valid) != len(iris) or not valid:
                    invalid.add(concept)
                if valid:
                    entry[onto_id] = list(dict.fromkeys(valid))
            entries[concept] = entry

        if invalid:
            logger.warning(f"{len(invalid)} hub concepts reference missing class IDs")
        return cls(entries=entries, invalid=invalid)

    @classmethod
    def load(cls, path: Union[str, Path]) -> "HubTable":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise SchemaError("$", f"invalid JSON: {e}") from e
        return cls.from_dict(data)

    def members(self, onto_id: str) -> Set[str]:
        """All class IRIs of one ontology referenced by any hub concept."""
        return {
            iri for entry in self.entries.values() for iri in entry.get(onto_id, [])
        }


def extract_equivalence(
    hub: HubTable,
    onto_src: OntologySnapshot,
    onto_tgt: OntologySnapshot,
    src_id: Optional[str] = None,
    tgt_id: Optional[str] = None,
) -> MappingSet:
    """
    Turn hub cross-references into equivalence mappings.

    Every pair of a source class and a target class linked to the same hub
    concept becomes an equivalence mapping, provided both classes exist in the
    given (usually pruned) snapshots.

    Args:
        hub: The hub table.
        onto_src: Source ontology.
        onto_tgt: Target ontology.
        src_id: Key of the source ontology in the hub table. Defaults to the
                source snapshot's ontology IRI.
        tgt_id: Key of the target ontology in the hub table.

    Returns:
        MappingSet: Equivalence mappings sorted by source then target.
    """
    src_id = src_id or onto_src.ontology_iri
    tgt_id = tgt_id or onto_tgt.ontology_iri

    pairs: List[Mapping] = []
    unmatched = 0
    for concept in sorted(hub.entries):
        entry = hub.entries[concept]
        sources = [iri for iri in entry.get(src_id, []) if iri in onto_src]
        targets = [iri for iri in entry.get(tgt_id, []) if iri in onto_tgt]
        if not sources or not targets:
            unmatched += 1
            continue
        pairs.extend(
            Mapping(src, tgt, Relation.EQUIVALENCE, 1.0)
            for src, tgt in product(sources, targets)
        )

    result = MappingSet(pairs, Relation.EQUIVALENCE)
    logger.info(
        f"Extracted {len(result)} equivalence mappings "
        f"({unmatched} hub concepts without a {src_id}/{tgt_id} pair)"
    )
    return result


# ----------------------------------------------------------------------
# Subsumption dataset construction
# ----------------------------------------------------------------------


@dataclass
class SubsumptionBuildResult:
    """
    Outcome of building subsumption mappings from equivalence mappings.

    The counts reconcile with the input:
    ``len(equiv) == len(subs_mappings) + skipped_equivalences
    + no_parent_skips + removed_subsumptions + unknown_classes``.

    Attributes:
        modified_target: Target ontology after deleting the equivalent classes.
        subs_mappings: Emitted subsumption mappings, in processing order.
        skipped_equivalences: Equivalences whose target had already been deleted.
        removed_subsumptions: Emitted mappings dropped because their target was
                              deleted afterwards.
        deleted_classes: Target classes deleted during construction.
        no_parent_skips: Equivalences whose target had no named parent.
        unknown_classes: Equivalences referencing classes absent from the inputs.
    """

    modified_target: OntologySnapshot
    subs_mappings: List[Mapping]
    skipped_equivalences: int = 0
    removed_subsumptions: int = 0
    deleted_classes: Set[str] = field(default_factory=set)
    no_parent_skips: int = 0
    unknown_classes: int = 0

    def to_report(self) -> Dict[str, Any]:
        return {
            "subsumption_mappings": len(self.subs_mappings),
            "skipped_equivalences": self.skipped_equivalences,
            "removed_subsumptions": self.removed_subsumptions,
            "no_parent_skips": self.no_parent_skips,
            "unknown_classes": self.unknown_classes,
            "deleted_classes": len(self.deleted_classes),
            "target_classes": len(self.modified_target),
        }


class _WorkingHierarchy:
    """Mutable parent/child index used while classes are deleted one by one."""

    def __init__(self, onto: OntologySnapshot) -> None:
        self.root = onto.root_iri
        self.parents: Dict[str, Set[str]] = {
            iri: set(record.parents) for iri, record in onto.classes.items()
        }
        self.children: Dict[str, Set[str]] = {iri: set() for iri in onto.classes}
        for iri, parents in self.parents.items():
            for parent in parents:
                if parent != self.root:
                    self.children[parent].add(iri)

    def named_parents(self, iri: str) -> List[str]:
        return sorted(self.parents[iri] - {self.root})

    def delete(self, iri: str) -> None:
        parents = self.parents.pop(iri)
        children = self.children.pop(iri)
        for parent in parents:
            if parent != self.root:
                self.children[parent].discard(iri)
        for child in children:
            self.parents[child].discard(iri)
            for parent in parents:
                if parent == child:
                    continue
                self.parents[child].add(parent)
                if parent != self.root:
                    self.children[parent].add(child)


def build_subsumption_dataset(
    onto_src: OntologySnapshot,
    onto_tgt: OntologySnapshot,
    equiv: MappingSet,
    seed: int = 42,
) -> SubsumptionBuildResult:
    """
    Derive subsumption mappings from equivalence mappings.

    Equivalences are processed sorted by source then target IRI. For each
    (c, c'), one asserted parent c'' of c' is chosen uniformly at random
    (seeded per mapping), (c, c'') is emitted and c' is deleted from the target
    with hierarchy-preserving deletion, so (c, c'') cannot be inferred through
    the equivalence. Equivalences whose c' is already deleted are skipped, and
    emitted mappings whose c'' gets deleted later are removed at the end.

    Args:
        onto_src: Source ontology.
        onto_tgt: Target ontology.
        equiv: Equivalence reference mappings.
        seed: Global seed.

    Returns:
        SubsumptionBuildResult: Mappings, modified target and counts.
    """
    working = _WorkingHierarchy(onto_tgt)
    deleted: Set[str] = set()
    emitted: List[Mapping] = []
    result = SubsumptionBuildResult(modified_target=onto_tgt, subs_mappings=[])

    for mapping in sorted(equiv, key=lambda m: (m.src, m.tgt)):
        if mapping.tgt in deleted:
            result.skipped_equivalences += 1
            logger.debug(f"Skipping {mapping.key}: target already deleted")
            continue
        if mapping.src not in onto_src or mapping.tgt not in onto_tgt:
            result.unknown_classes += 1
            logger.warning(f"Skipping {mapping.key}: class not in the ontologies")
            continue

        parents = working.named_parents(mapping.tgt)
        if not parents:
            result.no_parent_skips += 1
            logger.debug(f"Skipping {mapping.key}: target has no named parent")
            continue

        rng = item_rng(seed, "subsumption", mapping.src, mapping.tgt)
        chosen = parents[int(rng.integers(len(parents)))]
        emitted.append(Mapping(mapping.src, chosen, Relation.SUBSUMPTION, 1.0))
        working.delete(mapping.tgt)
        deleted.add(mapping.tgt)

    result.subs_mappings = [m for m in emitted if m.tgt not in deleted]
    result.removed_subsumptions = len(emitted) - len(result.subs_mappings)
    result.deleted_classes = deleted
    result.modified_target = replace(
        onto_tgt,
        classes={
            iri: replace(onto_tgt.classes[iri], parents=frozenset(parents))
            for iri, parents in working.parents.items()
        },
    )

    logger.info(
        f"Built {len(result.subs_mappings)} subsumption mappings from "
        f"{len(equiv)} equivalences ({result.skipped_equivalences} skipped, "
        f"{result.removed_subsumptions} removed, "
        f"{result.no_parent_skips} without parent)"
    )
    return result
