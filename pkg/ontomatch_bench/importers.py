"""
Ontology importers and preprocessing.

This module reads ontologies from a subset of RDF/XML and from the canonical
JSON snapshot format, writes the JSON format back out, and applies the
preprocessing steps (deprecated-class removal, cross-reference stripping)
that precede dataset construction.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Set, Union
from urllib.parse import urljoin

from lxml import etree
from rdflib.namespace import OWL, RDF, RDFS, SKOS, Namespace

from ontomatch_bench.exceptions import MalformedDocumentError, SchemaError
from ontomatch_bench.ontology import OWL_THING, ClassRecord, OntologySnapshot

logger = logging.getLogger(__name__)

OBO_IN_OWL = Namespace("http://www.geneontology.org/formats/oboInOwl#")

DEFAULT_SYNONYM_PROPERTIES = (
    str(RDFS.label),
    str(SKOS.prefLabel),
    str(SKOS.altLabel),
    str(OBO_IN_OWL.hasExactSynonym),
    str(OBO_IN_OWL.hasRelatedSynonym),
    str(OBO_IN_OWL.hasNarrowSynonym),
    str(OBO_IN_OWL.hasBroadSynonym),
)

DEFAULT_XREF_PROPERTIES = (
    str(OBO_IN_OWL.hasDbXref),
    str(SKOS.exactMatch),
    str(SKOS.closeMatch),
)

_RDF_NS = str(RDF)
_XML_NS = "http://www.w3.org/XML/1998/namespace"
_RDF_ABOUT = f"{{{_RDF_NS}}}about"
_RDF_ID = f"{{{_RDF_NS}}}ID"
_RDF_RESOURCE = f"{{{_RDF_NS}}}resource"
_RDF_PARSE_TYPE = f"{{{_RDF_NS}}}parseType"

_CLASS_TYPES = {str(OWL.Class), str(RDFS.Class)}
_SUBCLASS_OF = str(RDFS.subClassOf)
_DEPRECATED = str(OWL.deprecated)


@dataclass
class ImportConfig:
    """
    Preprocessing settings.

    Attributes:
        xref_properties: Annotation properties holding cross-references; their
                        values are removed from every class.
        synonym_properties: Annotation properties treated as class names.
        drop_deprecated: Whether deprecated classes are deleted.
    """

    xref_properties: List[str] = field(
        default_factory=lambda: list(DEFAULT_XREF_PROPERTIES)
    )
    synonym_properties: List[str] = field(
        default_factory=lambda: list(DEFAULT_SYNONYM_PROPERTIES)
    )
    drop_deprecated: bool = True

    def __post_init__(self) -> None:
        for name in ("xref_properties", "synonym_properties"):
            values = getattr(self, name)
            if len(set(values)) != len(values):
                raise ValueError(f"{name} must not contain duplicates, got {values}")
        overlap = set(self.xref_properties) & set(self.synonym_properties)
        if overlap:
            raise ValueError(
                f"xref_properties and synonym_properties must be disjoint, "
                f"both contain {sorted(overlap)}"
            )


@dataclass
class ImportReport:
    """
    Counters collected while reading an RDF/XML document.

    Attributes:
        classes: Named classes in the resulting snapshot.
        labels: Literal annotation values kept.
        duplicate_declarations: Extra declarations of an already declared class.
        dangling_edges: Subclass edges to IRIs that are not declared classes.
        self_edges: Subclass edges from a class to itself.
        anonymous_superclasses: Subclass edges to restrictions or other class
                               expressions.
        skipped_nodes: Node elements that do not describe a named class.
        skipped_properties: Property elements outside the recognised subset.
    """

    classes: int = 0
    labels: int = 0
    duplicate_declarations: int = 0
    dangling_edges: int = 0
    self_edges: int = 0
    anonymous_superclasses: int = 0
    skipped_nodes: int = 0
    skipped_properties: int = 0

    def to_dict(self) -> Dict[str, int]:
        return dict(vars(self))


@dataclass
class _Subject:
    declarations: int = 0
    labels: Dict[str, List[str]] = field(default_factory=dict)
    parents: Set[str] = field(default_factory=set)
    deprecated: bool = False

    def add_label(self, prop: str, text: str) -> None:
        self.labels.setdefault(prop, []).append(text)


def _normalize_literal(text: Optional[str]) -> str:
    return " ".join((text or "").split())


def _tag_iri(tag: str) -> str:
    if tag.startswith("{"):
        namespace, _, local = tag[1:].partition("}")
        return namespace + local
    return tag


class RDFXMLSubsetReader:
    """
    Reader for the named-class subset of RDF/XML.

    Recognises class declarations (``owl:Class``/``rdfs:Class`` node elements
    and ``rdf:Description`` nodes typed as ``owl:Class``), ``rdfs:subClassOf``
    edges to named classes, literal annotations and the ``owl:deprecated``
    flag. Everything else is counted in ``report`` and skipped.

    Example:
        >>> reader = RDFXMLSubsetReader()
        >>> onto = reader.read(Path("doid.owl").read_bytes())
        >>> print(reader.report.dangling_edges)
    """

    def __init__(self, base_iri: Optional[str] = None) -> None:
        """
        Initialize the reader.

        Args:
            base_iri: Base IRI used to resolve relative references when the
                      document declares no ``xml:base``.
        """
        self._base_iri = base_iri
        self._report = ImportReport()

    @property
    def report(self) -> ImportReport:
        """Counters of the most recent ``read`` call."""
        return self._report

    def read(self, document: bytes) -> OntologySnapshot:
        """
        Parse an RDF/XML document into a snapshot.

        Args:
            document: Raw bytes of the document.

        Returns:
            OntologySnapshot: One record per declared named class.

        Raises:
            MalformedDocumentError: If the document is not well-formed XML.
        """
        self._report = ImportReport()
        root = self._parse(document)

        subjects: Dict[str, _Subject] = {}
        class_iris: Set[str] = set()
        ontology_iri = ""

        nodes = list(root) if _tag_iri(root.tag) == f"{_RDF_NS}RDF" else [root]
        for node in nodes:
            if not isinstance(node.tag, str):
                continue
            iri = self._subject_iri(node)
            if _tag_iri(node.tag) == str(OWL.Ontology):
                ontology_iri = iri or ontology_iri
                continue
            if iri is None:
                self._report.skipped_nodes += 1
                continue

            subject = subjects.setdefault(iri, _Subject())
            types = self._read_node(node, subject)
            if _tag_iri(node.tag) != f"{_RDF_NS}Description":
                types.add(_tag_iri(node.tag))
            if types & _CLASS_TYPES:
                subject.declarations += 1
                class_iris.add(iri)

        # owl:Thing is the snapshot root, never a class; edges to it stay.
        if OWL_THING in class_iris:
            class_iris.discard(OWL_THING)
            logger.debug(f"Skipped explicit declaration of the root {OWL_THING}")

        snapshot = OntologySnapshot(
            ontology_iri=ontology_iri or self._base_iri or "",
            classes=self._build_records(subjects, class_iris),
        )
        self._report.skipped_nodes += len(set(subjects) - class_iris)
        self._report.classes = len(snapshot)
        logger.info(
            f"Imported {self._report.classes} classes from "
            f"{snapshot.ontology_iri or '<unnamed ontology>'}"
        )
        if self._report.duplicate_declarations or self._report.dangling_edges:
            logger.warning(
                f"Import warnings: {self._report.duplicate_declarations} duplicate "
                f"declarations, {self._report.dangling_edges} dangling edges"
            )
        return snapshot

    def _parse(self, document: bytes) -> Any:
        parser = etree.XMLParser(
            no_network=True,
            load_dtd=False,
            huge_tree=True,
            remove_comments=True,
            remove_pis=True,
        )
        try:
            return etree.fromstring(document, parser=parser, base_url=self._base_iri)
        except etree.XMLSyntaxError as e:
            line, column = e.position
            raise MalformedDocumentError(str(e.msg), line, column) from e

    def _resolve(self, element: Any, reference: str) -> str:
        return urljoin(element.base or self._base_iri or "", reference.strip())

    def _subject_iri(self, node: Any) -> Optional[str]:
        about = node.get(_RDF_ABOUT)
        if about is not None:
            return self._resolve(node, about)
        local_id = node.get(_RDF_ID)
        if local_id is not None:
            return self._resolve(node, f"#{local_id}")
        return None

    def _read_node(self, node: Any, subject: _Subject) -> Set[str]:
        types: Set[str] = set()

        for name, value in node.attrib.items():
            if name.startswith(f"{{{_RDF_NS}}}") or name.startswith(f"{{{_XML_NS}}}"):
                continue
            text = _normalize_literal(value)
            if text:
                subject.add_label(_tag_iri(name), text)

        for prop in node:
            if not isinstance(prop.tag, str):
                continue
            predicate = _tag_iri(prop.tag)
            resource = prop.get(_RDF_RESOURCE)
            nested = [child for child in prop if isinstance(child.tag, str)]

            if predicate == _SUBCLASS_OF:
                self._read_superclass(prop, resource, nested, subject)
            elif predicate == f"{_RDF_NS}type" and resource is not None:
                types.add(self._resolve(prop, resource))
            elif predicate == _DEPRECATED and resource is None and not nested:
                subject.deprecated = _normalize_literal(prop.text).lower() == "true"
            elif resource is None and not nested and prop.get(_RDF_PARSE_TYPE) is None:
                text = _normalize_literal(prop.text)
                if text:
                    subject.add_label(predicate, text)
            else:
                self._report.skipped_properties += 1
        return types

    def _read_superclass(
        self, prop: Any, resource: Optional[str], nested: List[Any], subject: _Subject
    ) -> None:
        if resource is not None:
            subject.parents.add(self._resolve(prop, resource))
            return
        for child in nested:
            parent = self._subject_iri(child)
            if parent is not None and _tag_iri(child.tag) in _CLASS_TYPES:
                subject.parents.add(parent)
            else:
                self._report.anonymous_superclasses += 1
        if not nested:
            self._report.anonymous_superclasses += 1

    def _build_records(
        self, subjects: Dict[str, _Subject], class_iris: Set[str]
    ) -> Dict[str, ClassRecord]:
        records: Dict[str, ClassRecord] = {}
        for iri in sorted(class_iris):
            subject = subjects[iri]
            self._report.duplicate_declarations += subject.declarations - 1

            parents: Set[str] = set()
            for parent in subject.parents:
                if parent == iri:
                    self._report.self_edges += 1
                elif parent == OWL_THING or parent in class_iris:
                    parents.add(parent)
                else:
                    self._report.dangling_edges += 1
                    logger.debug(f"Dropped dangling edge {iri} -> {parent}")

            record = ClassRecord(
                iri=iri,
                labels=subject.labels,
                parents=frozenset(parents),
                deprecated=subject.deprecated,
            )
            self._report.labels += sum(len(v) for v in record.labels.values())
            records[iri] = record
        return records


def import_rdfxml_subset(
    document: bytes, base_iri: Optional[str] = None
) -> OntologySnapshot:
    """
    Parse an RDF/XML document into a snapshot.

    Convenience wrapper around RDFXMLSubsetReader for callers that do not need
    the import report.
    """
    return RDFXMLSubsetReader(base_iri).read(document)


# ----------------------------------------------------------------------
# Canonical JSON snapshot format
# ----------------------------------------------------------------------


def export_json(onto: OntologySnapshot) -> bytes:
    """
    Serialise a snapshot to canonical JSON.

    Keys are sorted and classes appear in IRI order, so two exports of the
    same snapshot are byte-identical.
    """
    text = json.dumps(onto.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def _expect(value: Any, kind: Union[type, tuple], path: str, what: str) -> Any:
    if not isinstance(value, kind):
        raise SchemaError(path, f"expected {what}, got {type(value).__name__}")
    return value


def _string_list(value: Any, path: str) -> List[str]:
    _expect(value, list, path, "a list of strings")
    for k, item in enumerate(value):
        _expect(item, str, f"{path}[{k}]", "a string")
    return value


def import_json(document: bytes) -> OntologySnapshot:
    """
    Parse a canonical JSON snapshot.

    Args:
        document: UTF-8 encoded JSON bytes.

    Returns:
        OntologySnapshot: The decoded snapshot.

    Raises:
        SchemaError: If the document is not valid JSON or violates the schema;
                     the error names the offending path, e.g. ``classes[3].iri``.
    """
    try:
        data = json.loads(document.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise SchemaError("$", f"invalid JSON: {e}") from e

    _expect(data, dict, "$", "an object")
    if "ontology_iri" not in data:
        raise SchemaError("ontology_iri", "required field is missing")
    ontology_iri = _expect(data["ontology_iri"], str, "ontology_iri", "a string")
    root_iri = _expect(data.get("root_iri", OWL_THING), str, "root_iri", "a string")
    if "classes" not in data:
        raise SchemaError("classes", "required field is missing")
    entries = _expect(data["classes"], list, "classes", "a list")

    records: Dict[str, ClassRecord] = {}
    for k, entry in enumerate(entries):
        path = f"classes[{k}]"
        _expect(entry, dict, path, "an object")
        if "iri" not in entry:
            raise SchemaError(f"{path}.iri", "required field is missing")
        iri = _expect(entry["iri"], str, f"{path}.iri", "a string")
        if not iri:
            raise SchemaError(f"{path}.iri", "must be nonempty")
        if iri in records:
            raise SchemaError(f"{path}.iri", f"duplicate class {iri}")
        if iri == root_iri:
            raise SchemaError(f"{path}.iri", "the root must not be declared as a class")

        labels = _expect(entry.get("labels", {}), dict, f"{path}.labels", "an object")
        for prop, values in labels.items():
            _string_list(values, f"{path}.labels[{prop!r}]")
        parents = _string_list(entry.get("parents", []), f"{path}.parents")
        deprecated = _expect(
            entry.get("deprecated", False), bool, f"{path}.deprecated", "a boolean"
        )
        records[iri] = ClassRecord(
            iri=iri, labels=labels, parents=frozenset(parents), deprecated=deprecated
        )

    for k, entry in enumerate(entries):
        for j, parent in enumerate(entry.get("parents", [])):
            if parent != root_iri and parent not in records:
                raise SchemaError(
                    f"classes[{k}].parents[{j}]", f"unknown class {parent}"
                )

    return OntologySnapshot(
        ontology_iri=ontology_iri, classes=records, root_iri=root_iri
    )


def load_ontology(
    path: Union[str, Path], base_iri: Optional[str] = None
) -> OntologySnapshot:
    """Load a snapshot from a ``.json`` snapshot file or an RDF/XML file."""
    path = Path(path)
    document = path.read_bytes()
    if path.suffix.lower() == ".json":
        return import_json(document)
    return import_rdfxml_subset(document, base_iri or path.resolve().as_uri())


def save_ontology(onto: OntologySnapshot, path: Union[str, Path]) -> None:
    """Write a snapshot as canonical JSON."""
    Path(path).write_bytes(export_json(onto))


# ----------------------------------------------------------------------
# Preprocessing
# ----------------------------------------------------------------------


def strip_properties(
    onto: OntologySnapshot, properties: Iterable[str]
) -> OntologySnapshot:
    """Remove every label stored under ``properties`` from all classes."""
    doomed = set(properties)
    if not doomed:
        return onto
    return onto.map_records(
        lambda record: replace(
            record,
            labels={p: v for p, v in record.labels.items() if p not in doomed},
        )
        if doomed & set(record.labels)
        else record
    )


def preprocess(onto: OntologySnapshot, cfg: ImportConfig) -> OntologySnapshot:
    """
    Apply the dataset preprocessing steps.

    Deprecated classes are deleted with hierarchy-preserving deletion, and all
    values of the cross-reference properties are removed. Every other
    annotation property is kept verbatim.

    Args:
        onto: The imported ontology.
        cfg: Preprocessing settings.

    Returns:
        OntologySnapshot: The preprocessed ontology.
    """
    result = onto
    if cfg.drop_deprecated:
        deprecated = [iri for iri, record in onto.classes.items() if record.deprecated]
        if deprecated:
            logger.info(f"Removing {len(deprecated)} deprecated classes")
            result = result.delete_classes(deprecated)

    result = strip_properties(result, cfg.xref_properties)
    logger.info(f"Preprocessed ontology has {len(result)} classes")
    return result
