"""
Pytest configuration and fixtures for ontomatch-bench.

Provides small hand-built ontologies, a random DAG factory, RDF/XML fixture
documents and writers for the file formats the command line consumes.
"""

from __future__ import annotations

import json
import random
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

import pytest

from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from ontomatch_bench.ontology import OWL_THING, ClassRecord, OntologySnapshot

EX = "http://ex.org/"
RDFS_LABEL = "http://www.w3.org/2000/01/rdf-schema#label"

OntologyFactory = Callable[..., OntologySnapshot]


def iri(name: str) -> str:
    """Expand a short class name into an example IRI."""
    return name if name.startswith("http") else EX + name


def build_onto(
    parents: Mapping[str, Iterable[str]],
    labels: Optional[Mapping[str, Sequence[str]]] = None,
    deprecated: Iterable[str] = (),
    ontology_iri: str = "http://ex.org/onto",
) -> OntologySnapshot:
    """
    Build a snapshot from short names.

    Args:
        parents: Class name -> parent names; a parent that is not a key is
                 added as a class without parents.
        labels: Class name -> rdfs:label values.
        deprecated: Names of deprecated classes.
        ontology_iri: Ontology IRI.
    """
    labels = labels or {}
    dead = {iri(n) for n in deprecated}
    names = set(parents)
    for ps in parents.values():
        names.update(p for p in ps if p != OWL_THING)
    names.update(labels)

    records: Dict[str, ClassRecord] = {}
    for name in names:
        full = iri(name)
        records[full] = ClassRecord(
            iri=full,
            labels={RDFS_LABEL: tuple(labels.get(name, ()))},
            parents=frozenset(
                OWL_THING if p == OWL_THING else iri(p) for p in parents.get(name, ())
            ),
            deprecated=full in dead,
        )
    return OntologySnapshot(ontology_iri=ontology_iri, classes=records)


def random_dag(rng: random.Random, n: int, p: float = 0.15) -> OntologySnapshot:
    """Random DAG: each class may take parents among lower-numbered classes."""
    parents: Dict[str, List[str]] = {}
    for i in range(n):
        name = f"N{i:03d}"
        parents[name] = [f"N{j:03d}" for j in range(i) if rng.random() < p]
    return build_onto(parents)


def eq(
    pairs: Iterable[Tuple[str, str]], relation: Relation = Relation.EQUIVALENCE
) -> MappingSet:
    """Mapping set from (src, tgt) short-name pairs."""
    return MappingSet([Mapping(iri(s), iri(t), relation) for s, t in pairs], relation)


def reachable_pairs(onto: OntologySnapshot, among: Iterable[str]) -> set:
    """Brute-force (class, ancestor) pairs by DFS over asserted parents."""
    keep = set(among)
    pairs = set()
    for start in keep:
        seen = set()
        stack = list(onto.get(start).parents)
        while stack:
            node = stack.pop()
            if node in seen or node == onto.root_iri:
                continue
            seen.add(node)
            stack.extend(onto.get(node).parents)
        pairs.update((start, other) for other in seen if other in keep)
    return pairs


def rdfxml(
    classes: Mapping[str, Mapping[str, object]],
    ontology_iri: str = "http://ex.org/onto",
) -> bytes:
    """
    Render an RDF/XML document for a class table.

    Args:
        classes: IRI -> {"labels": [...], "parents": [...], "deprecated": bool}.
        ontology_iri: IRI of the owl:Ontology node.
    """
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"',
        '         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"',
        '         xmlns:owl="http://www.w3.org/2002/07/owl#">',
        f'  <owl:Ontology rdf:about="{ontology_iri}"/>',
    ]
    for class_iri in sorted(classes):
        entry = classes[class_iri]
        lines.append(f'  <owl:Class rdf:about="{class_iri}">')
        for label in entry.get("labels", []):  # type: ignore[union-attr]
            lines.append(f"    <rdfs:label>{escape(str(label))}</rdfs:label>")
        for parent in entry.get("parents", []):  # type: ignore[union-attr]
            lines.append(f'    <rdfs:subClassOf rdf:resource="{parent}"/>')
        if entry.get("deprecated"):
            lines.append("    <owl:deprecated>true</owl:deprecated>")
        lines.append("  </owl:Class>")
    lines.append("</rdf:RDF>")
    return ("\n".join(lines) + "\n").encode("utf-8")


SAMPLE_RDFXML = b"""<?xml version="1.0" encoding="UTF-8"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#"
         xmlns:oboInOwl="http://www.geneontology.org/formats/oboInOwl#"
         xml:base="http://ex.org/onto">
  <owl:Ontology rdf:about="http://ex.org/onto"/>
  <owl:ObjectProperty rdf:about="http://ex.org/partOf"/>
  <!-- a comment -->
  <owl:Class rdf:about="http://ex.org/A">
    <rdfs:label xml:lang="en">Heart   attack</rdfs:label>
    <oboInOwl:hasExactSynonym>Myocardial infarction</oboInOwl:hasExactSynonym>
    <oboInOwl:hasDbXref>MONDO:0005068</oboInOwl:hasDbXref>
    <rdfs:subClassOf rdf:resource="http://ex.org/B"/>
    <rdfs:subClassOf>
      <owl:Restriction>
        <owl:onProperty rdf:resource="http://ex.org/partOf"/>
        <owl:someValuesFrom rdf:resource="http://ex.org/C"/>
      </owl:Restriction>
    </rdfs:subClassOf>
  </owl:Class>
  <owl:Class rdf:about="http://ex.org/B">
    <rdfs:label>Bee</rdfs:label>
    <owl:deprecated rdf:datatype="http://www.w3.org/2001/XMLSchema#boolean">true</owl:deprecated>
    <rdfs:subClassOf rdf:resource="http://ex.org/C"/>
  </owl:Class>
  <owl:Class rdf:about="http://ex.org/C">
    <rdfs:label>Sea</rdfs:label>
    <rdfs:subClassOf rdf:resource="http://ex.org/Missing"/>
  </owl:Class>
  <owl:Class rdf:about="http://ex.org/C">
    <rdfs:label>See</rdfs:label>
  </owl:Class>
  <owl:Class rdf:ID="D">
    <rdfs:label>Dee</rdfs:label>
    <rdfs:subClassOf rdf:resource="http://ex.org/A"/>
  </owl:Class>
  <rdf:Description rdf:about="http://ex.org/E">
    <rdf:type rdf:resource="http://www.w3.org/2002/07/owl#Class"/>
    <rdfs:label>Entity E</rdfs:label>
    <rdfs:subClassOf rdf:resource="http://ex.org/E"/>
  </rdf:Description>
  <owl:Class rdf:about="http://ex.org/F">
    <rdfs:subClassOf rdf:resource="http://www.w3.org/2002/07/owl#Thing"/>
  </owl:Class>
</rdf:RDF>
"""


@pytest.fixture
def make_onto() -> OntologyFactory:
    """Factory building snapshots from short class names."""
    return build_onto


@pytest.fixture
def chain_onto() -> OntologySnapshot:
    """Chain A < B < C < D < E with one label per class."""
    return build_onto(
        {"A": ["B"], "B": ["C"], "C": ["D"], "D": ["E"], "E": []},
        labels={n: [f"class {n.lower()}"] for n in "ABCDE"},
    )


@pytest.fixture
def diamond_onto() -> OntologySnapshot:
    """Diamond A < B < D, A < C < D."""
    return build_onto({"A": ["B", "C"], "B": ["D"], "C": ["D"], "D": []})


@pytest.fixture
def sample_rdfxml() -> bytes:
    """RDF/XML document exercising every recognised construct."""
    return SAMPLE_RDFXML


@pytest.fixture
def write_tsv() -> Callable[[Path, Iterable[Tuple[str, str]]], Path]:
    """Write a mapping TSV file from full-IRI pairs."""

    def write(path: Path, pairs: Iterable[Tuple[str, str]]) -> Path:
        rows = ["SrcEntity\tTgtEntity\tScore"]
        rows.extend(f"{s}\t{t}\t1.0" for s, t in pairs)
        path.write_text("\n".join(rows) + "\n", encoding="utf-8")
        return path

    return write


@pytest.fixture
def write_json() -> Callable[[Path, object], Path]:
    """Write a JSON file."""

    def write(path: Path, data: object) -> Path:
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
