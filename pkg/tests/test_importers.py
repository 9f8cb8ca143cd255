"""
Tests for ontology importers and preprocessing.
"""

from __future__ import annotations

import json

import pytest

from ontomatch_bench.exceptions import MalformedDocumentError, SchemaError
from ontomatch_bench.importers import (
    DEFAULT_XREF_PROPERTIES,
    OBO_IN_OWL,
    ImportConfig,
    RDFXMLSubsetReader,
    export_json,
    import_json,
    import_rdfxml_subset,
    load_ontology,
    preprocess,
    save_ontology,
)
from ontomatch_bench.ontology import OWL_THING
from tests.conftest import RDFS_LABEL, build_onto, iri, rdfxml

EXACT_SYNONYM = str(OBO_IN_OWL.hasExactSynonym)
DB_XREF = str(OBO_IN_OWL.hasDbXref)

MINIMAL = b"""<?xml version="1.0"?>
<rdf:RDF xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"
         xmlns:rdfs="http://www.w3.org/2000/01/rdf-schema#"
         xmlns:owl="http://www.w3.org/2002/07/owl#">
  <owl:Class rdf:about="http://ex.org/A">
    <rdfs:label>Heart</rdfs:label>
  </owl:Class>
</rdf:RDF>
"""


class TestRDFXMLImport:
    """Tests for the RDF/XML subset reader."""

    def test_minimal_document(self):
        """Test one class with one label."""
        onto = import_rdfxml_subset(MINIMAL)

        assert list(onto) == [iri("A")]
        assert onto.get(iri("A")).label_strings() == ["Heart"]

    def test_class_declarations(self, sample_rdfxml):
        """Test that every declaration style yields a class."""
        onto = import_rdfxml_subset(sample_rdfxml)

        assert set(onto.classes) == {
            iri("A"),
            iri("B"),
            iri("C"),
            "http://ex.org/onto#D",
            iri("E"),
            iri("F"),
        }
        assert onto.ontology_iri == "http://ex.org/onto"

    def test_labels_by_property(self, sample_rdfxml):
        """Test that literal annotations are keyed by property IRI."""
        record = import_rdfxml_subset(sample_rdfxml).get(iri("A"))

        assert record.labels[RDFS_LABEL] == ("Heart attack",)
        assert record.labels[EXACT_SYNONYM] == ("Myocardial infarction",)
        assert record.labels[DB_XREF] == ("MONDO:0005068",)

    def test_named_superclasses_only(self, sample_rdfxml):
        """Test that restrictions are skipped and named parents kept."""
        onto = import_rdfxml_subset(sample_rdfxml)

        assert onto.get(iri("A")).parents == {iri("B")}
        assert onto.get("http://ex.org/onto#D").parents == {iri("A")}
        assert onto.get(iri("F")).parents == {OWL_THING}

    def test_deprecated_flag(self, sample_rdfxml):
        """Test that owl:deprecated "true" marks the class."""
        onto = import_rdfxml_subset(sample_rdfxml)

        assert onto.get(iri("B")).deprecated is True
        assert onto.get(iri("A")).deprecated is False

    def test_duplicate_declarations_merged(self, sample_rdfxml):
        """Test that repeated declarations merge their labels."""
        onto = import_rdfxml_subset(sample_rdfxml)

        assert onto.get(iri("C")).labels[RDFS_LABEL] == ("Sea", "See")

    def test_report_counts(self, sample_rdfxml):
        """Test the counters of the import report."""
        reader = RDFXMLSubsetReader()
        reader.read(sample_rdfxml)

        assert reader.report.to_dict() == {
            "classes": 6,
            "labels": 8,
            "duplicate_declarations": 1,
            "dangling_edges": 1,
            "self_edges": 1,
            "anonymous_superclasses": 1,
            "skipped_nodes": 1,
            "skipped_properties": 0,
        }

    def test_dangling_and_self_edges_dropped(self, sample_rdfxml):
        """Test that unresolvable and self edges are not kept."""
        onto = import_rdfxml_subset(sample_rdfxml)

        assert onto.get(iri("C")).parents == frozenset()
        assert onto.get(iri("E")).parents == frozenset()

    def test_relative_iri_uses_base(self):
        """Test that relative references resolve against the given base."""
        document = MINIMAL.replace(b'rdf:about="http://ex.org/A"', b'rdf:about="A"')

        onto = import_rdfxml_subset(document, base_iri="http://base.org/")

        assert list(onto) == ["http://base.org/A"]

    def test_declared_root_skipped(self):
        """Test that a declared owl:Thing is the root, not a class."""
        table = {
            OWL_THING: {"labels": ["Thing"]},
            iri("A"): {"labels": ["a"], "parents": [OWL_THING]},
            iri("B"): {"parents": [iri("A")]},
        }
        reader = RDFXMLSubsetReader()

        onto = reader.read(rdfxml(table))

        assert set(onto.classes) == {iri("A"), iri("B")}
        assert onto.get(iri("A")).parents == {OWL_THING}
        assert onto.transitive_subsumers(iri("B")) == {iri("A")}
        assert reader.report.classes == 2
        assert reader.report.skipped_nodes == 1
        assert reader.report.dangling_edges == 0

    def test_truncated_document(self):
        """Test that truncated XML raises MalformedDocumentError with a location."""
        with pytest.raises(MalformedDocumentError) as excinfo:
            import_rdfxml_subset(MINIMAL[:-20])

        assert excinfo.value.line is not None
        assert excinfo.value.column is not None
        assert "Malformed XML" in str(excinfo.value)

    def test_generated_documents(self):
        """Test that rendered class tables import back unchanged."""
        table = {
            iri("A"): {"labels": ["a & b"], "parents": [iri("B")]},
            iri("B"): {"labels": ["b"], "deprecated": True},
        }

        onto = import_rdfxml_subset(rdfxml(table))

        assert onto.get(iri("A")).label_strings() == ["a & b"]
        assert onto.get(iri("A")).parents == {iri("B")}
        assert onto.get(iri("B")).deprecated


class TestJSONFormat:
    """Tests for the canonical JSON snapshot format."""

    def test_round_trip_bytes(self, sample_rdfxml):
        """Test that export(import(x)) == x for canonical documents."""
        canonical = export_json(import_rdfxml_subset(sample_rdfxml))

        assert export_json(import_json(canonical)) == canonical

    def test_round_trip_snapshot(self, sample_rdfxml):
        """Test that an imported snapshot survives export and re-import."""
        onto = import_rdfxml_subset(sample_rdfxml)

        again = import_json(export_json(onto))

        assert again.to_dict() == onto.to_dict()
        assert again.fingerprint() == onto.fingerprint()

    def test_export_deterministic(self, chain_onto):
        """Test that two exports are byte-identical and newline-terminated."""
        first = export_json(chain_onto)

        assert first == export_json(chain_onto)
        assert first.endswith(b"\n")

    def test_missing_iri(self):
        """Test that a class without iri names its path."""
        document = json.dumps(
            {
                "ontology_iri": "o",
                "classes": [{"iri": "http://ex.org/A"}, {"labels": {}}],
            }
        ).encode()

        with pytest.raises(SchemaError) as excinfo:
            import_json(document)
        assert excinfo.value.path == "classes[1].iri"

    def test_unknown_parent(self):
        """Test that dangling parents are schema violations."""
        document = json.dumps(
            {"ontology_iri": "o", "classes": [{"iri": "a", "parents": ["b"]}]}
        ).encode()

        with pytest.raises(SchemaError) as excinfo:
            import_json(document)
        assert excinfo.value.path == "classes[0].parents[0]"

    def test_wrong_label_type(self):
        """Test that non-string labels are rejected."""
        document = json.dumps(
            {"ontology_iri": "o", "classes": [{"iri": "a", "labels": {"p": [1]}}]}
        ).encode()

        with pytest.raises(SchemaError, match="classes\\[0\\].labels"):
            import_json(document)

    def test_invalid_json(self):
        """Test that invalid JSON is reported at the document root."""
        with pytest.raises(SchemaError) as excinfo:
            import_json(b"{not json")
        assert excinfo.value.path == "$"

    def test_load_and_save(self, tmp_path, chain_onto):
        """Test that save_ontology and load_ontology round-trip through files."""
        path = tmp_path / "onto.json"

        save_ontology(chain_onto, path)

        assert load_ontology(path).to_dict() == chain_onto.to_dict()

    def test_load_rdfxml_file(self, tmp_path):
        """Test that non-JSON files are read as RDF/XML."""
        path = tmp_path / "onto.owl"
        path.write_bytes(MINIMAL)

        assert list(load_ontology(path)) == [iri("A")]


class TestImportConfig:
    """Tests for ImportConfig validation."""

    def test_defaults(self):
        """Test the default property lists."""
        cfg = ImportConfig()

        assert cfg.xref_properties == list(DEFAULT_XREF_PROPERTIES)
        assert RDFS_LABEL in cfg.synonym_properties
        assert cfg.drop_deprecated is True

    def test_duplicates_rejected(self):
        """Test that duplicate property IRIs raise ValueError."""
        with pytest.raises(ValueError, match="must not contain duplicates"):
            ImportConfig(xref_properties=[DB_XREF, DB_XREF])

    def test_overlap_rejected(self):
        """Test that a property cannot be both synonym and xref."""
        with pytest.raises(ValueError, match="must be disjoint"):
            ImportConfig(xref_properties=[RDFS_LABEL])


class TestPreprocess:
    """Tests for preprocess."""

    def test_deprecated_class_relinked(self):
        """Test that a deprecated middle class is removed and bridged."""
        onto = build_onto({"A": ["B"], "B": ["C"]}, deprecated=["B"])

        result = preprocess(onto, ImportConfig())

        assert iri("B") not in result
        assert result.asserted_parents(iri("A")) == {iri("C")}

    def test_xref_labels_removed(self, sample_rdfxml):
        """Test that cross-reference annotations are stripped."""
        onto = import_rdfxml_subset(sample_rdfxml)

        record = preprocess(onto, ImportConfig()).get(iri("A"))

        assert DB_XREF not in record.labels
        assert record.labels[EXACT_SYNONYM] == ("Myocardial infarction",)
        assert record.labels[RDFS_LABEL] == ("Heart attack",)

    def test_noop_config(self, sample_rdfxml):
        """Test that keeping deprecated classes and no xrefs is the identity."""
        onto = import_rdfxml_subset(sample_rdfxml)

        cfg = ImportConfig(xref_properties=[], drop_deprecated=False)
        result = preprocess(onto, cfg)

        assert result.fingerprint() == onto.fingerprint()

    def test_ancestry_among_survivors_preserved(self, sample_rdfxml):
        """Test that preprocessing keeps ancestry among surviving classes."""
        onto = import_rdfxml_subset(sample_rdfxml)

        result = preprocess(onto, ImportConfig())

        for cls in result.classes:
            assert result.transitive_subsumers(cls) == (
                onto.transitive_subsumers(cls) & set(result.classes)
            )

    def test_empty_ontology(self):
        """Test that an empty ontology passes through."""
        onto = build_onto({})

        assert len(preprocess(onto, ImportConfig())) == 0
