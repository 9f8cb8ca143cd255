"""
Tests for dataset construction: pruning, equivalence extraction and
subsumption mapping generation.
"""

from __future__ import annotations

import random

import pytest

from ontomatch_bench.datasets import (
    HubTable,
    build_subsumption_dataset,
    extract_equivalence,
    prune,
    read_preserved_set,
)
from ontomatch_bench.exceptions import SchemaError
from ontomatch_bench.mappings import Mapping, MappingSet, Relation
from tests.conftest import build_onto, eq, iri, random_dag, reachable_pairs

OBO = "http://purl.obolibrary.org/obo/"


class TestPrune:
    """Tests for prune."""

    def test_middle_class_removed(self):
        """Test that pruning a chain keeps the ends linked."""
        onto = build_onto({"A": ["B"], "B": ["C"]})

        pruned = prune(onto, {iri("A"), iri("C")})

        assert set(pruned.classes) == {iri("A"), iri("C")}
        assert pruned.asserted_parents(iri("A")) == {iri("C")}

    def test_unknown_iris_ignored(self, chain_onto):
        """Test that preserved IRIs missing from the ontology are ignored."""
        pruned = prune(chain_onto, {iri("A"), iri("Z")})

        assert list(pruned) == [iri("A")]

    def test_empty_preserve_set(self, chain_onto):
        """Test that an empty preserved set gives an empty ontology."""
        assert len(prune(chain_onto, set())) == 0

    def test_idempotent(self, chain_onto):
        """Test that pruning twice with the same set changes nothing."""
        keep = {iri("A"), iri("C"), iri("E")}

        once = prune(chain_onto, keep)

        assert prune(once, keep).to_dict() == once.to_dict()

    def test_ancestry_preserved_on_random_dags(self):
        """Test that ancestry among preserved classes is unchanged."""
        rng = random.Random(5)
        for _ in range(50):
            onto = random_dag(rng, 30)
            keep = set(rng.sample(list(onto.classes), rng.randint(1, 29)))

            pruned = prune(onto, keep)

            assert set(pruned.classes) == keep
            assert reachable_pairs(pruned, keep) == reachable_pairs(onto, keep)

    def test_read_preserved_set(self, tmp_path):
        """Test that the first column of each nonempty line is read."""
        path = tmp_path / "keep.tsv"
        path.write_text(f"{iri('A')}\tlabel\n\n{iri('B')}\n", encoding="utf-8")

        assert read_preserved_set(path) == {iri("A"), iri("B")}


class TestHubTable:
    """Tests for HubTable parsing."""

    def test_members(self):
        """Test that members collects IRIs of one ontology."""
        hub = HubTable.from_dict(
            {"C1": {"ncit": ["n1"], "doid": ["d1"]}, "C2": {"ncit": ["n2", "n1"]}}
        )

        assert hub.members("ncit") == {"n1", "n2"}
        assert hub.members("doid") == {"d1"}
        assert hub.invalid == set()

    def test_invalid_references_flagged(self):
        """Test that empty or missing IDs mark the concept invalid."""
        hub = HubTable.from_dict(
            {
                "C1": {"ncit": ["", "n1"]},
                "C2": {"doid": None},
                "C3": {"doid": []},
                "C4": {"doid": ["d4"]},
            }
        )

        assert hub.invalid == {"C1", "C2", "C3"}
        assert hub.entries["C1"] == {"ncit": ["n1"]}
        assert hub.entries["C4"] == {"doid": ["d4"]}

    def test_bad_shape(self):
        """Test that a non-object member raises SchemaError."""
        with pytest.raises(SchemaError) as excinfo:
            HubTable.from_dict({"C1": ["n1"]})
        assert excinfo.value.path == "C1"

    def test_load(self, tmp_path, write_json):
        """Test loading a hub table from a JSON file."""
        path = write_json(tmp_path / "hub.json", {"C1": {"ncit": ["n1"]}})

        assert HubTable.load(path).members("ncit") == {"n1"}

    def test_load_invalid_json(self, tmp_path):
        """Test that invalid JSON raises SchemaError."""
        path = tmp_path / "hub.json"
        path.write_text("{", encoding="utf-8")

        with pytest.raises(SchemaError):
            HubTable.load(path)


class TestExtractEquivalence:
    """Tests for extract_equivalence."""

    def _ontologies(self):
        src = build_onto({OBO + "NCIT_C27518": [], OBO + "NCIT_C1": []})
        tgt = build_onto({OBO + "DOID_4321": [], OBO + "DOID_1": []})
        return src, tgt

    def test_pair_extracted(self):
        """Test that a shared hub concept yields one equivalence."""
        src, tgt = self._ontologies()
        hub = HubTable.from_dict(
            {"MONDO:1": {"ncit": [OBO + "NCIT_C27518"], "doid": [OBO + "DOID_4321"]}}
        )

        result = extract_equivalence(hub, src, tgt, src_id="ncit", tgt_id="doid")

        assert list(result) == [
            Mapping(OBO + "NCIT_C27518", OBO + "DOID_4321", Relation.EQUIVALENCE)
        ]

    def test_absent_classes_excluded(self):
        """Test that pairs with a class missing from the snapshots are dropped."""
        src, tgt = self._ontologies()
        hub = HubTable.from_dict(
            {
                "MONDO:1": {"ncit": [OBO + "NCIT_C27518"], "doid": [OBO + "DOID_9"]},
                "MONDO:2": {"ncit": [OBO + "NCIT_C1"]},
            }
        )

        assert len(extract_equivalence(hub, src, tgt, "ncit", "doid")) == 0

    def test_many_to_many(self):
        """Test that every source/target pair of a concept is emitted."""
        src, tgt = self._ontologies()
        hub = HubTable.from_dict(
            {
                "MONDO:1": {
                    "ncit": [OBO + "NCIT_C27518", OBO + "NCIT_C1"],
                    "doid": [OBO + "DOID_4321", OBO + "DOID_1"],
                }
            }
        )

        assert len(extract_equivalence(hub, src, tgt, "ncit", "doid")) == 4

    def test_permutation_invariant(self):
        """Test that hub entry order does not change the result."""
        src, tgt = self._ontologies()
        data = {
            "MONDO:1": {"ncit": [OBO + "NCIT_C27518"], "doid": [OBO + "DOID_4321"]},
            "MONDO:2": {"ncit": [OBO + "NCIT_C1"], "doid": [OBO + "DOID_1"]},
        }
        reordered = dict(reversed(list(data.items())))

        first = extract_equivalence(HubTable.from_dict(data), src, tgt, "ncit", "doid")
        second = extract_equivalence(
            HubTable.from_dict(reordered), src, tgt, "ncit", "doid"
        )

        assert list(first) == list(second)

    def test_ontology_iri_default_ids(self):
        """Test that ontology IRIs are the default hub keys."""
        src = build_onto({"A": []}, ontology_iri="src")
        tgt = build_onto({"X": []}, ontology_iri="tgt")
        hub = HubTable.from_dict({"H": {"src": [iri("A")], "tgt": [iri("X")]}})

        assert extract_equivalence(hub, src, tgt).keys() == {(iri("A"), iri("X"))}


class TestBuildSubsumption:
    """Tests for build_subsumption_dataset."""

    def test_single_parent(self):
        """Test that the only parent of the equivalent class is chosen."""
        src = build_onto({"a1": []})
        tgt = build_onto({"Y": ["P"], "P": []})

        result = build_subsumption_dataset(src, tgt, eq([("a1", "Y")]))

        expected = Mapping(iri("a1"), iri("P"), Relation.SUBSUMPTION)
        assert result.subs_mappings == [expected]
        assert iri("Y") not in result.modified_target
        assert result.deleted_classes == {iri("Y")}

    def test_deleted_target_skipped(self):
        """Test that a second equivalence to a deleted class is skipped."""
        src = build_onto({"a1": [], "a2": []})
        tgt = build_onto({"Y": ["P"], "P": []})

        result = build_subsumption_dataset(src, tgt, eq([("a1", "Y"), ("a2", "Y")]))

        assert [m.key for m in result.subs_mappings] == [(iri("a1"), iri("P"))]
        assert result.skipped_equivalences == 1

    def test_later_deletion_removes_mapping(self):
        """Test that a mapping whose target is deleted later is removed."""
        src = build_onto({"a1": [], "a2": []})
        tgt = build_onto({"Y": ["P"], "P": ["Q"], "Q": []})

        result = build_subsumption_dataset(src, tgt, eq([("a1", "Y"), ("a2", "P")]))

        assert [m.key for m in result.subs_mappings] == [(iri("a2"), iri("Q"))]
        assert result.removed_subsumptions == 1
        assert result.modified_target.asserted_parents(iri("Q")) == set()
        assert set(result.modified_target.classes) == {iri("Q")}

    def test_parentless_target_skipped(self):
        """Test that a target without named parents is skipped and kept."""
        src = build_onto({"a1": []})
        tgt = build_onto({"Y": []})

        result = build_subsumption_dataset(src, tgt, eq([("a1", "Y")]))

        assert result.subs_mappings == []
        assert result.no_parent_skips == 1
        assert iri("Y") in result.modified_target

    def test_unknown_classes_counted(self):
        """Test that equivalences with unknown classes are counted."""
        src = build_onto({"a1": []})
        tgt = build_onto({"Y": ["P"]})

        result = build_subsumption_dataset(src, tgt, eq([("zz", "Y")]))

        assert result.unknown_classes == 1
        assert result.subs_mappings == []

    def test_children_relinked(self):
        """Test that children of a deleted class keep their ancestry."""
        src = build_onto({"a1": []})
        tgt = build_onto({"K": ["Y"], "Y": ["P"], "P": []})

        result = build_subsumption_dataset(src, tgt, eq([("a1", "Y")]))

        assert result.modified_target.asserted_parents(iri("K")) == {iri("P")}

    def test_report_layout(self):
        """Test the summary report keys and values."""
        src = build_onto({"a1": []})
        tgt = build_onto({"Y": ["P"], "P": []})

        report = build_subsumption_dataset(src, tgt, eq([("a1", "Y")])).to_report()

        assert report == {
            "subsumption_mappings": 1,
            "skipped_equivalences": 0,
            "removed_subsumptions": 0,
            "no_parent_skips": 0,
            "unknown_classes": 0,
            "deleted_classes": 1,
            "target_classes": 1,
        }

    @staticmethod
    def _random_instance(rng: random.Random):
        tgt = random_dag(rng, 40, p=0.2)
        names = list(tgt.classes)
        src = build_onto({f"s{i}": [] for i in range(30)})
        pairs = {
            (f"s{rng.randrange(30)}", rng.choice(names).rsplit("/", 1)[-1])
            for _ in range(rng.randint(1, 30))
        }
        return src, tgt, eq(pairs)

    def test_counts_reconcile(self):
        """Test that every equivalence is accounted for exactly once."""
        rng = random.Random(17)
        for _ in range(50):
            src, tgt, equiv = self._random_instance(rng)

            r = build_subsumption_dataset(src, tgt, equiv, seed=rng.randrange(1000))

            assert len(equiv) == (
                len(r.subs_mappings)
                + r.skipped_equivalences
                + r.no_parent_skips
                + r.removed_subsumptions
                + r.unknown_classes
            )

    def test_no_leakage(self):
        """Test that emitted targets survive and equivalent targets are gone."""
        rng = random.Random(23)
        for _ in range(50):
            src, tgt, equiv = self._random_instance(rng)

            r = build_subsumption_dataset(src, tgt, equiv)

            for m in r.subs_mappings:
                assert m.tgt in r.modified_target
                assert m.relation is Relation.SUBSUMPTION
            for cls in r.deleted_classes:
                assert cls not in r.modified_target
            survivors = set(r.modified_target.classes)
            assert reachable_pairs(r.modified_target, survivors) == reachable_pairs(
                tgt, survivors
            )

    def test_seeded_reproducibility(self):
        """Test that the same seed gives identical mappings."""
        rng = random.Random(29)
        src, tgt, equiv = self._random_instance(rng)

        first = build_subsumption_dataset(src, tgt, equiv, seed=3)
        second = build_subsumption_dataset(src, tgt, equiv, seed=3)

        assert first.subs_mappings == second.subs_mappings
        assert first.modified_target.to_dict() == second.modified_target.to_dict()

    def test_input_order_irrelevant(self):
        """Test that the result does not depend on mapping set construction order."""
        src = build_onto({"a1": [], "a2": []})
        tgt = build_onto({"Y": ["P", "R"], "Z": ["P", "R"], "P": [], "R": []})
        pairs = [("a1", "Y"), ("a2", "Z")]

        forward = build_subsumption_dataset(src, tgt, eq(pairs), seed=5)
        backward = build_subsumption_dataset(
            src, tgt, MappingSet(reversed(list(eq(pairs)))), seed=5
        )

        assert forward.subs_mappings == backward.subs_mappings
