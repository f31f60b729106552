from __future__ import annotations

import json

import pytest

from conftest import MINI_EDGES, MINI_NODES, build_taxonomy
from mindkb import taxonomy as tx
from mindkb.errors import (
    CannotRemoveRoot,
    DuplicateId,
    ParseError,
    UnknownNode,
    UnknownParent,
    ValidationError,
)
from mindkb.resources import TAXONOMY_FIXTURE, bundled_path


class TestLoad:
    def test_bundled_fixture_is_valid(self, depression_taxonomy):
        t = depression_taxonomy
        assert len(t.nodes) >= 22
        assert tx.validate(t) == []
        # the 17 scored instances are all present
        scored = {
            "negative_feeling", "disgust", "sadness", "discrepancy",
            "tentativeness", "certainty", "leisure", "suicidal_behaviours",
            "self_focused_attention", "anxiety", "anger", "fear",
            "symptom_unigrams", "treatment_unigrams", "disclosure_unigrams",
            "relationship_unigrams", "absolute_words",
        }
        instance_ids = {n.id for n in t.instances()}
        assert scored <= instance_ids
        assert len(scored) == 17

    def test_root_only_document(self, tmp_path):
        doc = {"name": "mini", "version": "1",
               "nodes": [{"id": "r", "label": "Mental Disorders",
                          "level": 1, "kind": "Root"}],
               "edges": []}
        path = tmp_path / "t.json"
        path.write_text(json.dumps(doc))
        t = tx.load_taxonomy(path)
        assert len(t.nodes) == 1
        assert len(t.edges) == 0

    def test_level_violation_names_edge(self, tmp_path):
        doc = {"name": "bad", "version": "1",
               "nodes": [
                   {"id": "r", "label": "Mental Disorders", "level": 1,
                    "kind": "Root"},
                   {"id": "a", "label": "A", "level": 5, "kind": "Instance"},
                   {"id": "b", "label": "B", "level": 5, "kind": "Instance"},
               ],
               "edges": [{"from": "a", "to": "b", "kind": "Hierarchical"}]}
        path = tmp_path / "t.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ValidationError) as excinfo:
            tx.load_taxonomy(path)
        assert any(v.code == "level-violation" and v.subject == "a->b"
                   for v in excinfo.value.violations)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "t.json"
        path.write_text("{not json")
        with pytest.raises(ParseError):
            tx.load_taxonomy(path)

    def test_bad_kind_string(self, tmp_path):
        doc = {"name": "x", "version": "1",
               "nodes": [{"id": "r", "label": "R", "level": 1,
                          "kind": "Banana"}],
               "edges": []}
        path = tmp_path / "t.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(ParseError):
            tx.load_taxonomy(path)


class TestValidate:
    def test_valid_fixture_empty(self, depression_taxonomy):
        assert tx.validate(depression_taxonomy) == []

    def test_two_roots_single_violation(self):
        nodes = MINI_NODES + [("root2", "Another", 1, "Root")]
        t = build_taxonomy(nodes, MINI_EDGES)
        codes = [v.code for v in tx.validate(t)]
        assert codes.count("multiple-roots") == 1

    def test_orphan_edge_detected(self):
        edges = MINI_EDGES + [("sadness", "ghost", "Hierarchical", None)]
        t = build_taxonomy(MINI_NODES, edges)
        violations = tx.validate(t)
        assert any(v.code == "orphan-edge" and "ghost" in v.subject
                   for v in violations)

    def test_cycle_detected(self):
        nodes = MINI_NODES + [
            ("c1", "C1", 5, "Instance"), ("c2", "C2", 5, "Instance")]
        edges = MINI_EDGES + [
            ("c1", "c2", "Hierarchical", None),
            ("c2", "c1", "Hierarchical", None),
        ]
        t = build_taxonomy(nodes, edges)
        codes = {v.code for v in tx.validate(t)}
        assert "unreachable" in codes

    def test_level_skip_detected(self):
        nodes = [("root", "Mental Disorders", 1, "Root"),
                 ("deep", "Deep", 3, "Disorder")]
        edges = [("root", "deep", "Hierarchical", None)]
        t = build_taxonomy(nodes, edges)
        codes = {v.code for v in tx.validate(t)}
        assert "level-violation" in codes

    def test_concept_label_constraint(self):
        nodes = [("root", "Mental Disorders", 1, "Root"),
                 ("g", "G", 2, "DisorderGroup"),
                 ("d", "D", 3, "Disorder"),
                 ("c", "Moods", 4, "Concept")]
        edges = [("root", "g", "Hierarchical", None),
                 ("g", "d", "Hierarchical", None),
                 ("d", "c", "Hierarchical", None)]
        t = build_taxonomy(nodes, edges)
        assert any(v.code == "concept-label" for v in tx.validate(t))

    def test_cross_edge_requires_type(self):
        edges = MINI_EDGES + [("sadness", "fatigue", "Cross", None)]
        t = build_taxonomy(MINI_NODES, edges)
        assert any(v.code == "missing-cross-type" for v in tx.validate(t))

    def test_deterministic_ordering(self):
        nodes = MINI_NODES + [("root2", "Another", 1, "Root")]
        edges = MINI_EDGES + [("sadness", "ghost", "Hierarchical", None)]
        t = build_taxonomy(nodes, edges)
        first = [str(v) for v in tx.validate(t)]
        second = [str(v) for v in tx.validate(t)]
        assert first == second


class TestEdits:
    def test_add_subinstance(self, depression_taxonomy):
        t = depression_taxonomy
        node = tx.TaxonomyNode("decision_difficulty_2", "Decision-making "
                               "difficulty", 6, tx.NodeKind.SUB_INSTANCE)
        grown = tx.add_node(t, node, "psychomotor_problems")
        assert len(grown.nodes) == len(t.nodes) + 1
        assert len(grown.edges) == len(t.edges) + 1
        assert tx.validate(grown) == []

    def test_add_duplicate_id(self, mini_taxonomy):
        node = tx.TaxonomyNode("sadness", "Sadness", 5, tx.NodeKind.INSTANCE)
        with pytest.raises(DuplicateId):
            tx.add_node(mini_taxonomy, node, "sym")

    def test_add_unknown_parent(self, mini_taxonomy):
        node = tx.TaxonomyNode("new", "New", 5, tx.NodeKind.INSTANCE)
        with pytest.raises(UnknownParent):
            tx.add_node(mini_taxonomy, node, "ghost")

    def test_add_wrong_level_parent(self, mini_taxonomy):
        node = tx.TaxonomyNode("new", "New", 6, tx.NodeKind.SUB_INSTANCE)
        with pytest.raises(ValidationError):
            tx.add_node(mini_taxonomy, node, "root")

    def test_remove_leaf(self, mini_taxonomy):
        shrunk = tx.remove_node(mini_taxonomy, "fatigue")
        assert len(shrunk.nodes) == len(mini_taxonomy.nodes) - 1
        assert tx.validate(shrunk) == []

    def test_remove_root_forbidden(self, mini_taxonomy):
        with pytest.raises(CannotRemoveRoot):
            tx.remove_node(mini_taxonomy, "root")

    def test_remove_unknown(self, mini_taxonomy):
        with pytest.raises(UnknownNode):
            tx.remove_node(mini_taxonomy, "ghost")

    def test_remove_subtree_and_cross_edges(self):
        nodes = MINI_NODES + [
            ("parent", "Parent", 5, "Instance"),
            ("kid1", "Kid 1", 6, "SubInstance"),
            ("kid2", "Kid 2", 6, "SubInstance"),
        ]
        edges = MINI_EDGES + [
            ("sym", "parent", "Hierarchical", None),
            ("parent", "kid1", "Hierarchical", None),
            ("parent", "kid2", "Hierarchical", None),
            ("kid1", "sadness", "Cross", "SameAs"),
        ]
        t = build_taxonomy(nodes, edges)
        assert tx.validate(t) == []
        shrunk = tx.remove_node(t, "parent")
        assert len(shrunk.nodes) == len(t.nodes) - 3
        cross = [e for e in shrunk.edges if e.kind is tx.RelationKind.CROSS]
        assert len(cross) == 0
        assert tx.validate(shrunk) == []

    def test_add_then_remove_leaf_is_identity(self, mini_taxonomy):
        node = tx.TaxonomyNode("new", "New", 5, tx.NodeKind.INSTANCE)
        grown = tx.add_node(mini_taxonomy, node, "sym")
        back = tx.remove_node(grown, "new")
        assert set(back.nodes) == set(mini_taxonomy.nodes)
        assert set(back.edges) == set(mini_taxonomy.edges)


class TestQueries:
    def test_same_as_is_symmetric(self, depression_taxonomy):
        related = tx.query_related(depression_taxonomy, "indecisiveness",
                                   "SameAs")
        assert [node_id for node_id, _ in related] == [
            "decision_making_difficulty"]
        reverse = tx.query_related(depression_taxonomy,
                                   "decision_making_difficulty", "SameAs")
        assert [node_id for node_id, _ in reverse] == ["indecisiveness"]

    def test_cause_in_is_directional(self, depression_taxonomy):
        out = tx.query_related(depression_taxonomy, "distress", "CauseIn")
        assert [node_id for node_id, _ in out] == ["anxiety"]
        back = tx.query_related(depression_taxonomy, "anxiety", "CauseIn")
        assert back == []

    def test_root_has_no_ancestors(self, depression_taxonomy):
        assert tx.query_related(depression_taxonomy, "mental_disorders",
                                "ancestors") == []

    def test_leaf_has_no_descendants(self, depression_taxonomy):
        assert tx.query_related(depression_taxonomy, "sadness",
                                "descendants") == []

    def test_ancestors_walk_to_root(self, depression_taxonomy):
        related = tx.query_related(depression_taxonomy, "sadness", "ancestors")
        assert [node_id for node_id, _ in related] == [
            "symptoms", "mdd", "depressive_disorders", "mental_disorders"]

    def test_unknown_node(self, depression_taxonomy):
        with pytest.raises(UnknownNode):
            tx.query_related(depression_taxonomy, "ghost", "cross")


class TestProperties:
    def test_tree_edge_count(self, depression_taxonomy):
        hierarchical = [e for e in depression_taxonomy.edges
                        if e.kind is tx.RelationKind.HIERARCHICAL]
        assert len(hierarchical) == len(depression_taxonomy.nodes) - 1

    def test_round_trip_identity(self, depression_taxonomy, tmp_path):
        path = tmp_path / "out.json"
        tx.save_taxonomy(depression_taxonomy, path)
        loaded = tx.load_taxonomy(path)
        assert set(loaded.nodes) == set(depression_taxonomy.nodes)
        assert set(loaded.edges) == set(depression_taxonomy.edges)

    def test_bundled_path_matches_loader(self):
        t = tx.load_taxonomy(bundled_path(TAXONOMY_FIXTURE))
        assert t.name == "depression-kb"
