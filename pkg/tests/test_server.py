from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from annoflow.demo import build_demo_project
from annoflow.server.app import create_app


@pytest.fixture
def merged_dir(tmp_path):
    build_demo_project(tmp_path / "demo", n_docs=8, stage="merged")
    return tmp_path / "demo" / "project"


@pytest.fixture
def client(merged_dir):
    with TestClient(create_app(merged_dir)) as c:
        yield c


class TestReadEndpoints:
    def test_project_summary(self, client):
        body = client.get("/api/project").json()
        assert body["name"] == "demo"
        assert body["annotators"] == ["anna", "bjorn"]
        assert body["labels"][0] == "JOB_TITLE"
        assert body["iterations"][0]["stage"] == "Merged"

    def test_iteration_summary(self, client):
        body = client.get("/api/iterations/0").json()
        assert body["stage"] == "Merged"
        assert body["conflicts_open"] > 0

    def test_unknown_iteration_is_400(self, client):
        response = client.get("/api/iterations/9")
        assert response.status_code == 400
        assert response.json()["code"] == "ValidationError"

    def test_conflicts_with_context_windows(self, client):
        conflicts = client.get("/api/iterations/0/conflicts?status=open").json()
        assert conflicts
        for conflict in conflicts:
            for variant in conflict["variants"]:
                ctx = variant["context"]
                assert ctx["start"] <= variant["start"]
                assert ctx["end"] >= min(variant["end"], ctx["end"])
                assert ctx["start"] >= variant["start"] - 120
                # window text matches the declared offsets
                doc = client.get(f"/api/docs/{conflict['doc_id']}").json()
                assert doc["text"][ctx["start"]:ctx["end"]] == ctx["text"]

    def test_conflict_status_filter(self, client):
        all_ = client.get("/api/iterations/0/conflicts?status=all").json()
        open_ = client.get("/api/iterations/0/conflicts?status=open").json()
        resolved = client.get("/api/iterations/0/conflicts?status=resolved").json()
        assert len(all_) == len(open_) + len(resolved)

    def test_doc_view(self, client):
        doc = client.get("/api/docs/ad-000").json()
        assert doc["state"] == "merged"
        assert doc["spans"]
        assert client.get("/api/docs/missing").status_code == 404

    def test_placeholder_root(self, client):
        response = client.get("/")
        assert response.status_code == 200
        assert "annoflow" in response.text


class TestResolutionFlow:
    def test_post_resolution_and_finalize(self, client):
        conflicts = client.get("/api/iterations/0/conflicts?status=open").json()
        for conflict in conflicts:
            response = client.post(
                "/api/iterations/0/resolutions",
                json={
                    "conflict_id": conflict["conflict_id"],
                    "action": "accept_variant",
                    "variant_index": 0,
                    "resolver": "anna",
                },
            )
            assert response.status_code == 200
            assert response.json()["status"] == "resolved"
            assert response.json()["resolution"]["action"] == "accept_variant"
        response = client.post("/api/iterations/0/finalize")
        assert response.status_code == 200
        assert response.json()["stage"] == "Finalized"
        assert client.get("/api/iterations/0").json()["conflicts_open"] == 0
        # gold is now served for the docs
        doc = client.get("/api/docs/ad-000").json()
        assert doc["state"] == "gold"

    def test_unknown_conflict_is_404_naming_id(self, client):
        response = client.post(
            "/api/iterations/0/resolutions",
            json={"conflict_id": "ad-000#c99", "action": "drop", "resolver": "x"},
        )
        assert response.status_code == 404
        body = response.json()
        assert body["code"] == "UnknownConflict"
        assert "ad-000#c99" in body["message"]
        assert body["detail"]["conflict_id"] == "ad-000#c99"

    def test_finalize_with_open_conflicts_lists_ids(self, client):
        response = client.post("/api/iterations/0/finalize")
        assert response.status_code == 409
        body = response.json()
        assert body["code"] == "UnresolvedConflict"
        assert body["detail"]["conflict_ids"]

    def test_invalid_action_shape_is_400(self, client):
        conflicts = client.get("/api/iterations/0/conflicts?status=open").json()
        response = client.post(
            "/api/iterations/0/resolutions",
            json={"conflict_id": conflicts[0]["conflict_id"], "action": "relabel", "resolver": "x"},
        )
        assert response.status_code == 400

    def test_overlap_rejection_surfaces(self, client):
        # reshape one conflict on a doc with an agreed span so it collides
        conflicts = client.get("/api/iterations/0/conflicts?status=open").json()
        doc_ids = {c["doc_id"] for c in conflicts}
        target = None
        for doc_id in sorted(doc_ids):
            doc = client.get(f"/api/docs/{doc_id}").json()
            agreed = [s for s in doc["spans"] if s["label"] != "???"]
            if agreed:
                conflict = next(c for c in conflicts if c["doc_id"] == doc_id)
                target = (conflict, agreed[0])
                break
        assert target, "fixture should have a doc with both agreed spans and conflicts"
        conflict, agreed_span = target
        for c in conflicts:  # resolve everything else first
            if c["conflict_id"] == conflict["conflict_id"]:
                continue
            client.post(
                "/api/iterations/0/resolutions",
                json={"conflict_id": c["conflict_id"], "action": "drop", "resolver": "x"},
            )
        response = client.post(
            "/api/iterations/0/resolutions",
            json={
                "conflict_id": conflict["conflict_id"],
                "action": "reshape",
                "start": agreed_span["start"],
                "end": agreed_span["end"],
                "label": agreed_span["label"],
                "resolver": "x",
            },
        )
        # rejected inline so the session sees the collision immediately
        assert response.status_code == 400
        assert response.json()["code"] == "OverlapAfterResolution"
        still_open = client.get("/api/iterations/0/conflicts?status=open").json()
        assert any(c["conflict_id"] == conflict["conflict_id"] for c in still_open)


class TestDurability:
    def test_resolutions_survive_restart(self, merged_dir):
        with TestClient(create_app(merged_dir)) as client:
            conflicts = client.get("/api/iterations/0/conflicts?status=open").json()
            cid = conflicts[0]["conflict_id"]
            client.post(
                "/api/iterations/0/resolutions",
                json={"conflict_id": cid, "action": "drop", "resolver": "anna"},
            )
        # a brand-new app over the same directory sees the decision
        with TestClient(create_app(merged_dir)) as client:
            resolved = client.get("/api/iterations/0/conflicts?status=resolved").json()
            assert any(c["conflict_id"] == cid for c in resolved)
            assert client.get("/api/iterations/0").json()["conflicts_resolved"] >= 1

    def test_finalized_project_is_read_only(self, tmp_path):
        build_demo_project(tmp_path / "demo", n_docs=6, stage="finalized")
        with TestClient(create_app(tmp_path / "demo" / "project")) as client:
            assert client.get("/api/project").status_code == 200
            response = client.post(
                "/api/iterations/0/resolutions",
                json={"conflict_id": "ad-000#c0", "action": "drop", "resolver": "x"},
            )
            assert response.status_code == 409
            assert response.json()["code"] == "WrongStage"
