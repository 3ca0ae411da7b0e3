"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines live.
The gateway-facing criteria run through real HTTP against the embedded
backend; the topology criterion re-runs the same flow against the
multi-process backend and demands identical answers.
"""

import time
from contextlib import contextmanager

import pytest

import oracles
from gateway_harness import GatewayHarness
from geolink.server.auth import TokenService, load_or_create_secret

QUERY_BUDGET_S = 1.0
ORACLE_BUDGET_S = 60.0

AT_ACTIVE = "2026-03-10T10:00:00Z"     # latest wind reading 14.2 > 12
AT_CALM = "2026-03-10T07:30:00Z"       # latest reading 10.0 < 12
AT_NO_DATA = "2026-03-09T00:00:00Z"    # before any reading


@contextmanager
def criterion(name):
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}", flush=True)
        raise
    print(f"[PASS] {name}", flush=True)


@pytest.fixture(scope="module")
def harness(tmp_path_factory):
    h = GatewayHarness(tmp_path_factory.mktemp("acceptance"), mode="embedded")
    h.load_demo_fixtures()
    yield h
    h.close()


def timed_call(client, method, path, **kwargs):
    started = time.perf_counter()
    status, envelope = client.call(method, path, **kwargs)
    elapsed = time.perf_counter() - started
    assert elapsed < QUERY_BUDGET_S, f"{path} took {elapsed:.3f}s"
    return status, envelope


# -- use case 1: entity/project co-occurrence --------------------------------


def test_use_case_1_cooccurrence_and_pair_frequencies(harness):
    with criterion("use-case-1: co-occurrence exact {p2}, pair (a,c1)=2, <1s"):
        token = harness.client.login("viewer")
        status, envelope = timed_call(
            harness.client, "GET", "/graph/cooccurrence?person=b&company=c2", token=token
        )
        assert status == 200
        assert envelope["data"]["projects"] == ["p2"]

        status, envelope = timed_call(
            harness.client, "GET", "/graph/pair-frequencies", token=token
        )
        assert status == 200
        pairs = envelope["data"]["pairs"]
        assert pairs[0] == {"person": "a", "company": "c1", "count": 2}
        assert all(p["count"] <= 2 for p in pairs)


# -- use case 2: weather validation -------------------------------------------


def test_use_case_2_active_restriction_states(harness):
    with criterion("use-case-2: active/empty/unverifiable across sensor states, <1s"):
        token = harness.client.login("viewer")

        status, envelope = timed_call(
            harness.client, "GET", f"/restrictions/active?at={AT_ACTIVE}", token=token
        )
        assert status == 200
        active = envelope["data"]["active"]
        assert len(active) == 1
        restriction = active[0]
        assert restriction["areaId"] == "area-west"
        assert restriction["inferred"] is False
        chain_labels = [link["label"] for link in restriction["explanation"]["chain"]]
        assert chain_labels == [
            "Topic", "STATED_IN", "Document", "PART_OF", "Project",
            "HAS_AREA", "Area", "APPLIES_TO", "Sensor",
        ]
        assert restriction["explanation"]["reading"]["value"] == 14.2
        assert restriction["statement"]["threshold"] == 12.0

        status, envelope = timed_call(
            harness.client, "GET", f"/restrictions/active?at={AT_CALM}", token=token
        )
        assert envelope["data"]["active"] == []
        assert envelope["data"]["unverifiable"] == []

        status, envelope = timed_call(
            harness.client, "GET", f"/restrictions/active?at={AT_NO_DATA}", token=token
        )
        assert envelope["data"]["active"] == []
        unverifiable = envelope["data"]["unverifiable"]
        assert len(unverifiable) == 1
        assert unverifiable[0]["areaId"] == "area-west"
        assert unverifiable[0]["explanation"]["unknownStations"] == ["st-1"]


def test_red_path_inference(harness):
    with criterion("red-path: overlap area inherits restriction, gate respected, <1s"):
        token = harness.client.login("viewer")
        status, envelope = timed_call(
            harness.client, "GET", f"/restrictions/inferred?at={AT_ACTIVE}", token=token
        )
        assert status == 200
        inferred = envelope["data"]["inferred"]
        assert len(inferred) == 1
        restriction = inferred[0]
        assert restriction["areaId"] == "area-east"  # has no document of its own
        assert restriction["inferred"] is True
        assert restriction["explanation"]["overlapFraction"] == 0.5
        assert [l["label"] for l in restriction["explanation"]["chain"][-2:]] == ["OVERLAPS", "Area"]

        status, envelope = timed_call(
            harness.client, "GET",
            f"/restrictions/inferred?at={AT_ACTIVE}&minOverlap=0.6", token=token,
        )
        assert envelope["data"]["inferred"] == []


# -- randomized oracle suites ---------------------------------------------------


def test_oracle_suites_two_hundred_cases_each():
    with criterion("oracle suites: 5x200 randomized cases, 100% agreement, <60s"):
        started = time.perf_counter()
        assert oracles.run_match_chain_suite(cases=200, seed=1001) == 200
        assert oracles.run_search_suite(cases=200, seed=2002) == 200
        assert oracles.run_restrictions_suite(cases=200, seed=3003) == 200
        assert oracles.run_heatmap_suite(cases=200, seed=4004) == 200
        assert oracles.run_overlap_suite(cases=200, seed=5005, tolerance=0.01) == 200
        elapsed = time.perf_counter() - started
        print(f"  (oracle suites took {elapsed:.1f}s)", flush=True)
        assert elapsed < ORACLE_BUDGET_S


# -- provenance ---------------------------------------------------------------


def test_provenance_round_trip_all_fixture_documents(harness):
    with criterion("provenance: page slice equals statement text byte-for-byte"):
        token = harness.client.login("admin")
        checked = 0
        for name in ("doc-p1", "doc-p2", "doc-p3", "doc-uc2", "doc-breed", "doc-secret"):
            status, source = harness.client.call(
                "GET", f"/documents/{name}/source", token=token
            )
            assert status == 200
            pages = source["data"]["pages"]
            status, stmts = harness.client.call(
                "GET", f"/documents/{name}/statements", token=token
            )
            assert status == 200
            for statement in stmts["data"]["statements"]:
                sentence = statement["sentence"]
                page_text = pages[sentence["page"] - 1]
                slice_ = page_text[sentence["startOffset"] : sentence["endOffset"]]
                assert slice_ == sentence["text"]
                checked += 1
        assert checked >= 10  # every fixture sentence was classified and stored


# -- security -------------------------------------------------------------------


def test_security_suite(harness):
    with criterion("security: deny-all, confidential omission, 256 tampers, expiry"):
        nobody = harness.client.login("nobody")
        viewer = harness.client.login("viewer")

        # Every non-login route denies an empty-rights token.
        for route in harness.gateway.routes:
            if route.required_right is None:
                continue
            path = (
                route.path.replace("{id}", "doc-p1")
                .replace("{station}", "st-1")
                .replace("{parameter}", "wind_speed")
            )
            status, envelope = harness.client.call(route.method, path, body={}, token=nobody)
            assert status == 403, (path, status, envelope)

        # Confidential documents are absent, not blanked.
        status, envelope = harness.client.call(
            "GET", "/projects/p1/documents", token=viewer
        )
        ids = {d["id"] for d in envelope["data"]["documents"]}
        assert "doc-secret" not in ids and "doc-p1" in ids
        status, _ = harness.client.call("GET", "/documents/doc-secret/source", token=viewer)
        assert status == 403

        # 256 single-character tampers, all rejected by the live gateway.
        token = viewer
        rejected = 0
        for i in range(256):
            pos = i % len(token)
            replacement = chr((ord(token[pos]) + 1 + i // len(token)) % 128)
            if replacement == token[pos]:
                replacement = "A" if token[pos] != "A" else "B"
            tampered = token[:pos] + replacement + token[pos + 1 :]
            assert tampered != token
            status, _ = harness.client.call("GET", "/projects", token=tampered)
            if status == 401:
                rejected += 1
        assert rejected == 256

        # Expired token rejected: same secret, already-lapsed lifetime.
        expired_issuer = TokenService(
            load_or_create_secret(harness.config.secret_path), lifetime_s=-1.0
        )
        expired = expired_issuer.issue("viewer", ["read_projects"])
        status, envelope = harness.client.call("GET", "/projects", token=expired)
        assert status == 401 and "expired" in envelope["error"]["message"]


# -- ingest atomicity --------------------------------------------------------------


class _FailingIndex:
    def __init__(self, inner, fail_after):
        self._inner = inner
        self._left = fail_after

    def index_sentence(self, sentence, project_id):
        if self._left == 0:
            raise RuntimeError("injected failure")
        self._left -= 1
        self._inner.index_sentence(sentence, project_id)

    def __getattr__(self, name):
        return getattr(self._inner, name)


def run_atomicity_check(harness) -> None:
    token = harness.client.login("admin")
    before = harness.backend.snapshots()
    original = harness.backend.pipeline.index
    harness.backend.pipeline.index = _FailingIndex(original, fail_after=1)
    try:
        text = (
            "id: doomed\nproject: p-new\ntitle: t\nsource: \nconfidential: false\n\n"
            "Erster Satz. Zweiter Satz. Dritter Satz."
        )
        status, envelope = harness.client.call(
            "POST", "/ingest/document", {"content": text}, token
        )
        assert status == 500, envelope
    finally:
        harness.backend.pipeline.index = original
    after = harness.backend.snapshots()
    assert after == before, "stores changed despite failed ingest"


def test_ingest_atomicity_under_injected_failure(harness):
    with criterion("atomicity: failed ingest leaves graph/index/docstore byte-identical"):
        run_atomicity_check(harness)


# -- topology parity ------------------------------------------------------------------


def run_primary_flow(harness) -> dict:
    """The full gateway-facing acceptance flow; returns comparable answers."""
    harness.load_demo_fixtures()
    token = harness.client.login("viewer")
    answers = {}
    for path in (
        "/graph/cooccurrence?person=b&company=c2",
        "/graph/pair-frequencies",
        f"/restrictions/active?at={AT_ACTIVE}",
        f"/restrictions/active?at={AT_CALM}",
        f"/restrictions/active?at={AT_NO_DATA}",
        f"/restrictions/inferred?at={AT_ACTIVE}",
        f"/restrictions/inferred?at={AT_ACTIVE}&minOverlap=0.6",
        "/restrictions/by-month",
        "/search?q=wind+speed",
        "/heatmap?bbox=13.0,51.0,13.75,51.4&cell=0.1",
        "/projects",
    ):
        status, envelope = timed_call(harness.client, "GET", path, token=token)
        assert status == 200, (path, envelope)
        answers[path] = envelope["data"]
    # Security spot checks and atomicity must hold in this topology too.
    nobody = harness.client.login("nobody")
    status, _ = harness.client.call("GET", "/projects", token=nobody)
    assert status == 403
    run_atomicity_check(harness)
    assert answers["/graph/cooccurrence?person=b&company=c2"]["projects"] == ["p2"]
    assert len(answers[f"/restrictions/active?at={AT_ACTIVE}"]["active"]) == 1
    assert len(answers[f"/restrictions/inferred?at={AT_ACTIVE}"]["inferred"]) == 1
    return answers


def _strip_volatile(value):
    if isinstance(value, dict):
        return {k: _strip_volatile(v) for k, v in value.items() if k != "id"}
    if isinstance(value, list):
        return [_strip_volatile(v) for v in value]
    return value


def test_topology_parity(tmp_path):
    with criterion("topology parity: embedded and multi-process answers identical"):
        results = {}
        for mode in ("embedded", "multiproc"):
            harness = GatewayHarness(tmp_path, mode=mode)
            try:
                results[mode] = run_primary_flow(harness)
                if mode == "multiproc":
                    ports = harness.backend.worker_ports()
                    assert set(ports) == {"graph", "index", "documents", "sensors", "geodata"}
            finally:
                harness.close()
        assert _strip_volatile(results["embedded"]) == _strip_volatile(results["multiproc"])
