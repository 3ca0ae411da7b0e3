"""Independent oracles used by the unit and acceptance suites.

Everything here recomputes expected results by brute force or sampling,
deliberately avoiding the package's own query engines and geometry
kernels. Each ``run_*_suite`` function executes N randomized cases and
raises AssertionError on the first disagreement.
"""

from __future__ import annotations

import itertools
import math
import random

import numpy as np
from matplotlib.path import Path as MplPath

from datetime import datetime, timedelta, timezone

from geolink.geo.ops import aggregate_heatmap, overlap_fraction
from geolink.geo.types import GeoPolygon, GridSpec
from geolink.graph.patterns import EdgeStep, NodeStep, chain
from geolink.graph.store import PropertyGraph
from geolink.index.inverted import SentenceIndex
from geolink.restrictions.engine import RestrictionEngine
from geolink.sensors.feed import SensorFeed
from geolink.textpipe.model import Sentence

# ---------------------------------------------------------------------------
# random geometry helpers


def convex_hull(points):
    """Andrew monotone chain; returns CCW hull without the closing point."""
    pts = sorted(set(points))
    if len(pts) < 3:
        return pts

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                ox, oy = out[-2]
                ax, ay = out[-1]
                if (ax - ox) * (p[1] - oy) - (ay - oy) * (p[0] - ox) <= 0:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    return lower[:-1] + upper[:-1]


def random_convex_polygon(rng: random.Random, min_area: float = 0.02):
    """Convex polygon with vertices in the unit square and a usable area."""
    while True:
        pts = [(rng.random(), rng.random()) for _ in range(rng.randint(5, 10))]
        hull = convex_hull(pts)
        if len(hull) < 3:
            continue
        area = shoelace(hull)
        if area >= min_area:
            return hull


def random_star_polygon(rng: random.Random, n: int = 8, min_area: float = 0.02):
    """Simple polygon: random radii at angles that partition the circle.

    Bounded angular gaps keep the centroid interior, so the ring is
    star-shaped and therefore simple by construction.
    """
    while True:
        gaps = [rng.uniform(0.5, 1.5) for _ in range(n)]
        scale = 2 * math.pi / sum(gaps)
        angle = rng.uniform(0, 2 * math.pi)
        ring = []
        for gap in gaps:
            radius = rng.uniform(0.1, 0.45)
            ring.append((0.5 + radius * math.cos(angle), 0.5 + radius * math.sin(angle)))
            angle += gap * scale
        if shoelace(ring) >= min_area:
            return ring


def shoelace(ring) -> float:
    total = 0.0
    for (x1, y1), (x2, y2) in zip(ring, ring[1:] + ring[:1]):
        total += x1 * y2 - x2 * y1
    return abs(total) / 2.0


def sampled_intersection_fraction(ring_a, ring_b, resolution: int = 600) -> float:
    """Grid-sampling estimate of area(a-intersect-b) / area(b)."""
    bx = [p[0] for p in ring_b]
    by = [p[1] for p in ring_b]
    xs = np.linspace(min(bx), max(bx), resolution, endpoint=False) + (max(bx) - min(bx)) / (
        2 * resolution
    )
    ys = np.linspace(min(by), max(by), resolution, endpoint=False) + (max(by) - min(by)) / (
        2 * resolution
    )
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    in_b = MplPath(ring_b).contains_points(pts)
    in_a = MplPath(ring_a).contains_points(pts)
    total_b = int(in_b.sum())
    if total_b == 0:
        return 0.0
    return float(np.logical_and(in_a, in_b).sum()) / total_b


def monte_carlo_area(ring, samples: int = 1_000_000, seed: int = 7) -> float:
    rng = np.random.default_rng(seed)
    xs = [p[0] for p in ring]
    ys = [p[1] for p in ring]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    pts = np.column_stack(
        [rng.uniform(x0, x1, samples), rng.uniform(y0, y1, samples)]
    )
    hits = MplPath(ring).contains_points(pts).sum()
    return (x1 - x0) * (y1 - y0) * hits / samples


# ---------------------------------------------------------------------------
# graph oracles


def random_graph(rng: random.Random, max_nodes: int = 12):
    """A small random property graph plus its plain-dict description."""
    graph = PropertyGraph()
    labels = ["Person", "Company", "Project", "Area"]
    names = ["a", "b", "c", "d"]
    nodes = []
    for _ in range(rng.randint(2, max_nodes)):
        label = rng.choice(labels)
        props = {"name": rng.choice(names)}
        node_id = graph.add_node(label, props)
        nodes.append({"id": node_id, "label": label, "properties": props})
    edge_labels = ["APPEARS_IN", "PART_OF", "LINKS"]
    edges = []
    n_edges = rng.randint(0, min(20, len(nodes) * 3))
    for _ in range(n_edges):
        src = rng.choice(nodes)["id"]
        dst = rng.choice(nodes)["id"]
        label = rng.choice(edge_labels)
        edge_id = graph.add_edge(src, dst, label)
        edges.append({"id": edge_id, "source": src, "target": dst, "label": label})
    return graph, nodes, edges


def random_chain_pattern(rng: random.Random, max_node_steps: int = 3):
    labels = ["Person", "Company", "Project", "Area"]
    names = ["a", "b", "c", "d"]
    steps = []
    n_nodes = rng.randint(1, max_node_steps)
    for i in range(n_nodes):
        props = ()
        if rng.random() < 0.4:
            props = (("name", rng.choice(names)),)
        steps.append(NodeStep(label=rng.choice(labels), props=props))
        if i < n_nodes - 1:
            label = rng.choice(["APPEARS_IN", "PART_OF", "LINKS", None])
            steps.append(EdgeStep(label=label, direction=rng.choice(["out", "in", "any"])))
    return chain(*steps)


def brute_force_match(nodes, edges, pattern):
    """Exhaustive tuple enumeration over all nodes and all edges."""
    steps = pattern.steps
    node_steps = steps[0::2]
    edge_steps = steps[1::2]

    def node_ok(desc, step):
        if desc["label"] != step.label:
            return False
        return all(desc["properties"].get(k) == v for k, v in step.props)

    def edge_ok(desc, a, b, step):
        if step.label is not None and desc["label"] != step.label:
            return False
        fwd = desc["source"] == a and desc["target"] == b
        rev = desc["source"] == b and desc["target"] == a
        if step.direction == "out":
            return fwd
        if step.direction == "in":
            return rev
        return fwd or rev

    out = []
    candidate_sets = [[n["id"] for n in nodes if node_ok(n, s)] for s in node_steps]
    for tup in itertools.product(*candidate_sets):
        gap_options = []
        feasible = True
        for gap, estep in enumerate(edge_steps):
            options = [e["id"] for e in edges if edge_ok(e, tup[gap], tup[gap + 1], estep)]
            if not options:
                feasible = False
                break
            gap_options.append(options)
        if not feasible:
            continue
        for combo in itertools.product(*gap_options):
            assignment = [tup[0]]
            for gap, eid in enumerate(combo):
                assignment.extend([eid, tup[gap + 1]])
            out.append(tuple(assignment))
    return sorted(out)


def reachable_within(nodes, edges, start: str, allowed_labels, max_hops: int):
    """Hop-indexed reachability sets by repeated frontier expansion."""
    neighbor = {n["id"]: set() for n in nodes}
    for e in edges:
        if e["label"] in allowed_labels:
            neighbor[e["source"]].add(e["target"])
            neighbor[e["target"]].add(e["source"])
    levels = [{start}]
    seen = {start}
    for _ in range(max_hops):
        frontier = set()
        for nid in levels[-1]:
            frontier |= neighbor[nid]
        frontier -= seen
        seen |= frontier
        levels.append(frontier)
    return levels


# ---------------------------------------------------------------------------
# suites


def run_match_chain_suite(cases: int = 200, seed: int = 101) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        graph, nodes, edges = random_graph(rng)
        pattern = random_chain_pattern(rng)
        got = [b.assignment for b in graph.match_chain(pattern)]
        want = brute_force_match(nodes, edges, pattern)
        assert got == want, f"match_chain mismatch on case {case}"
    return cases


def run_find_path_suite(cases: int = 200, seed: int = 202) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        graph, nodes, edges = random_graph(rng, max_nodes=10)
        start = rng.choice(nodes)["id"]
        to_label = rng.choice(["Person", "Company", "Project", "Area"])
        allowed = set(rng.sample(["APPEARS_IN", "PART_OF", "LINKS"], rng.randint(1, 3)))
        max_hops = rng.randint(1, 5)
        path = graph.find_path(start, to_label, allowed, max_hops)
        levels = reachable_within(nodes, edges, start, allowed, max_hops)
        label_of = {n["id"]: n["label"] for n in nodes}
        expected_hops = None
        for hops, level in enumerate(levels):
            if any(label_of[nid] == to_label for nid in level):
                expected_hops = hops
                break
        if expected_hops is None:
            assert path is None, f"path should not exist (case {case})"
        else:
            assert path is not None, f"path should exist (case {case})"
            assert len(path) // 2 == expected_hops, f"path not minimal (case {case})"
            _check_path_valid(graph, path, to_label, allowed)
    return cases


def _check_path_valid(graph, path, to_label, allowed):
    assert len(path) % 2 == 1
    for i in range(1, len(path), 2):
        edge = graph.edge(path[i])
        assert edge.label in allowed
        assert {edge.source, edge.target} >= {path[i - 1], path[i + 1]} or (
            edge.source == edge.target == path[i - 1]
        )
        assert (edge.source == path[i - 1] and edge.target == path[i + 1]) or (
            edge.target == path[i - 1] and edge.source == path[i + 1]
        )
    assert graph.node(path[-1]).label == to_label


def run_overlap_suite(cases: int = 200, seed: int = 303, tolerance: float = 0.01) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        a_ring = random_convex_polygon(rng)
        b_ring = random_convex_polygon(rng)
        if rng.random() < 0.5:
            # Shift one polygon so disjoint and partial cases both occur.
            dx, dy = rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)
            a_ring = [(x + dx, y + dy) for x, y in a_ring]
        a = GeoPolygon(id="a", ring=tuple(a_ring), category="x")
        b = GeoPolygon(id="b", ring=tuple(b_ring), category="x")
        got = overlap_fraction(a, b)
        want = sampled_intersection_fraction(a_ring, b_ring)
        assert abs(got - want) <= tolerance, (
            f"overlap mismatch on case {case}: {got} vs sampled {want}"
        )
    return cases


def run_heatmap_suite(cases: int = 200, seed: int = 404) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        polys = []
        for i in range(rng.randint(1, 6)):
            ring = (
                random_convex_polygon(rng)
                if rng.random() < 0.5
                else random_star_polygon(rng, n=rng.randint(5, 9))
            )
            polys.append(GeoPolygon(id=f"p{i}", ring=tuple(ring), category=rng.choice("xy")))
        grid = GridSpec(
            lon_min=0.0, lat_min=0.0, lon_max=1.0, lat_max=1.0,
            cell_size=rng.choice([0.05, 0.1, 0.2]),
        )
        categories = {"x"} if rng.random() < 0.5 else {"x", "y"}
        layer = aggregate_heatmap(polys, categories, grid)
        total = sum(sum(row) for row in layer.values)
        expected = 0
        for poly in polys:
            if poly.category not in categories:
                continue
            expected += _count_centers_inside(poly.ring, grid)
        assert total == expected, f"heatmap conservation broken on case {case}"
    return cases


def _count_centers_inside(ring, grid: GridSpec) -> int:
    path = MplPath(list(ring))
    count = 0
    for r in range(grid.rows):
        cy = grid.lat_min + (r + 0.5) * grid.cell_size
        for c in range(grid.cols):
            cx = grid.lon_min + (c + 0.5) * grid.cell_size
            if path.contains_point((cx, cy)):
                count += 1
    return count


# ---------------------------------------------------------------------------
# restriction-engine oracle


def build_restriction_fixture(rng: random.Random, max_areas: int = 8):
    """Random topic/document/project/area/sensor graph plus a plain-dict
    mirror the oracle can walk without the engine."""
    graph = PropertyGraph()
    feed = SensorFeed(max_age_s=24 * 3600.0)
    base = datetime(2026, 3, 10, 12, 0, tzinfo=timezone.utc)

    topic = graph.add_node("Topic", {"name": "Weather"})
    n_projects = rng.randint(1, 3)
    projects = [graph.add_node("Project", {"name": f"p{i}"}) for i in range(n_projects)]
    areas = []
    for i in range(rng.randint(1, max_areas)):
        area = graph.add_node("Area", {"name": f"a{i}", "category": "x"})
        owner = rng.choice(projects)
        graph.add_edge(owner, area, "HAS_AREA")
        areas.append({"id": area, "project": owner})
    sensors = []
    readings_csv = ["station,parameter,timestamp,value,unit"]
    for i in range(rng.randint(0, 4)):
        params = rng.sample(["wind_speed", "temperature"], rng.randint(1, 2))
        sensor = graph.add_node(
            "Sensor", {"name": f"st{i}", "parameters": ",".join(sorted(params))}
        )
        applied = rng.sample(areas, rng.randint(0, len(areas)))
        for area in applied:
            graph.add_edge(sensor, area["id"], "APPLIES_TO")
        series = {}
        for parameter in params:
            if rng.random() < 0.75:  # some series stay empty -> unknown
                value = rng.uniform(0, 20)
                ts = base - timedelta(hours=rng.choice([1, 3, 30]))  # 30h = stale
                readings_csv.append(
                    f"st{i},{parameter},{ts.isoformat().replace('+00:00', 'Z')},{value},u"
                )
                series[parameter] = (ts, value)
        sensors.append(
            {
                "id": sensor,
                "name": f"st{i}",
                "parameters": params,
                "areas": [a["id"] for a in applied],
                "series": series,
            }
        )
    statements = []
    for i in range(rng.randint(0, 5)):
        project = rng.choice(projects)
        doc = graph.add_node("Document", {"name": f"d{i}", "title": ""})
        graph.add_edge(doc, project, "PART_OF")
        parameter = rng.choice(["wind_speed", "temperature"])
        comparator = rng.choice(["GT", "LT"])
        threshold = rng.uniform(0, 20)
        text = f"limit {i}"
        edge = graph.add_edge(
            topic, doc, "STATED_IN",
            {
                "category": "weather_restriction",
                "sentence": text,
                "page": 1,
                "startOffset": 0,
                "endOffset": len(text),
                "parameter": parameter,
                "comparator": comparator,
                "threshold": threshold,
                "unit": "u",
            },
        )
        statements.append(
            {
                "edge": edge,
                "project": project,
                "parameter": parameter,
                "comparator": comparator,
                "threshold": threshold,
            }
        )
    overlap_pairs = []
    for a in areas:
        for b in areas:
            if a["id"] != b["id"] and rng.random() < 0.2:
                fraction = round(rng.uniform(0.01, 0.9), 3)
                graph.add_edge(a["id"], b["id"], "OVERLAPS", {"fraction": fraction})
                overlap_pairs.append((a["id"], b["id"], fraction))
    if readings_csv[1:]:
        feed.ingest_readings_text("\n".join(readings_csv) + "\n")
    fixture = {
        "areas": areas,
        "sensors": sensors,
        "statements": statements,
        "overlaps": overlap_pairs,
        "at": base,
    }
    return graph, feed, fixture


def oracle_weather_sets(fixture, max_age_s: float = 24 * 3600.0):
    """Exhaustive (statement, area, sensor) triple evaluation.

    Returns (active, unverifiable) as sets of (statement edge, area) pairs.
    """
    at = fixture["at"]
    active = set()
    unknown_seen = set()
    for statement in fixture["statements"]:
        owned_areas = [a for a in fixture["areas"] if a["project"] == statement["project"]]
        for area in owned_areas:
            for sensor in fixture["sensors"]:
                if area["id"] not in sensor["areas"]:
                    continue
                if statement["parameter"] not in sensor["parameters"]:
                    continue
                series = sensor["series"].get(statement["parameter"])
                if series is None or (at - series[0]).total_seconds() > max_age_s:
                    unknown_seen.add((statement["edge"], area["id"]))
                    continue
                value = series[1]
                hit = (
                    value > statement["threshold"]
                    if statement["comparator"] == "GT"
                    else value < statement["threshold"]
                )
                if hit:
                    active.add((statement["edge"], area["id"]))
    return active, unknown_seen - active


def oracle_inferred_set(fixture, active_pairs, min_overlap: float):
    inferred = set()
    for statement_edge, area_id in active_pairs:
        for src, dst, fraction in fixture["overlaps"]:
            if src != area_id or fraction < min_overlap:
                continue
            if (statement_edge, dst) in active_pairs:
                continue
            inferred.add((statement_edge, dst))
    return inferred


def run_restrictions_suite(cases: int = 200, seed: int = 606) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        graph, feed, fixture = build_restriction_fixture(rng)
        engine = RestrictionEngine(graph, feed)
        evaluation = engine.evaluate_weather(fixture["at"])
        got_active = {(r.statement_edge_id, r.area_id) for r in evaluation.active}
        got_unverifiable = {(r.statement_edge_id, r.area_id) for r in evaluation.unverifiable}
        want_active, want_unverifiable = oracle_weather_sets(fixture)
        assert got_active == want_active, f"active set mismatch on case {case}"
        assert got_unverifiable == want_unverifiable, f"unverifiable set mismatch on case {case}"
        min_overlap = rng.choice([0.05, 0.2, 0.5])
        got_inferred = {
            (r.statement_edge_id, r.area_id)
            for r in engine.inferred_restrictions(fixture["at"], min_overlap)
        }
        want_inferred = oracle_inferred_set(fixture, want_active, min_overlap)
        assert got_inferred == want_inferred, f"inferred set mismatch on case {case}"
    return cases


def run_month_expansion_suite(cases: int = 200, seed: int = 707) -> int:
    rng = random.Random(seed)
    for case in range(cases):
        graph = PropertyGraph()
        topic = graph.add_node("Topic", {"name": "Time"})
        expected: dict[int, list[str]] = {m: [] for m in range(1, 13)}
        for i in range(rng.randint(0, 6)):
            project = graph.add_node("Project", {"name": f"p{i}"})
            doc = graph.add_node("Document", {"name": f"d{i}", "title": ""})
            graph.add_edge(doc, project, "PART_OF")
            first = rng.randint(1, 12)
            last = rng.randint(1, 12)
            if first <= last:
                months = list(range(first, last + 1))
            else:
                months = list(range(first, 13)) + list(range(1, last + 1))
            text = f"window {i}"
            graph.add_edge(
                topic, doc, "STATED_IN",
                {
                    "category": "time_restriction",
                    "sentence": text,
                    "page": 1,
                    "startOffset": 0,
                    "endOffset": len(text),
                    "months": ",".join(str(m) for m in sorted(months)),
                },
            )
            for month in months:
                expected[month].append(f"p{i}")
        engine = RestrictionEngine(graph, SensorFeed())
        got = engine.time_restrictions_by_month()
        for month in range(1, 13):
            assert [p for p, _ in got[month]] == sorted(expected[month]), (
                f"month {month} mismatch on case {case}"
            )
    return cases


# ---------------------------------------------------------------------------
# search oracle


def tokenize(text: str) -> list[str]:
    out = []
    current = []
    for ch in text.lower():
        if ch.isalnum() and not ch == "_":
            current.append(ch)
        elif current:
            out.append("".join(current))
            current = []
    if current:
        out.append("".join(current))
    return out


def linear_scan_search(corpus, query: str, project_filter=None):
    """Conjunctive scan plus an independent tf-idf computation.

    ``corpus`` is a list of (doc_id, project_id, sentence) triples.
    Returns scored hits sorted like the engine's contract.
    """
    query_tokens = set(tokenize(query))
    n_sentences = len(corpus)
    df: dict[str, int] = {}
    for _, _, sentence in corpus:
        for token in set(tokenize(sentence.text)):
            df[token] = df.get(token, 0) + 1
    hits = []
    for doc_id, project_id, sentence in corpus:
        tokens = tokenize(sentence.text)
        if not query_tokens <= set(tokens):
            continue
        if project_filter is not None and project_id not in project_filter:
            continue
        score = 0.0
        for token in sorted(query_tokens):
            tf = tokens.count(token)
            score += tf * math.log(1.0 + n_sentences / df[token])
        hits.append((doc_id, project_id, sentence, score))
    hits.sort(key=lambda h: (-h[3], h[0], h[2].page, h[2].start_offset))
    return hits


def random_corpus(rng: random.Random, max_sentences: int = 50):
    vocab = ["wind", "water", "area", "project", "limit", "person", "c2", "speed", "level"]
    corpus = []
    for i in range(rng.randint(1, max_sentences)):
        words = [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
        text = " ".join(words)
        # Distinct offsets per sentence: provenance keys never collide.
        sentence = Sentence(
            document_id=f"d{i % 5}", page=1 + i % 3, start_offset=100 * i,
            end_offset=100 * i + len(text), text=text,
        )
        corpus.append((sentence.document_id, f"p{i % 4}", sentence))
    return corpus


def run_search_suite(cases: int = 200, seed: int = 505) -> int:
    rng = random.Random(seed)
    vocab = ["wind", "water", "area", "project", "limit", "person", "c2", "speed", "level"]
    for case in range(cases):
        corpus = random_corpus(rng)
        index = SentenceIndex()
        for doc_id, project_id, sentence in corpus:
            index.index_sentence(sentence, project_id)
        query = " ".join(rng.sample(vocab, rng.randint(1, 2)))
        project_filter = None
        if rng.random() < 0.3:
            project_filter = {f"p{rng.randint(0, 3)}"}
        got = index.search(query, project_filter=project_filter, limit=len(corpus) + 1)
        want = linear_scan_search(corpus, query, project_filter)
        assert len(got) == len(want), f"search result count mismatch on case {case}"
        for hit, (doc_id, project_id, sentence, score) in zip(got, want):
            assert hit.document_id == doc_id and hit.sentence.text == sentence.text, (
                f"search order mismatch on case {case}"
            )
            assert abs(hit.score - score) < 1e-9, f"score mismatch on case {case}"
    return cases
