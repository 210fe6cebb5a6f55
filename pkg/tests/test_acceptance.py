"""Acceptance suite: every criterion as one timed test.

Each test pins the documented examples exactly, checks the library against
an independent oracle where one is stated, and asserts its runtime budget.
Everything runs hermetically against the committed fixture tree; the fixture
fetcher fails loudly on any URL that was not canned in advance, so a pass
also certifies zero network access.
"""

from __future__ import annotations

import json
import math
import random
import string
import time
from xml.etree import ElementTree as ET

import pytest

from mindforge.cleaning import VenueCatalog, levenshtein, match_venue
from mindforge.dedup import DedupStats, deduplicate
from mindforge.errors import DuplicateId
from mindforge.expansion import (ExpansionDocument, compute_neighbourhood,
                                 expand_query, score_terms)
from mindforge.mindmap import parse_mindmap, serialize_mindmap
from mindforge.scrape import FixtureFetcher, execute, html_to_xml, load_config

from conftest import FIXTURES, load_fixture_map
from test_cleaning import dp_oracle, scan_oracle
from test_dedup import all_pairs_oracle, paper_instance, rec
from test_expansion import score_oracle


def test_levenshtein_pin_and_metric_suite():
    started = time.perf_counter()

    assert levenshtein("VLDD", "VLDB Conf") == 6

    rng = random.Random(20040526)
    alphabet = string.ascii_letters + string.digits + " .-"

    def sample() -> str:
        return "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 32)))

    pairs = [(sample(), sample()) for _ in range(1000)]
    thirds = [sample() for _ in range(1000)]
    for (a, b), c in zip(pairs, thirds):
        d_ab = levenshtein(a, b)
        assert d_ab == dp_oracle(a, b)
        assert d_ab == levenshtein(b, a)
        assert (d_ab == 0) == (a == b)
        assert levenshtein(a, c) <= d_ab + levenshtein(b, c)

    assert time.perf_counter() - started < 5.0


def test_venue_matching_pin_and_oracle():
    catalog = VenueCatalog.load(str(FIXTURES / "catalog.tsv"))
    expected = ("VLDB", "Very Large Database Conference")
    assert match_venue("Very Large Database Conf", catalog) == expected
    assert match_venue("VLDB Conf", catalog) == expected

    rng = random.Random(4)
    letters = string.ascii_uppercase + " "

    def word(lo, hi):
        return "".join(rng.choice(letters) for _ in range(rng.randint(lo, hi))).strip() or "X"

    for _ in range(200):
        entries: list[tuple[str, str]] = []
        seen = set()
        while len(entries) < rng.randint(1, 10):
            entry = (word(1, 8), word(4, 24))
            if entry not in seen:
                seen.add(entry)
                entries.append(entry)
        random_catalog = VenueCatalog(entries=entries)
        probe = word(0, 16)
        assert match_venue(probe, random_catalog) == scan_oracle(probe, random_catalog)


def test_dedup_pin_and_blocking_oracle():
    started = time.perf_counter()

    stats = DedupStats()
    survivors = deduplicate(paper_instance(), stats=stats)
    assert sorted(r.title for r in survivors) == ["o1", "o2", "o3", "o4", "o5", "o6", "o8"]
    assert stats.by_key[2004] <= 4 * 3, "comparisons must stay within H1 x H3"
    assert set(stats.by_key) == {2004}, "no comparisons outside the shared-key block"

    rng = random.Random(77)
    for _ in range(100):
        bases = [(f"t{i}", rng.choice([2003, 2004, 2005, None])) for i in range(rng.randint(1, 20))]
        per_source = []
        for s in range(rng.randint(1, 4)):
            chosen = rng.sample(bases, rng.randint(0, len(bases)))
            per_source.append(
                (f"s{s}", [rec(t, y, f"s{s}", i) for i, (t, y) in enumerate(chosen)]))
        got = deduplicate(per_source)
        expected = all_pairs_oracle(per_source)
        assert [(r.title, r.source_id) for r in got] == \
            [(r.title, r.source_id) for r in expected]

    assert time.perf_counter() - started < 10.0


def test_expansion_formula_against_bruteforce():
    d1 = ExpansionDocument("d1", ["alpha", "alpha", "beta"], 2.0, 3)
    d2 = ExpansionDocument("d2", ["beta", "gamma"], 1.0, 2)
    scores = {s.term: s.aggregate for s in score_terms([d1, d2])}
    assert math.isclose(scores["alpha"], 4 / 3, abs_tol=1e-12)
    assert math.isclose(scores["beta"], 7 / 6, abs_tol=1e-12)
    assert math.isclose(scores["gamma"], 1 / 2, abs_tol=1e-12)

    rng = random.Random(5)
    vocabulary = [f"term{i}" for i in range(10)]
    for _ in range(500):
        docs = []
        for d in range(rng.randint(1, 5)):
            terms = rng.choices(vocabulary, k=rng.randint(1, 10))
            docs.append(ExpansionDocument(f"d{d}", terms,
                                          rng.choice([0.5, 1.0, 1.5, 1.75, 2.0]),
                                          len(terms)))
        oracle = score_oracle(docs)
        got = score_terms(docs)
        assert {s.term for s in got} == set(oracle)
        for s in got:
            assert math.isclose(s.aggregate, oracle[s.term], abs_tol=1e-12)


def test_expansion_scenario_pins():
    fig3 = load_fixture_map("fig3_clustering")
    neighbourhood = compute_neighbourhood(fig3, {"q"}, 1)
    query = expand_query("", fig3, neighbourhood, k=4)
    assert sorted(query.expansion_terms) == ["clustering", "improve",
                                             "rank-based", "similarity"]

    section6 = load_fixture_map("section6")
    neighbourhood = compute_neighbourhood(section6, {"nb"}, 1)
    query = expand_query("Naive Bayes", section6, neighbourhood, k=4)
    got = sorted(t.lower() for t in query.base_terms + query.expansion_terms)
    assert got == sorted(["methods", "naive", "bayes", "target",
                          "microrna", "prediction"])


def test_wrapper_engine_pin_and_soup_fuzz():
    started = time.perf_counter()

    config = load_config(str(FIXTURES / "wrappers" / "blogsearch.xml"))
    fetcher = FixtureFetcher(FIXTURES / "pages")
    context = execute(config, {"searchQuery": "ubuntu"}, fetcher)
    anchors = context.nodes("results1")
    assert [a.get("id") for a in anchors] == ["p-1", "p-2"]
    cells = context.nodes("results2")
    assert len(cells) == 1
    assert cells[0].get("class") == "j"

    rng = random.Random(2010)
    chunks = ["<a href=x>", "</a>", "<b>", "</b>", "<td>", "<table>", "</table>",
              "<p>", "</p>", "<br>", "plain text ", "&amp;", "&unknown;",
              "<x y=\"1\">", "< not a tag", "<!-- c -->", "<!doctype html>",
              "<a a=1 a=2>", "<img src=x>", "unicode ü中 ", "5 < 6 & 7 > 4",
              "<li>item", "<tr><td>cell", "<option>o", "</font>", "<p class=g></p>",
              "<a id='p-1'>t", "<A HREF=UP>", "<span", "attr=\"", "]]>", "<![CDATA[x]]>"]
    for _ in range(1000):
        soup = "".join(rng.choice(chunks) for _ in range(rng.randint(0, 25)))
        (root,) = html_to_xml(soup)
        ET.fromstring(ET.tostring(root, encoding="unicode"))

    assert time.perf_counter() - started < 10.0


def test_mindmap_roundtrip_corpus():
    corpus = sorted((FIXTURES / "mindmaps").glob("*.mm"))
    assert len(corpus) >= 10
    for path in corpus:
        text = path.read_text("utf-8")
        mindmap = parse_mindmap(text)
        assert parse_mindmap(serialize_mindmap(mindmap)) == mindmap, path.name

    with pytest.raises(DuplicateId):
        parse_mindmap('<map><node ID="x" TEXT="a"><node ID="x" TEXT="b"/></node></map>')


def test_end_to_end_hermetic_cycle(workdir_fixtures, capsys):
    """expand -> search -> dedupe -> facet -> support -> import, via CLI and
    service, against canned pages only."""
    from fastapi.testclient import TestClient

    from mindforge.cli import main
    from mindforge.config import load_config as load_service_config
    from mindforge.mindmap import load_mindmap
    from mindforge.service import create_app

    started = time.perf_counter()

    # CLI: expansion preview
    code = main(["expand", "--map", str(workdir_fixtures / "mindmaps" / "section6.mm"),
                 "--select", "nb", "--base", "Naive Bayes"])
    assert code == 0
    expanded = json.loads(capsys.readouterr().out)
    assert sorted(t.lower() for t in expanded["query"].split()) == \
        ["bayes", "methods", "microrna", "naive", "prediction", "target"]

    # CLI: federated search (normalization + dedup inside)
    code = main(["search", "--config", str(workdir_fixtures / "service_config.toml"),
                 "--base", "Naive Bayes", "--select", "nb"])
    assert code == 0
    captured = capsys.readouterr()
    records = [json.loads(line) for line in captured.out.strip().splitlines()]
    assert len(records) == 7
    norms = {r["title"]: r["venue_norm"] for r in records}
    assert norms["The microRNA.org resource: targets and expression"] == \
        ["Nucleic Acids Res", "Nucleic Acids Research Oxford University Press"]

    # service: the full human-in-the-loop cycle
    config = load_service_config(str(workdir_fixtures / "service_config.toml"))
    with TestClient(create_app(config)) as client:
        task = client.post("/api/search", json={
            "base_query": "Naive Bayes", "selected_ids": ["nb"]}).json()
        assert task["record_count"] == 7

        results = client.get(f"/api/search/{task['task_id']}/results",
                             params={"facet": "forum"}).json()
        group_sizes = {g["label"]: len(g["record_indices"]) for g in results["groups"]}
        assert sum(group_sizes.values()) == 7

        titles = [r["title"] for r in results["records"]]
        nb_index = next(i for i, t in enumerate(titles) if t.startswith("Naive Bayes"))
        krek_index = next(i for i, t in enumerate(titles) if t.startswith("Combinatorial"))

        support = client.post(f"/api/search/{task['task_id']}/support",
                              json={"record_index": nb_index,
                                    "kinds": ["document", "slides"]}).json()
        materials = {m["kind"]: m for m in support["materials"]}
        assert materials["document"]["verified"] is True
        assert materials["document"]["evidence"] == "title-substring"
        assert materials["slides"]["verified"] is True
        assert materials["slides"]["evidence"] == "outline"

        imported = client.post("/api/import", json={
            "task_id": task["task_id"],
            "record_indices": [nb_index, krek_index],
            "target_node_id": "nb"}).json()
        assert imported["imported"] == 2

        client.post("/api/mindmap/save")

    final_map = load_mindmap(str(workdir_fixtures / "mindmaps" / "section6.mm"))
    nb_node = final_map.find("nb")
    assert len(nb_node.children) == 2
    naive_subtree = next(c for c in nb_node.children
                         if c.text.startswith("Naive Bayes for microRNA"))
    slide_links = [c for c in naive_subtree.children if c.text == "Slides"]
    assert len(slide_links) == 1 and slide_links[0].link

    assert time.perf_counter() - started < 30.0
