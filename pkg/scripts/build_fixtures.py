#!/usr/bin/env python3
"""Deterministically (re)build the test fixture tree under tests/fixtures/.

Everything the hermetic suite consumes comes from here: the mindmap corpus,
wrapper configs, canned result pages keyed by URL hash, sidecar text for the
support-material heuristics, the venue catalog and the service config. URLs
are computed through the same code paths the engine uses at runtime, so the
fixtures cannot drift from the implementation.

The script also proves the two expansion scenarios: it runs the real
pipeline against the maps it just wrote and asserts the expected term sets,
failing loudly if a fixture stops guaranteeing its pinned outcome.

Usage: python scripts/build_fixtures.py [--out tests/fixtures]
"""

from __future__ import annotations

import argparse
import shutil
import sys
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from mindforge.expansion import compute_neighbourhood, expand_query
from mindforge.mindmap import Mindmap, MindmapNode, save_mindmap
from mindforge.scrape.engine import FixtureFetcher, substitute_url

ALPHA_URL = "http://alpha.test/search?q=${searchQuery}"
BETA_URL = "http://beta.test/search?q=${searchQuery}"
ENGINE_URL = "http://engine.test/search?q=${searchQuery}"
BLOG_URL = ("http://blogsearch.google.com/blogsearch?hl=en&oi=spell&ie=UTF-8"
            "&q=${searchQuery}&btnG=Search+Blogs")


def node(node_id: str, text: str = "", **kwargs) -> MindmapNode:
    return MindmapNode.create(node_id, text, **kwargs)


# ---------------------------------------------------------------- mindmaps

def build_fig2() -> Mindmap:
    """The microRNA overview map."""
    root = node("root", "microRNA", children=[
        node("t1", "microRNA targets", children=[
            node("t11", "microRNA target prediction", children=[
                node("t111", "DIANA-microT"),
                node("t112", "TargetScan"),
            ]),
        ]),
        node("t2", "microRNA transcripts", children=[
            node("t21", "pre-miRNA stem-loop structures"),
        ]),
        node("t3", "RISC binding",
             detail_note="miRNA incorporate into the RNA-Induced Silencing Complex"),
    ])
    return Mindmap(root=root)


def build_section6() -> Mindmap:
    """The microRNA map after the researcher records the classifier idea.

    Level-1 neighbourhood of the recorded node is {itself, its parent}, so
    the corpus terms are exactly naive/bayes/methods/microrna/target/
    prediction, every score ties, and the top-4 after excluding the base
    "Naive Bayes" is provably {methods, microrna, prediction, target}.
    """
    mindmap = build_fig2()
    target_prediction = mindmap.find("t11")
    target_prediction.children.append(node("nb", "Naive Bayes methods"))
    return Mindmap(root=mindmap.root)


def build_fig3() -> Mindmap:
    """Clustering map for the expansion walkthrough.

    Neighbourhood of the selected question node is {itself, parent, child}
    whose cleaned terms are exactly clustering/improve/rank-based/similarity.
    """
    root = node("root", "Clustering research", children=[
        node("sim", "Rank-based similarity", children=[
            node("q", "How to improve clustering?", icons=["help"], children=[
                node("imp", "Improve clustering"),
            ]),
        ]),
        node("ev", "Evaluation metrics"),
    ])
    return Mindmap(root=root)


def roundtrip_corpus() -> dict[str, Mindmap]:
    maps = {
        "fig2": build_fig2(),
        "section6": build_section6(),
        "fig3_clustering": build_fig3(),
        "icons": Mindmap(root=node("r", "icon zoo", children=[
            node("a", "critical", icons=["messagebox_warning"]),
            node("b", "open question", icons=["help"]),
            node("c", "todo", icons=["yes"]),
            node("d", "later", icons=["hourglass"]),
            node("e", "green flagged", icons=["flag-green"]),
            node("f", "keyword set", icons=["list"]),
            node("g", "snippet", icons=["executable"]),
            node("h", "chapter", icons=["bookmark"]),
        ])),
        "links": Mindmap(root=node("r", "reading list", children=[
            node("a", "project page", link="http://example.org/project"),
            node("b", "dataset", link="http://example.org/data.tsv"),
            node("c", "plain child"),
        ])),
        "notes": Mindmap(root=node("r", "annotated", children=[
            node("a", "observation",
                 detail_note="details recorded during the experiment run"),
            node("b", "reminder", detail_note="check the 2004 baseline again"),
        ])),
        "cloud": Mindmap(root=node("r", "grouped ideas", children=[
            node("a", "related set", cloud=True, children=[
                node("a1", "member one"),
                node("a2", "member two"),
            ]),
        ])),
        "deep_chain": Mindmap(root=_chain(8)),
        "wide": Mindmap(root=node("r", "hub", children=[
            node(f"c{i}", f"spoke {i}") for i in range(12)
        ])),
        "unicode": Mindmap(root=node("r", "γλώσσα", children=[
            node("a", "可视化研究"),
            node("b", "naïve Bayes — résumé"),
        ])),
        "entities": Mindmap(root=node("r", "a < b & \"c\" > 'd'", children=[
            node("a", "5 & 6 < 7", link="http://example.org/?x=1&y=2"),
        ])),
        "empty_texts": Mindmap(root=node("r", "", children=[
            node("a", ""),
            node("b", " "),
        ])),
        "mixed": Mindmap(root=node("r", "everything", children=[
            node("a", "hot topic", icons=["messagebox_warning"], cloud=True),
            node("b", "linked note", link="http://example.org/",
                 detail_note="note text wins the kind inference"),
        ])),
    }
    return maps


def _chain(depth: int) -> MindmapNode:
    current = node(f"n{depth}", f"level {depth}")
    for i in range(depth - 1, -1, -1):
        current = node(f"n{i}", f"level {i}", children=[current])
    return current


# ------------------------------------------------------------- wrapper xml

BLOGSEARCH_CONFIG = """<?xml version="1.0" encoding="UTF-8"?>
<config charset="UTF-8">
<var-def name="searchQuery" overwrite="false"/>
<var-def name="content">
<html-to-xml>
 <http url="http://blogsearch.google.com/blogsearch?hl=en&amp;oi=spell&amp;ie=UTF-8&amp;q=${searchQuery}&amp;btnG=Search+Blogs"/>
</html-to-xml>
</var-def>
<var-def name="results1">
 <xpath expression="//a[contains(@id,'p-')]">
  <var name="content"/>
 </xpath>
</var-def>
<var-def name="results2">
 <xpath expression="//td[@class='j']">
  <var name="content"/>
 </xpath>
</var-def>
</config>
"""

UBUNTU_PAGE = """<html>
<head><title>ubuntu - Blog Search</title></head>
<body>
<table><tr><td>
<a href="http://www.howtoforge.com/how-to-upgrade-ubuntu-10.04-lucid-lynx-to-10.10-maverick-meerkat-desktop-server" id="p-1">
How To Upgrade <b>Ubuntu</b> 10.04 (Lucid Lynx) To 10.10 (Maverick Meerkat)
(Desktop; Server)<br>
</font>
<font size=-1>
<a class=f1 href="http://www.howtoforge.com/" id="pb-1"
title="http://www.howtoforge.com/">
HowtoForge - Linux Howtos and Tutorials - -
http://www.howtoforge.com/</a>
</font>
</td>
</tr>
</table>
<p class=g></p>
<a href="http://www.readwriteweb.com/cloud/2010/10/latest-ubuntu-1010-emphasizes.php"
id="p-2">
Latest <b>Ubuntu</b> 10.10 Emphasizes the Cloud - ReadWriteCloud</a>
<table border=0 cellpadding=0 cellspacing=0><tr><td class=j>
<font color=#555555 size=-1>11 hours ago </font>
<font color=#555555 size=-1>by Audrey Watters</font><br><font size=-1>
Open source operating system <b>Ubuntu</b> 10.10 is available to download today for desktop,
notebook, and server editions. Hooray for well-timed 10.10;s. All these versions are
emphasizing Canonical embracing
</font>
</td></tr></table>
</body>
</html>
"""


def source_config(url_template: str, with_abstract: bool) -> str:
    abstract_def = ("""<var-def name="abstracts">
 <xpath expression="//div[@class='abstract']"><var name="page"/></xpath>
</var-def>
""" if with_abstract else "")
    return f"""<?xml version="1.0" encoding="UTF-8"?>
<config charset="UTF-8">
<var-def name="searchQuery" overwrite="false"/>
<var-def name="page">
<html-to-xml>
 <http url="{url_template.replace('&', '&amp;')}"/>
</html-to-xml>
</var-def>
<var-def name="titles">
 <xpath expression="//a[@class='title']"><var name="page"/></xpath>
</var-def>
<var-def name="venues">
 <xpath expression="//span[@class='venue']"><var name="page"/></xpath>
</var-def>
<var-def name="years">
 <xpath expression="//span[@class='year']"><var name="page"/></xpath>
</var-def>
<var-def name="authors">
 <xpath expression="//span[@class='authors']"><var name="page"/></xpath>
</var-def>
{abstract_def}</config>
"""


ENGINE_CONFIG = f"""<?xml version="1.0" encoding="UTF-8"?>
<config charset="UTF-8">
<var-def name="searchQuery" overwrite="false"/>
<var-def name="page">
<html-to-xml>
 <http url="{ENGINE_URL.replace('&', '&amp;')}"/>
</html-to-xml>
</var-def>
<var-def name="titles">
 <xpath expression="//a[@class='result']"><var name="page"/></xpath>
</var-def>
<var-def name="snippets">
 <xpath expression="//p[@class='snippet']"><var name="page"/></xpath>
</var-def>
</config>
"""

# ------------------------------------------------------------ result pages

ALPHA_RECORDS = [
    {"title": "Combinatorial microRNA target predictions",
     "authors": "A. Krek, D. Grun, N. Rajewsky",
     "venue": "Nat Genet", "year": "2005",
     "url": "http://alpha.test/p/krek05",
     "abstract": "A genome-wide study of combinatorial target regulation by microRNAs."},
    {"title": "Prediction of mammalian microRNA targets",
     "authors": "B. P. Lewis, I. Shih, D. P. Bartel",
     "venue": "Cell", "year": "2003",
     "url": "http://alpha.test/p/lewis03",
     "abstract": "Conserved complementarity to miRNA seed regions predicts targets."},
    {"title": "A combined computational-experimental approach predicts human microRNA targets",
     "authors": "M. Kiriakidou, P. T. Nelson, A. Kouranov",
     "venue": "Genes Dev", "year": "2004",
     "url": "http://alpha.test/p/kiriakidou04",
     "abstract": "The DIANA-microT program combines prediction with experiments."},
    {"title": "Naive Bayes for microRNA target predictions: machine learning for microRNA targets",
     "authors": "M. Yousef, S. Jung, A. V. Kossenkov",
     "venue": "Bioinformatics", "year": "2007",
     "url": "http://alpha.test/p/yousef07",
     "abstract": "A Naive Bayes classifier trained on sequence and conservation features."},
    {"title": "The microRNA.org resource: targets and expression",
     "authors": "D. Betel, M. Wilson, A. Gabow",
     "venue": "Nucleic Acids Res", "year": "2008",
     "url": "http://alpha.test/p/betel08",
     "abstract": "A database of predicted microRNA targets and expression profiles."},
]

BETA_RECORDS = [
    {"title": "Naive Bayes for microRNA target predictions: machine learning for microRNA targets",
     "authors": "Yousef M; Jung S; Kossenkov AV",
     "venue": "Bioinformatics Oxford", "year": "2007",
     "url": "http://beta.test/doc/yousef07"},
    {"title": "The microRNA.org resource: targets and expression",
     "authors": "Betel D; Wilson M; Gabow A",
     "venue": "Nucleic Acids Research", "year": "2008",
     "url": "http://beta.test/doc/betel08"},
    {"title": "Human MicroRNA targets",
     "authors": "John B; Enright AJ; Aravin A",
     "venue": "PLoS Comput Biol", "year": "2004",
     "url": "http://beta.test/doc/john04"},
    {"title": "Fast and effective prediction of microRNA/target duplexes",
     "authors": "Rehmsmeier M; Steffen P; Hoechsmann M",
     "venue": "Genome Res", "year": "2004",
     "url": "http://beta.test/doc/rehmsmeier04"},
]

YOUSEF_TITLE = ALPHA_RECORDS[3]["title"]

YOUSEF_PDF_TEXT = f"""{YOUSEF_TITLE}

M. Yousef, S. Jung, A. V. Kossenkov

Abstract
We present a machine learning approach based on a Naive Bayes classifier
that predicts target sites of microRNAs from sequence and conservation
features of experimentally supported duplexes.

1 Introduction
MicroRNAs are short non-coding RNA molecules that regulate gene expression.

2 Training Data and Features
Positive examples come from experimentally supported target sites.

3 Classifier Design
The Naive Bayes model combines the features under independence assumptions.

4 Results
The classifier compares favourably with energy-based prediction methods.
"""

DECOY_PDF_TEXT = """An unrelated technical report

Abstract
This report discusses scheduling policies for batch clusters and never
mentions the queried publication.

1 Introduction
Scheduling is hard.
"""

YOUSEF_SLIDES_TEXT = """Naive Bayes for microRNA target predictions

Outline
Motivation
Training data
Classifier design
Results
"""

KREK_PDF_TEXT = f"""{ALPHA_RECORDS[0]['title']}

Abstract
MicroRNAs act combinatorially: several distinct microRNAs can co-regulate
one transcript, and one microRNA can target many genes.

1 Introduction
Animal microRNAs guide silencing complexes to messenger RNAs.

2 Methods
We score conserved seed matches across aligned untranslated regions.

3 Results
Thousands of human genes fall under combinatorial microRNA control.
"""

KREK_SLIDES_TEXT = """Combinatorial microRNA target predictions

Outline
Methods
Results
Discussion
"""


def result_page(entries: list[dict], with_abstract: bool) -> str:
    rows = []
    for entry in entries:
        abstract = (f"\n<div class=\"abstract\">{entry['abstract']}</div>"
                    if with_abstract else "")
        rows.append(f"""<div class="result">
<a class="title" href="{entry['url']}">{entry['title']}</a>
<span class="authors">{entry['authors']}</span>
<span class="venue">{entry['venue']}</span>
<span class="year">{entry['year']}</span>{abstract}
</div>""")
    body = "\n".join(rows)
    return f"<html>\n<body>\n{body}\n</body>\n</html>\n"


def engine_page(hits: list[tuple[str, str]]) -> str:
    rows = []
    for title, url in hits:
        rows.append(f"""<div class="hit">
<a class="result" href="{url}">{title}</a>
<p class="snippet">{title} - preview</p>
</div>""")
    body = "\n".join(rows)
    return f"<html>\n<body>\n{body}\n</body>\n</html>\n"


EMPTY_PAGE = "<html>\n<body>\n<p>No results found.</p>\n</body>\n</html>\n"


SERVICE_CONFIG = """# Hermetic workbench wiring for the test suite.
mindmap_path = "mindmaps/section6.mm"
catalog_path = "catalog.tsv"
fixtures_dir = "pages"

[defaults]
k = 4
level = 1
limit = 10
timeout_s = 10.0
m_sections = 2

[[sources]]
name = "alpha"
config_path = "wrappers/alpha.xml"
priority = 1
[sources.result_mapping]
title = "titles:text"
url = "titles:@href"
venue = "venues:text"
date = "years:text"
authors = "authors:text"
abstract = "abstracts:text"

[[sources]]
name = "beta"
config_path = "wrappers/beta.xml"
priority = 2
[sources.result_mapping]
title = "titles:text"
url = "titles:@href"
venue = "venues:text"
date = "years:text"
authors = "authors:text"

[engines.horizontal]
config_path = "wrappers/websearch.xml"
[engines.horizontal.result_mapping]
title = "titles:text"
url = "titles:@href"
snippet = "snippets:text"

[engines.blog]
config_path = "wrappers/blogsearch.xml"
[engines.blog.result_mapping]
title = "results1:text"
url = "results1:@href"
snippet = "results2:text"
"""


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(REPO / "tests" / "fixtures"))
    args = parser.parse_args()

    out = Path(args.out)
    for sub in ("mindmaps", "wrappers", "pages"):
        shutil.rmtree(out / sub, ignore_errors=True)
        (out / sub).mkdir(parents=True, exist_ok=True)

    # mindmap corpus
    for name, mindmap in roundtrip_corpus().items():
        save_mindmap(mindmap, str(out / "mindmaps" / f"{name}.mm"))

    # venue catalog: the bundled sample
    shutil.copy(REPO / "src" / "mindforge" / "data" / "venues.tsv", out / "catalog.tsv")

    # wrapper configs
    (out / "wrappers" / "blogsearch.xml").write_text(BLOGSEARCH_CONFIG, encoding="utf-8")
    (out / "wrappers" / "alpha.xml").write_text(
        source_config(ALPHA_URL, with_abstract=True), encoding="utf-8")
    (out / "wrappers" / "beta.xml").write_text(
        source_config(BETA_URL, with_abstract=False), encoding="utf-8")
    (out / "wrappers" / "websearch.xml").write_text(ENGINE_CONFIG, encoding="utf-8")
    (out / "service_config.toml").write_text(SERVICE_CONFIG, encoding="utf-8")

    fetcher = FixtureFetcher(out / "pages")
    index = out / "pages" / "index.tsv"
    if index.exists():
        index.unlink()

    # the walkthrough page for the blog wrapper, keyed by searchQuery=ubuntu
    blog_template = BLOG_URL
    fetcher.store(substitute_url(blog_template, {"searchQuery": "ubuntu"}), UBUNTU_PAGE)

    # prove the expansion scenarios against the maps written above
    section6 = build_section6()
    neighbourhood = compute_neighbourhood(section6, {"nb"}, level=1)
    query = expand_query("Naive Bayes", section6, neighbourhood, k=4)
    got = sorted(t.lower() for t in query.base_terms + query.expansion_terms)
    expected = sorted(["methods", "naive", "bayes", "target", "microrna", "prediction"])
    assert got == expected, f"section6 fixture no longer pins the query: {got}"

    fig3 = build_fig3()
    neighbourhood3 = compute_neighbourhood(fig3, {"q"}, level=1)
    query3 = expand_query("", fig3, neighbourhood3, k=4)
    assert sorted(query3.expansion_terms) == ["clustering", "improve", "rank-based",
                                              "similarity"], query3.expansion_terms

    # vertical source pages, keyed by the expanded query the service will send
    vertical_query = query.query_string()
    fetcher.store(substitute_url(ALPHA_URL, {"searchQuery": vertical_query}),
                  result_page(ALPHA_RECORDS, with_abstract=True))
    fetcher.store(substitute_url(BETA_URL, {"searchQuery": vertical_query}),
                  result_page(BETA_RECORDS, with_abstract=False))

    # horizontal engine pages + sidecar text for support heuristics
    def engine_fixture(title: str, ext: str, hits: list[tuple[str, str]]) -> None:
        rendered = f'"{title}" filetype:{ext}'
        fetcher.store(substitute_url(ENGINE_URL, {"searchQuery": rendered}),
                      engine_page(hits) if hits else EMPTY_PAGE)

    engine_fixture(YOUSEF_TITLE, "pdf", [
        ("Unrelated batch scheduling report", "http://files.test/other.pdf"),
        (YOUSEF_TITLE, "http://files.test/yousef07.pdf"),
    ])
    engine_fixture(YOUSEF_TITLE, "ppt", [
        (f"{YOUSEF_TITLE} (talk)", "http://files.test/yousef07_slides.ppt"),
    ])

    krek_title = ALPHA_RECORDS[0]["title"]
    engine_fixture(krek_title, "pdf", [
        (krek_title, "http://files.test/krek05.pdf"),
    ])
    engine_fixture(krek_title, "ppt", [
        (f"{krek_title} (seminar)", "http://files.test/krek05_slides.ppt"),
    ])

    sidecars = {
        "http://files.test/other.pdf": DECOY_PDF_TEXT,
        "http://files.test/yousef07.pdf": YOUSEF_PDF_TEXT,
        "http://files.test/yousef07_slides.ppt": YOUSEF_SLIDES_TEXT,
        "http://files.test/krek05.pdf": KREK_PDF_TEXT,
        "http://files.test/krek05_slides.ppt": KREK_SLIDES_TEXT,
    }
    from mindforge.orchestrator import SidecarTextExtractor

    extractor = SidecarTextExtractor(out / "pages")
    for url, text in sidecars.items():
        extractor.store(url, text)

    print(f"fixtures written to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
