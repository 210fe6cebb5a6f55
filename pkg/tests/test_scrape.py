from __future__ import annotations

import random
from urllib.parse import quote
from xml.etree import ElementTree as ET

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mindforge.errors import (DuplicateVarDef, FetchFailed, MalformedConfig,
                              TypeMismatch, UnboundVariable, UnknownProcessor,
                              UnsupportedXPath, XPathSyntaxError)
from mindforge.scrape import (ConstText, EngineAdapter, FixtureFetcher, Http,
                              HtmlToXml, ResultMapping, SourceAdapter, VarRef,
                              WrapperConfig, XPath, execute, html_to_xml,
                              load_config, node_text, parse_config,
                              substitute_url, xpath_eval)

from conftest import FIXTURES


@pytest.fixture(scope="module")
def blog_config() -> WrapperConfig:
    return load_config(str(FIXTURES / "wrappers" / "blogsearch.xml"))


@pytest.fixture(scope="module")
def fixture_fetcher() -> FixtureFetcher:
    return FixtureFetcher(FIXTURES / "pages")


# -- html repair -----------------------------------------------------------------

def test_simple_bold_fragment():
    (root,) = html_to_xml("<b>Ubuntu</b>")
    (b,) = list(root.iter("b"))
    assert b.text == "Ubuntu"


def test_unquoted_attributes_and_void_elements():
    (root,) = html_to_xml('<a class=f1 href=http://x border=0>hi<br>there')
    text = ET.tostring(root, encoding="unicode")
    assert 'class="f1"' in text
    assert "<br />" in text or "<br/>" in text
    reparsed = ET.fromstring(text)
    (anchor,) = list(reparsed.iter("a"))
    assert anchor.get("class") == "f1"


def test_premature_parent_close():
    (root,) = html_to_xml("<p><b>x</p>after")
    reparsed = ET.fromstring(ET.tostring(root, encoding="unicode"))
    (b,) = list(reparsed.iter("b"))
    assert b.text == "x"
    (p,) = list(reparsed.iter("p"))
    assert list(p.iter("b")), "b must close inside p"


def test_nested_anchor_implicitly_closes():
    (root,) = html_to_xml('<a id="one">first <a id="two">second</a>')
    anchors = list(root.iter("a"))
    assert [a.get("id") for a in anchors] == ["one", "two"]
    # "two" is not a descendant of "one"
    assert not list(anchors[0].iter("a"))[1:]


def test_names_lowercased():
    (root,) = html_to_xml('<DIV CLASS="big"><SpAn>x</SpAn></DIV>')
    (div,) = list(root.iter("div"))
    assert div.get("class") == "big"
    assert list(div.iter("span"))


def test_paper_excerpt_reparses_and_keeps_structure(fixture_fetcher, blog_config):
    url = substitute_url(blog_config.var_defs[1].pipeline.inner.url_template,
                         {"searchQuery": "ubuntu"})
    page = fixture_fetcher(url).decode("utf-8")
    (root,) = html_to_xml(page)
    serialized = ET.tostring(root, encoding="unicode")
    reparsed = ET.fromstring(serialized)
    ids = [a.get("id") for a in reparsed.iter("a") if a.get("id")]
    assert "p-1" in ids and "p-2" in ids and "pb-1" in ids


_soup_chunks = st.lists(st.sampled_from([
    "<a href=x>", "</a>", "<b>", "</b>", "<td>", "<table>", "</table>", "<p>",
    "</p>", "<br>", "text ", "&amp;", "&bogus;", "<x y=\"1\">", "< notatag",
    "<!-- comment -->", "<!doctype html>", "<a a=1 a=2>", "<img src=x>",
    "é中文", "5 < 6 & 7 > 4", "<li>item", "<tr><td>cell",
    "<option>pick", "</font>", "<p class=g></p>", "<a id='p-1'>",
]), max_size=30)


@settings(max_examples=300, deadline=None)
@given(_soup_chunks)
def test_random_soup_always_reparses(chunks):
    (root,) = html_to_xml("".join(chunks))
    ET.fromstring(ET.tostring(root, encoding="unicode"))


@settings(max_examples=150, deadline=None)
@given(st.text(max_size=120))
def test_arbitrary_text_soup_always_reparses(raw):
    (root,) = html_to_xml(raw)
    ET.fromstring(ET.tostring(root, encoding="unicode"))


# -- xpath ------------------------------------------------------------------------

def sample_tree():
    return html_to_xml("""
      <div><a id="p-1" href="u1">one</a>
      <a id="pb-1" href="u2">skip</a>
      <span><a id="p-2" href="u3">two</a></span>
      <td class="j">abstract text</td>
      <td class="x">not it</td></div>
    """)


def test_contains_predicate_matches_paper_anchors():
    nodes = xpath_eval(sample_tree(), "//a[contains(@id,'p-')]")
    assert [n.get("id") for n in nodes] == ["p-1", "p-2"]


def test_attribute_equality_predicate():
    nodes = xpath_eval(sample_tree(), "//td[@class='j']")
    assert len(nodes) == 1
    assert nodes[0].text == "abstract text"


def test_no_match_returns_empty():
    assert xpath_eval(sample_tree(), "//missing") == []


def test_child_steps_and_positions():
    (root,) = html_to_xml("<ul><li>a</li><li>b</li><li>c</li></ul>")
    items = xpath_eval([root], "//ul/li")
    assert [li.text for li in items] == ["a", "b", "c"]
    assert [li.text for li in xpath_eval([root], "//ul/li[2]")] == ["b"]
    assert xpath_eval([root], "//ul/li[9]") == []


def test_attribute_existence_predicate():
    nodes = xpath_eval(sample_tree(), "//a[@href]")
    assert len(nodes) == 3


def test_wildcard_step():
    (root,) = html_to_xml("<div><p>x</p><span>y</span></div>")
    (div,) = list(root.iter("div"))
    assert len(xpath_eval([div], "/*")) == 2


def test_document_order_and_dedup():
    (root,) = html_to_xml("<div><span><a id='i'>x</a></span></div>")
    div = list(root.iter("div"))
    # overlapping contexts still yield each node once
    nodes = xpath_eval([root, div[0]], "//a")
    assert len(nodes) == 1


@pytest.mark.parametrize("expr", [
    "//a/text()", "a", "//a | //b", "//a/../b", "//ancestor::x",
    "//a/@href", "//a[position()=1]",
])
def test_unsupported_expressions(expr):
    with pytest.raises(UnsupportedXPath):
        xpath_eval(sample_tree(), expr)


@pytest.mark.parametrize("expr", ["", "//a[", "//a[@]", "//a[0]", "///"])
def test_syntax_errors(expr):
    with pytest.raises(XPathSyntaxError):
        xpath_eval(sample_tree(), expr)


# -- wrapper config ----------------------------------------------------------------

def test_parse_paper_listing(blog_config):
    config = blog_config
    assert config.charset == "UTF-8"
    assert config.var_names() == ["searchQuery", "content", "results1", "results2"]

    search_query = config.var_defs[0]
    assert search_query.overwrite is False
    assert search_query.pipeline == ConstText("")

    content = config.var_defs[1].pipeline
    assert isinstance(content, HtmlToXml)
    assert isinstance(content.inner, Http)
    assert "${searchQuery}" in content.inner.url_template

    results1 = config.var_defs[2].pipeline
    assert isinstance(results1, XPath)
    assert results1.expression == "//a[contains(@id,'p-')]"
    assert results1.inner == VarRef("content")

    results2 = config.var_defs[3].pipeline
    assert results2.expression == "//td[@class='j']"


def test_empty_var_def_binds_empty_text():
    config = parse_config('<config><var-def name="x"/></config>')
    assert config.var_defs[0].pipeline == ConstText("")
    context = execute(config, {}, fetcher=lambda url: "")
    assert context.bindings["x"] == ""


def test_unknown_processor_rejected():
    with pytest.raises(UnknownProcessor):
        parse_config('<config><var-def name="x"><frobnicate/></var-def></config>')


def test_duplicate_var_def_rejected():
    with pytest.raises(DuplicateVarDef):
        parse_config('<config><var-def name="x"/><var-def name="x"/></config>')


@pytest.mark.parametrize("xml", [
    "<notconfig/>",
    "<config/>",
    '<config><var-def/></config>',
    '<config><var-def name="x"><http/></var-def></config>',
    '<config><var-def name="x"><xpath expression="//a"/></var-def></config>',
    '<config><stray/></config>',
])
def test_malformed_configs(xml):
    with pytest.raises(MalformedConfig):
        parse_config(xml)


# -- execution ----------------------------------------------------------------------

def test_paper_run_binds_the_two_result_anchors(blog_config, fixture_fetcher):
    context = execute(blog_config, {"searchQuery": "ubuntu"}, fixture_fetcher)
    results1 = context.nodes("results1")
    assert [n.get("id") for n in results1] == ["p-1", "p-2"]
    titles = [node_text(n) for n in results1]
    assert titles[0].startswith("How To Upgrade Ubuntu 10.04")
    assert titles[1].startswith("Latest Ubuntu 10.10 Emphasizes the Cloud")
    results2 = context.nodes("results2")
    assert len(results2) == 1
    assert "Open source operating system" in node_text(results2[0])


def test_const_then_varref_is_identity():
    config = WrapperConfig(var_defs=[])
    xml = ('<config><var-def name="a"><text>x</text></var-def>'
           '<var-def name="b"><var name="a"/></var-def></config>')
    context = execute(parse_config(xml), {}, fetcher=lambda url: "")
    assert context.bindings["b"] == "x"


def test_url_template_substitution_oracle():
    calls = []

    def fetcher(url):
        calls.append(url)
        return ""

    xml = ('<config><var-def name="a" overwrite="false"/>'
           '<var-def name="b" overwrite="false"/>'
           '<var-def name="page"><http url="http://h/?q=${a}&amp;r=${b}"/></var-def>'
           '</config>')
    execute(parse_config(xml), {"a": "1", "b": "2"}, fetcher)
    assert calls == ["http://h/?q=1&r=2"]


def test_substitution_url_escapes_values():
    template = "http://h/?q=${q}"
    value = 'two words & a "quote"'
    assert substitute_url(template, {"q": value}) == "http://h/?q=" + quote(value, safe="")


def test_overwrite_false_keeps_param_binding(blog_config, fixture_fetcher):
    context = execute(blog_config, {"searchQuery": "ubuntu"}, fixture_fetcher)
    assert context.bindings["searchQuery"] == "ubuntu"


def test_overwrite_true_replaces_param():
    xml = '<config><var-def name="x"><text>pipeline wins</text></var-def></config>'
    context = execute(parse_config(xml), {"x": "param"}, fetcher=lambda url: "")
    assert context.bindings["x"] == "pipeline wins"


def test_unbound_variable_fails_loudly():
    xml = '<config><var-def name="p"><http url="http://h/?q=${missing}"/></var-def></config>'
    with pytest.raises(UnboundVariable):
        execute(parse_config(xml), {}, fetcher=lambda url: "")


def test_xpath_over_text_is_type_mismatch():
    xml = ('<config><var-def name="t"><text>plain</text></var-def>'
           '<var-def name="n"><xpath expression="//a"><var name="t"/></xpath></var-def>'
           '</config>')
    with pytest.raises(TypeMismatch):
        execute(parse_config(xml), {}, fetcher=lambda url: "")


def test_fixture_fetcher_rejects_unexpected_urls(tmp_path):
    fetcher = FixtureFetcher(tmp_path)
    fetcher.store("http://known/", "payload")
    assert fetcher("http://known/") == b"payload"
    with pytest.raises(FetchFailed):
        fetcher("http://unknown/")


def test_charset_decodes_fetched_bytes(tmp_path):
    fetcher = FixtureFetcher(tmp_path)
    fetcher.store("http://latin/", "café <b>ole</b>".encode("latin-1"))
    xml = ('<config charset="latin-1"><var-def name="page">'
           '<http url="http://latin/"/></var-def></config>')
    context = execute(parse_config(xml), {}, fetcher)
    assert "café" in context.bindings["page"]


# -- adapters -------------------------------------------------------------------------

def test_source_adapter_builds_records(fixture_fetcher):
    adapter = SourceAdapter(
        name="alpha",
        config=load_config(str(FIXTURES / "wrappers" / "alpha.xml")),
        mapping=ResultMapping.parse({
            "title": "titles:text",
            "url": "titles:@href",
            "venue": "venues:text",
            "date": "years:text",
            "authors": "authors:text",
            "abstract": "abstracts:text",
        }),
    )
    query = "Naive Bayes methods microrna prediction target"
    records = adapter.search(query, fixture_fetcher)
    assert len(records) == 5
    assert records[0].title == "Combinatorial microRNA target predictions"
    assert records[0].date == 2005
    assert records[0].url == "http://alpha.test/p/krek05"
    assert records[0].authors[0] == "A. Krek"
    assert records[0].abstract and "combinatorial" in records[0].abstract.lower()
    assert [r.source_rank for r in records] == list(range(5))
    assert all(r.source_id == "alpha" for r in records)


def test_mapping_validation():
    with pytest.raises(MalformedConfig):
        ResultMapping.parse({"url": "titles:@href"})  # no title
    with pytest.raises(MalformedConfig):
        ResultMapping.parse({"title": "justavar"})
    with pytest.raises(MalformedConfig):
        ResultMapping.parse({"title": "t:text", "bogus_field": "t:text"})
    config = parse_config('<config><var-def name="only"/></config>')
    with pytest.raises(MalformedConfig):
        SourceAdapter(name="x", config=config,
                      mapping=ResultMapping.parse({"title": "ghost:text"}))


def test_engine_adapter_renders_filetype_clause():
    config = parse_config(
        '<config><var-def name="searchQuery" overwrite="false"/>'
        '<var-def name="page"><html-to-xml>'
        '<http url="http://e/?q=${searchQuery}"/></html-to-xml></var-def>'
        '<var-def name="titles"><xpath expression="//a"><var name="page"/></xpath></var-def>'
        '</config>')
    adapter = EngineAdapter(name="e", config=config,
                            mapping=ResultMapping.parse({"title": "titles:text",
                                                         "url": "titles:@href"}))
    assert adapter.render_query('"T"', "pdf") == '"T" filetype:pdf'
    assert adapter.render_query('"T"') == '"T"'
    calls = []

    def fetcher(url):
        calls.append(url)
        return "<a href='u'>t</a>"

    adapter.search('"T"', fetcher, filetype="pdf")
    assert calls == ["http://e/?q=" + quote('"T" filetype:pdf', safe="")]
