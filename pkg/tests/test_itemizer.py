import datetime as dt

import pytest

from compgraph.edgar_client import FilingRef, RawFiling
from compgraph.errors import MalformedFiling, MissingBusinessSection, NoItemsFound
from compgraph.itemizer import (ItemOrderWarning, business_section, itemize,
                                linearize, sections_to_json)

REF = FilingRef(cik="0000000001", accession_number="0000000001-20-000001",
                form_type="10-K", filing_date=dt.date(2020, 12, 31),
                registrant_name="Test Co", fiscal_year=2020)


def doc_of(html: str):
    return linearize(RawFiling(ref=REF, html=html.encode("utf-8"), source="local_dir"))


FILLER = ("The business maintained steady operations across its principal "
          "facilities and invested in routine capacity upgrades during the year. " * 3)


def item_doc(headings, filler=FILLER, toc=()):
    parts = ["<html><body>"]
    for entry in toc:
        parts.append(f"<div>{entry}</div>")
    for heading in headings:
        parts.append(f"<div><b>{heading}</b></div>")
        parts.append(f"<p>{filler}</p>")
    parts.append("</body></html>")
    return doc_of("".join(parts))


class TestLinearize:
    def test_bold_heading_then_paragraph(self):
        doc = doc_of("<b>Competition</b><p>We face rivals.</p>")
        assert doc.full_text == "Competition\nWe face rivals.\n"
        assert len(doc.spans) == 2
        first, second = doc.spans
        assert first.bold and first.standalone_line
        assert not second.bold and second.standalone_line

    def test_empty_body_is_malformed(self):
        with pytest.raises(MalformedFiling):
            doc_of("<html><body>   </body></html>")

    def test_single_table_region_spans_both_rows(self):
        doc = doc_of("<table><tr><td>Cisco</td></tr><tr><td>IBM</td></tr></table>")
        assert len(doc.tables) == 1
        region = doc.tables[0]
        assert doc.full_text[region.char_start:region.char_end] == "Cisco\nIBM\n"
        assert len(region.rows) == 2

    def test_whitespace_collapses_and_entities_decode(self):
        doc = doc_of("<p>Research &amp;\n   Development&nbsp;&nbsp;costs</p>")
        assert doc.full_text == "Research & Development costs\n"

    def test_spans_tile_the_text_exactly(self, corpus_docs):
        for doc in corpus_docs.values():
            assert "".join(s.text for s in doc.spans) == doc.full_text
            for left, right in zip(doc.spans, doc.spans[1:]):
                assert left.char_end == right.char_start
            assert doc.spans[0].char_start == 0
            assert doc.spans[-1].char_end == len(doc.full_text)

    def test_table_regions_inside_document(self, corpus_docs):
        for doc in corpus_docs.values():
            for region in doc.tables:
                assert 0 <= region.char_start < region.char_end <= len(doc.full_text)

    def test_font_scale_defaults_to_one_without_sizes(self):
        doc = doc_of("<p>plain paragraph of text</p>")
        assert doc.spans[0].font_scale == 1.0


class TestItemize:
    def test_toc_filtered_body_headings_win(self):
        doc = item_doc(["Item 1. Business", "Item 1A. Risk Factors", "Item 2. Properties"],
                       toc=["Item 1. Business", "Item 1A. Risk Factors", "Item 2. Properties"])
        sections = itemize(doc)
        assert [s.item_id for s in sections] == ["1", "1A", "2"]
        # hand-computed: the three TOC lines occupy the first
        # len("Item 1. Business")+1 + len("Item 1A. Risk Factors")+1 +
        # len("Item 2. Properties")+1 characters
        toc_chars = len("Item 1. Business\nItem 1A. Risk Factors\nItem 2. Properties\n")
        assert sections[0].char_start == toc_chars
        assert sections[0].title == "Item 1. Business"

    def test_sections_are_ordered_and_disjoint(self, corpus_docs):
        for doc in corpus_docs.values():
            sections = itemize(doc)
            for left, right in zip(sections, sections[1:]):
                assert left.char_end <= right.char_start

    def test_single_item_spans_to_document_end(self):
        doc = item_doc(["Item 1. Business"])
        sections = itemize(doc)
        assert len(sections) == 1
        assert sections[0].char_start == 0
        assert sections[0].char_end == len(doc.full_text)

    def test_out_of_order_headings_warn_but_keep_document_order(self):
        doc = item_doc(["Item 2. Properties", "Item 1. Business"])
        with pytest.warns(ItemOrderWarning):
            sections = itemize(doc)
        assert [s.item_id for s in sections] == ["2", "1"]

    def test_no_items_raises(self):
        with pytest.raises(NoItemsFound):
            itemize(doc_of("<p>no headings at all, just prose</p>"))

    def test_cross_reference_prose_is_not_a_heading(self):
        doc = doc_of(f"<p>Item 1. Business is discussed inline. {FILLER}</p>")
        with pytest.raises(NoItemsFound):
            itemize(doc)

    def test_headings_must_be_standalone(self):
        doc = doc_of(f"<p><b>Item 1. Business</b> opens the report. {FILLER}</p>")
        with pytest.raises(NoItemsFound):
            itemize(doc)

    def test_round_trip_heading_pattern(self, corpus_docs):
        for doc in corpus_docs.values():
            for section in itemize(doc):
                head = doc.full_text[section.char_start:section.char_end]
                assert head.lower().startswith("item")

    def test_determinism(self, corpus_docs):
        doc = next(iter(corpus_docs.values()))
        assert sections_to_json(itemize(doc)) == sections_to_json(itemize(doc))


class TestBusinessSection:
    def test_direct_lookup(self):
        doc = item_doc(["Item 1. Business", "Item 1A. Risk Factors", "Item 2. Properties"])
        sections = itemize(doc)
        assert business_section(sections, doc).item_id == "1"

    def test_missing_business_section(self):
        doc = item_doc(["Item 1A. Risk Factors", "Item 2. Properties"])
        with pytest.raises(MissingBusinessSection):
            business_section(itemize(doc), doc)

    def test_table_of_contents_candidate_loses_to_body(self):
        # the TOC "Item 1" sits inside a table; the body heading must win
        html = ("<html><body>"
                "<table><tr><td>Item 1. Business</td><td>3</td></tr></table>"
                f"<div><b>Item 1. Business</b></div><p>{FILLER}</p>"
                "</body></html>")
        doc = doc_of(html)
        sections = itemize(doc)
        section = business_section(sections, doc)
        toc_line_end = len("Item 1. Business\n3\n")
        assert section.char_start == toc_line_end
