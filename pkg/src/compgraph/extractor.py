"""Locates competition subsections inside the Business section.

Detection is keyword search plus format rules: a keyword occurrence opens a
subsection only when its enclosing span looks like a heading (bold, scaled
up, or a short standalone line without a terminal period); the subsection
runs until the next heading of equal or stronger emphasis. Keyword list and
heading thresholds are configurable, since disclosure styles vary.

Tables inside a subsection get split into two kinds: single-column bullet
lists are flattened back into the body text one line per bullet, while real
(multi-column) tables have their cells scanned for candidate company names.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from .edgar_client import FilingRef
from .itemizer import FilingDocument, FormattedSpan, ItemSection

DEFAULT_KEYWORDS = [
    "competition",
    "competitive environment",
    "competitive conditions",
    "competitors",
]

_NUMERIC_CELL_RE = re.compile(r"[\d.,%$()\s–—-]+")


@dataclass(frozen=True)
class ExtractionRules:
    """Tunable thresholds for heading classification."""

    keywords: tuple[str, ...] = tuple(DEFAULT_KEYWORDS)
    heading_font_scale: float = 1.15
    heading_max_len: int = 60
    table_name_min_len: int = 2
    table_name_max_len: int = 60


DEFAULT_RULES = ExtractionRules()


@dataclass(frozen=True)
class KeywordHit:
    keyword: str
    char_offset: int
    context: str  # heading | sentence


@dataclass
class CompetitionSubsection:
    """A competition disclosure: offsets into the filing plus derived text.

    ``body_text`` is the subsection text with table regions handled
    (bullet tables inlined, real tables removed); ``segments`` maps runs of
    body_text back to filing offsets so mention spans stay provenance-exact.
    """

    filing_ref: FilingRef
    char_start: int
    char_end: int
    trigger_keyword: str
    heading_text: str
    body_text: str
    table_names: list[str] = field(default_factory=list)
    segments: list[tuple[int, int, int]] = field(default_factory=list)  # (body_off, doc_off, length)
    table_name_offsets: dict[str, tuple[int, int]] = field(default_factory=dict)

    def to_doc_offset(self, body_offset: int) -> int:
        """Map a body_text offset back to a filing full_text offset."""
        for body_off, doc_off, length in self.segments:
            if body_off <= body_offset < body_off + length:
                return doc_off + (body_offset - body_off)
        raise IndexError(f"body offset {body_offset} has no filing-text mapping")


def _is_heading(span: FormattedSpan, rules: ExtractionRules) -> bool:
    text = span.stripped()
    if not text or span.in_table_cell:  # table cells are data, never headings
        return False
    if span.bold or span.font_scale >= rules.heading_font_scale:
        return True
    return (span.standalone_line and len(text) <= rules.heading_max_len
            and not text.endswith("."))


def _emphasis_tier(span: FormattedSpan, rules: ExtractionRules) -> int:
    scaled = span.font_scale >= rules.heading_font_scale
    if span.bold and scaled:
        return 3
    if span.bold or scaled:
        return 2
    if _is_heading(span, rules):
        return 1
    return 0


def _keyword_pattern(keyword: str) -> re.Pattern:
    words = [re.escape(w) for w in keyword.split()]
    return re.compile(r"\b" + r"\s+".join(words) + r"\b", re.IGNORECASE)


def find_keyword_hits(doc: FilingDocument, section: ItemSection,
                      keywords: list[str] | tuple[str, ...] = DEFAULT_KEYWORDS,
                      rules: ExtractionRules = DEFAULT_RULES) -> list[KeywordHit]:
    """Every keyword occurrence in the section, classified heading/sentence."""
    window = doc.full_text[section.char_start:section.char_end]
    hits = []
    for keyword in keywords:
        for m in _keyword_pattern(keyword).finditer(window):
            offset = section.char_start + m.start()
            span = doc.span_at(offset)
            context = "heading" if _is_heading(span, rules) else "sentence"
            hits.append(KeywordHit(keyword=keyword, char_offset=offset, context=context))
    hits.sort(key=lambda h: h.char_offset)
    return hits


def extract_subsections(doc: FilingDocument, section: ItemSection,
                        hits: list[KeywordHit],
                        rules: ExtractionRules = DEFAULT_RULES) -> list[CompetitionSubsection]:
    """Open a subsection at each heading-context hit; sentence hits open nothing.

    A subsection ends at the next heading span of equal-or-stronger emphasis
    or at the section end, with trailing whitespace trimmed. Overlapping
    candidates merge into one span.
    """
    openings = []  # (span, trigger keyword)
    seen_spans = set()
    for hit in hits:
        if hit.context != "heading":
            continue
        span = doc.span_at(hit.char_offset)
        if id(span) in seen_spans:
            continue
        seen_spans.add(id(span))
        openings.append((span, hit.keyword))

    intervals = []
    for span, keyword in openings:
        body_start = span.char_end
        while body_start < section.char_end and doc.full_text[body_start].isspace():
            body_start += 1
        open_tier = max(_emphasis_tier(span, rules), 1)
        end = section.char_end
        for other in doc.spans:
            if other.char_start < body_start or other.char_start >= section.char_end:
                continue
            if other.in_table_cell or not other.stripped():
                continue
            if _is_heading(other, rules) and _emphasis_tier(other, rules) >= open_tier:
                end = other.char_start
                break
        while end > body_start and doc.full_text[end - 1].isspace():
            end -= 1
        if end <= body_start:
            continue
        intervals.append((body_start, end, keyword, span.stripped()))

    intervals.sort()
    merged: list[list] = []
    for start, end, keyword, heading in intervals:
        if merged and start < merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], end)
        else:
            merged.append([start, end, keyword, heading])

    subs = []
    for start, end, keyword, heading in merged:
        body_text, segments = _compose_body(doc, start, end, inline_bullets=False,
                                            rules=rules)[:2]
        if not body_text.strip():
            continue
        subs.append(CompetitionSubsection(
            filing_ref=doc.ref, char_start=start, char_end=end,
            trigger_keyword=keyword, heading_text=heading,
            body_text=body_text, segments=segments))
    return subs


def normalize_tables(doc: FilingDocument, sub: CompetitionSubsection,
                     rules: ExtractionRules = DEFAULT_RULES) -> CompetitionSubsection:
    """Inline bullet tables into the body text and harvest real-table names.

    Pure recomputation from the filing document and the subsection offsets,
    so applying it twice equals applying it once.
    """
    body_text, segments, table_names, name_offsets = _compose_body(
        doc, sub.char_start, sub.char_end, inline_bullets=True, rules=rules)
    return replace(sub, body_text=body_text, segments=segments,
                   table_names=table_names, table_name_offsets=name_offsets)


def _compose_body(doc: FilingDocument, start: int, end: int, inline_bullets: bool,
                  rules: ExtractionRules):
    """Body text for [start, end): plain text kept, tables handled.

    Returns (body_text, segments, table_names, table_name_offsets). Table
    regions are excluded from the plain flow; with ``inline_bullets`` the
    single-column ones come back as one stripped line per cell.
    """
    parts: list[str] = []
    segments: list[tuple[int, int, int]] = []
    table_names: list[str] = []
    name_offsets: dict[str, tuple[int, int]] = {}
    body_off = 0
    cursor = start

    def emit_plain(lo: int, hi: int):
        nonlocal body_off
        if hi <= lo:
            return
        text = doc.full_text[lo:hi]
        parts.append(text)
        segments.append((body_off, lo, hi - lo))
        body_off += len(text)

    def emit_line(cell_lo: int, cell_hi: int):
        nonlocal body_off
        raw = doc.full_text[cell_lo:cell_hi]
        text = raw.strip()
        if not text:
            return
        lead = len(raw) - len(raw.lstrip())
        parts.append(text + "\n")
        segments.append((body_off, cell_lo + lead, len(text)))
        body_off += len(text) + 1

    tables = [t for t in doc.tables if t.char_start < end and t.char_end > start]
    tables.sort(key=lambda t: t.char_start)
    for table in tables:
        t_start, t_end = max(table.char_start, start), min(table.char_end, end)
        emit_plain(cursor, t_start)
        cursor = t_end

        rows = [[(cs, ce) for cs, ce in row if cs < end and ce > start]
                for row in table.rows]
        rows = [r for r in rows if r]
        if not rows:
            continue
        if max(len(r) for r in rows) <= 1:
            if inline_bullets:
                for row in rows:
                    for cs, ce in row:
                        emit_line(max(cs, start), min(ce, end))
        else:
            for row in rows:
                for cs, ce in row:
                    lo, hi = max(cs, start), min(ce, end)
                    raw = doc.full_text[lo:hi]
                    candidate = raw.strip()
                    if _is_name_candidate(candidate, rules) and candidate not in name_offsets:
                        table_names.append(candidate)
                        name_start = lo + (len(raw) - len(raw.lstrip()))
                        name_offsets[candidate] = (name_start, name_start + len(candidate))
    emit_plain(cursor, end)
    return "".join(parts), segments, table_names, name_offsets


def _is_name_candidate(text: str, rules: ExtractionRules) -> bool:
    if not rules.table_name_min_len <= len(text) <= rules.table_name_max_len:
        return False
    if not text[0].isupper():
        return False
    return _NUMERIC_CELL_RE.fullmatch(text) is None


def subsections_to_json(subs: list[CompetitionSubsection]) -> list[dict]:
    """Plain-dict form for the --dump-subsections debug export."""
    return [{"filing": s.filing_ref.accession_number, "char_start": s.char_start,
             "char_end": s.char_end, "trigger_keyword": s.trigger_keyword}
            for s in subs]
