"""Turns filing HTML into format-annotated text and segments it into SEC items.

The linearizer walks the HTML with a forgiving stdlib parser and emits a
plain-text document plus a list of formatted spans that tile it exactly:
runs of whitespace collapse to one space, block boundaries become single
newlines, and every span records the formatting in force where its text
appeared (bold, italic, font size relative to the document median, whether
it is a whole visual line, whether it sits in a table cell). Offsets are
stable, so every downstream provenance snippet can be re-derived from the
cached HTML.

Item segmentation is heuristic: a heading span opens a section when it
matches the item pattern, is a standalone line outside any table, and is
followed by enough content before the next item match. The rule is this
package's own (configurable via HEADING_MIN_GAP) rather than a reproduction
of any particular commercial itemizer.
"""
from __future__ import annotations

import logging
import re
import warnings
from bisect import bisect_right
from dataclasses import dataclass, field
from html.parser import HTMLParser

from .edgar_client import FilingRef, RawFiling
from .errors import MalformedFiling, MissingBusinessSection, NoItemsFound

logger = logging.getLogger(__name__)

# Items of a 10-K per the standard enumeration; 22 entries.
CANONICAL_ITEMS = [
    "1", "1A", "1B", "1C", "2", "3", "4", "5", "6", "7", "7A",
    "8", "9", "9A", "9B", "9C", "10", "11", "12", "13", "14", "15",
]
_ITEM_RANK = {item: i for i, item in enumerate(CANONICAL_ITEMS)}

ITEM_HEAD_RE = re.compile(r"item\s+(\d{1,2})\s*([A-C])?\b", re.IGNORECASE)

# Minimum characters between an item heading and the next item match for the
# heading to count as a body heading rather than a table-of-contents line.
HEADING_MIN_GAP = 200

# Item headings are short lines; longer lines starting with "Item N" are
# cross-reference prose, not headings.
HEADING_MAX_LEN = 120

BLOCK_TAGS = {
    "p", "div", "br", "hr", "h1", "h2", "h3", "h4", "h5", "h6", "li", "ul",
    "ol", "table", "thead", "tbody", "tfoot", "tr", "td", "th", "blockquote",
    "section", "article", "center", "header", "footer", "caption", "pre",
    "dl", "dt", "dd", "form", "fieldset", "address",
}
SKIP_TAGS = {"script", "style", "head", "title"}
VOID_TAGS = {"br", "hr", "img", "meta", "link", "input", "col", "area", "base", "embed", "source", "wbr"}

BASE_FONT_PX = 16.0
_FONT_SIZE_ATTR_PX = {1: 10.0, 2: 13.0, 3: 16.0, 4: 18.0, 5: 24.0, 6: 32.0, 7: 48.0}
_HEADING_PX = {"h1": 32.0, "h2": 24.0, "h3": 18.72, "h4": 16.0, "h5": 13.28, "h6": 10.72}

_STYLE_SIZE_RE = re.compile(r"font-size\s*:\s*([0-9.]+)\s*(px|pt|em|rem|%)", re.IGNORECASE)
_STYLE_WEIGHT_RE = re.compile(r"font-weight\s*:\s*(bold(?:er)?|[1-9]00)", re.IGNORECASE)
_STYLE_ITALIC_RE = re.compile(r"font-style\s*:\s*(italic|oblique)", re.IGNORECASE)


@dataclass
class FormattedSpan:
    """A run of document text with constant formatting, within one line."""

    text: str
    char_start: int
    char_end: int
    bold: bool
    italic: bool
    font_scale: float
    standalone_line: bool
    in_table_cell: bool

    def stripped(self) -> str:
        return self.text.strip()


@dataclass
class TableRegion:
    """Offset range of one table, with per-cell offset ranges by row."""

    char_start: int
    char_end: int
    rows: list[list[tuple[int, int]]] = field(default_factory=list)

    def max_cells_per_row(self) -> int:
        return max((len(r) for r in self.rows), default=0)


@dataclass
class FilingDocument:
    """Linearized filing: plain text tiled by formatted spans."""

    ref: FilingRef
    full_text: str
    spans: list[FormattedSpan]
    tables: list[TableRegion]

    def span_at(self, offset: int) -> FormattedSpan:
        """The span containing ``offset``."""
        starts = [s.char_start for s in self.spans]
        i = bisect_right(starts, offset) - 1
        if i < 0 or offset >= self.spans[i].char_end:
            raise IndexError(f"offset {offset} outside document spans")
        return self.spans[i]

    def table_ranges(self) -> list[tuple[int, int]]:
        return [(t.char_start, t.char_end) for t in self.tables]


@dataclass
class ItemSection:
    """One "Item N" section of the filing."""

    item_id: str
    title: str
    char_start: int
    char_end: int


class ItemOrderWarning(UserWarning):
    """Item headings appeared out of canonical order."""


# --- linearization ---

class _Frame:
    __slots__ = ("tag", "bold", "italic", "size", "skip")

    def __init__(self, tag, bold=False, italic=False, size=None, skip=False):
        self.tag = tag
        self.bold = bold
        self.italic = italic
        self.size = size
        self.skip = skip


class _Linearizer(HTMLParser):
    """Streams HTML into lines of (text, format) segments with exact offsets."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self._stack: list[_Frame] = []
        self._bold = 0
        self._italic = 0
        self._sizes: list[float] = []
        self._skip = 0
        self._table_depth = 0
        # emitted segments: [text, start, bold, italic, size_px|None, in_table, line_idx]
        self.segments: list[list] = []
        self._offset = 0
        self._line_idx = 0
        self._line_open = False
        self._pending_space = False
        self.table_regions: list[TableRegion] = []
        self._open_region: TableRegion | None = None
        self._open_row: list[tuple[int, int]] | None = None
        self._open_cell_start: int | None = None

    # - segment plumbing -

    def _current_format(self):
        return (self._bold > 0, self._italic > 0,
                self._sizes[-1] if self._sizes else None, self._table_depth > 0)

    def _emit(self, ch: str):
        fmt = self._current_format()
        seg = self.segments[-1] if self.segments else None
        if (seg is None or seg[6] != self._line_idx
                or (seg[2], seg[3], seg[4], seg[5]) != fmt or not self._line_open):
            self.segments.append([ch, self._offset, *fmt, self._line_idx])
        else:
            seg[0] += ch
        self._offset += len(ch)
        self._line_open = True

    def _text(self, data: str):
        if self._skip:
            return
        for ch in data:
            if ch.isspace() or ch == "\xa0":
                if self._line_open:
                    self._pending_space = True
                continue
            if self._pending_space:
                self._pending_space = False
                self._emit(" ")
            self._emit(ch)

    def _break_line(self):
        self._pending_space = False
        if not self._line_open:
            return
        seg = self.segments[-1]
        seg[0] += "\n"
        self._offset += 1
        self._line_idx += 1
        self._line_open = False

    # - tag handling -

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        if tag in VOID_TAGS:
            if tag in ("br", "hr"):
                self._break_line()
            return
        attrd = dict(attrs)
        style = attrd.get("style", "") or ""
        frame = _Frame(tag)

        if tag in SKIP_TAGS:
            frame.skip = True
        if tag in ("b", "strong") or _STYLE_WEIGHT_RE.search(style) or tag in _HEADING_PX:
            frame.bold = True
        if tag in ("i", "em") or _STYLE_ITALIC_RE.search(style):
            frame.italic = True
        frame.size = self._size_from(tag, attrd, style)

        if tag in BLOCK_TAGS:
            self._break_line()
        if tag == "table":
            self._table_depth += 1
            if self._table_depth == 1:
                self._open_region = TableRegion(char_start=self._offset, char_end=self._offset)
        elif tag == "tr" and self._table_depth:
            self._close_cell()
            self._close_row()
            self._open_row = []
        elif tag in ("td", "th") and self._table_depth:
            self._close_cell()
            if self._open_row is None:
                self._open_row = []
            self._open_cell_start = self._offset

        self._push(frame)

    def handle_startendtag(self, tag, attrs):
        if tag.lower() in ("br", "hr"):
            self._break_line()

    def handle_endtag(self, tag):
        tag = tag.lower()
        if tag in VOID_TAGS:
            return
        if tag in BLOCK_TAGS:
            self._break_line()
        if tag in ("td", "th") and self._table_depth:
            self._close_cell()
        elif tag == "tr" and self._table_depth:
            self._close_cell()
            self._close_row()
        elif tag == "table" and self._table_depth:
            self._close_cell()
            self._close_row()
            self._table_depth -= 1
            if self._table_depth == 0 and self._open_region is not None:
                self._open_region.char_end = self._offset
                if self._open_region.char_end > self._open_region.char_start:
                    self.table_regions.append(self._open_region)
                self._open_region = None
        self._pop(tag)

    def handle_data(self, data):
        self._text(data)

    def close(self):
        super().close()
        self._break_line()
        self._close_cell()
        self._close_row()
        if self._open_region is not None and self._table_depth >= 0:
            self._open_region.char_end = self._offset
            if self._open_region.char_end > self._open_region.char_start:
                self.table_regions.append(self._open_region)
            self._open_region = None

    # - frame and table helpers -

    def _push(self, frame: _Frame):
        self._stack.append(frame)
        self._bold += frame.bold
        self._italic += frame.italic
        if frame.size is not None:
            self._sizes.append(frame.size)
        self._skip += frame.skip

    def _pop(self, tag: str):
        for i in range(len(self._stack) - 1, -1, -1):
            if self._stack[i].tag == tag:
                for frame in reversed(self._stack[i:]):
                    self._bold -= frame.bold
                    self._italic -= frame.italic
                    if frame.size is not None:
                        self._sizes.pop()
                    self._skip -= frame.skip
                del self._stack[i:]
                return
        # stray close tag: ignore

    def _size_from(self, tag, attrd, style) -> float | None:
        m = _STYLE_SIZE_RE.search(style)
        if m:
            value, unit = float(m.group(1)), m.group(2).lower()
            parent = self._sizes[-1] if self._sizes else BASE_FONT_PX
            if unit == "px":
                return value
            if unit == "pt":
                return value * 4.0 / 3.0
            if unit == "em":
                return value * parent
            if unit == "rem":
                return value * BASE_FONT_PX
            if unit == "%":
                return value / 100.0 * parent
        if tag == "font" and "size" in attrd:
            try:
                return _FONT_SIZE_ATTR_PX[int(str(attrd["size"]).strip().lstrip("+"))]
            except (ValueError, KeyError):
                return None
        if tag in _HEADING_PX:
            return _HEADING_PX[tag]
        return None

    def _close_cell(self):
        if self._open_cell_start is not None and self._open_row is not None:
            self._break_line()
            if self._offset > self._open_cell_start:
                self._open_row.append((self._open_cell_start, self._offset))
            self._open_cell_start = None

    def _close_row(self):
        if self._open_row is not None and self._open_region is not None:
            if self._open_row:
                self._open_region.rows.append(self._open_row)
            self._open_row = None


def _weighted_median(pairs: list[tuple[float, int]]) -> float:
    """Median of values where each value counts ``weight`` times."""
    total = sum(w for _, w in pairs)
    half = total / 2.0
    acc = 0
    for value, weight in sorted(pairs):
        acc += weight
        if acc >= half:
            return value
    return BASE_FONT_PX


def linearize(raw: RawFiling) -> FilingDocument:
    """Strip markup into plain text plus format-annotated spans.

    Raises MalformedFiling when the HTML yields no visible text.
    """
    parser = _Linearizer()
    parser.feed(raw.text())
    parser.close()

    segments = parser.segments
    full_text = "".join(seg[0] for seg in segments)
    if not full_text.strip():
        raise MalformedFiling(f"{raw.ref.accession_number}: no extractable text")

    # font scale is relative to the char-weighted median size of the document
    median = _weighted_median([(seg[4] if seg[4] else BASE_FONT_PX, len(seg[0]))
                               for seg in segments])
    line_counts: dict[int, int] = {}
    for seg in segments:
        line_counts[seg[6]] = line_counts.get(seg[6], 0) + 1

    spans = []
    for text, start, bold, italic, size, in_table, line_idx in segments:
        px = size if size else BASE_FONT_PX
        spans.append(FormattedSpan(
            text=text,
            char_start=start,
            char_end=start + len(text),
            bold=bold,
            italic=italic,
            font_scale=px / median if median else 1.0,
            standalone_line=line_counts[line_idx] == 1,
            in_table_cell=in_table,
        ))
    return FilingDocument(ref=raw.ref, full_text=full_text, spans=spans,
                          tables=parser.table_regions)


# --- item segmentation ---

def itemize(doc: FilingDocument) -> list[ItemSection]:
    """Segment the document into its item sections, in document order.

    TOC lines are rejected by the standalone-line / not-in-table / minimum
    gap rule; when an item id still appears twice the later (body)
    occurrence wins. Out-of-order headings are kept but reported through an
    ItemOrderWarning.
    """
    candidates = []  # (char_start, item_id, title)
    for span in doc.spans:
        if span.in_table_cell or not span.standalone_line:
            continue
        text = span.stripped()
        if len(text) > HEADING_MAX_LEN:
            continue
        m = ITEM_HEAD_RE.match(text)
        if not m:
            continue
        item_id = m.group(1) + (m.group(2) or "").upper()
        candidates.append((span.char_start, item_id, text))

    accepted = []
    for i, (start, item_id, title) in enumerate(candidates):
        nxt = candidates[i + 1][0] if i + 1 < len(candidates) else len(doc.full_text)
        if nxt - start < HEADING_MIN_GAP:
            continue
        if item_id not in _ITEM_RANK:
            continue
        accepted.append((start, item_id, title))

    by_id: dict[str, tuple[int, str, str]] = {}
    for cand in accepted:
        by_id[cand[1]] = cand  # later occurrence (the body one) wins
    ordered = sorted(by_id.values())

    if not ordered:
        raise NoItemsFound(f"{doc.ref.accession_number}: no item headings detected")

    ranks = [_ITEM_RANK[c[1]] for c in ordered]
    if ranks != sorted(ranks):
        warnings.warn(
            f"{doc.ref.accession_number}: item headings out of canonical order",
            ItemOrderWarning, stacklevel=2)

    sections = []
    for i, (start, item_id, title) in enumerate(ordered):
        end = ordered[i + 1][0] if i + 1 < len(ordered) else len(doc.full_text)
        sections.append(ItemSection(item_id=item_id, title=title,
                                    char_start=start, char_end=end))
    return sections


def business_section(sections: list[ItemSection], doc: FilingDocument) -> ItemSection:
    """The Item 1 section, where competition disclosures live."""
    for section in sections:
        if section.item_id == "1":
            return section
    raise MissingBusinessSection(f"{doc.ref.accession_number}: no Item 1 section")


def sections_to_json(sections: list[ItemSection]) -> list[dict]:
    """Plain-dict form for the --dump-sections debug export."""
    return [{"item_id": s.item_id, "title": s.title,
             "char_start": s.char_start, "char_end": s.char_end}
            for s in sections]
