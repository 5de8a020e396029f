"""Resolves surface company names to unique six-digit company identifiers.

Resolution is tiered and deterministic: exact canonical-name match, then
normalized-alias lookup, then fuzzy similarity over all normalized aliases.
Ambiguity (two companies tied for a surface) yields no identifier at all: a
wrong edge in a decision-support graph is worse than a missing one.

The knowledge base is a JSON array of entries shaped like
``{"company_id": "006066", "canonical_name": ..., "aliases": [...],
"ticker": ...}``; ids are unique, every canonical name is its own alias.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path

from .errors import DuplicateId, EmptyName, SchemaError
from .recognize import EntityMention

COMPANY_ID_RE = re.compile(r"^[0-9]{6}$")

# Legal suffixes stripped from the tail during normalization.
NAME_SUFFIXES = {
    "inc", "corp", "corporation", "co", "company", "ltd", "llc", "lp",
    "plc", "ag", "nv", "sa", "group", "holdings",
}

DEFAULT_FUZZY_THRESHOLD = 0.85

_WORD_RE = re.compile(r"\w+")


def normalize_name(name: str) -> str:
    """Canonical lowercase form of a company name.

    Dots glue their abbreviation to what follows ("J.P. Morgan" and
    "JPMorgan" meet at "jpmorgan"), remaining punctuation drops out, legal
    suffixes strip iteratively from the tail (never emptying the name), and
    a leading article goes. Idempotent.
    """
    if not name or not name.strip():
        raise EmptyName("blank company name")
    s = name.lower()
    s = re.sub(r"\.\s*", "", s)
    s = re.sub(r"[,&'’/\-]", "", s)
    tokens = s.split()
    while len(tokens) > 1 and tokens[-1] in NAME_SUFFIXES:
        tokens.pop()
    if len(tokens) > 1 and tokens[0] == "the":
        tokens.pop(0)
    if not tokens:
        raise EmptyName(f"nothing left of {name!r} after normalization")
    return " ".join(tokens)


def token_set_jaccard(a: str, b: str) -> float:
    """Overlap of the whitespace token sets of two normalized names."""
    ta, tb = set(a.split()), set(b.split())
    if not ta and not tb:
        return 1.0
    if not ta or not tb:
        return 0.0
    return len(ta & tb) / len(ta | tb)


def edit_similarity(a: str, b: str, prefix_scale: float = 0.125) -> float:
    """Normalized edit similarity: Jaro with a common-prefix boost.

    The boost rewards shared leading characters (up to four, scaled by
    ``prefix_scale``), which is what lets abbreviated forms like "Intl"
    clear the fuzzy threshold against their expansions.
    """
    if a == b:
        return 1.0
    if not a or not b:
        return 0.0
    la, lb = len(a), len(b)
    window = max(la, lb) // 2 - 1
    matched_a = [False] * la
    matched_b = [False] * lb
    matches = 0
    for i, ch in enumerate(a):
        lo, hi = max(0, i - window), min(lb, i + window + 1)
        for j in range(lo, hi):
            if not matched_b[j] and b[j] == ch:
                matched_a[i] = matched_b[j] = True
                matches += 1
                break
    if matches == 0:
        return 0.0
    transpositions = 0
    k = 0
    for i in range(la):
        if matched_a[i]:
            while not matched_b[k]:
                k += 1
            if a[i] != b[k]:
                transpositions += 1
            k += 1
    transpositions //= 2
    jaro = (matches / la + matches / lb + (matches - transpositions) / matches) / 3
    prefix = 0
    for ca, cb in zip(a, b):
        if ca != cb or prefix == 4:
            break
        prefix += 1
    return jaro + prefix * prefix_scale * (1 - jaro)


@dataclass(frozen=True)
class KBEntry:
    company_id: str
    canonical_name: str
    aliases: tuple[str, ...]
    ticker: str | None = None


@dataclass(frozen=True)
class LinkedEntity:
    """A mention resolved (or not) against the knowledge base."""

    mention: EntityMention
    company_id: str | None
    method: str  # exact | alias | fuzzy | unlinked | ambiguous
    score: float

    def __post_init__(self):
        if self.method in ("exact", "alias") and self.score != 1.0:
            raise ValueError(f"{self.method} link must score 1.0")
        if self.method in ("unlinked", "ambiguous") and self.company_id is not None:
            raise ValueError(f"{self.method} link cannot carry a company id")
        if self.method == "fuzzy" and self.company_id is None:
            raise ValueError("fuzzy link needs a company id")

    @property
    def linked(self) -> bool:
        return self.company_id is not None


class _SurfaceMatcher:
    """First-word-bucketed longest-first alias matcher for the gazetteer."""

    def __init__(self, surfaces: list[str]):
        buckets: dict[str, list[tuple[int, re.Pattern]]] = {}
        for surface in surfaces:
            first = _WORD_RE.search(surface)
            if first is None or len(surface) < 2:
                continue
            # a trailing word boundary is only meaningful after a word char
            # (aliases ending in "Inc." must not demand one after the dot)
            tail = r"\b" if (surface[-1].isalnum() or surface[-1] == "_") else ""
            pattern = re.compile(re.escape(surface) + tail, re.IGNORECASE)
            buckets.setdefault(first.group(0).lower(), []).append((len(surface), pattern))
        for bucket in buckets.values():
            bucket.sort(key=lambda item: -item[0])
        self._buckets = buckets

    def match_at(self, text: str, pos: int) -> int | None:
        """End offset of the longest alias starting at ``pos``, if any."""
        word = _WORD_RE.match(text, pos)
        if word is None:
            return None
        for _, pattern in self._buckets.get(word.group(0).lower(), ()):
            m = pattern.match(text, pos)
            if m is not None:
                return m.end()
        return None


class KnowledgeBase:
    """Immutable company registry with a prebuilt normalized-alias index."""

    def __init__(self, entries: list[KBEntry]):
        self.entries = list(entries)
        self.by_id: dict[str, KBEntry] = {}
        self.alias_index: dict[str, set[str]] = {}
        self.canonical_index: dict[str, set[str]] = {}
        self._surfaces: set[str] = set()
        for entry in self.entries:
            if entry.company_id in self.by_id:
                raise DuplicateId(f"company id {entry.company_id} appears twice")
            self.by_id[entry.company_id] = entry
            self.canonical_index.setdefault(entry.canonical_name, set()).add(entry.company_id)
            for alias in entry.aliases:
                self._surfaces.add(alias)
                try:
                    norm = normalize_name(alias)
                except EmptyName:
                    continue
                self.alias_index.setdefault(norm, set()).add(entry.company_id)
        self._norm_aliases = sorted(
            {(norm, cid) for norm, ids in self.alias_index.items() for cid in ids})
        self._matcher: _SurfaceMatcher | None = None

    def __len__(self) -> int:
        return len(self.entries)

    def normalized_aliases(self) -> list[tuple[str, str]]:
        """All (normalized alias, company id) pairs, deduplicated."""
        return self._norm_aliases

    def shared_aliases(self) -> dict[str, set[str]]:
        """Normalized aliases claimed by more than one company."""
        return {norm: ids for norm, ids in self.alias_index.items() if len(ids) > 1}

    def surface_matcher(self) -> _SurfaceMatcher:
        if self._matcher is None:
            self._matcher = _SurfaceMatcher(sorted(self._surfaces))
        return self._matcher

    def search(self, query: str, limit: int = 25) -> list[KBEntry]:
        """Entries whose name or an alias contains the query, prefix hits first."""
        q = query.lower()
        scored = []
        for entry in self.entries:
            names = [entry.canonical_name, *entry.aliases]
            if entry.ticker:
                names.append(entry.ticker)
            if not any(q in n.lower() for n in names):
                continue
            prefix = any(n.lower().startswith(q) for n in names)
            scored.append((0 if prefix else 1, entry.canonical_name, entry))
        scored.sort(key=lambda item: item[:2])
        return [entry for _, _, entry in scored[:limit]]


def load_kb(path: str | Path) -> KnowledgeBase:
    """Load and validate a knowledge base file."""
    path = Path(path)
    try:
        payload = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise SchemaError(f"cannot read knowledge base {path}: {exc}") from exc
    if not isinstance(payload, list):
        raise SchemaError("knowledge base must be a JSON array of entries")
    entries = []
    for i, item in enumerate(payload):
        if not isinstance(item, dict):
            raise SchemaError(f"entry {i} is not an object")
        try:
            company_id = item["company_id"]
            canonical = item["canonical_name"]
            aliases = item.get("aliases", [])
        except KeyError as exc:
            raise SchemaError(f"entry {i} missing {exc}") from exc
        if not isinstance(company_id, str) or not COMPANY_ID_RE.fullmatch(company_id):
            raise SchemaError(f"entry {i}: company_id {company_id!r} is not six digits")
        if not isinstance(canonical, str) or not canonical.strip():
            raise SchemaError(f"entry {i}: canonical_name must be a non-empty string")
        if not isinstance(aliases, list) or not all(isinstance(a, str) for a in aliases):
            raise SchemaError(f"entry {i}: aliases must be a list of strings")
        ticker = item.get("ticker")
        if ticker is not None and not isinstance(ticker, str):
            raise SchemaError(f"entry {i}: ticker must be a string or null")
        alias_list = list(dict.fromkeys([canonical, *aliases]))  # canonical self-alias
        entries.append(KBEntry(company_id=company_id, canonical_name=canonical,
                               aliases=tuple(alias_list), ticker=ticker))
    return KnowledgeBase(entries)


def link(mention: EntityMention, kb: KnowledgeBase,
         fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD) -> LinkedEntity:
    """Resolve one mention through the exact / alias / fuzzy tiers."""
    surface = mention.surface.strip()

    ids = kb.canonical_index.get(surface, set())
    if len(ids) == 1:
        return LinkedEntity(mention, next(iter(ids)), "exact", 1.0)
    if len(ids) > 1:
        return LinkedEntity(mention, None, "ambiguous", 1.0)

    try:
        norm = normalize_name(surface)
    except EmptyName:
        return LinkedEntity(mention, None, "unlinked", 0.0)

    ids = kb.alias_index.get(norm, set())
    if len(ids) == 1:
        return LinkedEntity(mention, next(iter(ids)), "alias", 1.0)
    if len(ids) > 1:
        return LinkedEntity(mention, None, "ambiguous", 1.0)

    best = 0.0
    best_ids: set[str] = set()
    for alias_norm, company_id in kb.normalized_aliases():
        score = max(token_set_jaccard(norm, alias_norm),
                    edit_similarity(norm, alias_norm))
        if score > best:
            best, best_ids = score, {company_id}
        elif score == best:
            best_ids.add(company_id)
    if best >= fuzzy_threshold and best_ids:
        if len(best_ids) == 1:
            return LinkedEntity(mention, best_ids.pop(), "fuzzy", best)
        return LinkedEntity(mention, None, "ambiguous", best)
    return LinkedEntity(mention, None, "unlinked", best)


def link_batch(mentions: list[EntityMention], kb: KnowledgeBase,
               fuzzy_threshold: float = DEFAULT_FUZZY_THRESHOLD) -> list[LinkedEntity]:
    """Elementwise link; order preserved."""
    return [link(m, kb, fuzzy_threshold) for m in mentions]
