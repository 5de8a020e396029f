"""Company-name mention recognition as an ensemble of pluggable recognizers.

Each recognizer emits exact-span mentions over the same text; the ensemble
unions them so no single recognizer's miss loses a competitor. Two
recognizers ship in-process (a designator-driven heuristic and a knowledge
base gazetteer); arbitrary external recognizers can join over a small HTTP
protocol and are skipped with a warning when unreachable, never failing the
pipeline.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field, replace
from typing import TYPE_CHECKING

import requests

from .errors import EndpointUnavailable, InvalidResponse

if TYPE_CHECKING:
    from .graph_store import EdgeProvenance
    from .linker import KnowledgeBase

logger = logging.getLogger(__name__)

# Corporate designators that anchor the heuristic recognizer. Matching is
# case-insensitive except that the trailing period only counts when the
# dotted form is listed here.
DEFAULT_DESIGNATORS = (
    "Inc", "Inc.", "Corp", "Corp.", "Corporation", "Co", "Co.", "Company",
    "Ltd", "LLC", "L.P.", "plc", "AG", "N.V.", "S.A.", "Group", "Holdings",
    "Technologies",
)

# Leading tokens that capitalize for sentence reasons, not name reasons.
_LEADING_STOPWORDS = {
    "the", "a", "an", "our", "we", "its", "this", "these", "those", "other",
    "certain", "many", "some", "most", "in", "on", "at", "as", "see", "and",
}

_TOKEN_RE = re.compile(r"[\w&][\w.&'’-]*")
_WORD_START_RE = re.compile(r"\b(?=\w)")

EXTERNAL_TIMEOUT_SECONDS = 10.0


@dataclass(frozen=True)
class EntityMention:
    """A surface company name found in text (or lifted from a table).

    Text-origin mentions carry exact offsets into the text they were found
    in; table-origin mentions carry zeroed spans because table content is
    restructured and its provenance travels separately.
    """

    surface: str
    char_start: int
    char_end: int
    sources: frozenset[str]
    origin: str = "text"  # text | table
    provenance: "EdgeProvenance | None" = None  # filing-level evidence, set by the pipeline

    def __post_init__(self):
        if not self.sources:
            raise ValueError("mention needs at least one source")
        if self.origin == "text" and self.char_start >= self.char_end:
            raise ValueError("text mention span must be non-empty")

    def span(self) -> tuple[int, int]:
        return (self.char_start, self.char_end)


@dataclass(frozen=True)
class RecognizerSpec:
    """Configuration of one ensemble member."""

    id: str
    kind: str  # gazetteer | heuristic | external
    endpoint: str | None = None
    enabled: bool = True
    timeout: float = EXTERNAL_TIMEOUT_SECONDS

    def __post_init__(self):
        if self.kind not in ("gazetteer", "heuristic", "external"):
            raise ValueError(f"unknown recognizer kind {self.kind!r}")
        if self.kind == "external" and not self.endpoint:
            raise ValueError(f"external recognizer {self.id!r} needs an endpoint")


def recognize_heuristic(text: str, recognizer_id: str = "heuristic",
                        designators: tuple[str, ...] = DEFAULT_DESIGNATORS) -> list[EntityMention]:
    """Capitalized token runs anchored by a corporate designator.

    A maximal run of capitalized tokens (designators and "&" may join in
    any case) becomes a mention when it ends in a designator, or contains
    one after at least two other tokens. Runs never cross line breaks.
    """
    designator_set = {d.lower() for d in designators}

    def is_designator(token: str) -> bool:
        return token.lower() in designator_set or token.lower().rstrip(".,;:") in designator_set

    def qualifies(token: str) -> bool:
        return token[0].isupper() or token == "&" or is_designator(token)

    mentions = []
    run: list[re.Match] = []

    def flush():
        nonlocal run
        tokens = list(run)
        run = []
        # sentence-capitalized lead-ins and dangling connectors are not names
        while tokens and tokens[0].group(0).lower() in _LEADING_STOPWORDS | {"&"}:
            tokens.pop(0)
        while tokens and tokens[-1].group(0) == "&":
            tokens.pop()
        if len(tokens) < 2:
            return
        designator_idx = max((i for i, t in enumerate(tokens) if is_designator(t.group(0))),
                             default=-1)
        if designator_idx < 0:
            return
        if designator_idx != len(tokens) - 1 and designator_idx < 2:
            return
        start = tokens[0].start()
        last = tokens[-1]
        end = last.end()
        raw = last.group(0)
        if raw.lower() not in designator_set:
            end -= len(raw) - len(raw.rstrip(".,;:"))  # sentence period, not part of the name
        if end <= start:
            return
        mentions.append(EntityMention(surface=text[start:end], char_start=start,
                                      char_end=end, sources=frozenset({recognizer_id})))

    prev_end = 0
    for m in _TOKEN_RE.finditer(text):
        gap = text[prev_end:m.start()]
        # newlines always separate names; list commas do too, except the
        # comma that precedes a designator ("Amazon.com, Inc.")
        if run and ("\n" in gap
                    or (any(c in gap for c in ",;:") and not is_designator(m.group(0)))):
            flush()
        if qualifies(m.group(0)):
            run.append(m)
        elif run:
            flush()
        prev_end = m.end()
    flush()
    return mentions


def recognize_gazetteer(text: str, kb: "KnowledgeBase",
                        recognizer_id: str = "gazetteer") -> list[EntityMention]:
    """Longest-first scan of the text against every name and alias in the kb.

    Matching is case-insensitive and word-boundary anchored; overlapping
    candidates resolve longest-first, earliest-first on ties.
    """
    matcher = kb.surface_matcher()
    candidates = []
    for m in _WORD_START_RE.finditer(text):
        pos = m.start()
        hit = matcher.match_at(text, pos)
        if hit is not None:
            candidates.append((pos, hit))

    candidates.sort(key=lambda c: (-(c[1] - c[0]), c[0]))
    taken: list[tuple[int, int]] = []
    mentions = []
    for start, end in candidates:
        if any(start < t_end and end > t_start for t_start, t_end in taken):
            continue
        taken.append((start, end))
        mentions.append(EntityMention(surface=text[start:end], char_start=start,
                                      char_end=end, sources=frozenset({recognizer_id})))
    mentions.sort(key=lambda m: m.char_start)
    return mentions


def recognize_external(text: str, spec: RecognizerSpec) -> list[EntityMention]:
    """POST the text to an external recognizer and validate its spans.

    Wire protocol: request ``{"text": ...}``, response
    ``{"mentions": [{"surface", "start", "end"}]}`` with code-point offsets.
    """
    if spec.kind != "external":
        raise ValueError(f"recognizer {spec.id!r} is not external")
    try:
        resp = requests.post(spec.endpoint, json={"text": text}, timeout=spec.timeout)
        resp.raise_for_status()
        payload = resp.json()
    except (requests.RequestException, ValueError) as exc:
        raise EndpointUnavailable(f"{spec.id} at {spec.endpoint}: {exc}") from exc

    raw_mentions = payload.get("mentions")
    if not isinstance(raw_mentions, list):
        raise InvalidResponse(f"{spec.id}: response lacks a mentions list")
    mentions = []
    for item in raw_mentions:
        try:
            surface, start, end = item["surface"], int(item["start"]), int(item["end"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidResponse(f"{spec.id}: malformed mention {item!r}") from exc
        if not (0 <= start < end <= len(text)) or text[start:end] != surface:
            raise InvalidResponse(
                f"{spec.id}: span [{start},{end}) does not match surface {surface!r}")
        mentions.append(EntityMention(surface=surface, char_start=start, char_end=end,
                                      sources=frozenset({spec.id})))
    return mentions


def ensemble_union(results: list[tuple[str, list[EntityMention]]]) -> list[EntityMention]:
    """Union the recognizers' text mentions.

    Identical spans merge with their sources unioned; a span strictly inside
    another is absorbed by the containing span (names are maximal phrases,
    fragments would duplicate graph nodes). Every input span therefore ends
    up covered by some output span.
    """
    by_span: dict[tuple[int, int], EntityMention] = {}
    for recognizer_id, mentions in results:
        for m in mentions:
            key = m.span()
            merged = by_span.get(key)
            sources = m.sources | {recognizer_id}
            if merged is None:
                by_span[key] = replace(m, sources=frozenset(sources))
            else:
                by_span[key] = replace(merged, sources=merged.sources | sources)

    ordered = sorted(by_span.values(), key=lambda m: (m.char_start, -m.char_end))
    kept: list[EntityMention] = []
    for m in ordered:
        container_idx = next(
            (i for i, k in enumerate(kept)
             if k.char_start <= m.char_start and m.char_end <= k.char_end), None)
        if container_idx is None:
            kept.append(m)
        else:
            k = kept[container_idx]
            kept[container_idx] = replace(k, sources=k.sources | m.sources)
    kept.sort(key=lambda m: (m.char_start, m.char_end))
    return kept


def mentions_from_table(names: list[str], recognizer_id: str = "table") -> list[EntityMention]:
    """One table-origin mention per distinct extracted name."""
    seen = set()
    mentions = []
    for name in names:
        if name in seen:
            continue
        seen.add(name)
        mentions.append(EntityMention(surface=name, char_start=0, char_end=0,
                                      sources=frozenset({recognizer_id}), origin="table"))
    return mentions


def run_ensemble(text: str, specs: list[RecognizerSpec],
                 kb: "KnowledgeBase | None" = None) -> list[EntityMention]:
    """Run every enabled recognizer over the text and union the results.

    An unreachable external endpoint contributes nothing and logs a
    warning; it never takes the pipeline down.
    """
    results = []
    for spec in specs:
        if not spec.enabled:
            continue
        if spec.kind == "heuristic":
            results.append((spec.id, recognize_heuristic(text, recognizer_id=spec.id)))
        elif spec.kind == "gazetteer":
            if kb is None:
                raise ValueError(f"gazetteer recognizer {spec.id!r} needs a knowledge base")
            results.append((spec.id, recognize_gazetteer(text, kb, recognizer_id=spec.id)))
        else:
            try:
                results.append((spec.id, recognize_external(text, spec)))
            except EndpointUnavailable as exc:
                logger.warning("external recognizer skipped: %s", exc)
    return ensemble_union(results)
