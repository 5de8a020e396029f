"""Evaluation metrics: corpus counts, edge coverage, mention P/R, timing.

Coverage compares predicted edges against a ground-truth set supplied as
input (truth files mirror the graph edge schema). Timing contrasts running
the recognizer ensemble over whole filings versus over extracted
subsections only; wall-clock numbers are medians over repeated runs.
"""
from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path

from .errors import EmptyTruth, SchemaError
from .extractor import CompetitionSubsection
from .graph_store import CompetitionGraph
from .itemizer import FilingDocument
from .linker import KnowledgeBase, normalize_name
from .recognize import EntityMention, RecognizerSpec, run_ensemble

EdgeKey = tuple[str, str, int]


@dataclass(frozen=True)
class GroundTruth:
    """Known competitor relationships to score coverage against."""

    edges: frozenset[EdgeKey]
    mode: str = "directed"  # directed | undirected
    labeled_mentions: dict[str, list[str]] | None = None

    def __post_init__(self):
        if self.mode not in ("directed", "undirected"):
            raise ValueError(f"unknown truth mode {self.mode!r}")
        for source, target, _ in self.edges:
            if source == target:
                raise ValueError("ground truth cannot contain self-loops")
        if self.mode == "undirected":
            canonical = frozenset((min(s, t), max(s, t), y) for s, t, y in self.edges)
            object.__setattr__(self, "edges", canonical)


def load_truth(path: str | Path) -> GroundTruth:
    """Read a truth file: ``{"mode": ..., "edges": [{source,target,year}]}``."""
    try:
        payload = json.loads(Path(path).read_text("utf-8"))
        edges = frozenset((e["source"], e["target"], int(e["year"]))
                          for e in payload["edges"])
        return GroundTruth(edges=edges, mode=payload.get("mode", "directed"))
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"bad truth file {path}: {exc}") from exc


def _as_edge_keys(pred: CompetitionGraph | set[EdgeKey] | frozenset[EdgeKey]) -> set[EdgeKey]:
    if isinstance(pred, CompetitionGraph):
        return pred.edge_keys()
    return set(pred)


def edge_coverage(pred: CompetitionGraph | set[EdgeKey], truth: GroundTruth) -> float:
    """|pred intersect truth| / |truth|, after canonicalizing to truth's mode."""
    if not truth.edges:
        raise EmptyTruth("ground truth has no edges")
    pred_keys = _as_edge_keys(pred)
    if truth.mode == "undirected":
        pred_keys = {(min(s, t), max(s, t), y) for s, t, y in pred_keys}
    return len(pred_keys & truth.edges) / len(truth.edges)


@dataclass(frozen=True)
class PrfResult:
    precision: float
    recall: float
    precision_undefined: bool = False  # empty predictions: reported as 0 with this flag

    def as_tuple(self) -> tuple[float, float]:
        return (self.precision, self.recall)


def mention_prf(pred: list[EntityMention], gold: list[tuple[int, int] | str],
                match: str = "span") -> PrfResult:
    """Precision/recall of predicted mentions against gold annotations.

    ``match="span"`` compares exact (start, end) spans; ``match="surface"``
    compares normalized surfaces, which also scores table-origin mentions.
    """
    if match not in ("span", "surface"):
        raise ValueError(f"unknown match mode {match!r}")

    def key_of_pred(m: EntityMention):
        return m.span() if match == "span" else _safe_norm(m.surface)

    def key_of_gold(g):
        if match == "span":
            if not (isinstance(g, tuple) and len(g) == 2):
                raise ValueError("span matching needs (start, end) gold entries")
            return g
        return _safe_norm(g if isinstance(g, str) else str(g))

    gold_keys = [key_of_gold(g) for g in gold]
    gold_set = set(gold_keys)
    pred_keys = [key_of_pred(m) for m in pred]
    pred_set = set(pred_keys)

    matched_pred = sum(1 for k in pred_keys if k in gold_set)
    matched_gold = sum(1 for k in gold_keys if k in pred_set)
    if not pred:
        return PrfResult(precision=0.0,
                         recall=matched_gold / len(gold) if gold else 0.0,
                         precision_undefined=True)
    precision = matched_pred / len(pred)
    recall = matched_gold / len(gold) if gold else 0.0
    return PrfResult(precision=precision, recall=recall)


def _safe_norm(surface: str) -> str:
    from .errors import EmptyName
    try:
        return normalize_name(surface)
    except EmptyName:
        return surface.strip().lower()


@dataclass
class FilingOutcome:
    """Per-filing pipeline counts that the corpus summary aggregates."""

    accession_number: str
    n_chars: int
    n_subsections: int
    subsection_chars: int
    n_linked_mentions: int
    n_unlinked_mentions: int = 0
    failed: bool = False


@dataclass
class EvalReport:
    n_filings: int
    n_competition_sections: int  # filings with at least one subsection
    n_filings_with_competitor_names: int  # filings with at least one linked mention
    n_edges_pred: int
    n_nodes: int
    reduction_ratio: float  # subsection chars / filing chars
    n_edges_truth: int | None = None
    edge_coverage: float | None = None
    mention_precision: float | None = None
    mention_recall: float | None = None
    precision_undefined: bool = False
    n_unlinked_mentions: int = 0
    timing: dict | None = None

    def to_dict(self) -> dict:
        return {k: v for k, v in self.__dict__.items()}

    def table(self) -> str:
        rows = [
            ("Filings evaluated", self.n_filings),
            ("Filings with competition subsection", self.n_competition_sections),
            ("Filings naming competitors", self.n_filings_with_competitor_names),
            ("Competitor edges extracted", self.n_edges_pred),
            ("Ground-truth edges", self.n_edges_truth if self.n_edges_truth is not None else "-"),
            ("Edge coverage", f"{self.edge_coverage:.4f}" if self.edge_coverage is not None else "-"),
            ("Company nodes", self.n_nodes),
            ("Unlinked mentions", self.n_unlinked_mentions),
            ("Input reduction ratio", f"{self.reduction_ratio:.4f}"),
        ]
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label.ljust(width)}  {value}" for label, value in rows)


def corpus_summary(outcomes: list[FilingOutcome], graph: CompetitionGraph,
                   truth: GroundTruth | None = None) -> EvalReport:
    """Aggregate per-filing outcomes plus graph counts into one report."""
    total_chars = sum(o.n_chars for o in outcomes)
    sub_chars = sum(o.subsection_chars for o in outcomes)
    report = EvalReport(
        n_filings=len(outcomes),
        n_competition_sections=sum(1 for o in outcomes if o.n_subsections > 0),
        n_filings_with_competitor_names=sum(1 for o in outcomes if o.n_linked_mentions > 0),
        n_edges_pred=len(graph.edges),
        n_nodes=len(graph.nodes),
        reduction_ratio=(sub_chars / total_chars) if total_chars else 0.0,
        n_unlinked_mentions=sum(o.n_unlinked_mentions for o in outcomes),
    )
    if truth is not None:
        report.n_edges_truth = len(truth.edges)
        report.edge_coverage = edge_coverage(graph, truth)
    return report


@dataclass
class TimingRecord:
    full_doc_seconds: float
    subsection_seconds: float
    reduction_ratio: float  # subsection chars / document chars
    speedup: float = field(init=False)

    def __post_init__(self):
        self.speedup = (self.full_doc_seconds / self.subsection_seconds
                        if self.subsection_seconds > 0 else float("inf"))


def timing_comparison(doc: FilingDocument, subsections: list[CompetitionSubsection],
                      recognizers: list[RecognizerSpec], kb: KnowledgeBase | None = None,
                      runs: int = 3) -> TimingRecord:
    """Wall-clock for the ensemble over the whole filing vs subsections only.

    Medians over ``runs`` repetitions; single runs at desk scale are too
    noisy to compare.
    """
    full_times = []
    sub_times = []
    for _ in range(runs):
        start = time.perf_counter()
        run_ensemble(doc.full_text, recognizers, kb)
        full_times.append(time.perf_counter() - start)

        start = time.perf_counter()
        for sub in subsections:
            run_ensemble(sub.body_text, recognizers, kb)
        sub_times.append(time.perf_counter() - start)

    sub_chars = sum(s.char_end - s.char_start for s in subsections)
    doc_chars = len(doc.full_text)
    return TimingRecord(
        full_doc_seconds=statistics.median(full_times),
        subsection_seconds=statistics.median(sub_times),
        reduction_ratio=(sub_chars / doc_chars) if doc_chars else 0.0,
    )
