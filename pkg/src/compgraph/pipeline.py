"""End-to-end pipeline: fetch, segment, extract, recognize, link, build.

Filings are processed in parallel up to the configured cap; a failure in
one filing is logged into the run manifest and never aborts the corpus.
"""
from __future__ import annotations

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .config import PipelineConfig
from .edgar_client import EdgarClient, FilingRef, RawFiling
from .errors import CompgraphError, EmptyCorpus
from .evaluate import FilingOutcome
from .extractor import (CompetitionSubsection, extract_subsections,
                        find_keyword_hits, normalize_tables, subsections_to_json)
from .graph_store import (CompetitionGraph, EdgeProvenance, SNIPPET_MAX_CHARS,
                          build_graph, save_graph)
from .itemizer import business_section, itemize, linearize, sections_to_json
from .linker import KnowledgeBase, LinkedEntity, link, link_batch, load_kb
from .recognize import EntityMention, mentions_from_table, run_ensemble

logger = logging.getLogger(__name__)

_SNIPPET_BACK_CHARS = 100  # context kept before a mention in its snippet


@dataclass
class FilingResult:
    ref: FilingRef
    filer_id: str | None = None
    subsections: list[CompetitionSubsection] = field(default_factory=list)
    linked: list[LinkedEntity] = field(default_factory=list)
    outcome: FilingOutcome | None = None
    error: str | None = None
    doc_chars: int = 0


@dataclass
class RunManifest:
    corpus_tag: str
    attempted: int
    succeeded: int
    failed: int
    failures: list[dict] = field(default_factory=list)
    n_unlinked_mentions: int = 0

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class PipelineRun:
    graph: CompetitionGraph
    manifest: RunManifest
    results: list[FilingResult]

    @property
    def outcomes(self) -> list[FilingOutcome]:
        return [r.outcome for r in self.results if r.outcome is not None]


def _mention_provenance(doc_full_text: str, accession: str, doc_start: int,
                        doc_end: int, lo: int, hi: int) -> EdgeProvenance:
    """Snippet window around a mention, clipped to the subsection bounds."""
    w_start = max(lo, doc_start - _SNIPPET_BACK_CHARS)
    w_end = min(hi, w_start + SNIPPET_MAX_CHARS)
    if w_end < doc_end:  # very long mention: anchor on its start instead
        w_start = doc_start
        w_end = min(hi, doc_start + SNIPPET_MAX_CHARS)
    return EdgeProvenance(accession_number=accession, char_start=w_start,
                          char_end=w_end, snippet=doc_full_text[w_start:w_end])


def process_filing(raw: RawFiling, kb: KnowledgeBase,
                   config: PipelineConfig) -> FilingResult:
    """Run one filing through segmentation, recognition and linkage."""
    ref = raw.ref
    result = FilingResult(ref=ref)
    doc = linearize(raw)
    result.doc_chars = len(doc.full_text)
    sections = itemize(doc)
    business = business_section(sections, doc)
    rules = config.extraction_rules()
    hits = find_keyword_hits(doc, business, config.keywords, rules)
    subs = [normalize_tables(doc, sub, rules)
            for sub in extract_subsections(doc, business, hits, rules)]
    result.subsections = subs

    filer = link(EntityMention(surface=ref.registrant_name, char_start=0,
                               char_end=max(len(ref.registrant_name), 1),
                               sources=frozenset({"filer"})),
                 kb, config.fuzzy_threshold)
    if not filer.linked:
        raise CompgraphError(
            f"registrant {ref.registrant_name!r} not resolvable in the knowledge base")
    result.filer_id = filer.company_id

    mentions: list[EntityMention] = []
    for sub in subs:
        for m in run_ensemble(sub.body_text, config.recognizers, kb):
            doc_start = sub.to_doc_offset(m.char_start)
            doc_end = doc_start + (m.char_end - m.char_start)
            prov = _mention_provenance(doc.full_text, ref.accession_number,
                                       doc_start, doc_end, sub.char_start, sub.char_end)
            mentions.append(replace(m, provenance=prov))
        for m in mentions_from_table(sub.table_names):
            doc_start, doc_end = sub.table_name_offsets[m.surface]
            prov = _mention_provenance(doc.full_text, ref.accession_number,
                                       doc_start, doc_end, sub.char_start, sub.char_end)
            mentions.append(replace(m, provenance=prov))

    result.linked = link_batch(mentions, kb, config.fuzzy_threshold)
    n_linked = sum(1 for e in result.linked if e.linked)
    result.outcome = FilingOutcome(
        accession_number=ref.accession_number,
        n_chars=len(doc.full_text),
        n_subsections=len(subs),
        subsection_chars=sum(s.char_end - s.char_start for s in subs),
        n_linked_mentions=n_linked,
        n_unlinked_mentions=len(result.linked) - n_linked,
    )
    _maybe_dump(config.dump_sections_dir, ref, sections_to_json(sections))
    _maybe_dump(config.dump_subsections_dir, ref, subsections_to_json(subs))
    return result


def run_pipeline(config: PipelineConfig) -> PipelineRun:
    """Process the configured corpus into a saved graph plus a manifest."""
    config.validate()
    kb = load_kb(config.kb_path)
    client = EdgarClient(cache_dir=config.cache_dir, local_dir=config.local_dir)

    if config.input_mode == "local_dir":
        refs = client.local_refs()
        if config.years is not None:
            refs = [r for r in refs if config.years[0] <= r.fiscal_year <= config.years[1]]
    else:
        refs = []
        for cik in config.ciks:
            refs.extend(client.list_filings(cik, form_type=None, year_range=config.years))
    if not refs:
        raise EmptyCorpus("no filings matched the configured corpus")
    refs.sort(key=lambda r: r.accession_number)

    def work(ref: FilingRef) -> FilingResult:
        try:
            raw = client.fetch_filing(ref)
            return process_filing(raw, kb, config)
        except Exception as exc:  # per-filing isolation: log, record, continue
            logger.warning("filing %s failed: %s", ref.accession_number, exc)
            result = FilingResult(ref=ref, error=str(exc))
            result.outcome = FilingOutcome(accession_number=ref.accession_number,
                                           n_chars=0, n_subsections=0,
                                           subsection_chars=0, n_linked_mentions=0,
                                           failed=True)
            return result

    with ThreadPoolExecutor(max_workers=config.parallelism) as pool:
        results = list(pool.map(work, refs))

    records = [(r.ref, r.filer_id, r.linked) for r in results
               if r.error is None and r.filer_id is not None]
    graph = build_graph(records, kb, corpus_tag=config.corpus_tag)
    save_graph(graph, config.output_path)

    failures = [{"accession": r.ref.accession_number, "error": r.error}
                for r in results if r.error is not None]
    manifest = RunManifest(
        corpus_tag=config.corpus_tag,
        attempted=len(results),
        succeeded=len(results) - len(failures),
        failed=len(failures),
        failures=failures,
        n_unlinked_mentions=sum(o.n_unlinked_mentions for o in
                                (r.outcome for r in results) if o is not None),
    )
    manifest_path = Path(f"{config.output_path}.manifest.json")
    manifest_path.write_text(json.dumps(manifest.to_dict(), indent=1), "utf-8")
    logger.info("pipeline done: %d/%d filings, %d edges, %d nodes",
                manifest.succeeded, manifest.attempted, len(graph.edges), len(graph.nodes))
    return PipelineRun(graph=graph, manifest=manifest, results=results)


def _maybe_dump(dump_dir: str | None, ref: FilingRef, payload: list[dict]):
    if not dump_dir:
        return
    directory = Path(dump_dir)
    directory.mkdir(parents=True, exist_ok=True)
    out = directory / f"{ref.accession_number}.json"
    out.write_text(json.dumps(payload, indent=1), "utf-8")
