"""compgraph: a company competition graph built from SEC 10-K filings.

The pipeline fetches annual reports, isolates the competition subsections
of Item 1, recognizes competitor names with a recognizer ensemble, links
them to unique company identifiers, and assembles a provenance-carrying
directed graph served over HTTP.
"""

__version__ = "0.1.0"

from .edgar_client import EdgarClient, FilingRef, RawFiling
from .extractor import CompetitionSubsection, KeywordHit
from .graph_store import CompetitionEdge, CompetitionGraph
from .itemizer import FilingDocument, FormattedSpan, ItemSection
from .linker import KnowledgeBase, LinkedEntity, load_kb
from .recognize import EntityMention, RecognizerSpec

__all__ = [
    "EdgarClient", "FilingRef", "RawFiling",
    "FilingDocument", "FormattedSpan", "ItemSection",
    "CompetitionSubsection", "KeywordHit",
    "EntityMention", "RecognizerSpec",
    "KnowledgeBase", "LinkedEntity", "load_kb",
    "CompetitionEdge", "CompetitionGraph",
    "__version__",
]
