"""Fetches 10-K filings from the public EDGAR archive or a local directory.

Network mode talks to the live archive and requires an identity string in
the COMPGRAPH_USER_AGENT environment variable (the archive enforces
fair-access rules: declared identity, bounded request rate). Local mode
reads pre-downloaded HTML from a directory holding an ``index.json``
manifest and never touches the network. Both modes share an on-disk cache
keyed by accession number, so downstream parsing is reproducible from the
cache alone.
"""
from __future__ import annotations

import datetime as dt
import json
import logging
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import requests

from .errors import ConfigError, DecodeError, InvalidRange, NotFound, RateLimited

logger = logging.getLogger(__name__)

ACCESSION_RE = re.compile(r"^\d{10}-\d{2}-\d{6}$")
ALLOWED_FORMS = ("10-K", "10-K/A")
USER_AGENT_ENV = "COMPGRAPH_USER_AGENT"

ARCHIVE_URL = "https://www.sec.gov/Archives/edgar/data/{cik}/{acc_nodash}/{accession}.txt"
BROWSE_URL = "https://www.sec.gov/cgi-bin/browse-edgar"

DEFAULT_RATE_LIMIT = 8.0  # requests per second ceiling
MAX_RETRIES = 5


@dataclass(frozen=True)
class FilingRef:
    """Identifies one filing in the archive."""

    cik: str
    accession_number: str
    form_type: str
    filing_date: dt.date
    registrant_name: str
    fiscal_year: int

    def __post_init__(self):
        if not re.fullmatch(r"\d{10}", self.cik):
            raise ValueError(f"cik must be a zero-padded 10-digit id, got {self.cik!r}")
        if not ACCESSION_RE.fullmatch(self.accession_number):
            raise ValueError(f"bad accession number {self.accession_number!r}")
        if self.form_type not in ALLOWED_FORMS:
            raise ValueError(f"form_type must be one of {ALLOWED_FORMS}, got {self.form_type!r}")
        this_year = dt.date.today().year
        if not 1993 <= self.fiscal_year <= this_year:
            raise ValueError(f"fiscal_year {self.fiscal_year} outside [1993, {this_year}]")


@dataclass(frozen=True)
class RawFiling:
    """One fetched filing: metadata plus the exact bytes served."""

    ref: FilingRef
    html: bytes
    source: str  # network | cache | local_dir
    retrieved_at: dt.datetime = field(default_factory=lambda: dt.datetime.now(dt.timezone.utc))

    def text(self) -> str:
        return decode_html(self.html)


def decode_html(raw: bytes) -> str:
    """Decode filing bytes, trying UTF-8 then Latin-1 (older filings)."""
    if not raw:
        raise DecodeError("empty filing body")
    try:
        return raw.decode("utf-8")
    except UnicodeDecodeError:
        pass
    try:
        return raw.decode("latin-1")
    except UnicodeDecodeError as exc:  # latin-1 decodes anything; defensive
        raise DecodeError(str(exc)) from exc


class _RateGate:
    """Serializes downloads so the request rate stays under a ceiling."""

    def __init__(self, per_second: float):
        self._interval = 1.0 / per_second
        self._lock = threading.Lock()
        self._next_ok = 0.0

    def wait(self):
        with self._lock:
            now = time.monotonic()
            if now < self._next_ok:
                time.sleep(self._next_ok - now)
                now = time.monotonic()
            self._next_ok = now + self._interval


class EdgarClient:
    """Polite archive client with an on-disk cache.

    Args:
        cache_dir: directory for ``<accession>.html`` cache files.
        local_dir: when given, all reads come from this directory and no
            network call is ever made.
        user_agent: identity header; defaults to COMPGRAPH_USER_AGENT.
        rate_limit: request-per-second ceiling for network mode.
    """

    def __init__(self, cache_dir: str | Path, local_dir: str | Path | None = None,
                 user_agent: str | None = None, rate_limit: float = DEFAULT_RATE_LIMIT):
        self.cache_dir = Path(cache_dir)
        self.cache_dir.mkdir(parents=True, exist_ok=True)
        self.local_dir = Path(local_dir) if local_dir else None
        self.user_agent = user_agent or os.environ.get(USER_AGENT_ENV, "")
        self._gate = _RateGate(rate_limit)
        self._session = requests.Session()
        self._local_index: list[dict] | None = None

    # --- public API ---

    def fetch_filing(self, ref: FilingRef) -> RawFiling:
        """Return the filing for ``ref``, from cache when possible.

        Raises NotFound, RateLimited or DecodeError. Repeated calls return
        byte-identical html.
        """
        cached = self._cache_path(ref.accession_number)
        if cached.exists():
            raw = cached.read_bytes()
            decode_html(raw)  # validate
            return RawFiling(ref=ref, html=raw, source="cache")

        if self.local_dir is not None:
            raw = self._read_local(ref)
            self._write_cache(cached, raw)
            return RawFiling(ref=ref, html=raw, source="local_dir")

        raw = self._download(ref)
        decode_html(raw)
        self._write_cache(cached, raw)
        return RawFiling(ref=ref, html=raw, source="network")

    def list_filings(self, cik: str, form_type: str | None = "10-K",
                     year_range: tuple[int, int] | None = None) -> list[FilingRef]:
        """List filings for a registrant, sorted by filing date ascending.

        ``form_type=None`` accepts both 10-K and amended 10-K/A filings.
        An unknown registrant raises NotFound; a known one with nothing
        matching the filter gives an empty list.
        """
        if year_range is not None:
            lo, hi = year_range
            if lo > hi:
                raise InvalidRange(f"year_range [{lo},{hi}] is out of order")
        refs = (self._list_local(cik) if self.local_dir is not None
                else self._list_network(cik, form_type or "10-K"))
        out = [r for r in refs if form_type is None or r.form_type == form_type]
        if year_range is not None:
            out = [r for r in out if year_range[0] <= r.fiscal_year <= year_range[1]]
        out.sort(key=lambda r: (r.filing_date, r.accession_number))
        return out

    def local_refs(self) -> list[FilingRef]:
        """All refs in the local directory's index, in index order."""
        return [_ref_from_index(e) for e in self._index_entries()]

    # --- cache ---

    def _cache_path(self, accession: str) -> Path:
        return self.cache_dir / f"{accession}.html"

    @staticmethod
    def _write_cache(path: Path, raw: bytes):
        # write-temp-then-rename keeps concurrent readers off partial files
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".part")
        try:
            with os.fdopen(fd, "wb") as fh:
                fh.write(raw)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # --- local directory mode ---

    def _index_entries(self) -> list[dict]:
        if self._local_index is None:
            index_path = self.local_dir / "index.json"
            if not index_path.exists():
                raise NotFound(f"no index.json under {self.local_dir}")
            self._local_index = json.loads(index_path.read_text("utf-8"))
        return self._local_index

    def _read_local(self, ref: FilingRef) -> bytes:
        for entry in self._index_entries():
            if entry["accession_number"] == ref.accession_number:
                path = self.local_dir / entry["file"]
                if not path.exists():
                    raise NotFound(f"index lists {entry['file']} but the file is missing")
                raw = path.read_bytes()
                decode_html(raw)
                return raw
        raise NotFound(f"accession {ref.accession_number} not in local index")

    def _list_local(self, cik: str) -> list[FilingRef]:
        refs = [_ref_from_index(e) for e in self._index_entries() if e["cik"] == cik]
        if not refs:
            raise NotFound(f"no filings for cik {cik} in local index")
        return refs

    # --- network mode ---

    def _require_identity(self):
        if not self.user_agent:
            raise ConfigError(
                f"network mode needs an identity string; set {USER_AGENT_ENV}")

    def _get(self, url: str, **params) -> requests.Response:
        self._require_identity()
        backoff = 1.0
        for attempt in range(MAX_RETRIES):
            self._gate.wait()
            resp = self._session.get(url, params=params or None,
                                     headers={"User-Agent": self.user_agent}, timeout=30)
            if resp.status_code in (403, 429, 503):
                if attempt == MAX_RETRIES - 1:
                    raise RateLimited(f"throttled after {MAX_RETRIES} attempts: {url}")
                logger.warning("throttled (%s), backing off %.1fs", resp.status_code, backoff)
                time.sleep(backoff)
                backoff *= 2
                continue
            if resp.status_code == 404:
                raise NotFound(url)
            resp.raise_for_status()
            return resp
        raise RateLimited(url)  # unreachable

    def _download(self, ref: FilingRef) -> bytes:
        url = ARCHIVE_URL.format(cik=ref.cik.lstrip("0"),
                                 acc_nodash=ref.accession_number.replace("-", ""),
                                 accession=ref.accession_number)
        return self._get(url).content

    def _list_network(self, cik: str, form_type: str) -> list[FilingRef]:
        resp = self._get(BROWSE_URL, action="getcompany", CIK=cik, type=form_type,
                         dateb="", owner="include", count="100", output="atom")
        refs = _parse_browse_atom(resp.text, cik)
        if not refs:
            raise NotFound(f"no {form_type} filings for cik {cik}")
        return refs


def _ref_from_index(entry: dict) -> FilingRef:
    return FilingRef(
        cik=entry["cik"],
        accession_number=entry["accession_number"],
        form_type=entry["form_type"],
        filing_date=dt.date.fromisoformat(entry["filing_date"]),
        registrant_name=entry["registrant_name"],
        fiscal_year=int(entry["fiscal_year"]),
    )


def _parse_browse_atom(xml_text: str, cik: str) -> list[FilingRef]:
    """Pull filing refs out of the company-search atom feed."""
    import xml.etree.ElementTree as ET

    ns = {"a": "http://www.w3.org/2005/Atom"}
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        raise NotFound(f"unparseable company index: {exc}") from exc
    name_el = root.find("a:company-info/a:conformed-name", ns)
    registrant = name_el.text.strip() if name_el is not None and name_el.text else ""
    refs = []
    for entry in root.findall("a:entry", ns):
        content = entry.find("a:content", ns)
        if content is None:
            continue
        form = _child_text(content, "filing-type", ns)
        acc = _child_text(content, "accession-number", ns)  # a.k.a. accession-nunber in old feeds
        if acc is None:
            acc = _child_text(content, "accession-nunber", ns)
        date = _child_text(content, "filing-date", ns)
        if form not in ALLOWED_FORMS or not acc or not date:
            continue
        filed = dt.date.fromisoformat(date)
        refs.append(FilingRef(cik=cik, accession_number=acc, form_type=form,
                              filing_date=filed, registrant_name=registrant,
                              fiscal_year=filed.year - 1))
    return refs


def _child_text(el, tag: str, ns: dict) -> str | None:
    child = el.find(f"a:{tag}", ns)
    return child.text.strip() if child is not None and child.text else None
