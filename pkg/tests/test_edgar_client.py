import datetime as dt
import json
import time

import pytest

from compgraph.edgar_client import (EdgarClient, FilingRef, _parse_browse_atom,
                                    _RateGate, decode_html)
from compgraph.errors import ConfigError, DecodeError, InvalidRange, NotFound


def make_ref(**overrides):
    base = dict(cik="0000320193", accession_number="0000320193-20-000096",
                form_type="10-K", filing_date=dt.date(2020, 10, 30),
                registrant_name="Apple Inc.", fiscal_year=2020)
    base.update(overrides)
    return FilingRef(**base)


class TestFilingRef:
    def test_valid_ref(self):
        ref = make_ref()
        assert ref.cik == "0000320193"

    def test_rejects_other_forms_before_any_network_call(self):
        with pytest.raises(ValueError):
            make_ref(form_type="10-Q")

    def test_accepts_amended_form(self):
        assert make_ref(form_type="10-K/A").form_type == "10-K/A"

    def test_rejects_bad_accession(self):
        with pytest.raises(ValueError):
            make_ref(accession_number="nope")

    def test_rejects_out_of_range_year(self):
        with pytest.raises(ValueError):
            make_ref(fiscal_year=1980)
        with pytest.raises(ValueError):
            make_ref(fiscal_year=dt.date.today().year + 2)


class TestDecode:
    def test_utf8(self):
        assert decode_html("héllo".encode("utf-8")) == "héllo"

    def test_latin1_fallback(self):
        assert decode_html("caf\xe9".encode("latin-1")) == "café"

    def test_empty_raises(self):
        with pytest.raises(DecodeError):
            decode_html(b"")


class TestLocalDir:
    def test_fixture_apple_filing(self, fixture_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)
        ref = make_ref()
        raw = client.fetch_filing(ref)
        assert raw.source == "local_dir"
        assert raw.ref.registrant_name == "Apple Inc."
        assert b"Apple Inc." in raw.html or b"APPLE INC." in raw.html

    def test_cache_hit_is_byte_identical(self, fixture_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)
        ref = make_ref()
        first = client.fetch_filing(ref)
        second = client.fetch_filing(ref)
        assert second.source == "cache"
        assert second.html == first.html

    def test_cache_file_matches_returned_bytes(self, fixture_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)
        ref = make_ref()
        raw = client.fetch_filing(ref)
        cached = tmp_path / f"{ref.accession_number}.html"
        assert cached.exists()
        assert cached.read_bytes() == raw.html

    def test_unknown_accession(self, fixture_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)
        ref = make_ref(accession_number="0000000000-20-000001")
        with pytest.raises(NotFound):
            client.fetch_filing(ref)

    def test_no_network_in_local_mode(self, fixture_dir, tmp_path, monkeypatch):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)

        def explode(*args, **kwargs):
            raise AssertionError("network touched in local_dir mode")

        monkeypatch.setattr(client._session, "get", explode)
        monkeypatch.setattr(client._session, "post", explode)
        client.fetch_filing(make_ref())
        client.list_filings("0000320193", form_type=None)


class TestListFilings:
    @pytest.fixture()
    def three_filing_dir(self, tmp_path):
        directory = tmp_path / "filings"
        directory.mkdir()
        entries = []
        for i, (year, date) in enumerate([(2018, "2019-02-01"),
                                          (2019, "2020-02-01"),
                                          (2020, "2021-02-01")]):
            name = f"acme-{year}.html"
            (directory / name).write_text("<html><body><p>x</p></body></html>")
            entries.append({"cik": "0000000123",
                            "accession_number": f"0000000123-{str(year)[2:]}-00000{i}",
                            "form_type": "10-K", "filing_date": date,
                            "registrant_name": "Acme Corp", "fiscal_year": year,
                            "file": name})
        (directory / "index.json").write_text(json.dumps(entries))
        return directory

    def test_year_filter_matches_manual_oracle(self, three_filing_dir, tmp_path):
        # oracle: by hand, the 2019 and 2020 entries fall in [2019, 2020]
        client = EdgarClient(cache_dir=tmp_path / "c", local_dir=three_filing_dir)
        refs = client.list_filings("0000000123", year_range=(2019, 2020))
        assert [r.fiscal_year for r in refs] == [2019, 2020]
        assert [r.filing_date for r in refs] == [dt.date(2020, 2, 1), dt.date(2021, 2, 1)]

    def test_registrant_with_no_matching_form_gives_empty_list(self, three_filing_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path / "c", local_dir=three_filing_dir)
        assert client.list_filings("0000000123", form_type="10-K/A") == []

    def test_unknown_registrant_raises(self, three_filing_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path / "c", local_dir=three_filing_dir)
        with pytest.raises(NotFound):
            client.list_filings("0000009999")

    def test_inverted_range_rejected(self, three_filing_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path / "c", local_dir=three_filing_dir)
        with pytest.raises(InvalidRange):
            client.list_filings("0000000123", year_range=(2020, 2018))

    def test_sorted_by_filing_date(self, fixture_dir, tmp_path):
        client = EdgarClient(cache_dir=tmp_path, local_dir=fixture_dir)
        refs = client.local_refs()
        assert len(refs) == 10
        by_date = sorted(refs, key=lambda r: (r.filing_date, r.accession_number))
        listed = []
        for cik in {r.cik for r in refs}:
            listed.extend(client.list_filings(cik, form_type=None))
        assert sorted(listed, key=lambda r: (r.filing_date, r.accession_number)) == by_date


class TestNetworkPlumbing:
    def test_missing_identity_is_a_config_error(self, tmp_path, monkeypatch):
        monkeypatch.delenv("COMPGRAPH_USER_AGENT", raising=False)
        client = EdgarClient(cache_dir=tmp_path)
        with pytest.raises(ConfigError):
            client.list_filings("0000320193")

    def test_browse_atom_parsing(self):
        xml = """<?xml version="1.0" encoding="ISO-8859-1"?>
        <feed xmlns="http://www.w3.org/2005/Atom">
          <company-info><conformed-name>ACME CORP</conformed-name></company-info>
          <entry><content type="text/xml">
            <filing-type>10-K</filing-type>
            <accession-number>0000000123-21-000001</accession-number>
            <filing-date>2021-02-01</filing-date>
          </content></entry>
          <entry><content type="text/xml">
            <filing-type>8-K</filing-type>
            <accession-number>0000000123-21-000002</accession-number>
            <filing-date>2021-03-01</filing-date>
          </content></entry>
        </feed>"""
        refs = _parse_browse_atom(xml, "0000000123")
        assert len(refs) == 1  # the 8-K is filtered out
        assert refs[0].accession_number == "0000000123-21-000001"
        assert refs[0].registrant_name == "ACME CORP"
        assert refs[0].fiscal_year == 2020

    def test_rate_gate_spaces_out_calls(self):
        gate = _RateGate(per_second=50)  # 20 ms interval
        start = time.monotonic()
        for _ in range(4):
            gate.wait()
        elapsed = time.monotonic() - start
        assert elapsed >= 0.055  # three full intervals after the first call
