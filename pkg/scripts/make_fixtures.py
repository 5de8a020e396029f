#!/usr/bin/env python3
"""Regenerates the bundled fixture corpus, knowledge base and labels.

Everything here is forward-constructed from one block model per filing:
the same source of truth emits (a) the fixture HTML and (b) the expected
linearized text, offsets, subsection labels, gold mentions and edges. The
labels are therefore independent of the parser implementation; tests
compare the pipeline's output against them.

Run from the repository root:  python3 scripts/make_fixtures.py
"""
from __future__ import annotations

import html as html_lib
import json
import random
import re
import textwrap
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = ROOT / "src" / "compgraph" / "data"
FIXTURE_DIR = DATA_DIR / "fixtures"

KEYWORD_STRINGS = ("competition", "competitive", "competitor")  # never in generated filler


# --------------------------------------------------------------------------
# knowledge base
# --------------------------------------------------------------------------

# (company_id, canonical_name, extra aliases, ticker)
KB_ROWS = [
    ("001690", "Apple Inc.", ["Apple"], "AAPL"),
    ("012141", "Microsoft Corporation", ["Microsoft", "MSFT"], "MSFT"),
    ("006066", "International Business Machines Corporation",
     ["IBM", "International Business Machines"], "IBM"),
    ("020779", "Cisco Systems, Inc.", ["Cisco Systems", "Cisco"], "CSCO"),
    ("001686", "Intel Corporation", ["Intel"], "INTC"),
    ("002968", "JPMorgan Chase & Co.",
     ["JPMorgan Chase", "JPMorgan", "J.P. Morgan Chase & Co.", "JPM"], "JPM"),
    ("003144", "The Coca-Cola Company", ["Coca-Cola", "Coca Cola"], "KO"),
    ("008530", "PepsiCo, Inc.", ["PepsiCo"], "PEP"),
    ("014489", "Delta Air Lines, Inc.", ["Delta Air Lines"], "DAL"),
    ("008007", "Pfizer Inc.", ["Pfizer"], "PFE"),
    ("011259", "Walmart Inc.", ["Walmart", "Wal-Mart Stores"], "WMT"),
    ("002285", "The Boeing Company", ["Boeing"], "BA"),
    ("010846", "Alphabet Inc.", ["Alphabet", "Google"], "GOOGL"),
    ("064768", "Amazon.com, Inc.", ["Amazon.com", "Amazon"], "AMZN"),
    ("061621", "NVIDIA Corporation", ["NVIDIA", "Nvidia"], "NVDA"),
    ("001161", "Advanced Micro Devices, Inc.", ["Advanced Micro Devices", "AMD"], "AMD"),
    ("024800", "QUALCOMM Incorporated", ["Qualcomm"], "QCOM"),
    ("062599", "Juniper Networks, Inc.", ["Juniper Networks", "Juniper"], "JNPR"),
    ("143356", "Arista Networks, Inc.", ["Arista Networks", "Arista"], "ANET"),
    ("166459", "Hewlett Packard Enterprise Company", ["Hewlett Packard Enterprise", "HPE"], "HPE"),
    ("007647", "Bank of America Corporation", ["Bank of America", "BofA"], "BAC"),
    ("003243", "Citigroup Inc.", ["Citigroup", "Citi"], "C"),
    ("114628", "The Goldman Sachs Group, Inc.", ["Goldman Sachs", "Goldman Sachs Group"], "GS"),
    ("012124", "Morgan Stanley", [], "MS"),
    ("008479", "Wells Fargo & Company", ["Wells Fargo"], "WFC"),
    ("157855", "Keurig Dr Pepper Inc.", ["Keurig Dr Pepper", "Dr Pepper Snapple"], "KDP"),
    ("024390", "Monster Beverage Corporation", ["Monster Beverage"], "MNST"),
    ("007257", "Merck & Co., Inc.", ["Merck"], "MRK"),
    ("006266", "Johnson & Johnson", ["Johnson and Johnson"], "JNJ"),
    ("006730", "Eli Lilly and Company", ["Eli Lilly"], "LLY"),
    ("002403", "Bristol-Myers Squibb Company", ["Bristol-Myers Squibb", "Bristol Myers Squibb"], "BMY"),
    ("010499", "Target Corporation", [], "TGT"),
    ("029028", "Costco Wholesale Corporation", ["Costco Wholesale", "Costco"], "COST"),
    ("006461", "Lockheed Martin Corporation", ["Lockheed Martin", "Lockheed"], "LMT"),
    ("007985", "Northrop Grumman Corporation", ["Northrop Grumman", "Northrop"], "NOC"),
    ("005046", "General Dynamics Corporation", ["General Dynamics"], "GD"),
    ("024856", "United Airlines Holdings, Inc.", ["United Airlines", "United"], "UAL"),
    ("011042", "United Parcel Service, Inc.", ["UPS", "United"], "UPS"),
    ("001045", "American Airlines Group Inc.", ["American Airlines"], "AAL"),
    ("012490", "Southwest Airlines Co.", ["Southwest Airlines", "Southwest"], "LUV"),
    ("012142", "Oracle Corporation", ["Oracle"], "ORCL"),
    ("011636", "salesforce.com, inc.", ["Salesforce", "Salesforce.com"], "CRM"),
    ("001078", "Abbott Laboratories", ["Abbott"], "ABT"),
    ("016101", "AbbVie Inc.", ["AbbVie"], "ABBV"),
    ("007435", "Adobe Inc.", ["Adobe", "Adobe Systems"], "ADBE"),
    ("001487", "American International Group, Inc.", ["AIG"], "AIG"),
    ("010991", "The Allstate Corporation", ["Allstate"], "ALL"),
    ("001602", "Amgen Inc.", ["Amgen"], "AMGN"),
    ("001632", "Analog Devices, Inc.", ["Analog Devices"], "ADI"),
    ("010103", "AT&T Inc.", ["AT&T"], "T"),
    ("002019", "The Bank of New York Mellon Corporation", ["BNY Mellon", "Bank of New York"], "BK"),
    ("002176", "Berkshire Hathaway Inc.", ["Berkshire Hathaway", "Berkshire"], "BRK.B"),
    ("002290", "Best Buy Co., Inc.", ["Best Buy"], "BBY"),
    ("012140", "BlackRock, Inc.", ["BlackRock"], "BLK"),
    ("010562", "Broadcom Inc.", ["Broadcom"], "AVGO"),
    ("002817", "Caterpillar Inc.", ["Caterpillar"], "CAT"),
    ("011976", "The Charles Schwab Corporation", ["Charles Schwab", "Schwab"], "SCHW"),
    ("002991", "Chevron Corporation", ["Chevron"], "CVX"),
    ("012096", "Comcast Corporation", ["Comcast"], "CMCSA"),
    ("003413", "ConocoPhillips", ["Conoco"], "COP"),
    ("066376", "CVS Health Corporation", ["CVS Health", "CVS"], "CVS"),
    ("003835", "Deere & Company", ["John Deere", "Deere"], "DE"),
    ("026061", "Dow Inc.", ["Dow Chemical"], "DOW"),
    ("004503", "Exxon Mobil Corporation", ["Exxon Mobil", "ExxonMobil", "Exxon"], "XOM"),
    ("004598", "FedEx Corporation", ["FedEx"], "FDX"),
    ("004839", "Ford Motor Company", ["Ford Motor", "Ford"], "F"),
    ("005047", "General Electric Company", ["General Electric", "GE"], "GE"),
    ("005071", "General Mills, Inc.", ["General Mills"], "GIS"),
    ("025056", "Gilead Sciences, Inc.", ["Gilead Sciences", "Gilead"], "GILD"),
    ("005680", "The Home Depot, Inc.", ["Home Depot"], "HD"),
    ("005581", "Honeywell International Inc.", ["Honeywell"], "HON"),
    ("005862", "Humana Inc.", ["Humana"], "HUM"),
    ("006375", "Kellogg Company", ["Kellogg"], "K"),
    ("006502", "The Kroger Co.", ["Kroger"], "KR"),
    ("114524", "Mastercard Incorporated", ["Mastercard"], "MA"),
    ("007154", "McDonald's Corporation", ["McDonald's", "McDonalds"], "MCD"),
    ("007228", "Medtronic plc", ["Medtronic"], "MDT"),
    ("007267", "MetLife, Inc.", ["MetLife"], "MET"),
    ("007608", "Micron Technology, Inc.", ["Micron Technology", "Micron"], "MU"),
    ("150577", "Mondelez International, Inc.", ["Mondelez"], "MDLZ"),
    ("147579", "Netflix, Inc.", ["Netflix"], "NFLX"),
    ("007906", "NIKE, Inc.", ["Nike"], "NKE"),
    ("007923", "Norfolk Southern Corporation", ["Norfolk Southern"], "NSC"),
    ("008214", "Occidental Petroleum Corporation", ["Occidental Petroleum", "Occidental"], "OXY"),
    ("184996", "PayPal Holdings, Inc.", ["PayPal"], "PYPL"),
    ("008762", "The Procter & Gamble Company", ["Procter & Gamble", "Procter and Gamble"], "PG"),
    ("008902", "Prudential Financial, Inc.", ["Prudential Financial", "Prudential"], "PRU"),
    ("009203", "Raytheon Technologies Corporation", ["Raytheon"], "RTX"),
    ("009465", "Schlumberger Limited", ["Schlumberger"], "SLB"),
    ("025434", "Starbucks Corporation", ["Starbucks"], "SBUX"),
    ("010553", "Texas Instruments Incorporated", ["Texas Instruments"], "TXN"),
    ("010530", "Thermo Fisher Scientific Inc.", ["Thermo Fisher"], "TMO"),
    ("010610", "The Travelers Companies, Inc.", ["Travelers"], "TRV"),
    ("010867", "Union Pacific Corporation", ["Union Pacific"], "UNP"),
    ("010903", "UnitedHealth Group Incorporated", ["UnitedHealth Group", "UnitedHealth"], "UNH"),
    ("011300", "U.S. Bancorp", ["US Bancorp"], "USB"),
    ("011379", "Verizon Communications Inc.", ["Verizon"], "VZ"),
    ("165675", "Visa Inc.", ["Visa"], "V"),
    ("011556", "Walgreens Boots Alliance, Inc.", ["Walgreens"], "WBA"),
    ("004029", "The Walt Disney Company", ["Walt Disney", "Disney"], "DIS"),
]


def normalize_name_spec(name: str) -> str:
    """Reference normalization used only to audit the kb for collisions."""
    suffixes = {"inc", "corp", "corporation", "co", "company", "ltd", "llc",
                "lp", "plc", "ag", "nv", "sa", "group", "holdings"}
    s = name.lower()
    s = re.sub(r"\.\s*", "", s)
    s = re.sub(r"[,&'’/\-]", "", s)
    tokens = s.split()
    while len(tokens) > 1 and tokens[-1] in suffixes:
        tokens.pop()
    if len(tokens) > 1 and tokens[0] == "the":
        tokens.pop(0)
    return " ".join(tokens)


def build_kb() -> list[dict]:
    entries = []
    seen_ids = set()
    for company_id, canonical, aliases, ticker in KB_ROWS:
        assert re.fullmatch(r"\d{6}", company_id), company_id
        assert company_id not in seen_ids, f"duplicate id {company_id}"
        seen_ids.add(company_id)
        entries.append({"company_id": company_id, "canonical_name": canonical,
                        "aliases": aliases, "ticker": ticker})
    assert len(entries) == 100, f"kb has {len(entries)} entries, want 100"

    index: dict[str, set[str]] = {}
    for entry in entries:
        for alias in [entry["canonical_name"], *entry["aliases"]]:
            index.setdefault(normalize_name_spec(alias), set()).add(entry["company_id"])
    shared = {norm for norm, ids in index.items() if len(ids) > 1}
    assert shared == {"united"}, f"unexpected shared aliases: {shared}"
    return entries


# --------------------------------------------------------------------------
# filler text
# --------------------------------------------------------------------------

SUBJECTS = [
    "The segment", "Management", "The business", "Each operating unit",
    "The supply organization", "Our logistics network", "The services arm",
    "Regional leadership", "The engineering function", "The finance organization",
]
VERBS = [
    "continues to invest in", "expanded", "streamlined", "consolidated",
    "evaluates", "monitors", "modernized", "reorganized", "maintains",
    "strengthened",
]
OBJECTS = [
    "fulfillment capacity", "supplier qualification programs", "inventory controls",
    "regional distribution hubs", "working capital discipline", "field operations",
    "manufacturing throughput", "sourcing arrangements", "quality assurance reviews",
    "facility utilization", "capital allocation priorities", "customer support coverage",
]
TAILS = [
    "across principal geographies", "during the fiscal year", "under long-term agreements",
    "in response to demand shifts", "through staged rollouts", "with measured pacing",
    "subject to regulatory review", "despite logistics constraints",
    "alongside routine maintenance", "under established governance",
]
DECOYS = [
    "Evergreen Logistics Holdings LLC", "Crescent Materials Corp.",
    "Bluewater Freight Group", "Summit Industrial Technologies",
    "Harborline Distribution Co.", "Redwood Analytics Inc.",
]


def sentence(rng: random.Random) -> str:
    s = (f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {rng.choice(OBJECTS)} "
         f"{rng.choice(TAILS)}.")
    return s


def paragraph(rng: random.Random, n_sentences: int, decoy_ok: bool = False) -> str:
    parts = [sentence(rng) for _ in range(n_sentences)]
    if decoy_ok and rng.random() < 0.25:
        parts.insert(rng.randrange(len(parts)),
                     f"Arrangements with {rng.choice(DECOYS)} remained immaterial "
                     f"to consolidated results.")
    return " ".join(parts)


# --------------------------------------------------------------------------
# block model and forward rendering
# --------------------------------------------------------------------------

class DocBuilder:
    """Accumulates HTML chunks and the expected linearized lines in lockstep."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.html: list[str] = []
        self.lines: list[str] = []
        self.offset = 0

    def add_line(self, text: str) -> tuple[int, int]:
        start = self.offset
        self.lines.append(text)
        self.offset += len(text) + 1  # trailing newline
        return start, start + len(text)

    def full_text(self) -> str:
        return "".join(line + "\n" for line in self.lines)

    # - block emitters; each returns the (start, end) of its first line -

    def raw_html(self, chunk: str):
        self.html.append(chunk)

    def para(self, text: str, nbsp_ok: bool = True) -> tuple[int, int]:
        escaped = html_lib.escape(text)
        if nbsp_ok and self.rng.random() < 0.2:
            escaped = escaped.replace(" ", "&nbsp;", 1)
        wrapped = "\n".join(textwrap.wrap(escaped, width=96, break_on_hyphens=False,
                                          break_long_words=False)) or escaped
        self.html.append(f"<p>\n{wrapped}\n</p>")
        return self.add_line(text)

    def heading(self, text: str, style: str) -> tuple[int, int]:
        escaped = html_lib.escape(text)
        if style == "bold_div":
            self.html.append(f"<div><b>{escaped}</b></div>")
        elif style == "scaled_div":
            self.html.append(f'<div style="font-size:24px">{escaped}</div>')
        elif style == "h2":
            self.html.append(f"<h2>{escaped}</h2>")
        elif style == "h3":
            self.html.append(f"<h3>{escaped}</h3>")
        elif style == "bold_p":
            self.html.append(f'<p style="font-weight:bold">{escaped}</p>')
        elif style == "strong_div":
            self.html.append(f"<div><strong>{escaped}</strong></div>")
        elif style == "plain_div":
            self.html.append(f"<div>{escaped}</div>")
        else:
            raise ValueError(style)
        return self.add_line(text)

    def bullets(self, items: list[str]) -> list[tuple[int, int]]:
        rows = "\n".join(f"<tr><td>{html_lib.escape(t)}</td></tr>" for t in items)
        self.html.append(f"<table>\n{rows}\n</table>")
        return [self.add_line(t) for t in items]

    def table(self, rows: list[list[str]]) -> list[tuple[int, int]]:
        html_rows = []
        spans = []
        for row in rows:
            cells = "".join(f"<td>{html_lib.escape(c)}</td>" for c in row)
            html_rows.append(f"<tr>{cells}</tr>")
            for cell in row:
                spans.append(self.add_line(cell))
        self.html.append("<table>\n" + "\n".join(html_rows) + "\n</table>")
        return spans

    def toc(self, entries: list[str], tabular: bool):
        if tabular:
            html_rows = []
            for i, entry in enumerate(entries):
                html_rows.append(f"<tr><td>{html_lib.escape(entry)}</td>"
                                 f"<td>{3 + 2 * i}</td></tr>")
                self.add_line(entry)
                self.add_line(str(3 + 2 * i))
            self.html.append("<table>\n" + "\n".join(html_rows) + "\n</table>")
        else:
            for entry in entries:
                self.html.append(f"<div>{html_lib.escape(entry)}</div>")
                self.add_line(entry)

    def document(self, title: str) -> str:
        body = "\n".join(self.html)
        return (f"<html>\n<head><title>{html_lib.escape(title)}</title>\n"
                f"<style>p {{ margin: 6px 0; }}</style></head>\n"
                f"<body>\n{body}\n</body>\n</html>\n")


# --------------------------------------------------------------------------
# filing definitions
# --------------------------------------------------------------------------

ITEM_TITLES = [
    ("1", "Business"),
    ("1A", "Risk Factors"),
    ("2", "Properties"),
    ("3", "Legal Proceedings"),
    ("7", "Management's Discussion and Analysis of Financial Condition and Results of Operations"),
    ("7A", "Quantitative and Qualitative Disclosures About Market Risk"),
    ("8", "Financial Statements and Supplementary Data"),
    ("9A", "Controls and Procedures"),
    ("10", "Directors, Executive Officers and Corporate Governance"),
    ("15", "Exhibits, Financial Statement Schedules"),
]
FILLER_PARAS = {"1A": 30, "2": 4, "3": 3, "7": 20, "7A": 4, "8": 10, "9A": 3, "10": 3, "15": 2}


def competition_blocks(spec: dict, builder: DocBuilder, style: str) -> list[dict]:
    """Emit the competition subsections and return their labels."""
    labels = []
    for sub in spec["subsections"]:
        builder.heading(sub["heading"], style)
        body_lines: list[str] = []
        first_span = None
        last_span = None
        for block in sub["body"]:
            kind = block[0]
            if kind == "para":
                span = builder.para(block[1], nbsp_ok=False)
                body_lines.append(block[1])
            elif kind == "bullets":
                spans = builder.bullets(block[1])
                body_lines.extend(block[1])
                span = spans[0]
                last_span = spans[-1]
            elif kind == "table":
                spans = builder.table(block[1])
                span = spans[0]
                last_span = spans[-1]
            else:
                raise ValueError(kind)
            if first_span is None:
                first_span = span
            if kind == "para":
                last_span = span
        assert first_span is not None and last_span is not None
        table_names = []
        for block in sub["body"]:
            if block[0] == "table":
                for row in block[1]:
                    cell = row[0]
                    if cell[0].isupper():
                        table_names.append(cell)
        body_text = "\n".join(body_lines)
        gold = []
        for surface in sub["gold_text"]:
            start = body_text.index(surface)
            assert body_text.find(surface, start + 1) == -1, f"{surface!r} not unique"
            gold.append({"surface": surface, "start": start,
                         "end": start + len(surface), "origin": "text"})
        for surface in table_names:
            gold.append({"surface": surface, "start": 0, "end": 0, "origin": "table"})
        labels.append({
            "char_start": first_span[0],
            "char_end": last_span[1],
            "trigger_keyword": sub["trigger"],
            "heading_text": sub["heading"],
            "body_text": body_text,
            "table_names": table_names,
            "gold_mentions": gold,
        })
    return labels


def build_filing(spec: dict) -> tuple[str, dict]:
    rng = random.Random(spec["seed"])
    builder = DocBuilder(rng)
    item_style = spec["item_style"]
    sub_style = spec["sub_style"]

    builder.add_line(spec["registrant"].upper())
    builder.raw_html(f"<div><b>{html_lib.escape(spec['registrant'].upper())}</b></div>")
    builder.add_line("ANNUAL REPORT ON FORM 10-K")
    builder.raw_html("<div><b>ANNUAL REPORT ON FORM 10-K</b></div>")
    builder.add_line(f"For the fiscal year ended {spec['period_end']}")
    builder.raw_html(f"<div>For the fiscal year ended {spec['period_end']}</div>")

    builder.heading("TABLE OF CONTENTS", "plain_div")
    builder.toc([f"Item {num}. {title}" for num, title in ITEM_TITLES],
                tabular=spec["toc_tabular"])
    builder.heading("PART I", "plain_div")

    item_spans = {}
    sub_labels: list[dict] = []
    business_end = None
    for num, title in ITEM_TITLES:
        heading_text = f"Item {num}. {title}"
        if spec.get("uppercase_items"):
            heading_text = heading_text.upper()
        span = builder.heading(heading_text, item_style)
        if num == "1A":
            business_end = span[0]
        item_spans[num] = span
        if num == "1":
            for sub_heading, paras in spec["intro"]:
                builder.heading(sub_heading, sub_style)
                for text in paras:
                    builder.para(text, nbsp_ok=False)
            sub_labels = competition_blocks(spec, builder, sub_style)
            for sub_heading, paras in spec.get("outro", []):
                builder.heading(sub_heading, sub_style)
                for text in paras:
                    builder.para(text, nbsp_ok=False)
        else:
            n = FILLER_PARAS[num]
            for i in range(n):
                builder.para(paragraph(rng, rng.randint(3, 5), decoy_ok=num in ("1A", "7")))
            if num == "8":
                builder.para("Selected balances for the periods presented were as follows.")
                builder.table([["(in millions)", "2020", "2019"],
                               ["Net revenue", f"{rng.randint(40, 90) * 1000:,}",
                                f"{rng.randint(35, 85) * 1000:,}"],
                               ["Operating income", f"{rng.randint(5, 25) * 1000:,}",
                                f"{rng.randint(4, 20) * 1000:,}"]])

    full_text = builder.full_text()
    for keyword in KEYWORD_STRINGS:
        business = full_text[item_spans["1"][0]:business_end].lower()
        allowed = spec.get("keyword_sentences_ok", False)
        in_subs = any(keyword in (label["heading_text"] + label["body_text"]).lower()
                      for label in sub_labels)
        if keyword in business and not (allowed or in_subs):
            raise AssertionError(f"{spec['slug']}: stray {keyword!r} in business filler")

    sub_chars = sum(l["char_end"] - l["char_start"] for l in sub_labels)
    ratio = sub_chars / len(full_text)
    assert ratio <= 0.06, f"{spec['slug']}: subsection ratio {ratio:.3f} too high"

    label = {
        "file": f"{spec['slug']}-2020.html",
        "cik": spec["cik"],
        "accession_number": spec["accession"],
        "form_type": spec["form"],
        "filing_date": spec["filed"],
        "registrant_name": spec["registrant"],
        "fiscal_year": 2020,
        "filer_id": spec["filer_id"],
        "n_chars": len(full_text),
        "business_start": item_spans["1"][0],
        "business_end": business_end,
        "subsections": sub_labels,
        "edges": spec["edges"],
    }
    return builder.document(f"{spec['registrant']} 10-K"), label


def filing_specs() -> list[dict]:
    return [
        {
            "slug": "msft", "seed": 11, "registrant": "Microsoft Corporation",
            "cik": "0000789019", "accession": "0001564590-20-034944", "form": "10-K",
            "filed": "2020-07-31", "period_end": "June 30, 2020", "filer_id": "012141",
            "item_style": "bold_div", "sub_style": "bold_div", "toc_tabular": True,
            "intro": [
                ("General", [
                    "We develop and support software, services, devices, and solutions that deliver "
                    "new value for customers and help people and organizations realize their full potential.",
                    "Our products include operating systems, productivity applications, server "
                    "platforms, and business solution suites delivered across cloud and on-premises environments.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "Our cloud and productivity offerings face intense rivalry across every "
                             "market we serve. We compete with Cisco Systems in unified communications "
                             "and networking infrastructure, where installed bases and channel reach "
                             "shape buying decisions."),
                    ("para", "International Business Machines Corporation remains a significant rival "
                             "in enterprise services and hybrid deployments. In processors and devices, "
                             "Intel Corporation competes with our hardware partners on performance, "
                             "power efficiency, and platform breadth."),
                ],
                "gold_text": ["Cisco Systems", "International Business Machines Corporation",
                              "Intel Corporation"],
            }],
            "outro": [("Human Capital", [
                "As of June 30, 2020, we employed approximately 163,000 people on a full-time "
                "basis across engineering, sales, and operations roles worldwide.",
            ])],
            "edges": ["020779", "006066", "001686"],
        },
        {
            "slug": "aapl", "seed": 23, "registrant": "Apple Inc.",
            "cik": "0000320193", "accession": "0000320193-20-000096", "form": "10-K",
            "filed": "2020-10-30", "period_end": "September 26, 2020", "filer_id": "001690",
            "item_style": "scaled_div", "sub_style": "scaled_div", "toc_tabular": True,
            "intro": [
                ("Company Background", [
                    "The Company designs, manufactures and markets smartphones, personal computers, "
                    "tablets, wearables and accessories, and sells a variety of related services.",
                ]),
                ("Products", [
                    "The Company's product lines span handheld devices, desktop and portable "
                    "computers, audio accessories, and a growing portfolio of subscription services.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "The markets for the Company's products and services are highly contested "
                             "and are characterized by aggressive price competition, rapid product "
                             "cycles, and frequent introductions. Samsung Electronics Co., Ltd. "
                             "presses across each principal hardware line."),
                    ("para", "In platforms and services the Company contends with Microsoft "
                             "Corporation, while Alphabet Inc. and Amazon.com, Inc. push into digital "
                             "content distribution, search placement, and connected-home experiences."),
                ],
                "gold_text": ["Samsung Electronics Co., Ltd", "Microsoft Corporation",
                              "Alphabet Inc.", "Amazon.com, Inc."],
            }],
            "outro": [("Human Capital", [
                "The Company believes it offers competitive compensation and benefits, and invests "
                "in growth and development opportunities for more than 140,000 employees.",
            ])],
            "edges": ["012141", "010846", "064768"],
            "keyword_sentences_ok": True,  # "price competition" sits inside the subsection body
        },
        {
            "slug": "jpm", "seed": 37, "registrant": "JPMorgan Chase & Co.",
            "cik": "0000019617", "accession": "0000019617-21-000236", "form": "10-K",
            "filed": "2021-02-23", "period_end": "December 31, 2020", "filer_id": "002968",
            "item_style": "h2", "sub_style": "h3", "toc_tabular": True,
            "intro": [
                ("Overview", [
                    "The firm is a leading financial services company with operations in consumer "
                    "banking, commercial banking, asset management, and corporate and investment banking.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "Our lines of business operate in highly contested segments of the "
                             "financial services industry, where pricing, scale, and technology "
                             "investment drive outcomes. We contend with Bank of America in consumer "
                             "and commercial banking and with Citigroup in global treasury services."),
                    ("para", "In investment banking and markets, The Goldman Sachs Group, Inc. and "
                             "Morgan Stanley are principal rivals for advisory mandates and "
                             "underwriting volumes."),
                ],
                "gold_text": ["Bank of America", "Citigroup",
                              "The Goldman Sachs Group, Inc.", "Morgan Stanley"],
            }],
            "outro": [("Supervision and Regulation", [
                "The firm is subject to comprehensive consolidated supervision and to resolution "
                "planning requirements in each principal jurisdiction where it operates.",
            ])],
            "edges": ["007647", "003243", "114628", "012124"],
        },
        {
            "slug": "ko", "seed": 41, "registrant": "The Coca-Cola Company",
            "cik": "0000021344", "accession": "0000021344-21-000008", "form": "10-K",
            "filed": "2021-02-25", "period_end": "December 31, 2020", "filer_id": "003144",
            "item_style": "bold_p", "sub_style": "bold_p", "toc_tabular": True,
            "intro": [
                ("General", [
                    "We are a total beverage company, and our purpose is to refresh the world. We "
                    "own or license and market more than 500 nonalcoholic beverage brands.",
                ]),
            ],
            "subsections": [{
                "heading": "Competitive Conditions", "trigger": "competitive conditions",
                "body": [
                    ("para", "The nonalcoholic beverage segment of the commercial beverage industry "
                             "is highly contested. PepsiCo, Inc. is a principal rival in sparkling "
                             "soft drinks, sports drinks, and packaged water across substantially all "
                             "of our territories."),
                    ("para", "Keurig Dr Pepper contends with us in flavored sparkling beverages and "
                             "ready-to-drink coffee, while Monster Beverage Corporation presses in "
                             "the energy category."),
                ],
                "gold_text": ["PepsiCo, Inc.", "Keurig Dr Pepper",
                              "Monster Beverage Corporation"],
            }],
            "outro": [("Raw Materials", [
                "The principal raw materials used in our business are nutritive and non-nutritive "
                "sweeteners, concentrates, and packaging materials sourced under long-term supply arrangements.",
            ])],
            "edges": ["008530", "157855", "024390"],
        },
        {
            "slug": "intc", "seed": 53, "registrant": "Intel Corporation",
            "cik": "0000050863", "accession": "0000050863-21-000010", "form": "10-K",
            "filed": "2021-01-22", "period_end": "December 26, 2020", "filer_id": "001686",
            "item_style": "strong_div", "sub_style": "strong_div", "toc_tabular": True,
            "intro": [
                ("Introduction", [
                    "We design and manufacture semiconductor products that power client devices, "
                    "data centers, and the intelligent edge, supported by a global manufacturing network.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "We face vigorous product and platform rivalry across client computing, "
                             "data center, and accelerated workloads, as summarized below."),
                    ("table", [
                        ["Advanced Micro Devices", "client and server processors", "broad x86 overlap"],
                        ["NVIDIA", "accelerated computing and graphics", "expanding data center presence"],
                        ["Qualcomm", "connectivity and mobile compute", "growing notebook ambitions"],
                    ]),
                    ("para", "Pricing actions, process technology leadership, and software ecosystems "
                             "determine design wins in each of these arenas."),
                ],
                "gold_text": [],
            }],
            "outro": [("Corporate Responsibility", [
                "Our corporate responsibility strategy focuses on responsible operations, supply "
                "chain accountability, and measurable community commitments over multi-year horizons.",
            ])],
            "edges": ["001161", "061621", "024800"],
        },
        {
            "slug": "csco", "seed": 61, "registrant": "Cisco Systems, Inc.",
            "cik": "0000858877", "accession": "0000858877-20-000013", "form": "10-K",
            "filed": "2020-09-03", "period_end": "July 25, 2020", "filer_id": "020779",
            "item_style": "bold_div", "sub_style": "bold_div", "toc_tabular": False,
            "intro": [
                ("Overview", [
                    "We design and sell a broad range of technologies that power the Internet, "
                    "spanning networking, security, collaboration, and observability platforms.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "We operate in markets characterized by rapid technological change and "
                             "industry consolidation. Principal rivals by product area include the following:"),
                    ("bullets", [
                        "Juniper Networks in routing, switching, and network security platforms",
                        "Arista Networks in high-performance data center and campus switching",
                        "Hewlett Packard Enterprise in enterprise networking and edge computing",
                    ]),
                    ("para", "Consolidation among suppliers and the migration of workloads toward "
                             "public cloud operators continue to reshape each of these categories."),
                ],
                "gold_text": ["Juniper Networks", "Arista Networks",
                              "Hewlett Packard Enterprise"],
            }],
            "outro": [("Acquisitions", [
                "We completed several acquisitions during fiscal 2020 to extend our software and "
                "subscription portfolio, none of which was individually material to revenue.",
            ])],
            "edges": ["062599", "143356", "166459"],
        },
        {
            "slug": "dal", "seed": 71, "registrant": "Delta Air Lines, Inc.",
            "cik": "0000027904", "accession": "0000027904-21-000002", "form": "10-K",
            "filed": "2021-02-12", "period_end": "December 31, 2020", "filer_id": "014489",
            "item_style": "bold_div", "sub_style": "bold_div", "toc_tabular": False,
            "intro": [
                ("General", [
                    "We provide scheduled air transportation for passengers and cargo throughout "
                    "a network centered on a system of domestic and coastal hub airports.",
                    "Our network faces significant competition from domestic and international "
                    "carriers on substantially all of the routes we serve, and fare discounting "
                    "remains a persistent structural condition.",
                    "Low-cost carriers continue to add capacity each season, and alliances among "
                    "foreign airlines intensify competition for long-haul connecting traffic.",
                ]),
                ("Fleet", [
                    "Our mainline fleet consists of narrowbody and widebody aircraft managed for "
                    "fuel efficiency, gauge flexibility, and staged retirement schedules.",
                ]),
            ],
            "subsections": [],
            "outro": [("Employees", [
                "As of December 31, 2020, we employed approximately 74,000 full-time equivalent "
                "employees across flight operations, airport customer service, and technical operations.",
            ])],
            "edges": [],
            "keyword_sentences_ok": True,  # sentence-context mentions only, by design
        },
        {
            "slug": "pfe", "seed": 83, "registrant": "Pfizer Inc.",
            "cik": "0000078003", "accession": "0000078003-21-000038", "form": "10-K",
            "filed": "2021-02-25", "period_end": "December 31, 2020", "filer_id": "008007",
            "item_style": "bold_div", "sub_style": "bold_div", "toc_tabular": False,
            "intro": [
                ("About Pfizer", [
                    "We are a research-based global biopharmaceutical company. We apply science and "
                    "our global resources to bring therapies to people that extend and improve their lives.",
                ]),
            ],
            "subsections": [
                {
                    "heading": "Competition", "trigger": "competition",
                    "body": [
                        ("para", "Our innovative medicines contend with products marketed by "
                                 "Merck & Co., Inc. and Johnson & Johnson, as well as with biosimilar "
                                 "entrants across several therapeutic categories where patents have expired."),
                    ],
                    "gold_text": ["Merck & Co., Inc.", "Johnson & Johnson"],
                },
                {
                    "heading": "Competitive Environment", "trigger": "competitive environment",
                    "body": [
                        ("para", "Within established products, Eli Lilly and Company has broadened "
                                 "its portfolio through launches and label expansions, and "
                                 "Bristol-Myers Squibb presses across oncology and immunology "
                                 "indications that overlap with ours."),
                    ],
                    "gold_text": ["Eli Lilly and Company", "Bristol-Myers Squibb"],
                },
            ],
            "outro": [("International Operations", [
                "We operate in developed and emerging markets worldwide, and local access and "
                "reimbursement frameworks materially shape the revenue profile of each launch.",
            ])],
            "edges": ["007257", "006266", "006730", "002403"],
        },
        {
            "slug": "wmt", "seed": 97, "registrant": "Walmart Inc.",
            "cik": "0000104169", "accession": "0000104169-21-000033", "form": "10-K/A",
            "filed": "2021-03-19", "period_end": "January 31, 2021", "filer_id": "011259",
            "item_style": "bold_div", "sub_style": "bold_div", "toc_tabular": False,
            "uppercase_items": True,
            "intro": [
                ("GENERAL", [
                    "Walmart Inc. helps people around the world save money and live better by "
                    "providing everyday low prices in retail units and through eCommerce properties.",
                ]),
            ],
            "subsections": [{
                "heading": "COMPETITION", "trigger": "competition",
                "body": [
                    ("para", "The retail landscape is intensely contested across price, assortment, "
                             "convenience, and fulfillment speed. Target Corporation contends with "
                             "our stores and digital properties in general merchandise and grocery."),
                    ("para", "Amazon.com, Inc. presses into everyday categories and same-day "
                             "delivery, while warehouse operators such as Costco Wholesale "
                             "Corporation contend on bulk value."),
                ],
                "gold_text": ["Target Corporation", "Amazon.com, Inc.",
                              "Costco Wholesale Corporation"],
            }],
            "outro": [],  # subsection runs to the end of Item 1
            "edges": ["010499", "064768", "029028"],
        },
        {
            "slug": "ba", "seed": 101, "registrant": "The Boeing Company",
            "cik": "0000012927", "accession": "0000012927-21-000010", "form": "10-K",
            "filed": "2021-02-01", "period_end": "December 31, 2020", "filer_id": "002285",
            "item_style": "plain_div", "sub_style": "plain_div", "toc_tabular": False,
            "intro": [
                ("Overview", [
                    "We are one of the world's major aerospace firms, organized around commercial "
                    "airplanes, defense and space programs, and global services offerings.",
                ]),
            ],
            "subsections": [{
                "heading": "Competition", "trigger": "competition",
                "body": [
                    ("para", "Our commercial airplane programs contend with Airbus Group on "
                             "substantially every sales campaign, with rivalry focused on pricing, "
                             "delivery positions, and lifecycle economics."),
                    ("para", "In defense and space markets we contend with Lockheed Martin "
                             "Corporation, Northrop Grumman Corporation, and General Dynamics "
                             "Corporation for domestic and international awards."),
                ],
                "gold_text": ["Airbus Group", "Lockheed Martin Corporation",
                              "Northrop Grumman Corporation", "General Dynamics Corporation"],
            }],
            "outro": [("Human Capital Resources", [
                "Attracting and retaining engineering and production talent remains central to "
                "program execution, supported by apprenticeships and rotational programs.",
            ])],
            "edges": ["006461", "007985", "005046"],
        },
    ]


# --------------------------------------------------------------------------
# main
# --------------------------------------------------------------------------

def main():
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    DATA_DIR.mkdir(parents=True, exist_ok=True)

    kb = build_kb()
    (DATA_DIR / "kb_sp100.json").write_text(json.dumps(kb, indent=1), "utf-8")

    index = []
    labels = []
    truth_edges = []
    for spec in filing_specs():
        html_text, label = build_filing(spec)
        (FIXTURE_DIR / label["file"]).write_text(html_text, "utf-8")
        index.append({k: label[k] for k in
                      ("cik", "accession_number", "form_type", "filing_date",
                       "registrant_name", "fiscal_year", "file")})
        labels.append(label)
        for target in label["edges"]:
            truth_edges.append({"source": label["filer_id"], "target": target, "year": 2020})

    (FIXTURE_DIR / "index.json").write_text(json.dumps(index, indent=1), "utf-8")
    (FIXTURE_DIR / "labels.json").write_text(
        json.dumps({"shared_aliases": ["united"], "filings": labels}, indent=1), "utf-8")
    (FIXTURE_DIR / "truth.json").write_text(
        json.dumps({"mode": "directed", "edges": truth_edges}, indent=1), "utf-8")

    demo_conf = """\
# Demo pipeline over the bundled fixture corpus (paths relative to this file).
input_mode = local_dir
local_dir = src/compgraph/data/fixtures
cache_dir = .compgraph-cache
kb_path = src/compgraph/data/kb_sp100.json
output_path = fixture-graph.json
corpus_tag = sp-fixture-2020
recognizers = gazetteer, heuristic
fuzzy_threshold = 0.85
"""
    (ROOT / "demo.conf").write_text(demo_conf, "utf-8")

    total = sum(la["n_chars"] for la in labels)
    subs = sum(s["char_end"] - s["char_start"] for la in labels for s in la["subsections"])
    print(f"wrote {len(labels)} filings ({total:,} chars, subsections {subs / total:.2%}), "
          f"{len(kb)} kb entries, {len(truth_edges)} truth edges")


if __name__ == "__main__":
    main()
