"""Country gazetteer and target-country detection.

Detection scans lowercased whitespace tokens with longest-phrase matching.
Tokens keep internal hyphens ("California-based" does not match the state),
while edge punctuation is stripped, so "Singapore," and "U.S." match.  EU
member mentions are ignored: only non-EU destinations are disclosures.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources

from .errors import ParseError

# EU-27 plus the UK (Brexit transition) plus the EEA trio, as of 2020-07.
EU_MEMBERS_2020 = frozenset(
    """AT BE BG HR CY CZ DK EE FI FR DE GR HU IE IT LV LT LU MT NL PL PT RO
    SK SI ES SE GB NO IS LI""".split()
)

FORM_TYPES = ("name", "abbr", "state", "city", "alias")

_EDGE_STRIP = re.compile(r"^[^0-9a-z]+|[^0-9a-z]+$")


def normalize_token(token: str) -> str:
    """Lowercase and strip edge punctuation; internal dots/hyphens stay."""
    return _EDGE_STRIP.sub("", token.lower())


def whitespace_tokens(text: str) -> list[str]:
    return text.split()


@dataclass
class CountryDictionary:
    """Surface-form phrases (normalized token tuples) mapped to ISO codes."""

    phrases: dict[tuple[str, ...], str] = field(default_factory=dict)
    form_types: dict[tuple[str, ...], str] = field(default_factory=dict)
    max_phrase_len: int = 1

    def add(self, code: str, form_type: str, surface: str) -> None:
        key = tuple(normalize_token(t) for t in surface.split())
        key = tuple(t for t in key if t)
        if not key:
            raise ValueError(f"surface form {surface!r} normalizes to nothing")
        existing = self.phrases.get(key)
        if existing is not None and existing != code:
            raise ValueError(f"surface form {surface!r} maps to both {existing} and {code}")
        self.phrases[key] = code
        self.form_types[key] = form_type
        self.max_phrase_len = max(self.max_phrase_len, len(key))

    def codes(self) -> frozenset[str]:
        return frozenset(self.phrases.values())


def load_country_dictionary(path=None) -> CountryDictionary:
    """Load `code TAB form_type TAB surface` lines; default: shipped gazetteer."""
    if path is None:
        text = resources.files("transferaudit.data").joinpath(
            "country_dictionary.tsv").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    dictionary = CountryDictionary()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip("\n")
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ParseError("expected `code TAB form_type TAB surface`", lineno)
        code, form_type, surface = parts
        if not re.fullmatch(r"[A-Z]{2}", code):
            raise ParseError(f"bad ISO-3166 alpha-2 code {code!r}", lineno)
        if form_type not in FORM_TYPES:
            raise ParseError(f"bad form type {form_type!r}", lineno)
        try:
            dictionary.add(code, form_type, surface)
        except ValueError as exc:
            raise ParseError(str(exc), lineno) from exc
    return dictionary


def detect_target_countries(segment_tokens_raw: list[str],
                            dictionary: CountryDictionary,
                            eu_codes: frozenset[str] = EU_MEMBERS_2020) -> set[str]:
    """Non-EU country codes named in a segment, by longest-phrase scan."""
    tokens = [t for t in (normalize_token(t) for t in segment_tokens_raw) if t]
    found: set[str] = set()
    i = 0
    n = len(tokens)
    while i < n:
        matched_len = 0
        for length in range(min(dictionary.max_phrase_len, n - i), 0, -1):
            code = dictionary.phrases.get(tuple(tokens[i:i + length]))
            if code is not None:
                found.add(code)
                matched_len = length
                break
        i += matched_len or 1
    return {c for c in found if c not in eu_codes}
