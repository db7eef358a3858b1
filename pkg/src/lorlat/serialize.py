"""Exact-rational serialization and deterministic report output.

JSON carries rationals as lossless "num/den" strings; CSV carries decimals
for plotting. All emitted documents are versioned and dumped with sorted
keys so identical configurations produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .errors import MalformedDocument

FORMAT_VERSION = 1


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise MalformedDocument(f"expected rational string, got {type(s).__name__}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise MalformedDocument(f"bad rational {s!r}: {exc}") from None


def dump_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_json(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise MalformedDocument("top-level JSON value must be an object")
    return doc


def csv_decimal(x: Fraction) -> str:
    return repr(float(x))
