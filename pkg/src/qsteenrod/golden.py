"""Golden regression fixtures for the engine's pairing values.

Files live under ``<root>/v1/p{p}_q{q_max}_h{h_max}.json``. They are only
written when regeneration is asked for explicitly.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Optional

from .connection import steenrod_pairings
from .localization import INSERTION_PAIRS, InsertionClass
from .poly_series import GF, GradedSeries, Window

FORMAT_VERSION = "v1"
DEFAULT_ROOT = Path(__file__).resolve().parents[2] / "tests" / "fixtures" / "golden"
DEFAULT_KEYS = ((3, 9, 4), (5, 10, 4), (7, 7, 2))


def golden_path(root, p: int, q_max: int, h_max: int) -> Path:
    return Path(root) / FORMAT_VERSION / f"p{p}_q{q_max}_h{h_max}.json"


def pair_key(b0, binf) -> str:
    return f"{b0},{binf}"


def golden_payload(p: int, q_max: int, h_max: int) -> dict:
    pairs = steenrod_pairings(p, q_max, h_max)
    return {
        "format": FORMAT_VERSION,
        "p": p,
        "q_max": q_max,
        "h_max": h_max,
        "pairings": {pair_key(*k): pairs[k].to_records() for k in INSERTION_PAIRS},
    }


def dumps(payload: dict) -> str:
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"


def write_golden(root, p: int, q_max: int, h_max: int) -> Path:
    path = golden_path(root, p, q_max, h_max)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(golden_payload(p, q_max, h_max)))
    return path


def load_golden(root, p: int, q_max: int, h_max: int) -> Dict[str, GradedSeries]:
    data = json.loads(golden_path(root, p, q_max, h_max).read_text())
    if data.get("format") != FORMAT_VERSION or (data["p"], data["q_max"], data["h_max"]) != (p, q_max, h_max):
        raise ValueError("golden file header does not match its key")
    R, w = GF(p), Window(q_max=q_max, h_max=h_max)
    return {k: GradedSeries.from_records(R, v, w) for k, v in data["pairings"].items()}


def compare_golden(root, p: int, q_max: int, h_max: int) -> Optional[list]:
    """None when the engine reproduces the stored file, else the differing pair keys."""
    stored = load_golden(root, p, q_max, h_max)
    fresh = steenrod_pairings(p, q_max, h_max)
    bad = []
    for b0, binf in INSERTION_PAIRS:
        key = pair_key(b0, binf)
        if key not in stored or stored[key] != fresh[(b0, binf)]:
            bad.append(key)
    return bad or None


def parse_pair_key(key: str):
    a, b = key.split(",")
    return InsertionClass.parse(a), InsertionClass.parse(b)
