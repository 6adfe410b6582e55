"""The bundled curve catalog: JSON lines with label, a, b, conductor and
optional a_p overrides for primes dividing disc but not the conductor."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .curve import ApTable, CurveQ, hasse_ok
from .errors import InputError

REQUIRED = ("label", "a", "b", "conductor")


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    a: int
    b: int
    conductor: int
    ap_overrides: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        curve = self.curve  # validates disc and conductor
        for p, ap in self.ap_overrides.items():
            if curve.disc % p:
                raise InputError(f"{self.label}: override prime {p} does not divide disc")
            if self.conductor % p == 0:
                raise InputError(f"{self.label}: override prime {p} divides the conductor")
            if not hasse_ok(p, ap):
                raise InputError(f"{self.label}: override a_{p}={ap} violates the Hasse bound")

    @property
    def curve(self) -> CurveQ:
        return CurveQ(self.a, self.b, self.conductor, self.label)

    def table(self, max_prime: int) -> ApTable:
        return ApTable.build(self.curve, max_prime, self.ap_overrides)


def parse_entry(line: str) -> CatalogEntry:
    try:
        raw = json.loads(line)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad catalog line: {exc}") from None
    missing = [k for k in REQUIRED if k not in raw]
    if missing:
        raise InputError(f"catalog entry lacks {missing}")
    try:
        overrides = {int(p): int(v) for p, v in (raw.get("ap_overrides") or {}).items()}
        return CatalogEntry(str(raw["label"]), int(raw["a"]), int(raw["b"]), int(raw["conductor"]), overrides)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad catalog entry {raw.get('label')}: {exc}") from None


def load_catalog(path: str | Path | None = None) -> dict[str, CatalogEntry]:
    if path is None:
        text = resources.files("rankwitness").joinpath("data/curves.jsonl").read_text()
    else:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(f"cannot read catalog {path}: {exc}") from None
    out: dict[str, CatalogEntry] = {}
    for line in text.splitlines():
        if line.strip():
            e = parse_entry(line)
            if e.label in out:
                raise InputError(f"duplicate label {e.label}")
            out[e.label] = e
    return out


def lookup(label: str, path: str | Path | None = None) -> CatalogEntry:
    cat = load_catalog(path)
    if label not in cat:
        raise InputError(f"unknown curve {label!r}; known: {', '.join(sorted(cat))}")
    return cat[label]
