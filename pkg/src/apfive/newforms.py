"""Data model, canonical file schema, and validation for weight-2 newform
Galois conjugacy classes at the four sieve levels.

One JSON file per level:

    {
      "level": int,
      "weight": 2,
      "classes": [
        {
          "label": str,
          "field_poly": [int, ...],          # ascending, monic
          "ap": [ {"p": int, "coords": [[num, den], ...]}, ... ]  # sorted by p
        },
        ...                                   # sorted by label
      ],
      "provenance": { ... }                   # free-form, optional
    }

Eigenvalue coordinates are rational numbers in the power basis of the root
of field_poly. Labels are opaque identifiers and are never used to join
data across sources.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

from .rings import IntPoly, NumberField, NumberFieldElem, is_prime

__all__ = [
    "REQUIRED_PRIME_BOUND",
    "LEVEL_CLASS_COUNTS",
    "NewformClass",
    "NewformStore",
    "SchemaError",
    "DataGapError",
    "load_store",
    "load_level_file",
    "canonical_level_bytes",
    "write_level_file",
    "validate_store",
    "ValidationReport",
    "sieve_primes_for_level",
]

# every class must carry a_p for all p <= this bound with p not dividing the
# level: the largest stage-3 prime is 157 and the congruence stage stops at
# 97, so 199 leaves headroom
REQUIRED_PRIME_BOUND = 199

# expected number of Galois conjugacy classes per level
LEVEL_CLASS_COUNTS = {70: 1, 350: 8, 8960: 64, 44800: 196}


class SchemaError(ValueError):
    """A newform data file violates the canonical schema."""


class DataGapError(ValueError):
    """Required eigenvalue data (some a_p) is missing."""


def sieve_primes_for_level(level: int, bound: int = REQUIRED_PRIME_BOUND) -> list[int]:
    return [p for p in range(2, bound + 1) if is_prime(p) and level % p != 0]


@dataclass(frozen=True)
class NewformClass:
    """One Galois conjugacy class: level, opaque label, eigenvalue field and
    the stored a_p coordinates."""

    level: int
    label: str
    field: NumberField
    ap: Mapping[int, NumberFieldElem] = field(repr=False)

    @property
    def degree(self) -> int:
        return self.field.degree

    @property
    def field_poly(self) -> IntPoly:
        return self.field.minpoly

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    def ap_at(self, p: int) -> NumberFieldElem:
        try:
            return self.ap[p]
        except KeyError:
            raise DataGapError(f"{self.label}: a_{p} not stored") from None

    def rational_ap(self, p: int) -> Fraction:
        e = self.ap_at(p)
        if not e.is_rational:
            raise ValueError(f"{self.label} is not a rational class")
        return e.coords[0]


class NewformStore:
    """Immutable collection of classes grouped by level, plus provenance."""

    def __init__(self, classes_by_level: Mapping[int, Iterable[NewformClass]], provenance=None):
        self._classes = {
            level: tuple(sorted(cs, key=lambda c: c.label))
            for level, cs in sorted(classes_by_level.items())
        }
        self.provenance = dict(provenance or {})

    @property
    def levels(self) -> tuple[int, ...]:
        return tuple(self._classes)

    def classes(self, level: int) -> tuple[NewformClass, ...]:
        return self._classes.get(level, ())

    def all_classes(self) -> tuple[NewformClass, ...]:
        return tuple(c for level in self.levels for c in self._classes[level])

    def count(self, level: int) -> int:
        return len(self.classes(level))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NewformStore):
            return NotImplemented
        return self._classes == other._classes

    def __repr__(self) -> str:
        parts = ", ".join(f"{lvl}:{len(cs)}" for lvl, cs in self._classes.items())
        return f"NewformStore({parts})"


# ---------------------------------------------------------------------------
# loading


def _coord_pair(raw, where: str) -> Fraction:
    if not (isinstance(raw, list) and len(raw) == 2):
        raise SchemaError(f"{where}: coordinate must be a [num, den] pair, got {raw!r}")
    num, den = raw
    if not isinstance(num, int) or not isinstance(den, int) or isinstance(num, bool):
        raise SchemaError(f"{where}: coordinate entries must be integers")
    if den <= 0:
        raise SchemaError(f"{where}: denominator must be positive")
    return Fraction(num, den)


def _parse_class(raw, level: int, index: int) -> NewformClass:
    where = f"classes[{index}]"
    if not isinstance(raw, dict):
        raise SchemaError(f"{where}: expected an object")
    label = raw.get("label")
    if not isinstance(label, str) or not label:
        raise SchemaError(f"{where}: missing or empty label")
    fp = raw.get("field_poly")
    if not (isinstance(fp, list) and fp and all(isinstance(c, int) for c in fp)):
        raise SchemaError(f"{label}: field_poly must be a nonempty integer list")
    poly = IntPoly(fp)
    if not poly.is_monic or poly.degree < 1:
        raise SchemaError(f"{label}: field_poly must be monic of degree >= 1")
    K = NumberField(poly)
    ap_raw = raw.get("ap")
    if not isinstance(ap_raw, list):
        raise SchemaError(f"{label}: ap must be a list")
    ap: dict[int, NumberFieldElem] = {}
    last_p = 0
    for entry in ap_raw:
        if not isinstance(entry, dict) or "p" not in entry or "coords" not in entry:
            raise SchemaError(f"{label}: each ap entry needs 'p' and 'coords'")
        p = entry["p"]
        if not isinstance(p, int) or not is_prime(p):
            raise SchemaError(f"{label}: ap index {p!r} is not prime")
        if p <= last_p:
            raise SchemaError(f"{label}: ap entries must be sorted strictly by p")
        last_p = p
        coords = entry["coords"]
        if not isinstance(coords, list) or len(coords) != K.degree:
            raise SchemaError(
                f"{label}: a_{p} has {len(coords) if isinstance(coords, list) else '?'} "
                f"coordinates, field degree is {K.degree}"
            )
        ap[p] = K.elem([_coord_pair(c, f"{label}.a_{p}") for c in coords])
    missing = [p for p in sieve_primes_for_level(level) if p not in ap]
    if missing:
        raise DataGapError(f"{label}: missing a_p for p in {missing}")
    return NewformClass(level=level, label=label, field=K, ap=ap)


def load_level_file(path) -> tuple[int, tuple[NewformClass, ...], dict]:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise SchemaError(f"{path}: empty file")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise SchemaError(f"{path}: top level must be an object")
    level = raw.get("level")
    if not isinstance(level, int) or level < 1:
        raise SchemaError(f"{path}: missing or invalid level")
    if raw.get("weight") != 2:
        raise SchemaError(f"{path}: weight must be 2")
    classes_raw = raw.get("classes")
    if not isinstance(classes_raw, list):
        raise SchemaError(f"{path}: classes must be a list")
    classes = tuple(_parse_class(c, level, i) for i, c in enumerate(classes_raw))
    labels = [c.label for c in classes]
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise SchemaError(f"{path}: duplicate labels {dupes}")
    if labels != sorted(labels):
        raise SchemaError(f"{path}: classes must be sorted by label")
    provenance = raw.get("provenance", {})
    if not isinstance(provenance, dict):
        raise SchemaError(f"{path}: provenance must be an object")
    provenance = dict(provenance)
    provenance.setdefault("file_sha256", hashlib.sha256(text.encode("utf-8")).hexdigest())
    return level, classes, provenance


def load_store(path) -> NewformStore:
    """Load one level file, or every *.json level file in a directory."""
    path = Path(path)
    if path.is_dir():
        files = sorted(path.glob("*.json"))
        if not files:
            raise SchemaError(f"{path}: no level files found; store would be empty")
    else:
        files = [path]
    by_level: dict[int, tuple[NewformClass, ...]] = {}
    provenance: dict[int, dict] = {}
    for f in files:
        level, classes, prov = load_level_file(f)
        if level in by_level:
            raise SchemaError(f"{f}: duplicate data for level {level}")
        by_level[level] = classes
        provenance[level] = prov
    if not any(by_level.values()):
        raise SchemaError(f"{path}: store is empty (no classes in any file)")
    return NewformStore(by_level, provenance)


# ---------------------------------------------------------------------------
# canonical serialization


def _class_to_json(c: NewformClass) -> dict:
    return {
        "label": c.label,
        "field_poly": list(c.field_poly.coeffs),
        "ap": [
            {
                "p": p,
                "coords": [[fr.numerator, fr.denominator] for fr in c.ap[p].coords],
            }
            for p in sorted(c.ap)
        ],
    }


def canonical_level_bytes(level: int, classes: Iterable[NewformClass], provenance=None) -> bytes:
    obj = {
        "level": level,
        "weight": 2,
        "classes": [_class_to_json(c) for c in sorted(classes, key=lambda c: c.label)],
    }
    if provenance:
        obj["provenance"] = {
            k: provenance[k] for k in sorted(provenance) if k != "file_sha256"
        }
    text = json.dumps(obj, ensure_ascii=False, sort_keys=True, indent=1)
    return (text + "\n").encode("utf-8")


def write_level_file(path, level: int, classes, provenance=None) -> Path:
    """Atomic canonical write: a partial write never replaces the target."""
    path = Path(path)
    data = canonical_level_bytes(level, classes, provenance)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)
    return path


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class LevelCheck:
    level: int
    expected: int | None
    actual: int | None
    hasse_failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return self.actual is not None and (
            self.expected is None or self.expected == self.actual
        )


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[LevelCheck, ...]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def hasse_ok(self) -> bool:
        return not any(c.hasse_failures for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "levels": [
                {
                    "level": c.level,
                    "expected_classes": c.expected,
                    "actual_classes": c.actual,
                    "ok": c.ok,
                    "hasse_failures": list(c.hasse_failures),
                }
                for c in self.checks
            ],
        }


def validate_store(store: NewformStore, expected_counts: Mapping[int, int] | None = None) -> ValidationReport:
    """Per-level class-count comparison plus advisory Hasse spot checks on
    rational classes. Failures are reported, never raised."""
    if expected_counts is None:
        expected_counts = LEVEL_CLASS_COUNTS
    checks = []
    levels = sorted(set(expected_counts) | set(store.levels))
    for level in levels:
        expected = expected_counts.get(level)
        actual = store.count(level) if level in store.levels else None
        failures = []
        for c in store.classes(level):
            if not c.is_rational:
                continue
            for p, e in c.ap.items():
                a = e.coords[0]
                if a.denominator != 1 or int(a) ** 2 > 4 * p:
                    failures.append(f"{c.label}: a_{p} = {a} violates the Hasse bound")
        checks.append(
            LevelCheck(
                level=level,
                expected=expected,
                actual=actual,
                hasse_failures=tuple(failures),
            )
        )
    return ValidationReport(tuple(checks))
