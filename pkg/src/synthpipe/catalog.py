"""Disease catalog: claims-table ingestion, frequency binning, generation plans.

The engine consumes a flat ``code,description,count`` table (one row per
ICD-10 code with its claim frequency), summarizes how skewed the frequency
distribution is, and turns the most frequent codes into an ordered work plan
of dialogue-note pairs to generate.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .errors import ClaimsParseError, ValidationError

CLAIMS_HEADER = ("code", "description", "count")

# Half-open frequency bins, reported most-frequent first. The upper bound of
# the top bin is None (unbounded).
BIN_EDGES = (
    ("Above 10M", 10_000_000, None),
    ("1M - 10M", 1_000_000, 10_000_000),
    ("100k - 1M", 100_000, 1_000_000),
    ("10k - 100k", 10_000, 100_000),
    ("1k - 10k", 1_000, 10_000),
    ("Below 1k", 0, 1_000),
)


@dataclass(frozen=True)
class IcdEntry:
    """One catalog row: an ICD-10 code, its description, and claim count."""

    code: str
    description: str
    claim_count: int

    def __post_init__(self):
        if not self.code or not self.code.strip():
            raise ValidationError("ICD code must be non-empty")
        if self.claim_count < 0:
            raise ValidationError(
                f"claim count for {self.code!r} must be >= 0, got {self.claim_count}"
            )


@dataclass(frozen=True)
class DistributionBin:
    label: str
    lower: int
    upper: int | None  # exclusive; None means unbounded
    code_count: int


@dataclass(frozen=True)
class DistributionReport:
    """Counts of catalog codes per claim-frequency bin, most frequent first."""

    bins: tuple[DistributionBin, ...]
    total_codes: int

    def to_dict(self) -> dict:
        return {
            "bins": [
                {
                    "label": b.label,
                    "lower": b.lower,
                    "upper": b.upper,
                    "code_count": b.code_count,
                }
                for b in self.bins
            ],
            "total_codes": self.total_codes,
        }


@dataclass(frozen=True)
class PlanItem:
    entry: IcdEntry
    pairs_to_generate: int


@dataclass(frozen=True)
class GenerationPlan:
    """Ordered work plan: which codes to cover and how many pairs each."""

    items: tuple[PlanItem, ...]
    total_pairs: int

    def to_dict(self) -> dict:
        return {
            "items": [
                {
                    "code": it.entry.code,
                    "description": it.entry.description,
                    "claim_count": it.entry.claim_count,
                    "pairs_to_generate": it.pairs_to_generate,
                }
                for it in self.items
            ],
            "total_pairs": self.total_pairs,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> "GenerationPlan":
        items = tuple(
            PlanItem(
                entry=IcdEntry(
                    code=row["code"],
                    description=row["description"],
                    claim_count=int(row.get("claim_count", 0)),
                ),
                pairs_to_generate=int(row["pairs_to_generate"]),
            )
            for row in data["items"]
        )
        return cls(items=items, total_pairs=int(data["total_pairs"]))

    @classmethod
    def from_json_file(cls, path: str | Path) -> "GenerationPlan":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def load_claims(source: str | Path) -> list[IcdEntry]:
    """Read a ``code,description,count`` table into catalog entries.

    Descriptions may contain commas when quoted (standard CSV rules).
    Raises :class:`ClaimsParseError` for malformed rows (with the offending
    line number) and :class:`ValidationError` for duplicate codes or
    negative counts.
    """
    path = Path(source)
    entries: list[IcdEntry] = []
    seen: set[str] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ClaimsParseError("empty file, expected header 'code,description,count'")
        if tuple(h.strip().lower() for h in header) != CLAIMS_HEADER:
            raise ClaimsParseError(
                f"bad header {header!r}, expected 'code,description,count'", line_number=1
            )
        for row in reader:
            line = reader.line_num
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 3:
                raise ClaimsParseError(
                    f"expected 3 fields, got {len(row)}", line_number=line
                )
            code, description, raw_count = (field.strip() for field in row)
            try:
                count = int(raw_count)
            except ValueError:
                raise ClaimsParseError(
                    f"count {raw_count!r} is not an integer", line_number=line
                )
            if count < 0:
                raise ValidationError(f"line {line}: count for {code!r} is negative")
            if not code:
                raise ValidationError(f"line {line}: empty code")
            if code in seen:
                raise ValidationError(f"line {line}: duplicate code {code!r}")
            seen.add(code)
            entries.append(IcdEntry(code=code, description=description, claim_count=count))
    return entries


def bin_distribution(entries: Iterable[IcdEntry]) -> DistributionReport:
    """Count how many codes fall into each claim-frequency bin.

    Bins are half-open ``[lower, upper)`` with boundaries at 1k, 10k, 100k,
    1M and 10M claims; the top bin is unbounded. Every entry falls in
    exactly one bin, so the bin counts always sum to the catalog size.
    """
    counts = [0] * len(BIN_EDGES)
    total = 0
    for entry in entries:
        total += 1
        for i, (_, lower, upper) in enumerate(BIN_EDGES):
            if entry.claim_count >= lower and (upper is None or entry.claim_count < upper):
                counts[i] += 1
                break
    bins = tuple(
        DistributionBin(label=label, lower=lower, upper=upper, code_count=counts[i])
        for i, (label, lower, upper) in enumerate(BIN_EDGES)
    )
    return DistributionReport(bins=bins, total_codes=total)


def build_plan(entries: Iterable[IcdEntry], top_k: int, per_code: int) -> GenerationPlan:
    """Select the ``top_k`` most frequent codes, ``per_code`` pairs each.

    Ordering is deterministic: claim count descending, ties broken by code
    ascending. The result is always a prefix of the fully sorted catalog,
    so identical inputs produce byte-identical plans.
    """
    if per_code < 1:
        raise ValidationError(f"per_code must be >= 1, got {per_code}")
    if top_k < 0:
        raise ValidationError(f"top_k must be >= 0, got {top_k}")
    ranked = sorted(entries, key=lambda e: (-e.claim_count, e.code))
    selected = ranked[:top_k]
    items = tuple(PlanItem(entry=e, pairs_to_generate=per_code) for e in selected)
    return GenerationPlan(items=items, total_pairs=per_code * len(items))
