"""Member weight datasets: CSV/JSON loading, validation and the bundled IMF tables."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import IO, Iterable

from .game import QuotaSpec, TieRule, WeightedGame, resolve_quota

BUNDLED_YEARS = (2015, 2016)
HEADER = ("index", "name", "weight")


class DatasetError(ValueError):
    """Malformed or invalid dataset; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class MemberRecord:
    index: int
    name: str
    weight: int


@dataclass(frozen=True)
class Dataset:
    year: int | None
    records: tuple[MemberRecord, ...]

    @property
    def total(self) -> int:
        return sum(r.weight for r in self.records)

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(r.weight for r in self.records)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(r.name for r in self.records)

    def shares(self) -> list[Fraction]:
        return weight_shares(self)

    def game(self, quota: str | int | QuotaSpec, tie_rule: TieRule = "include_equal") -> WeightedGame:
        if isinstance(quota, int):
            quota = QuotaSpec(absolute=quota)
        elif isinstance(quota, str):
            quota = QuotaSpec.parse(quota, tie_rule)
        return WeightedGame(resolve_quota(quota, self.total), self.weights, self.names)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(HEADER)
        for r in self.records:
            writer.writerow((r.index, r.name, r.weight))
        return buf.getvalue()

    def to_json(self) -> str:
        members = [{"index": r.index, "name": r.name, "weight": r.weight} for r in self.records]
        return json.dumps({"year": self.year, "members": members}, ensure_ascii=False, indent=1)


def _parse_int(text, line: int | None, field: str) -> int:
    if isinstance(text, bool):
        raise DatasetError(f"{field} must be an integer, got {text!r}", line, field)
    if isinstance(text, int):
        return text
    try:
        return int(str(text).strip())
    except ValueError:
        raise DatasetError(f"{field} must be an integer, got {text!r}", line, field) from None


def _validate(rows: Iterable[tuple[int | None, object, object, object]], year: int | None) -> Dataset:
    records = []
    seen: set[int] = set()
    for line, idx, name, weight in rows:
        index = _parse_int(idx, line, "index")
        w = _parse_int(weight, line, "weight")
        if index in seen:
            raise DatasetError(f"duplicate index {index}", line, "index")
        if w < 1:
            raise DatasetError(f"weight must be positive, got {w}", line, "weight")
        seen.add(index)
        records.append(MemberRecord(index, str(name), w))
    if not records:
        raise DatasetError("dataset has no members")
    records.sort(key=lambda r: r.index)
    if [r.index for r in records] != list(range(1, len(records) + 1)):
        raise DatasetError("indices must run contiguously from 1", None, "index")
    return Dataset(year, tuple(records))


def read_csv(stream: IO[str], year: int | None = None) -> Dataset:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DatasetError("empty file", 1) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise DatasetError(f"expected header {','.join(HEADER)}, got {','.join(header)}", 1)

    def rows():
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 3:
                raise DatasetError(f"expected 3 fields, got {len(row)}", line)
            yield line, row[0], row[1], row[2]

    return _validate(rows(), year)


def read_json(stream: IO[str]) -> Dataset:
    try:
        doc = json.load(stream)
    except json.JSONDecodeError as e:
        raise DatasetError(f"invalid JSON: {e.msg}", e.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("members"), list):
        raise DatasetError('expected an object with a "members" list')
    rows = []
    for k, m in enumerate(doc["members"]):
        if not isinstance(m, dict) or not {"index", "name", "weight"} <= m.keys():
            raise DatasetError(f"member {k} needs index, name and weight")
        rows.append((None, m["index"], m["name"], m["weight"]))
    year = doc.get("year")
    return _validate(rows, None if year is None else _parse_int(year, None, "year"))


def _year_from_name(path: Path) -> int | None:
    digits = "".join(ch for ch in path.stem if ch.isdigit())
    return int(digits) if len(digits) == 4 else None


def load(path: str | Path) -> Dataset:
    """Load a CSV or JSON dataset; a bare ``imf2015``/``imf2016`` names a bundled one."""
    path = Path(path)
    if not path.exists() and path.stem in {f"imf{y}" for y in BUNDLED_YEARS} and path.parent == Path("."):
        return bundled(int(path.stem[3:]))
    with open(path, encoding="utf-8", newline="") as f:
        if path.suffix.lower() == ".json":
            return read_json(f)
        return read_csv(f, _year_from_name(path))


def load_csv(path: str | Path) -> Dataset:
    with open(path, encoding="utf-8", newline="") as f:
        return read_csv(f, _year_from_name(Path(path)))


def bundled(year: int) -> Dataset:
    if year not in BUNDLED_YEARS:
        raise DatasetError(f"no bundled dataset for {year}; available: {BUNDLED_YEARS}")
    text = resources.files("wvgpower.data").joinpath(f"imf{year}.csv").read_text(encoding="utf-8")
    return read_csv(io.StringIO(text), year)


def weight_shares(ds: Dataset) -> list[Fraction]:
    C = ds.total
    return [Fraction(r.weight, C) for r in ds.records]
