"""Reference decomposition tables for A5, p = 3, shipped as JSON documents.

Each document holds one block: an ordered weight list and lower-triangular
rows, where row k lists [H^0(lambda_k) : L(w)] for the first k + 1 listed
weights, diagonal included.  Only one of each dual pair of rows is
stored; the other is synthesized by reversing every weight.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..roots import Weight, dual_weight

IRREDUCIBLE_LIST = "irreducible_list.json"


class GoldenFormatError(ValueError):
    """A table document does not follow the format; the message names the position."""


@dataclass(frozen=True)
class GoldenTable:
    table_id: str
    weights: tuple[Weight, ...]
    rows: tuple[tuple[Weight, tuple[int, ...]], ...]

    def row(self, lam: Weight) -> dict[Weight, int]:
        """Listed multiplicities of lam's row, zeros included."""
        for mu, entries in self.rows:
            if mu == tuple(lam):
                return dict(zip(self.weights, entries))
        raise KeyError(lam)

    def mirrored(self) -> "GoldenTable":
        return GoldenTable(
            self.table_id + "*",
            tuple(dual_weight(w) for w in self.weights),
            tuple((dual_weight(mu), e) for mu, e in self.rows),
        )

    def to_document(self) -> dict:
        return {
            "table_id": self.table_id,
            "weights": [list(w) for w in self.weights],
            "rows": [{"lambda": list(mu), "entries": list(e)} for mu, e in self.rows],
        }


def _weight(obj, where: str) -> Weight:
    if not isinstance(obj, list) or not obj or not all(isinstance(c, int) and c >= 0 for c in obj):
        raise GoldenFormatError(f"{where}: expected a list of nonnegative integers, got {obj!r}")
    return tuple(obj)


def parse_table(doc: dict, source: str = "<document>") -> GoldenTable:
    """Validate one table document and build the table."""
    for key in ("table_id", "weights", "rows"):
        if key not in doc:
            raise GoldenFormatError(f"{source}: missing field {key!r}")
    tid = str(doc["table_id"])
    weights = tuple(_weight(w, f"{source} weight {i}") for i, w in enumerate(doc["weights"]))
    if len({len(w) for w in weights}) > 1:
        raise GoldenFormatError(f"{source}: weights of different lengths")
    if len(set(weights)) != len(weights):
        raise GoldenFormatError(f"{source}: repeated weight in the weight list")
    if len(doc["rows"]) != len(weights):
        raise GoldenFormatError(f"{source}: {len(doc['rows'])} rows for {len(weights)} weights")
    rows = []
    for k, r in enumerate(doc["rows"]):
        where = f"{source} row {k}"
        lam = _weight(r.get("lambda"), where)
        if lam != weights[k]:
            raise GoldenFormatError(f"{where}: lambda {lam} but weight {k} is {weights[k]}")
        entries = r.get("entries")
        if not isinstance(entries, list) or len(entries) != k + 1:
            raise GoldenFormatError(f"{where}: expected {k + 1} entries, got {entries!r}")
        for c, x in enumerate(entries):
            if not isinstance(x, int) or x < 0:
                raise GoldenFormatError(f"{where} column {c}: bad entry {x!r}")
        if entries[k] != 1:
            raise GoldenFormatError(f"{where} column {k}: diagonal entry is {entries[k]}, not 1")
        rows.append((lam, tuple(entries)))
    return GoldenTable(tid, weights, tuple(rows))


def _data_dir(path=None) -> Path:
    if path is not None:
        return Path(path)
    return Path(str(resources.files("charp") / "data" / "tables"))


def load_golden_tables(path=None) -> dict[str, GoldenTable]:
    """Every table block keyed by id ('1.1', '4.3', ...), in numeric order."""
    out = {}
    files = sorted(_data_dir(path).glob("table_*.json"))
    for f in files:
        try:
            doc = json.loads(f.read_text())
        except json.JSONDecodeError as exc:
            raise GoldenFormatError(f"{f.name}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        t = parse_table(doc, f.name)
        if t.table_id in out:
            raise GoldenFormatError(f"{f.name}: duplicate table id {t.table_id}")
        out[t.table_id] = t
    return dict(sorted(out.items(), key=lambda kv: tuple(int(x) for x in kv[0].split("."))))


def irreducible_list(path=None) -> tuple[Weight, ...]:
    """The weights listed as having irreducible H^0, exactly as listed (with repeats)."""
    doc = json.loads((_data_dir(path) / IRREDUCIBLE_LIST).read_text())
    return tuple(_weight(w, f"{IRREDUCIBLE_LIST} entry {i}") for i, w in enumerate(doc["as_listed"]))


def irreducible_set(path=None) -> frozenset[Weight]:
    """The listed weights with repeats removed and closed under duality."""
    listed = set(irreducible_list(path))
    return frozenset(listed | {dual_weight(w) for w in listed})


@dataclass
class GoldenRows:
    """Lookup of reference or mirrored rows by lambda."""

    tables: dict[str, GoldenTable]
    irreducible: frozenset[Weight]
    rows: dict[Weight, tuple[str, dict[Weight, int]]] = field(default_factory=dict)
    conflicts: list[str] = field(default_factory=list)

    def __post_init__(self):
        mirrors = []
        for t in self.tables.values():
            for lam, _ in t.rows:
                self._add(lam, t.table_id, t.row(lam))
            mirrors.append(t.mirrored())
        for t in mirrors:
            for lam, _ in t.rows:
                self._add(lam, t.table_id, t.row(lam))
        for lam in sorted(self.irreducible):
            self._add(lam, "irreducible", {lam: 1})

    def _add(self, lam: Weight, source: str, row: dict[Weight, int]) -> None:
        old = self.rows.get(lam)
        if old is None:
            self.rows[lam] = (source, row)
            return
        a = {k: v for k, v in old[1].items() if v}
        b = {k: v for k, v in row.items() if v}
        if a != b:
            self.conflicts.append(f"{lam}: {old[0]} gives {a}, {source} gives {b}")

    def __contains__(self, lam) -> bool:
        return tuple(lam) in self.rows

    def get(self, lam: Weight):
        """(source id, {nu: multiplicity}) or None when no table covers lam."""
        return self.rows.get(tuple(lam))


def golden_rows(path=None) -> GoldenRows:
    return GoldenRows(load_golden_tables(path), irreducible_set(path))
