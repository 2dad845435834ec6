"""Corpus files: a versioned JSON document holding 1-D and N-D sequences.

Layout::

    {
      "schema": "perseq-corpus/1",
      "sequences": [
        {"id": "S2", "kind": "1d", "period": 3, "motif": [0, 1]},
        {"id": "A", "kind": "nd", "period": 4, "motif": [[0, 1, 0.5], [1, 0.2, 0.3]],
         "unit": "angstrom"}
      ]
    }

For ``nd`` entries every motif row is ``[t, v_1, ..., v_{n-1}]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .errors import DuplicateId, ParseError, PerseqError, SchemaError
from .highdim import PeriodicSequenceND, make_sequence_nd
from .seqcore import DEFAULT_EPS, PeriodicSequence1D, normalize

SCHEMA = "perseq-corpus/1"
KINDS = ("1d", "nd")
_FIELDS = {"id", "kind", "period", "motif", "unit"}

Sequence = Union[PeriodicSequence1D, PeriodicSequenceND]


@dataclass(frozen=True)
class SequenceDocument:
    id: str
    kind: str
    period: float
    motif: tuple
    unit: str | None = None

    def to_sequence(self, eps: float = DEFAULT_EPS) -> Sequence:
        if self.kind == "1d":
            return normalize(self.motif, self.period, eps)
        return make_sequence_nd([list(row) for row in self.motif], self.period, eps)

    def to_dict(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "period": self.period}
        if self.kind == "1d":
            out["motif"] = list(self.motif)
        else:
            out["motif"] = [list(row) for row in self.motif]
        if self.unit is not None:
            out["unit"] = self.unit
        return out


def document_from_sequence(doc_id: str, S: Sequence, unit: str | None = None) -> SequenceDocument:
    if isinstance(S, PeriodicSequence1D):
        return SequenceDocument(doc_id, "1d", S.period, tuple(S.motif), unit)
    rows = tuple(tuple([float(t), *map(float, v)]) for t, v in zip(S.times, S.values))
    return SequenceDocument(doc_id, "nd", S.period, rows, unit)


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _entry_lines(text: str) -> list[int] | None:
    """Line number where each element of the top-level ``sequences`` array starts."""
    dec = json.JSONDecoder()

    def skip(pos):
        while pos < len(text) and text[pos] in " \t\r\n":
            pos += 1
        return pos

    def line(pos):
        return text.count("\n", 0, pos) + 1

    try:
        pos = skip(0)
        if text[pos] != "{":
            return None
        pos = skip(pos + 1)
        while text[pos] != "}":
            key, pos = dec.raw_decode(text, pos)
            pos = skip(skip(pos) + 1)  # past ':'
            if key == "sequences" and text[pos] == "[":
                lines = []
                pos = skip(pos + 1)
                while text[pos] != "]":
                    lines.append(line(pos))
                    _, pos = dec.raw_decode(text, pos)
                    pos = skip(pos)
                    if text[pos] == ",":
                        pos = skip(pos + 1)
                return lines
            _, pos = dec.raw_decode(text, pos)
            pos = skip(pos)
            if text[pos] == ",":
                pos = skip(pos + 1)
    except (ValueError, IndexError):
        return None
    return None


def _parse_entry(entry, where: str, eps: float) -> SequenceDocument:
    if not isinstance(entry, dict):
        raise SchemaError(f"{where}: expected an object, got {type(entry).__name__}")
    unknown = set(entry) - _FIELDS
    if unknown:
        raise SchemaError(f"{where}: unknown field(s) {sorted(unknown)}")
    for key in ("id", "kind", "period", "motif"):
        if key not in entry:
            raise SchemaError(f"{where}.{key}: missing")
    doc_id, kind, period, motif = entry["id"], entry["kind"], entry["period"], entry["motif"]
    if not isinstance(doc_id, str) or not doc_id:
        raise SchemaError(f"{where}.id: expected a non-empty string")
    if kind not in KINDS:
        raise SchemaError(f"{where}.kind: expected one of {KINDS}, got {kind!r}")
    if not _is_number(period):
        raise SchemaError(f"{where}.period: expected a finite number")
    unit = entry.get("unit")
    if unit is not None and not isinstance(unit, str):
        raise SchemaError(f"{where}.unit: expected a string")
    if not isinstance(motif, list):
        raise SchemaError(f"{where}.motif: expected a list")
    if not motif:
        raise ParseError(f"{where}.motif: empty motif")
    if kind == "1d":
        for i, x in enumerate(motif):
            if not _is_number(x):
                raise SchemaError(f"{where}.motif[{i}]: expected a finite number")
        parsed = tuple(float(x) for x in motif)
    else:
        width = None
        rows = []
        for i, row in enumerate(motif):
            if not isinstance(row, list) or not row:
                raise SchemaError(f"{where}.motif[{i}]: expected a non-empty list [t, v_1, ...]")
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise SchemaError(
                    f"{where}.motif[{i}]: ragged value dimensions ({len(row)} entries, expected {width})"
                )
            for k, x in enumerate(row):
                if not _is_number(x):
                    raise SchemaError(f"{where}.motif[{i}][{k}]: expected a finite number")
            rows.append(tuple(float(x) for x in row))
        parsed = tuple(rows)
    doc = SequenceDocument(doc_id, kind, float(period), parsed, unit)
    try:
        doc.to_sequence(eps)
    except PerseqError as exc:
        raise ParseError(f"{where}: {exc}") from exc
    return doc


def parse_corpus_text(text: str, source: str = "<corpus>", eps: float = DEFAULT_EPS) -> list[SequenceDocument]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise SchemaError(f"{source}: top level must be an object")
    if "schema" not in data:
        raise SchemaError(f"{source}: missing 'schema' field")
    if data["schema"] != SCHEMA:
        raise SchemaError(f"{source}: unsupported schema {data['schema']!r}, expected {SCHEMA!r}")
    extra = set(data) - {"schema", "sequences"}
    if extra:
        raise SchemaError(f"{source}: unknown top-level field(s) {sorted(extra)}")
    entries = data.get("sequences")
    if not isinstance(entries, list):
        raise SchemaError(f"{source}: 'sequences' must be a list")
    lines = _entry_lines(text) or [None] * len(entries)
    docs: list[SequenceDocument] = []
    seen: dict[str, str] = {}
    for i, entry in enumerate(entries):
        where = f"{source}:{lines[i]}: sequences[{i}]" if lines[i] else f"{source}: sequences[{i}]"
        doc = _parse_entry(entry, where, eps)
        if doc.id in seen:
            raise DuplicateId(f"{where}: id {doc.id!r} already used at {seen[doc.id]}")
        seen[doc.id] = where
        docs.append(doc)
    return docs


def parse_corpus(path, eps: float = DEFAULT_EPS) -> list[SequenceDocument]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from exc
    return parse_corpus_text(text, str(path), eps)


def dumps_corpus(docs) -> str:
    return json.dumps({"schema": SCHEMA, "sequences": [d.to_dict() for d in docs]}, indent=2)


def dump_corpus(docs, path) -> None:
    Path(path).write_text(dumps_corpus(docs) + "\n")
