from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from _support import S2
from perseq import errors
from perseq.corpus import (
    SCHEMA,
    document_from_sequence,
    dump_corpus,
    dumps_corpus,
    parse_corpus,
    parse_corpus_text,
)
from perseq.oracle import random_sequence, random_sequence_nd

DATA = Path(__file__).parent / "data"


def corpus(*entries, schema=SCHEMA):
    return json.dumps({"schema": schema, "sequences": list(entries)}, indent=2)


class TestParse:
    def test_fixture_file(self):
        docs = parse_corpus(DATA / "fixtures.json")
        assert [d.id for d in docs][:3] == ["S2", "S3", "S3R"]
        assert docs[0].to_sequence() == S2

    def test_nd_file(self):
        docs = parse_corpus(DATA / "nd.json")
        S = docs[0].to_sequence()
        assert len(S) == 6 and S.value_dim == 2
        assert docs[2].unit == "s"

    def test_empty_motif(self):
        with pytest.raises(errors.ParseError, match="empty motif"):
            parse_corpus_text(corpus({"id": "a", "kind": "1d", "period": 1, "motif": []}))

    def test_ragged_nd(self):
        text = corpus({"id": "a", "kind": "nd", "period": 4, "motif": [[0, 1, 2], [1, 1]]})
        with pytest.raises(errors.SchemaError, match=r"motif\[1\].*ragged"):
            parse_corpus_text(text)

    def test_duplicate_id_reports_both_lines(self):
        text = corpus(
            {"id": "a", "kind": "1d", "period": 1, "motif": [0]},
            {"id": "a", "kind": "1d", "period": 2, "motif": [0]},
        )
        with pytest.raises(errors.DuplicateId) as exc:
            parse_corpus_text(text, "c.json")
        msg = str(exc.value)
        assert "c.json:12:" in msg and "c.json:4:" in msg

    def test_bad_json_line_col(self):
        with pytest.raises(errors.ParseError, match=r"x\.json:3:"):
            parse_corpus_text('{\n "schema": "perseq-corpus/1",\n "sequences": [,]}', "x.json")

    @pytest.mark.parametrize(
        "text, match",
        [
            ('{"sequences": []}', "missing 'schema'"),
            ('{"schema": "perseq-corpus/9", "sequences": []}', "unsupported schema"),
            ('[1, 2]', "top level"),
            ('{"schema": "perseq-corpus/1", "sequences": {}}', "must be a list"),
            ('{"schema": "perseq-corpus/1", "sequences": [], "x": 1}', "unknown top-level"),
        ],
    )
    def test_document_errors(self, text, match):
        with pytest.raises(errors.SchemaError, match=match):
            parse_corpus_text(text)

    @pytest.mark.parametrize(
        "entry, match",
        [
            ({"id": "a", "kind": "1d", "period": 1}, r"motif: missing"),
            ({"id": "", "kind": "1d", "period": 1, "motif": [0]}, r"\.id"),
            ({"id": "a", "kind": "2d", "period": 1, "motif": [0]}, r"\.kind"),
            ({"id": "a", "kind": "1d", "period": "1", "motif": [0]}, r"\.period"),
            ({"id": "a", "kind": "1d", "period": 1, "motif": [True]}, r"motif\[0\]"),
            ({"id": "a", "kind": "1d", "period": 1, "motif": [0], "colour": 1}, "unknown field"),
            ({"id": "a", "kind": "1d", "period": 1, "motif": [0], "unit": 3}, r"\.unit"),
            ({"id": "a", "kind": "nd", "period": 1, "motif": [5]}, r"motif\[0\]"),
            ("S2", "expected an object"),
        ],
    )
    def test_entry_schema_errors(self, entry, match):
        with pytest.raises(errors.SchemaError, match=match):
            parse_corpus_text(corpus(entry))

    @pytest.mark.parametrize(
        "entry",
        [
            {"id": "a", "kind": "1d", "period": 3, "motif": [4, 0, 1]},
            {"id": "a", "kind": "1d", "period": 0, "motif": [0]},
            {"id": "a", "kind": "nd", "period": 2, "motif": [[0, 1], [2, 3]]},
        ],
    )
    def test_invalid_sequences(self, entry):
        with pytest.raises(errors.ParseError):
            parse_corpus_text(corpus(entry))

    def test_entry_line_in_message(self):
        text = corpus(
            {"id": "a", "kind": "1d", "period": 1, "motif": [0]},
            {"id": "b", "kind": "1d", "period": 3, "motif": [0, 3]},
        )
        with pytest.raises(errors.ParseError, match=r"<corpus>:12: sequences\[1\]"):
            parse_corpus_text(text)

    def test_missing_file(self, tmp_path):
        with pytest.raises(errors.ParseError):
            parse_corpus(tmp_path / "nope.json")

    def test_eps_controls_duplicates(self):
        text = corpus({"id": "a", "kind": "1d", "period": 1, "motif": [0, 1e-12]})
        with pytest.raises(errors.ParseError):
            parse_corpus_text(text)
        assert len(parse_corpus_text(text, eps=0)[0].to_sequence(0)) == 2


class TestRoundTrip:
    def test_fixtures(self, tmp_path):
        docs = parse_corpus(DATA / "fixtures.json") + parse_corpus(DATA / "nd.json")
        out = tmp_path / "out.json"
        dump_corpus(docs, out)
        assert parse_corpus(out) == docs

    @given(st.lists(st.integers(0, 2**31 - 1), min_size=1, max_size=6, unique=True))
    def test_random(self, seeds):
        docs = []
        for i, s in enumerate(seeds):
            rng = np.random.default_rng(s)
            S = random_sequence(rng) if s % 2 else random_sequence_nd(rng)
            docs.append(document_from_sequence(f"x{i}", S, unit="nm" if s % 3 == 0 else None))
        assert parse_corpus_text(dumps_corpus(docs)) == docs
