"""Hand-off to the analysis toolkit.

The only shared contract is the file formats: the scorer emits a record
stream, the `entropyrate` CLI (exercised via subprocess, never imported)
ingests it and rebuilds the position curve.  Fixtures are frozen by
tests/fixtures/make_fixtures.py.
"""

import shutil
import subprocess
from pathlib import Path

import pytest

from neural_scorer.adapters import default_toy_adapter
from neural_scorer.corpusio import read_corpus, read_manifest
from neural_scorer.score import ScorerConfig, score_corpus

FIXTURES = Path(__file__).parent / "fixtures"
DOCS = Path(__file__).parent.parent.parent / "tests" / "fixtures" / "handoff_docs.jsonl"

needs_cli = pytest.mark.skipif(
    shutil.which("entropyrate") is None, reason="analysis CLI not installed"
)


def data_lines(path):
    return [l for l in Path(path).read_text().splitlines() if not l.startswith("#")]


def test_rescoring_reproduces_frozen_records(tmp_path):
    docs = read_corpus(DOCS)
    ids = read_manifest(FIXTURES / "handoff_manifest.txt")
    out = tmp_path / "records.jsonl"
    score_corpus(docs, ids, default_toy_adapter(), ScorerConfig(), out)
    assert out.read_bytes() == (FIXTURES / "toy_records.jsonl").read_bytes()


@needs_cli
def test_records_ingest_and_reproduce_curve(tmp_path):
    docs = read_corpus(DOCS)
    ids = read_manifest(FIXTURES / "handoff_manifest.txt")
    records = tmp_path / "records.jsonl"
    score_corpus(docs, ids, default_toy_adapter(), ScorerConfig(), records)
    subprocess.run(
        ["entropyrate", "score", "--corpus", str(DOCS), "--test",
         str(FIXTURES / "handoff_manifest.txt"), "--records", str(records),
         "--out", str(tmp_path / "surprisal.jsonl")],
        check=True,
    )
    subprocess.run(
        ["entropyrate", "curve", "--scores", str(tmp_path / "surprisal.jsonl"),
         "--max-position", "30", "--min-docs", "2",
         "--out", str(tmp_path / "curve.csv")],
        check=True,
    )
    # config header comments carry paths; the data must match byte for byte
    assert data_lines(tmp_path / "curve.csv") == data_lines(FIXTURES / "toy_curve.csv")
