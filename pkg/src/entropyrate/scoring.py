"""Per-word surprisal sequences, from the trigram model or external scorers.

External scorers communicate through newline-delimited JSON ScoreRecords,
one document per line, carrying natural-log word probabilities.  All numbers
on the analysis side of this module are surprisal in bits (or nats when a
natural log base is configured).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from entropyrate.corpus import Document, render_document
from entropyrate.curves import PositionCurve
from entropyrate.trigram import InterpolatedTrigramModel


@dataclass(frozen=True)
class WordScore:
    word: str
    logprob: float  # natural log, <= 0
    n_subtokens: int = 1
    is_title: bool = False


@dataclass(frozen=True)
class ScoreRecord:
    """Wire-format record of per-word log probabilities for one document."""

    doc_id: str
    words: tuple[WordScore, ...]


@dataclass(frozen=True)
class SurprisalSequence:
    doc_id: str
    values: tuple[float, ...]
    source: str  # "trigram" | "external"

    def __post_init__(self):
        if any(not math.isfinite(v) or v < 0 for v in self.values):
            raise ValueError(f"non-finite or negative surprisal in doc {self.doc_id}")


def score_with_trigram(
    model: InterpolatedTrigramModel,
    doc: Document,
    title_mode: str = "omit",
    log_base: float = 2.0,
    lowercase: bool = True,
) -> SurprisalSequence:
    """Score each body word given its two predecessors under the trigram model.

    Title words (if rendered) condition the model but are excluded from the
    emitted sequence, so values align with body positions.
    """
    rendered = render_document(doc, title_mode, lowercase)
    ids = model.vocab.map_words(rendered.words)
    values = model.sequence_surprisals(ids, log_base)
    return SurprisalSequence(doc.id, tuple(values[rendered.n_title:]), "trigram")


def ingest_scores(
    records: Iterable[ScoreRecord],
    docs_by_id: Mapping[str, Document],
    log_base: float = 2.0,
    lowercase: bool = True,
) -> list[SurprisalSequence]:
    """Convert external natural-log word probabilities to surprisal sequences.

    Non-title words must align 1:1 with the named document's body after the
    corpus tokenizer; any mismatch is a hard error so preprocessing drift is
    caught rather than absorbed.
    """
    scale = math.log(log_base)
    out = []
    for rec in records:
        doc = docs_by_id.get(rec.doc_id)
        if doc is None:
            raise ValueError(f"score record names unknown document {rec.doc_id!r}")
        body_scores = [w for w in rec.words if not w.is_title]
        if len(body_scores) != len(doc.body):
            raise ValueError(
                f"doc {rec.doc_id}: scorer emitted {len(body_scores)} body words "
                f"but document has {len(doc.body)}"
            )
        values = []
        for i, ws in enumerate(body_scores):
            expect = doc.body[i]
            got = ws.word.lower() if lowercase else ws.word
            if got != expect:
                raise ValueError(
                    f"doc {rec.doc_id}: word mismatch at body position {i}: "
                    f"scorer said {ws.word!r}, corpus has {expect!r}"
                )
            if ws.logprob > 0:
                raise ValueError(
                    f"doc {rec.doc_id}: positive logprob {ws.logprob} at position {i}"
                )
            values.append(-ws.logprob / scale)
        out.append(SurprisalSequence(rec.doc_id, tuple(values), "external"))
    return out


def mi_gap(local: PositionCurve, full: PositionCurve) -> PositionCurve:
    """Per-position local-context minus full-context mean surprisal.

    Estimates the information the local n-gram window misses.  Both curves
    must come from the same document set; equal per-position contributor
    counts are required as a proxy for that.  The emitted variance is the sum
    of the two inputs' variances (variance of the difference under
    independence); counts carry the per-position minimum.
    """
    if local.max_position != full.max_position:
        raise ValueError("curves have different max_position")
    both = local.defined & full.defined
    if not np.array_equal(local.counts[both], full.counts[both]):
        raise ValueError("curves disagree on contributor counts: different document sets?")
    counts = np.minimum(local.counts, full.counts)
    means = np.where(both, local.means - full.means, 0.0)
    variances = np.where(both, local.variances + full.variances, 0.0)
    counts = np.where(both, counts, 0)
    return PositionCurve(
        means, variances, counts, local.max_position, max(local.min_docs, full.min_docs)
    )


# --- wire formats ---------------------------------------------------------


def read_score_records(path) -> list[ScoreRecord]:
    records = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                words = tuple(
                    WordScore(
                        word=w["word"],
                        logprob=float(w["logprob"]),
                        n_subtokens=int(w.get("n_subtokens", 1)),
                        is_title=bool(w.get("is_title", False)),
                    )
                    for w in rec["words"]
                )
                records.append(ScoreRecord(doc_id=str(rec["doc_id"]), words=words))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed score record: {exc}") from exc
    return records


def write_score_records(records: Iterable[ScoreRecord], path, header: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        for rec in records:
            obj = {
                "doc_id": rec.doc_id,
                "words": [
                    {
                        "word": w.word,
                        "logprob": w.logprob,
                        "n_subtokens": w.n_subtokens,
                        "is_title": w.is_title,
                    }
                    for w in rec.words
                ],
            }
            f.write(json.dumps(obj, ensure_ascii=False) + "\n")


def read_surprisals(path) -> list[SurprisalSequence]:
    out = []
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                out.append(
                    SurprisalSequence(
                        str(rec["doc_id"]), tuple(float(v) for v in rec["values"]), rec["source"]
                    )
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed surprisal record: {exc}") from exc
    return out


def write_surprisals(
    seqs: Iterable[SurprisalSequence], path, header: Iterable[str] = ()
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        for seq in seqs:
            obj = {"doc_id": seq.doc_id, "source": seq.source, "values": list(seq.values)}
            f.write(json.dumps(obj) + "\n")
