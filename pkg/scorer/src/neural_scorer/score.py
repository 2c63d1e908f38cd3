"""Score documents with a model adapter and emit word-level records.

A record line carries, per word, the sum of its subtoken log probabilities
(natural log), the number of scored subtokens, and whether the word came
from the title.  The stream is newline-delimited JSON with '#' header
comments recording the configuration, including how the first subtoken of a
document was handled (scored under BOS, or left unscored when the model has
no BOS token).
"""

from __future__ import annotations

import bisect
import json
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from neural_scorer.corpusio import CorpusDoc, render_text, render_words
from neural_scorer.windows import plan_windows


@dataclass(frozen=True)
class ScorerConfig:
    model: str = "toy"
    context_window: int = 1024
    stride: int = 64
    title_mode: str = "omit"
    device: str = "cpu"

    def __post_init__(self):
        if not 1 <= self.stride <= self.context_window:
            raise ValueError(
                f"need 1 <= stride <= context_window, got {self.stride}/{self.context_window}"
            )


def _assign_tokens_to_words(doc_id, enc, spans):
    """Map each subtoken to the word whose span contains it.

    Tokenizer/corpus drift (a token crossing a word boundary, a word with no
    subtokens) is a hard error, mirroring the ingest-side policy.
    """
    starts = [s for s, _ in spans]
    owner = []
    for tok_idx, (s, e) in enumerate(enc.offsets):
        wi = bisect.bisect_right(starts, s) - 1
        if wi < 0 or s < spans[wi][0] or e > spans[wi][1]:
            raise ValueError(
                f"doc {doc_id}: subtoken {tok_idx} at chars {s}:{e} does not fall "
                f"inside a single word"
            )
        owner.append(wi)
    counts = np.bincount(owner, minlength=len(spans)) if owner else np.zeros(len(spans), int)
    if np.any(counts == 0):
        missing = int(np.argmin(counts))
        raise ValueError(f"doc {doc_id}: word index {missing} received no subtokens")
    if owner != sorted(owner):
        raise ValueError(f"doc {doc_id}: tokenizer emitted out-of-order offsets")
    return owner


def score_document(doc: CorpusDoc, adapter, config: ScorerConfig) -> dict:
    """One wire-format record: per-word summed subtoken logprobs."""
    words, n_title = render_words(doc, config.title_mode)
    if not words:
        raise ValueError(f"doc {doc.id} is empty")
    text, spans = render_text(words, n_title)
    enc = adapter.encode(text)
    if not enc.ids:
        raise ValueError(f"doc {doc.id}: tokenizer produced no subtokens")
    owner = _assign_tokens_to_words(doc.id, enc, spans)
    word_starts = [i for i in range(len(owner)) if i == 0 or owner[i] != owner[i - 1]]
    logprobs = np.empty(len(enc.ids))
    for w in plan_windows(len(enc.ids), word_starts, config.context_window, config.stride):
        lps = adapter.window_logprobs(enc.ids[w.start : w.end], prepend_bos=w.start == 0)
        logprobs[w.score_start : w.end] = lps[w.score_start - w.start :]
    out = []
    for wi, word in enumerate(words):
        vals = [logprobs[t] for t in range(len(owner)) if owner[t] == wi]
        scored = [v for v in vals if not math.isnan(v)]
        out.append(
            {
                "word": word,
                "logprob": float(sum(scored)),
                "n_subtokens": len(scored),
                "is_title": wi < n_title,
            }
        )
    return {"doc_id": doc.id, "words": out}


def stream_header(adapter, config: ScorerConfig) -> list[str]:
    first = "bos" if getattr(adapter, "bos_id", None) is not None else "unscored"
    return [
        f"model={config.model} context_window={config.context_window} "
        f"stride={config.stride} title_mode={config.title_mode}",
        f"first_subtoken={first}",
    ]


def write_records(records, path, header: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def _scan_existing(path) -> set[str]:
    """Doc ids already completed in a partial output file.

    A truncated final line (interrupted write) is dropped by rewriting the
    file without it; a malformed line anywhere else is an error.
    """
    done = set()
    with open(path, encoding="utf-8") as f:
        lines = f.readlines()
    keep = len(lines)
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            rec = json.loads(stripped)
            done.add(str(rec["doc_id"]))
        except (json.JSONDecodeError, KeyError) as exc:
            if i == len(lines) - 1:
                keep = i  # interrupted mid-write; rescore this document
            else:
                raise ValueError(f"{path}:{i + 1}: malformed record in resume file") from exc
    if keep < len(lines):
        with open(path, "w", encoding="utf-8") as f:
            f.writelines(lines[:keep])
    return done


def score_corpus(
    docs: Sequence[CorpusDoc],
    manifest_ids: Sequence[str],
    adapter,
    config: ScorerConfig,
    out_path,
    resume: bool = False,
) -> int:
    """Score manifest documents in order, appending records to ``out_path``.

    With ``resume``, documents already present in the output are skipped.
    Returns the number of documents scored in this call.
    """
    by_id = {d.id: d for d in docs}
    missing = [i for i in manifest_ids if i not in by_id]
    if missing:
        raise ValueError(f"manifest names unknown document ids, e.g. {missing[0]!r}")
    done: set[str] = set()
    if resume and os.path.exists(out_path) and os.path.getsize(out_path) > 0:
        done = _scan_existing(out_path)
        mode = "a"
    else:
        mode = "w"
    scored = 0
    with open(out_path, mode, encoding="utf-8") as f:
        if mode == "w":
            for line in stream_header(adapter, config):
                f.write(f"# {line}\n")
        for doc_id in manifest_ids:
            if doc_id in done:
                continue
            rec = score_document(by_id[doc_id], adapter, config)
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")
            f.flush()
            scored += 1
    return scored
