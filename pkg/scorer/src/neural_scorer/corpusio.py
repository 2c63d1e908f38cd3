"""Reading the corpus wire formats consumed by this component.

The analysis toolkit and this scorer share three file contracts and nothing
else: newline-delimited JSON corpora (fields id/text and optional
title/date/source, '#' comment lines), plain-text id manifests, and the
score-record stream this package emits.  The tokenizer here must match the
analysis side exactly (split on whitespace, lowercase), since emitted words
are checked against the corpus tokenization 1:1 at ingest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

TITLE_MODES = ("newline", "colon_newline", "omit")


@dataclass(frozen=True)
class CorpusDoc:
    id: str
    body: tuple[str, ...]
    title: str | None = None


def tokenize(text: str, lowercase: bool = True) -> list[str]:
    words = text.split()
    if lowercase:
        words = [w.lower() for w in words]
    return words


def read_corpus(path, lowercase: bool = True) -> list[CorpusDoc]:
    docs = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                doc = CorpusDoc(
                    id=str(rec["id"]),
                    body=tuple(tokenize(rec["text"], lowercase)),
                    title=rec.get("title"),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed corpus record: {exc}") from exc
            if doc.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    return docs


def read_manifest(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]


def render_words(doc: CorpusDoc, title_mode: str, lowercase: bool = True):
    """Word sequence fed to the model, and how many of them are title words.

    "newline" prepends the title words, "colon_newline" additionally suffixes
    the last title word with ":", "omit" drops the title.  A missing title
    falls back to omit.
    """
    if title_mode not in TITLE_MODES:
        raise ValueError(f"unknown title_mode {title_mode!r}")
    if title_mode == "omit":
        return tuple(doc.body), 0
    title_words = tokenize(doc.title or "", lowercase)
    if not title_words:
        return tuple(doc.body), 0
    if title_mode == "colon_newline":
        title_words = title_words[:-1] + [title_words[-1] + ":"]
    return tuple(title_words) + tuple(doc.body), len(title_words)


def render_text(words, n_title: int):
    """Single string for the model: title line (if any), then the body.

    Returns the text and per-word (start, end) character spans into it.
    """
    spans = []
    parts = []
    pos = 0
    for i, w in enumerate(words):
        if i > 0:
            sep = "\n" if i == n_title and n_title > 0 else " "
            parts.append(sep)
            pos += 1
        spans.append((pos, pos + len(w)))
        parts.append(w)
        pos += len(w)
    return "".join(parts), spans
