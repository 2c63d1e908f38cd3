"""Corpus ingestion, tokenization, closed vocabularies, and splits.

Corpus files are newline-delimited JSON records, one document per line, with
fields: id (required), text (required), title, date, source.  Tokenization is
whitespace splitting with optional lowercasing; punctuation is kept attached
to its word.
"""

from __future__ import annotations

import json
import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

log = logging.getLogger(__name__)

UNK = "<unk>"
BOS = "<s>"
EOS = "</s>"
SPECIALS = (UNK, BOS, EOS)

TITLE_MODES = ("newline", "colon_newline", "omit")


@dataclass(frozen=True)
class Document:
    """One article: id, optional title, and the body as a word sequence."""

    id: str
    body: tuple[str, ...]
    title: str | None = None
    date: str | None = None
    source: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("document id must be non-empty")
        for w in self.body:
            if any(ch.isspace() for ch in w):
                raise ValueError(f"body word {w!r} contains whitespace (doc {self.id})")

    def __len__(self) -> int:
        return len(self.body)


def tokenize(text: str, lowercase: bool = True) -> list[str]:
    """Split on runs of whitespace; optionally lowercase.

    Empty input yields an empty list.  Joining the output with single spaces
    and re-tokenizing is idempotent.
    """
    words = text.split()
    if lowercase:
        words = [w.lower() for w in words]
    return words


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Closed vocabulary with dense ids.

    Id 0 is the unknown symbol, ids 1 and 2 the document-boundary symbols.
    Every other entry occurred at least ``min_count`` times in training data.
    """

    words: tuple[str, ...]
    min_count: int
    index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if tuple(self.words[:3]) != SPECIALS:
            raise ValueError(f"vocabulary must start with {SPECIALS}")
        if not self.index:
            object.__setattr__(self, "index", {w: i for i, w in enumerate(self.words)})

    unk_id = 0
    bos_id = 1
    eos_id = 2

    def __len__(self) -> int:
        return len(self.words)

    def lookup(self, word: str) -> int:
        return self.index.get(word, self.unk_id)

    def map_words(self, words: Iterable[str]) -> list[int]:
        index = self.index
        return [index.get(w, 0) for w in words]

    def save(self, path) -> None:
        """One token per line; line number is the id; first line is <unk>."""
        with open(path, "w", encoding="utf-8") as f:
            for w in self.words:
                f.write(w + "\n")

    @classmethod
    def load(cls, path) -> "Vocabulary":
        with open(path, encoding="utf-8") as f:
            words = tuple(line.rstrip("\n") for line in f)
        if len(words) < 3 or words[:3] != SPECIALS:
            raise ValueError(f"{path}: not a vocabulary file (missing special tokens)")
        # min_count is not stored in the file format
        return cls(words=words, min_count=0)


def build_vocabulary(train_docs: Sequence[Document], min_count: int = 5) -> Vocabulary:
    """Keep words occurring >= min_count times; everything else maps to <unk>."""
    if min_count < 1:
        raise ValueError("min_count must be >= 1")
    if not train_docs:
        raise ValueError("empty corpus")
    counts: Counter[str] = Counter()
    for doc in train_docs:
        counts.update(doc.body)
    kept = sorted(
        (w for w, c in counts.items() if c >= min_count and w not in SPECIALS),
        key=lambda w: (-counts[w], w),
    )
    return Vocabulary(words=SPECIALS + tuple(kept), min_count=min_count)


@dataclass(frozen=True)
class RenderedDocument:
    """A document with its title prepended per the rendering policy.

    ``words`` is the full token sequence fed to a scorer; the first
    ``n_title`` words belong to the title and are excluded from position
    curves downstream.
    """

    doc_id: str
    words: tuple[str, ...]
    n_title: int
    title_missing: bool = False

    @property
    def body_words(self) -> tuple[str, ...]:
        return self.words[self.n_title:]

    def text(self, raw_title: str | None = None) -> str:
        """Render to a single string (title line, then the body)."""
        body = " ".join(self.words[self.n_title:])
        if self.n_title == 0:
            return body
        title = " ".join(self.words[: self.n_title])
        return f"{title}\n{body}"


def render_document(
    doc: Document, title_mode: str = "omit", lowercase: bool = True
) -> RenderedDocument:
    """Prepend the title per title_mode: "newline" puts the title on its own
    line, "colon_newline" additionally suffixes it with ":", "omit" drops it.

    A missing title with a non-omit mode falls back to omit (flagged via
    ``title_missing`` so callers can count warnings).
    """
    if title_mode not in TITLE_MODES:
        raise ValueError(f"unknown title_mode {title_mode!r}")
    if title_mode == "omit":
        return RenderedDocument(doc.id, tuple(doc.body), 0)
    title_words = tokenize(doc.title or "", lowercase)
    if not title_words:
        log.debug("document %s has no title; falling back to omit", doc.id)
        return RenderedDocument(doc.id, tuple(doc.body), 0, title_missing=True)
    if title_mode == "colon_newline":
        title_words = title_words[:-1] + [title_words[-1] + ":"]
    return RenderedDocument(doc.id, tuple(title_words) + tuple(doc.body), len(title_words))


@dataclass(frozen=True)
class CorpusSplit:
    train: tuple[Document, ...]
    validation: tuple[Document, ...]
    test: tuple[Document, ...]
    seed: int

    def __post_init__(self):
        ids = [d.id for part in (self.train, self.validation, self.test) for d in part]
        if len(ids) != len(set(ids)):
            raise ValueError("split parts are not disjoint by id")


def split_corpus(
    docs: Sequence[Document], sizes: tuple[int, int, int], seed: int
) -> CorpusSplit:
    """Deterministic random split into train/validation/test of the given sizes."""
    n_train, n_val, n_test = sizes
    need = n_train + n_val + n_test
    if need > len(docs):
        raise ValueError(
            f"requested {need} documents ({n_train}/{n_val}/{n_test}) "
            f"but corpus has only {len(docs)}"
        )
    ordered = sorted(docs, key=lambda d: d.id)
    random.Random(seed).shuffle(ordered)
    return CorpusSplit(
        train=tuple(ordered[:n_train]),
        validation=tuple(ordered[n_train : n_train + n_val]),
        test=tuple(ordered[n_train + n_val : need]),
        seed=seed,
    )


def read_corpus(path, lowercase: bool = True) -> list[Document]:
    """Read a newline-delimited JSON corpus; lines starting with '#' are comments."""
    docs = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = json.loads(line)
                doc = Document(
                    id=str(rec["id"]),
                    body=tuple(tokenize(rec["text"], lowercase)),
                    title=rec.get("title"),
                    date=rec.get("date"),
                    source=rec.get("source"),
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"{path}:{lineno}: malformed corpus record: {exc}") from exc
            if doc.id in seen:
                raise ValueError(f"{path}:{lineno}: duplicate document id {doc.id!r}")
            seen.add(doc.id)
            docs.append(doc)
    return docs


def write_corpus(docs: Iterable[Document], path, header: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        for doc in docs:
            rec = {"id": doc.id, "text": " ".join(doc.body)}
            if doc.title is not None:
                rec["title"] = doc.title
            if doc.date is not None:
                rec["date"] = doc.date
            if doc.source is not None:
                rec["source"] = doc.source
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


def read_manifest(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip() and not line.startswith("#")]


def write_manifest(ids: Iterable[str], path, header: Iterable[str] = ()) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        for doc_id in ids:
            f.write(doc_id + "\n")


def select_documents(docs: Sequence[Document], ids: Sequence[str]) -> list[Document]:
    """Pick documents by manifest order; unknown ids are an error."""
    by_id = {d.id: d for d in docs}
    missing = [i for i in ids if i not in by_id]
    if missing:
        raise ValueError(f"manifest names {len(missing)} unknown document ids, e.g. {missing[0]!r}")
    return [by_id[i] for i in ids]
