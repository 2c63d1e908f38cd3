"""Count-based trigram language model with linear interpolation smoothing.

Probabilities are a weighted sum of trigram, bigram, and unigram maximum
likelihood estimates: lambda1 * P(x|a,b) + lambda2 * P(x|b) +
(1 - lambda1 - lambda2) * P(x), with lambda1=0.5 and lambda2=0.3 by default.

Every document is padded with two start-of-document tokens (so the first real
word has a full trigram context) and one end-of-document token.  The end
token makes every queryable context's continuation counts sum to the context
count, which keeps the interpolated distribution normalized exactly.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from entropyrate.corpus import Vocabulary

DEFAULT_LAMBDA1 = 0.5
DEFAULT_LAMBDA2 = 0.3


@dataclass
class TrigramCounts:
    """Raw n-gram occurrence counts over boundary-padded id sequences."""

    c1: Counter = field(default_factory=Counter)
    c2: Counter = field(default_factory=Counter)
    c3: Counter = field(default_factory=Counter)
    total_tokens: int = 0

    def merge(self, other: "TrigramCounts") -> "TrigramCounts":
        self.c1.update(other.c1)
        self.c2.update(other.c2)
        self.c3.update(other.c3)
        self.total_tokens += other.total_tokens
        return self


def pad_sequence(ids: Sequence[int], bos: int, eos: int) -> list[int]:
    return [bos, bos, *ids, eos]


def count_sequences(seqs: Iterable[Sequence[int]]) -> TrigramCounts:
    """Tally unigram/bigram/trigram counts over already-padded sequences."""
    counts = TrigramCounts()
    c1, c2, c3 = counts.c1, counts.c2, counts.c3
    for seq in seqs:
        n = len(seq)
        counts.total_tokens += n
        c1.update(seq)
        for i in range(n - 1):
            c2[(seq[i], seq[i + 1])] += 1
        for i in range(n - 2):
            c3[(seq[i], seq[i + 1], seq[i + 2])] += 1
    return counts


def count_corpus(seqs: Sequence[Sequence[int]], workers: int = 1) -> TrigramCounts:
    """Count padded sequences, optionally sharding across processes.

    Shard counts merge associatively, so the result is independent of the
    worker count.
    """
    if workers <= 1 or len(seqs) < 2 * workers:
        return count_sequences(seqs)
    shard_size = (len(seqs) + workers - 1) // workers
    shards = [seqs[i : i + shard_size] for i in range(0, len(seqs), shard_size)]
    merged = TrigramCounts()
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for part in pool.map(count_sequences, shards):
            merged.merge(part)
    return merged


def mle(counts: TrigramCounts, order: int, context: Sequence[int], nxt: int) -> float:
    """Maximum likelihood estimate C(context + next) / C(context).

    Returns 0.0 when the context was never seen; the unigram case divides by
    the total token count.
    """
    if counts.total_tokens == 0:
        raise ValueError("untrained model")
    if order != len(context) + 1:
        raise ValueError(f"order {order} does not match context length {len(context)}")
    if order == 1:
        return counts.c1[nxt] / counts.total_tokens
    if order == 2:
        denom = counts.c1[context[0]]
        return counts.c2[(context[0], nxt)] / denom if denom else 0.0
    if order == 3:
        denom = counts.c2[(context[0], context[1])]
        return counts.c3[(context[0], context[1], nxt)] / denom if denom else 0.0
    raise ValueError(f"unsupported order {order}")


@dataclass(eq=False)
class InterpolatedTrigramModel:
    counts: TrigramCounts
    vocab: Vocabulary
    lambda1: float = DEFAULT_LAMBDA1
    lambda2: float = DEFAULT_LAMBDA2

    def __post_init__(self):
        if not (0.0 <= self.lambda1 <= 1.0 and 0.0 <= self.lambda2 <= 1.0):
            raise ValueError("interpolation weights must lie in [0, 1]")
        if self.lambda1 + self.lambda2 > 1.0:
            raise ValueError("lambda1 + lambda2 must be <= 1")
        # Context (follower) totals.  For every token except the document-end
        # symbol these equal the raw counts, but using follower totals keeps
        # the interpolated distribution normalized for contexts at document
        # edges too.
        ctx1: Counter = Counter()
        for (b, _x), c in self.counts.c2.items():
            ctx1[b] += c
        ctx2: Counter = Counter()
        for (a, b, _x), c in self.counts.c3.items():
            ctx2[(a, b)] += c
        self._ctx1 = ctx1
        self._ctx2 = ctx2

    @classmethod
    def train(
        cls,
        id_seqs: Sequence[Sequence[int]],
        vocab: Vocabulary,
        lambda1: float = DEFAULT_LAMBDA1,
        lambda2: float = DEFAULT_LAMBDA2,
        workers: int = 1,
    ) -> "InterpolatedTrigramModel":
        """Train from unpadded vocabulary-mapped sequences."""
        padded = [pad_sequence(s, vocab.bos_id, vocab.eos_id) for s in id_seqs]
        return cls(count_corpus(padded, workers=workers), vocab, lambda1, lambda2)

    def prob(self, context2: tuple[int, int], nxt: int) -> float:
        """Interpolated P(next | a, b).

        If the (a, b) context is unseen the trigram weight folds into the
        bigram term; if b itself is unseen everything folds into the unigram
        term.  This keeps the distribution over the vocabulary summing to 1.
        """
        if not 0 <= nxt < len(self.vocab):
            raise ValueError(f"token id {nxt} outside vocabulary (map to <unk> first)")
        counts = self.counts
        if counts.total_tokens == 0:
            raise ValueError("untrained model")
        a, b = context2
        uni = counts.c1[nxt] / counts.total_tokens
        c1b = self._ctx1[b]
        if c1b == 0:
            return uni
        bi = counts.c2[(b, nxt)] / c1b
        c2ab = self._ctx2[(a, b)]
        if c2ab == 0:
            return (self.lambda1 + self.lambda2) * bi + (1.0 - self.lambda1 - self.lambda2) * uni
        tri = counts.c3[(a, b, nxt)] / c2ab
        return (
            self.lambda1 * tri
            + self.lambda2 * bi
            + (1.0 - self.lambda1 - self.lambda2) * uni
        )

    def surprisal(self, context2: tuple[int, int], nxt: int, log_base: float = 2.0) -> float:
        p = self.prob(context2, nxt)
        if p <= 0.0:
            raise ValueError(
                f"token id {nxt} has zero probability: it never occurred in training "
                "(can happen for <unk> when no training word fell below min_count)"
            )
        return -math.log(p) / math.log(log_base)

    def sequence_surprisals(
        self, ids: Sequence[int], log_base: float = 2.0
    ) -> list[float]:
        """Per-token surprisal of an unpadded id sequence, with boundary padding."""
        padded = pad_sequence(ids, self.vocab.bos_id, self.vocab.eos_id)
        return [
            self.surprisal((padded[i - 2], padded[i - 1]), padded[i], log_base)
            for i in range(2, len(padded) - 1)
        ]

    # --- persistence ---------------------------------------------------

    def save(self, path) -> None:
        """Plain-text triple list; round-trips bit-exactly."""
        counts = self.counts
        with open(path, "w", encoding="utf-8") as f:
            f.write("# entropyrate trigram model v1\n")
            f.write(f"lambda1 {self.lambda1!r}\n")
            f.write(f"lambda2 {self.lambda2!r}\n")
            f.write(f"total {counts.total_tokens}\n")
            f.write(f"vocab_size {len(self.vocab)}\n")
            f.write(f"boundary {self.vocab.bos_id} {self.vocab.eos_id}\n")
            for k in sorted(counts.c1):
                f.write(f"1 {k} {counts.c1[k]}\n")
            for a, b in sorted(counts.c2):
                f.write(f"2 {a} {b} {counts.c2[(a, b)]}\n")
            for a, b, c in sorted(counts.c3):
                f.write(f"3 {a} {b} {c} {counts.c3[(a, b, c)]}\n")

    @classmethod
    def load(cls, path, vocab: Vocabulary) -> "InterpolatedTrigramModel":
        counts = TrigramCounts()
        header: dict[str, str] = {}
        with open(path, encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split()
                if parts[0] in ("lambda1", "lambda2", "total", "vocab_size", "boundary"):
                    header[parts[0]] = " ".join(parts[1:])
                elif parts[0] == "1":
                    counts.c1[int(parts[1])] = int(parts[2])
                elif parts[0] == "2":
                    counts.c2[(int(parts[1]), int(parts[2]))] = int(parts[3])
                elif parts[0] == "3":
                    counts.c3[(int(parts[1]), int(parts[2]), int(parts[3]))] = int(parts[4])
                else:
                    raise ValueError(f"{path}: unrecognized model line {line!r}")
        for key in ("lambda1", "lambda2", "total", "vocab_size"):
            if key not in header:
                raise ValueError(f"{path}: missing model header field {key}")
        if int(header["vocab_size"]) != len(vocab):
            raise ValueError(
                f"{path}: model was trained with vocab of size {header['vocab_size']}, "
                f"got {len(vocab)}"
            )
        counts.total_tokens = int(header["total"])
        return cls(counts, vocab, float(header["lambda1"]), float(header["lambda2"]))
