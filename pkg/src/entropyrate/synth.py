"""Synthetic corpora with analytically known position-dependent entropy.

The workhorse is a first-order Markov source over a small alphabet whose
transition matrix is mixed toward the uniform distribution by a
position-dependent modulation weight, so conditional entropy at each position
is available in closed form.  Two extra generators support end-to-end
checks: a Zipf-skewed i.i.d. corpus whose word distribution flattens over
early positions (news-like vocabulary warmup), and a topic-token source
where a document-initial cue predicts words far downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from entropyrate.corpus import Document
from entropyrate.scoring import ScoreRecord, WordScore

LN2 = math.log(2.0)


@dataclass(frozen=True)
class Modulation:
    """Mixing weight toward uniform as a function of position.

    kind "constant": always ``start``.  kind "ramp": linear from ``start`` at
    position 0 to ``end`` at position ``ramp_length``, constant after.
    """

    kind: str = "constant"
    start: float = 0.0
    end: float = 0.0
    ramp_length: int = 1

    def __call__(self, position: int) -> float:
        if self.kind == "constant":
            return self.start
        if self.kind == "ramp":
            t = min(max(position, 0), self.ramp_length) / self.ramp_length
            return self.start + (self.end - self.start) * t
        raise ValueError(f"unknown modulation kind {self.kind!r}")


@dataclass(frozen=True)
class MarkovSource:
    transition: np.ndarray
    initial: np.ndarray
    modulation: Modulation = field(default_factory=Modulation)
    length: int = 100  # fixed document length
    geometric_p: float | None = None  # if set, lengths ~ Geometric(p), min 1

    def __post_init__(self):
        t = np.asarray(self.transition, dtype=float)
        init = np.asarray(self.initial, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise ValueError("transition must be a square matrix")
        if np.any(t < 0) or np.any(np.abs(t.sum(axis=1) - 1.0) > 1e-12):
            raise ValueError("transition rows must be non-negative and sum to 1")
        if init.shape != (t.shape[0],) or np.any(init < 0) or abs(init.sum() - 1.0) > 1e-12:
            raise ValueError("initial must be a probability vector over the alphabet")
        object.__setattr__(self, "transition", t)
        object.__setattr__(self, "initial", init)
        for pos in (0, 1, 10, 10**6):
            m = self.modulation(pos)
            if not 0.0 <= m <= 1.0:
                raise ValueError("modulation must stay in [0, 1]")

    @property
    def alphabet_size(self) -> int:
        return self.transition.shape[0]

    def effective_transition(self, position: int) -> np.ndarray:
        """(1 - m(i)) * T + m(i) * Uniform, governing the symbol at position i."""
        m = self.modulation(position)
        k = self.alphabet_size
        return (1.0 - m) * self.transition + m * np.full((k, k), 1.0 / k)

    def effective_initial(self) -> np.ndarray:
        m = self.modulation(0)
        k = self.alphabet_size
        return (1.0 - m) * self.initial + m * np.full(k, 1.0 / k)

    @classmethod
    def from_spec(cls, spec: dict) -> "MarkovSource":
        """Build from a JSON-style dict (the CLI's source spec file)."""
        mod = spec.get("modulation", {})
        return cls(
            transition=np.asarray(spec["transition"], dtype=float),
            initial=np.asarray(spec["initial"], dtype=float),
            modulation=Modulation(
                kind=mod.get("kind", "constant"),
                start=float(mod.get("start", 0.0)),
                end=float(mod.get("end", 0.0)),
                ramp_length=int(mod.get("ramp_length", 1)),
            ),
            length=int(spec.get("length", 100)),
            geometric_p=spec.get("geometric_p"),
        )


def _doc_rngs(seed: int, n_docs: int) -> list[np.random.Generator]:
    # Per-document generators from spawned seed sequences: reproducible
    # regardless of how documents are distributed across workers.
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n_docs)]


def generate(
    source: MarkovSource, n_docs: int, seed: int, id_prefix: str = "synth"
) -> list[Document]:
    """Sample documents word by word; symbol k renders as word "s<k>"."""
    if n_docs < 1:
        raise ValueError("n_docs must be >= 1")
    # inverse-transform sampling against cached cumulative rows: one uniform
    # draw per word, no per-step distribution setup
    cum_init = np.cumsum(source.effective_initial())
    cum_rows: dict[float, np.ndarray] = {}

    def rows_for(pos: int) -> np.ndarray:
        m = source.modulation(pos)
        if m not in cum_rows:
            cum_rows[m] = np.cumsum(source.effective_transition(pos), axis=1)
        return cum_rows[m]

    words = [f"s{k}" for k in range(source.alphabet_size)]
    docs = []
    for i, rng in enumerate(_doc_rngs(seed, n_docs)):
        if source.geometric_p is not None:
            length = int(rng.geometric(source.geometric_p))
        else:
            length = source.length
        u = rng.random(length)
        prev = min(int(np.searchsorted(cum_init, u[0], side="right")), source.alphabet_size - 1)
        body = [words[prev]]
        for pos in range(1, length):
            prev = min(int(np.searchsorted(rows_for(pos)[prev], u[pos], side="right")), source.alphabet_size - 1)
            body.append(words[prev])
        docs.append(Document(id=f"{id_prefix}{i:05d}", body=tuple(body), source="synthetic"))
    return docs


def true_entropy(source: MarkovSource, position: int) -> float:
    """Exact expected conditional entropy (bits) of the symbol at ``position``
    given the previous symbol, averaging over the exact marginal state
    distribution propagated from the initial distribution."""
    if position < 1:
        raise ValueError("position must be >= 1")
    mu = source.effective_initial()
    for pos in range(1, position):
        mu = mu @ source.effective_transition(pos)
    t_eff = source.effective_transition(position)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(t_eff > 0, np.log2(np.where(t_eff > 0, t_eff, 1.0)), 0.0)
    row_entropy = -(t_eff * logs).sum(axis=1)
    return float(mu @ row_entropy)


def oracle_records(source: MarkovSource, docs: Sequence[Document]) -> list[ScoreRecord]:
    """Exact per-word log probabilities under the generating source.

    Feeding these through the external-score ingestion path gives a scorer
    whose mean surprisal converges to true_entropy.
    """
    records = []
    init = source.effective_initial()
    rows: dict[float, np.ndarray] = {}

    def transition_for(pos: int) -> np.ndarray:
        m = source.modulation(pos)
        if m not in rows:
            rows[m] = source.effective_transition(pos)
        return rows[m]

    for doc in docs:
        symbols = [int(w[1:]) for w in doc.body]
        scores = [WordScore(doc.body[0], math.log(init[symbols[0]]))]
        for pos in range(1, len(symbols)):
            p = transition_for(pos)[symbols[pos - 1], symbols[pos]]
            scores.append(WordScore(doc.body[pos], math.log(p)))
        records.append(ScoreRecord(doc.id, tuple(scores)))
    return records


def zipf_warmup_corpus(
    n_docs: int,
    doc_length: int,
    vocab_size: int,
    seed: int,
    s_start: float = 1.6,
    s_end: float = 1.0,
    ramp: int = 500,
    id_prefix: str = "zipf",
) -> list[Document]:
    """News-like i.i.d. corpus whose Zipf exponent flattens with position.

    Early positions favor a small set of frequent words; later positions put
    more mass on the tail, so surprisal under any position-blind model rises
    over the document.
    """
    if n_docs < 1 or doc_length < 1 or vocab_size < 2:
        raise ValueError("need n_docs >= 1, doc_length >= 1, vocab_size >= 2")
    ranks = np.arange(1, vocab_size + 1, dtype=float)
    cum = np.empty((doc_length, vocab_size))
    for pos in range(doc_length):
        t = min(pos, ramp) / ramp
        s = s_start + (s_end - s_start) * t
        pmf = ranks**-s
        pmf /= pmf.sum()
        cum[pos] = np.cumsum(pmf)
    cum[:, -1] = 1.0
    rng = np.random.default_rng(seed)
    u = rng.random((n_docs, doc_length))
    choices = np.empty((n_docs, doc_length), dtype=np.int64)
    for pos in range(doc_length):
        choices[:, pos] = np.searchsorted(cum[pos], u[:, pos], side="right")
    np.clip(choices, 0, vocab_size - 1, out=choices)
    names = [f"w{c}" for c in range(vocab_size)]
    docs = []
    for i in range(n_docs):
        body = tuple(names[c] for c in choices[i])
        docs.append(Document(id=f"{id_prefix}{i:05d}", body=body, source="synthetic"))
    return docs


def topic_corpus(
    n_docs: int,
    doc_length: int,
    seed: int,
    n_topics: int = 8,
    n_background: int = 8,
    p_start: float = 0.05,
    p_end: float = 0.5,
    ramp: int = 200,
    id_prefix: str = "topic",
) -> tuple[list[Document], list[ScoreRecord]]:
    """Long-range-cue corpus plus exact full-context score records.

    Word 0 names one of ``n_topics`` topics.  Each later word repeats the
    topic word with probability p(i) (ramping from p_start to p_end), else is
    a uniform background word.  A scorer that remembers the topic assigns the
    topic word probability p(i); a local n-gram model mostly cannot, so the
    local-minus-full surprisal gap is positive and grows with p(i).
    """
    if not (0.0 < p_start <= p_end < 1.0):
        raise ValueError("need 0 < p_start <= p_end < 1")
    docs = []
    records = []
    for i, rng in enumerate(_doc_rngs(seed, n_docs)):
        topic = int(rng.integers(n_topics))
        words = [f"t{topic}"]
        scores = [WordScore(words[0], math.log(1.0 / n_topics))]
        for pos in range(1, doc_length):
            p = p_start + (p_end - p_start) * (min(pos, ramp) / ramp)
            if rng.random() < p:
                w = f"t{topic}"
                lp = math.log(p)
            else:
                w = f"b{int(rng.integers(n_background))}"
                lp = math.log((1.0 - p) / n_background)
            words.append(w)
            scores.append(WordScore(w, lp))
        docs.append(Document(id=f"{id_prefix}{i:05d}", body=tuple(words), source="synthetic"))
        records.append(ScoreRecord(docs[-1].id, tuple(scores)))
    return docs, records


def write_true_entropy_csv(source: MarkovSource, max_position: int, path, header=()) -> None:
    """Columns: position, entropy_bits, for positions 1..max_position-1."""
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write("position,entropy_bits\n")
        mu = source.effective_initial()
        for pos in range(1, max_position):
            t_eff = source.effective_transition(pos)
            with np.errstate(divide="ignore"):
                logs = np.where(t_eff > 0, np.log2(np.where(t_eff > 0, t_eff, 1.0)), 0.0)
            h = float(mu @ (-(t_eff * logs).sum(axis=1)))
            f.write(f"{pos},{h!r}\n")
            mu = mu @ t_eff
