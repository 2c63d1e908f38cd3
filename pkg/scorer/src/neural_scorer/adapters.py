"""Model adapters: tokenize text with character offsets, score token windows.

An adapter provides::

    bos_id: int | None        beginning-of-sequence token id, if the model
                              defines one
    encode(text) -> Encoding  subtoken ids plus (start, end) character spans
    window_logprobs(ids, prepend_bos) -> np.ndarray
                              entry i is log P(ids[i] | preceding ids) in
                              nats; entry 0 is NaN when prepend_bos is False
                              (no conditioning context, token unscored)

The toy adapter here is a fully deterministic bigram-over-characters model
used for tests and for exercising the pipeline without any ML runtime.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np


@dataclass(frozen=True)
class Encoding:
    ids: tuple[int, ...]
    offsets: tuple[tuple[int, int], ...]  # character spans, end exclusive

    def __post_init__(self):
        if len(self.ids) != len(self.offsets):
            raise ValueError("ids and offsets length mismatch")


class ToyBigramAdapter:
    """Character-level bigram model with a fixed logit table.

    Each non-whitespace character is one subtoken.  With an explicit
    ``token_map`` only those characters are legal; otherwise characters hash
    into ids 1..vocab-1 (id 0 is reserved for BOS).
    """

    def __init__(
        self,
        logits: np.ndarray,
        token_map: Mapping[str, int] | None = None,
        bos_id: int | None = 0,
    ):
        logits = np.asarray(logits, dtype=float)
        if logits.ndim != 2 or logits.shape[0] != logits.shape[1]:
            raise ValueError("logit table must be square")
        self.logits = logits
        self.token_map = dict(token_map) if token_map is not None else None
        self.bos_id = bos_id
        # row-wise log softmax, computed once
        shifted = logits - logits.max(axis=1, keepdims=True)
        self._log_probs = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))

    @property
    def vocab_size(self) -> int:
        return self.logits.shape[0]

    def _char_id(self, ch: str) -> int:
        if self.token_map is not None:
            if ch not in self.token_map:
                raise ValueError(f"character {ch!r} not in the toy token map")
            return self.token_map[ch]
        return 1 + (ord(ch) % (self.vocab_size - 1))

    def encode(self, text: str) -> Encoding:
        ids = []
        offsets = []
        for i, ch in enumerate(text):
            if ch.isspace():
                continue
            ids.append(self._char_id(ch))
            offsets.append((i, i + 1))
        return Encoding(tuple(ids), tuple(offsets))

    def window_logprobs(self, ids: Sequence[int], prepend_bos: bool) -> np.ndarray:
        out = np.empty(len(ids))
        prev = self.bos_id if prepend_bos else None
        for i, tok in enumerate(ids):
            out[i] = np.nan if prev is None else self._log_probs[prev, tok]
            prev = tok
        return out


def default_toy_adapter(vocab_size: int = 64) -> ToyBigramAdapter:
    """Deterministic toy model for pipeline tests and dry runs."""
    if vocab_size < 2:
        raise ValueError("vocab_size must be >= 2")
    p, n = np.meshgrid(
        np.arange(vocab_size), np.arange(vocab_size), indexing="ij"
    )
    logits = ((31 * p + 17 * n) % 23) / 7.0
    return ToyBigramAdapter(logits=logits, bos_id=0)
