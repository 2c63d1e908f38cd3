"""Adapter over transformers causal LMs.  torch/transformers import lazily
so the rest of the package works without them installed."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from neural_scorer.adapters import Encoding


@dataclass(frozen=True)
class CharTokenizer:
    """Byte-level fallback tokenizer: one subtoken per non-space character.

    Hashes characters into ids 1..vocab_size-1, keeping id 0 free for BOS.
    Useful for models instantiated from a bare config, where no trained
    subword tokenizer exists.
    """

    vocab_size: int

    def encode(self, text: str) -> Encoding:
        ids = []
        offsets = []
        for i, ch in enumerate(text):
            if ch.isspace():
                continue
            ids.append(1 + (ord(ch) % (self.vocab_size - 1)))
            offsets.append((i, i + 1))
        return Encoding(tuple(ids), tuple(offsets))


class HFTokenizer:
    """Wraps a fast transformers tokenizer, exposing character offsets."""

    def __init__(self, tokenizer):
        if not getattr(tokenizer, "is_fast", False):
            raise ValueError("a fast tokenizer is required for character offsets")
        self.tokenizer = tokenizer

    def encode(self, text: str) -> Encoding:
        enc = self.tokenizer(
            text, add_special_tokens=False, return_offsets_mapping=True
        )
        return Encoding(tuple(enc["input_ids"]), tuple(map(tuple, enc["offset_mapping"])))


class TransformersAdapter:
    def __init__(self, model, tokenizer, device: str = "cpu"):
        import torch  # noqa: F401  (verified importable up front)

        self.model = model.to(device).eval()
        self.tokenizer = tokenizer
        self.device = device
        self.bos_id = getattr(model.config, "bos_token_id", None)

    @classmethod
    def from_pretrained(cls, name_or_path: str, device: str = "cpu") -> "TransformersAdapter":
        from transformers import AutoModelForCausalLM, AutoTokenizer

        model = AutoModelForCausalLM.from_pretrained(name_or_path)
        tokenizer = HFTokenizer(AutoTokenizer.from_pretrained(name_or_path, use_fast=True))
        return cls(model, tokenizer, device)

    def encode(self, text: str) -> Encoding:
        return self.tokenizer.encode(text)

    def window_logprobs(self, ids: Sequence[int], prepend_bos: bool) -> np.ndarray:
        import torch

        seq = list(ids)
        use_bos = prepend_bos and self.bos_id is not None
        if use_bos:
            seq = [self.bos_id] + seq
        with torch.no_grad():
            input_ids = torch.tensor([seq], dtype=torch.long, device=self.device)
            logits = self.model(input_ids).logits[0]
            logp = torch.log_softmax(logits.double(), dim=-1)
        out = np.full(len(ids), np.nan)
        # logits at position i predict token i+1
        targets = torch.tensor(seq[1:], dtype=torch.long, device=self.device)
        scored = logp[: len(seq) - 1].gather(1, targets.unsqueeze(1)).squeeze(1)
        start = 0 if use_bos else 1
        out[start:] = scored.cpu().numpy()
        return out
