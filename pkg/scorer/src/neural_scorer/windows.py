"""Stride-advanced scoring windows for documents longer than the context.

Each window scores only its trailing segment; earlier tokens in the window
serve as conditioning context.  Segment boundaries snap backward to word
boundaries so a word's subtokens are never scored across two windows, and
every scored token past the first window sees at least
``context_window - stride`` predecessors.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass


@dataclass(frozen=True)
class Window:
    start: int  # first conditioning token (inclusive)
    end: int  # one past the last scored token
    score_start: int  # first token whose logprob is taken from this window

    def __post_init__(self):
        if not self.start <= self.score_start < self.end:
            raise ValueError(f"inconsistent window {self}")


def _snap_back(word_starts: list[int], limit: int) -> int:
    """Largest word-start token index <= limit."""
    i = bisect.bisect_right(word_starts, limit)
    return word_starts[i - 1]


def plan_windows(
    n_tokens: int, word_starts: list[int], context_window: int, stride: int
) -> list[Window]:
    """Cover token positions [0, n_tokens) with scoring windows.

    ``word_starts`` lists the token indices that begin a word, sorted,
    starting with 0.  A word whose subtoken count exceeds the stride cannot
    be placed in any segment and is an error.
    """
    if not 1 <= stride <= context_window:
        raise ValueError(f"need 1 <= stride <= context_window, got {stride}/{context_window}")
    if n_tokens < 1:
        raise ValueError("empty token sequence")
    if not word_starts or word_starts[0] != 0:
        raise ValueError("word_starts must begin with token 0")
    if n_tokens <= context_window:
        return [Window(0, n_tokens, 0)]
    windows = []
    score_start = 0
    first_end = _snap_back(word_starts, context_window)
    if first_end == 0:
        raise ValueError("first word is longer than the context window")
    windows.append(Window(0, first_end, 0))
    score_start = first_end
    while score_start < n_tokens:
        if score_start + stride >= n_tokens:
            end = n_tokens
        else:
            end = _snap_back(word_starts, score_start + stride)
            if end <= score_start:
                raise ValueError(
                    f"word at token {score_start} has more than {stride} subtokens; "
                    "cannot honor the stride policy"
                )
        windows.append(Window(max(0, end - context_window), end, score_start))
        score_start = end
    return windows
