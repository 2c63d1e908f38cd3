import math

import numpy as np
import pytest

from neural_scorer.adapters import ToyBigramAdapter, default_toy_adapter
from neural_scorer.corpusio import CorpusDoc
from neural_scorer.score import ScorerConfig, score_document


def two_symbol_adapter():
    # hand-set 2x2 logit table over tokens "a" (0) and "b" (1)
    return ToyBigramAdapter(
        logits=np.array([[1.0, 3.0], [0.5, 0.5]]),
        token_map={"a": 0, "b": 1},
        bos_id=0,
    )


class TestClosedFormSoftmax:
    def test_logprobs_match_hand_computed_softmax(self):
        adapter = two_symbol_adapter()
        lps = adapter.window_logprobs([1, 0, 0], prepend_bos=True)
        # after "a": P(b) = e^3 / (e^1 + e^3); after "b": P(a) = 0.5
        z = math.exp(1.0) + math.exp(3.0)
        assert lps[0] == pytest.approx(math.log(math.exp(3.0) / z), abs=1e-12)
        assert lps[1] == pytest.approx(math.log(0.5), abs=1e-12)
        assert lps[2] == pytest.approx(math.log(math.exp(1.0) / z), abs=1e-12)

    def test_no_bos_leaves_first_token_unscored(self):
        adapter = ToyBigramAdapter(
            logits=np.array([[1.0, 3.0], [0.5, 0.5]]),
            token_map={"a": 0, "b": 1},
            bos_id=None,
        )
        lps = adapter.window_logprobs([0, 1], prepend_bos=True)
        assert math.isnan(lps[0]) and lps[1] < 0


class TestScoreDocument:
    def test_subtoken_aggregation(self):
        # word logprob is the sum of its subtoken logprobs
        adapter = two_symbol_adapter()
        doc = CorpusDoc("d", ("ab", "ba"))
        rec = score_document(doc, adapter, ScorerConfig())
        lps = adapter.window_logprobs(adapter.encode("ab ba").ids, prepend_bos=True)
        assert rec["words"][0]["logprob"] == pytest.approx(lps[0] + lps[1], abs=1e-12)
        assert rec["words"][1]["logprob"] == pytest.approx(lps[2] + lps[3], abs=1e-12)
        assert [w["n_subtokens"] for w in rec["words"]] == [2, 2]

    def test_word_sum_equals_subtoken_sum(self):
        adapter = default_toy_adapter()
        doc = CorpusDoc("d", tuple(f"word{i}" for i in range(40)))
        rec = score_document(doc, adapter, ScorerConfig())
        text = " ".join(doc.body)
        total = np.nansum(
            adapter.window_logprobs(adapter.encode(text).ids, prepend_bos=True)
        )
        assert sum(w["logprob"] for w in rec["words"]) == pytest.approx(total, abs=1e-9)

    def test_all_logprobs_nonpositive(self):
        adapter = default_toy_adapter()
        doc = CorpusDoc("d", tuple("xyzzy" for _ in range(20)))
        rec = score_document(doc, adapter, ScorerConfig())
        assert all(w["logprob"] <= 0 for w in rec["words"])

    def test_title_flags(self):
        adapter = default_toy_adapter()
        doc = CorpusDoc("d", ("body", "words"), title="Some Title")
        rec = score_document(doc, adapter, ScorerConfig(title_mode="colon_newline"))
        assert [w["word"] for w in rec["words"]] == ["some", "title:", "body", "words"]
        assert [w["is_title"] for w in rec["words"]] == [True, True, False, False]
        rec = score_document(doc, adapter, ScorerConfig(title_mode="omit"))
        assert all(not w["is_title"] for w in rec["words"])

    def test_long_document_stride_path(self):
        # windowed scoring agrees with the full-context pass for a bigram
        # model, whose conditioning never exceeds one token anyway
        adapter = default_toy_adapter()
        doc = CorpusDoc("d", tuple(f"w{i % 9}xx" for i in range(400)))
        cfg = ScorerConfig(context_window=128, stride=16)
        rec = score_document(doc, adapter, cfg)
        full = score_document(doc, adapter, ScorerConfig(context_window=10_000, stride=16))
        for a, b in zip(rec["words"], full["words"]):
            assert a["logprob"] == pytest.approx(b["logprob"], abs=1e-12)
