import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from entropyrate.corpus import (
    Document,
    Vocabulary,
    build_vocabulary,
    read_corpus,
    render_document,
    split_corpus,
    tokenize,
    write_corpus,
)
from tests.conftest import make_random_docs


class TestTokenize:
    def test_basic(self):
        assert tokenize("The cat sat") == ["the", "cat", "sat"]

    def test_empty(self):
        assert tokenize("") == []

    def test_whitespace_runs(self):
        # oracle: split on runs of whitespace, verified by hand
        assert tokenize("A  B\tC") == ["a", "b", "c"]

    def test_no_lowercase(self):
        assert tokenize("The Cat", lowercase=False) == ["The", "Cat"]

    @given(st.text())
    def test_idempotent(self, text):
        once = tokenize(text)
        assert tokenize(" ".join(once)) == once

    @given(st.text())
    def test_lowercase_output(self, text):
        for w in tokenize(text, lowercase=True):
            assert w == w.lower()


class TestVocabulary:
    def test_threshold(self):
        docs = [Document("d", ("a", "a", "a", "b"))]
        vocab = build_vocabulary(docs, min_count=2)
        assert set(vocab.words) == {"<unk>", "<s>", "</s>", "a"}
        assert vocab.lookup("b") == vocab.unk_id

    def test_all_kept(self):
        vocab = build_vocabulary([Document("d", ("a", "b", "c"))], min_count=1)
        assert set(vocab.words) == {"<unk>", "<s>", "</s>", "a", "b", "c"}

    def test_matches_count_filter_oracle(self):
        docs = make_random_docs(100, [f"w{i}" for i in range(40)], seed=5)
        # independent word-count pass
        counts = Counter(w for d in docs for w in d.body)
        expected = {w for w, c in counts.items() if c >= 5}
        vocab = build_vocabulary(docs, min_count=5)
        assert set(vocab.words) - {"<unk>", "<s>", "</s>"} == expected

    def test_empty_corpus(self):
        with pytest.raises(ValueError, match="empty corpus"):
            build_vocabulary([], min_count=5)

    def test_dense_ids(self, random_vocab):
        assert sorted(random_vocab.index.values()) == list(range(len(random_vocab)))

    def test_unknown_maps_to_unk(self, random_vocab):
        assert random_vocab.lookup("never-seen-word") == 0

    def test_permutation_invariant(self, random_docs):
        shuffled = list(random_docs)
        random.Random(99).shuffle(shuffled)
        assert build_vocabulary(random_docs, 2).words == build_vocabulary(shuffled, 2).words

    def test_roundtrip(self, random_vocab, tmp_path):
        path = tmp_path / "vocab.txt"
        random_vocab.save(path)
        loaded = Vocabulary.load(path)
        assert loaded.words == random_vocab.words

    def test_count_mass_conserved(self, random_docs):
        # pooled unk counts plus kept-word counts equal the token total
        vocab = build_vocabulary(random_docs, min_count=3)
        counts = Counter(w for d in random_docs for w in d.body)
        kept = sum(c for w, c in counts.items() if w in vocab.index)
        unk = sum(c for w, c in counts.items() if w not in vocab.index)
        assert kept + unk == sum(len(d) for d in random_docs)


class TestRenderDocument:
    def test_newline_mode(self):
        doc = Document("d", ("a", "b"), title="T")
        r = render_document(doc, "newline", lowercase=False)
        assert r.text() == "T\na b"
        assert r.words == ("T", "a", "b")
        assert r.n_title == 1

    def test_colon_newline_mode(self):
        doc = Document("d", ("a", "b"), title="T")
        r = render_document(doc, "colon_newline", lowercase=False)
        assert r.text() == "T:\na b"
        assert r.words == ("T:", "a", "b")

    def test_missing_title_falls_back(self):
        doc = Document("d", ("a", "b"))
        r = render_document(doc, "newline")
        assert r.text() == "a b"
        assert r.title_missing
        assert r.n_title == 0

    def test_omit_recovers_body(self):
        doc = Document("d", ("a", "b", "c"), title="ignored")
        r = render_document(doc, "omit")
        assert tokenize(r.text()) == list(doc.body)
        assert r.body_words == doc.body


class TestSplitCorpus:
    def test_cardinalities(self, random_docs):
        split = split_corpus(random_docs[:10], (6, 2, 2), seed=7)
        assert (len(split.train), len(split.validation), len(split.test)) == (6, 2, 2)
        ids = {d.id for part in (split.train, split.validation, split.test) for d in part}
        assert len(ids) == 10

    def test_deterministic(self, random_docs):
        a = split_corpus(random_docs, (30, 10, 10), seed=7)
        b = split_corpus(random_docs, (30, 10, 10), seed=7)
        assert [d.id for d in a.train] == [d.id for d in b.train]
        assert [d.id for d in a.test] == [d.id for d in b.test]

    def test_seed_changes_split(self, random_docs):
        a = split_corpus(random_docs, (30, 10, 10), seed=7)
        b = split_corpus(random_docs, (30, 10, 10), seed=8)
        assert {d.id for d in a.train} != {d.id for d in b.train}

    def test_insufficient_docs(self, random_docs):
        with pytest.raises(ValueError, match="only 50"):
            split_corpus(random_docs, (40, 10, 10), seed=0)


class TestCorpusIO:
    def test_roundtrip(self, tmp_path, random_docs):
        path = tmp_path / "corpus.jsonl"
        write_corpus(random_docs, path, header=["test"])
        loaded = read_corpus(path)
        assert [d.id for d in loaded] == [d.id for d in random_docs]
        assert [d.body for d in loaded] == [d.body for d in random_docs]

    def test_malformed_line_names_lineno(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text('{"id": "a", "text": "x"}\nnot json\n')
        with pytest.raises(ValueError, match=":2:"):
            read_corpus(path)

    def test_duplicate_id(self, tmp_path):
        path = tmp_path / "dup.jsonl"
        path.write_text('{"id": "a", "text": "x"}\n{"id": "a", "text": "y"}\n')
        with pytest.raises(ValueError, match="duplicate"):
            read_corpus(path)
