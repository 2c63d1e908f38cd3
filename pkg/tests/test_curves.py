import random

import numpy as np
import pytest

from entropyrate.curves import (
    PositionCurve,
    build_curve,
    length_histogram,
    merge_curves,
    read_curve_csv,
    read_histogram_csv,
    write_curve_csv,
    write_histogram_csv,
)


def random_seqs(n, max_len=40, seed=0):
    rng = random.Random(seed)
    return [
        [rng.uniform(0, 10) for _ in range(rng.randint(1, max_len))] for _ in range(n)
    ]


class TestBuildCurve:
    def test_hand_mean(self):
        curve = build_curve([[2.0, 4.0], [4.0]], max_position=10, min_docs=1)
        assert curve.means[0] == 3.0
        assert curve.means[1] == 4.0
        assert list(curve.counts[:3]) == [2, 1, 0]

    def test_truncation(self):
        curve = build_curve([[1.0, 1.0, 1.0]], max_position=2, min_docs=1)
        assert list(curve.counts) == [1, 1]
        assert list(curve.means) == [1.0, 1.0]

    def test_empty_error(self):
        with pytest.raises(ValueError, match="empty sequence set"):
            build_curve([], max_position=5)

    def test_counts_non_increasing(self):
        curve = build_curve(random_seqs(100), max_position=50, min_docs=1)
        assert np.all(np.diff(curve.counts) <= 0)

    def test_min_docs_masks_thin_positions(self):
        curve = build_curve([[1.0, 2.0], [1.0]], max_position=5, min_docs=2)
        assert list(curve.defined_positions()) == [0]

    def test_count_conservation(self):
        seqs = random_seqs(80, seed=4)
        curve = build_curve(seqs, max_position=20, min_docs=1)
        assert curve.counts.sum() == sum(min(len(s), 20) for s in seqs)

    def test_shuffle_invariant(self):
        seqs = random_seqs(50, seed=5)
        a = build_curve(seqs, max_position=30, min_docs=1)
        shuffled = list(seqs)
        random.Random(1).shuffle(shuffled)
        b = build_curve(shuffled, max_position=30, min_docs=1)
        assert np.allclose(a.means, b.means, atol=1e-12)
        assert np.array_equal(a.counts, b.counts)

    def test_matches_direct_average(self):
        # oracle: per-position arithmetic mean over an explicit column matrix
        seqs = random_seqs(60, seed=6)
        curve = build_curve(seqs, max_position=25, min_docs=1)
        for pos in range(25):
            col = [s[pos] for s in seqs if len(s) > pos]
            if col:
                assert curve.means[pos] == pytest.approx(np.mean(col), rel=1e-12)
                if len(col) > 1:
                    assert curve.variances[pos] == pytest.approx(
                        np.var(col, ddof=1), rel=1e-9
                    )

    def test_rejects_negative(self):
        with pytest.raises(ValueError, match="non-negative"):
            build_curve([[1.0, -2.0]], max_position=5)


class TestMerge:
    def test_merge_equals_whole(self):
        seqs = random_seqs(100, seed=9)
        whole = build_curve(seqs, max_position=30, min_docs=1)
        merged = merge_curves(
            build_curve(seqs[:37], max_position=30, min_docs=1),
            build_curve(seqs[37:], max_position=30, min_docs=1),
        )
        assert np.array_equal(whole.counts, merged.counts)
        assert np.allclose(whole.means, merged.means, atol=1e-9)
        assert np.allclose(whole.variances, merged.variances, atol=1e-9)

    def test_associative(self):
        seqs = random_seqs(90, seed=10)
        parts = [build_curve(seqs[i : i + 30], max_position=20, min_docs=1) for i in (0, 30, 60)]
        left = merge_curves(merge_curves(parts[0], parts[1]), parts[2])
        right = merge_curves(parts[0], merge_curves(parts[1], parts[2]))
        assert np.allclose(left.means, right.means, atol=1e-9)
        assert np.array_equal(left.counts, right.counts)


class TestHistogram:
    def test_hand(self):
        assert length_histogram([3, 3, 7], bucket=5) == [(0, 5, 2), (5, 10, 1)]

    def test_empty(self):
        assert length_histogram([], bucket=5) == []

    def test_total_matches(self):
        lengths = [random.Random(2).randint(0, 300) for _ in range(500)]
        hist = length_histogram(lengths, bucket=25)
        assert sum(n for _, _, n in hist) == 500
        # independent tally per bucket
        for start, end, n in hist:
            assert n == sum(1 for x in lengths if start <= x < end)


class TestCsv:
    def test_curve_roundtrip(self, tmp_path):
        curve = build_curve(random_seqs(40, seed=3), max_position=30, min_docs=2)
        path = tmp_path / "curve.csv"
        write_curve_csv(curve, path, header=["test run"])
        loaded = read_curve_csv(path)
        assert loaded.max_position == curve.max_position
        assert loaded.min_docs == curve.min_docs
        d = curve.defined
        assert np.array_equal(loaded.counts[d], curve.counts[d])
        assert np.array_equal(loaded.means[d], curve.means[d])  # repr round-trip, exact
        assert np.array_equal(loaded.variances[d], curve.variances[d])
        # rewrite is byte-identical
        path2 = tmp_path / "curve2.csv"
        write_curve_csv(loaded, path2, header=["test run"])
        assert path.read_bytes() == path2.read_bytes()

    def test_histogram_roundtrip(self, tmp_path):
        hist = [(0, 50, 12), (50, 100, 3)]
        path = tmp_path / "hist.csv"
        write_histogram_csv(hist, path)
        assert read_histogram_csv(path) == hist
