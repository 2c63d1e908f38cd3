"""Position-indexed surprisal curves: mean surprisal per word position.

Accumulators are (count, mean, M2) triples per position, so curves built in
parallel shards can be merged with the usual pooled-variance update.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_MAX_POSITION = 500
DEFAULT_MIN_DOCS = 50


@dataclass(eq=False)
class PositionCurve:
    """Per-position mean surprisal with contributor counts and sample variance.

    Positions with fewer than ``min_docs`` contributing documents are present
    in the arrays but treated as undefined (and omitted from CSV output).
    """

    means: np.ndarray
    variances: np.ndarray
    counts: np.ndarray
    max_position: int
    min_docs: int = 1

    @property
    def defined(self) -> np.ndarray:
        return self.counts >= max(self.min_docs, 1)

    def defined_positions(self) -> np.ndarray:
        return np.flatnonzero(self.defined)

    def __post_init__(self):
        for name in ("means", "variances", "counts"):
            if len(getattr(self, name)) != self.max_position:
                raise ValueError(f"{name} length must equal max_position")


def build_curve(
    seqs: Iterable,
    max_position: int = DEFAULT_MAX_POSITION,
    min_docs: int = DEFAULT_MIN_DOCS,
) -> PositionCurve:
    """Average surprisal by position over all documents reaching that position.

    ``seqs`` yields SurprisalSequence objects (anything with a ``values``
    attribute, or a bare sequence of floats).
    """
    if max_position < 1:
        raise ValueError("max_position must be >= 1")
    counts = np.zeros(max_position, dtype=np.int64)
    means = np.zeros(max_position)
    m2 = np.zeros(max_position)
    n_seqs = 0
    for seq in seqs:
        values = getattr(seq, "values", seq)
        v = np.asarray(values[:max_position], dtype=float)
        if v.size and (not np.all(np.isfinite(v)) or v.min() < 0):
            raise ValueError("surprisal values must be finite and non-negative")
        idx = np.arange(v.size)
        counts[idx] += 1
        delta = v - means[idx]
        means[idx] += delta / counts[idx]
        m2[idx] += delta * (v - means[idx])
        n_seqs += 1
    if n_seqs == 0:
        raise ValueError("empty sequence set")
    variances = np.zeros(max_position)
    multi = counts > 1
    variances[multi] = m2[multi] / (counts[multi] - 1)
    means[counts == 0] = 0.0
    return PositionCurve(means, variances, counts, max_position, min_docs)


def merge_curves(a: PositionCurve, b: PositionCurve) -> PositionCurve:
    """Count-weighted merge of two curves built from disjoint document sets."""
    if a.max_position != b.max_position:
        raise ValueError("curves have different max_position")
    n = a.counts + b.counts
    safe = np.maximum(n, 1)
    delta = b.means - a.means
    means = a.means + delta * (b.counts / safe)
    m2 = (
        a.variances * np.maximum(a.counts - 1, 0)
        + b.variances * np.maximum(b.counts - 1, 0)
        + delta**2 * (a.counts * b.counts / safe)
    )
    variances = np.zeros_like(m2)
    multi = n > 1
    variances[multi] = m2[multi] / (n[multi] - 1)
    return PositionCurve(means, variances, n, a.max_position, min(a.min_docs, b.min_docs))


def length_histogram(lengths: Iterable[int], bucket: int = 50) -> list[tuple[int, int, int]]:
    """Histogram of document lengths as (bucket_start, bucket_end, n_docs) rows."""
    if bucket < 1:
        raise ValueError("bucket must be >= 1")
    tally: dict[int, int] = {}
    for n in lengths:
        n = len(n) if hasattr(n, "__len__") else int(n)
        tally[n // bucket] = tally.get(n // bucket, 0) + 1
    return [(k * bucket, (k + 1) * bucket, tally[k]) for k in sorted(tally)]


# --- delimited output -----------------------------------------------------

CURVE_COLUMNS = "position,mean_bits,variance,n_docs,sum_bits"


def write_curve_csv(curve: PositionCurve, path, header: Iterable[str] = ()) -> None:
    """Columns: position, mean_bits, variance, n_docs, sum_bits.

    Undefined (thinly supported) positions are omitted; floats use repr so the
    file round-trips exactly.
    """
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write(f"# max_position={curve.max_position} min_docs={curve.min_docs}\n")
        f.write(CURVE_COLUMNS + "\n")
        for i in curve.defined_positions():
            mean = float(curve.means[i])
            n = int(curve.counts[i])
            f.write(f"{i},{mean!r},{float(curve.variances[i])!r},{n},{mean * n!r}\n")


def read_curve_csv(path) -> PositionCurve:
    max_position = None
    min_docs = 1
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line.startswith("#"):
                for tok in line[1:].split():
                    if tok.startswith("max_position="):
                        max_position = int(tok.split("=", 1)[1])
                    elif tok.startswith("min_docs="):
                        min_docs = int(tok.split("=", 1)[1])
                continue
            if not line or line.startswith("position,"):
                continue
            pos, mean, var, n, _sum = line.split(",")
            rows.append((int(pos), float(mean), float(var), int(n)))
    if max_position is None:
        max_position = (max(r[0] for r in rows) + 1) if rows else 1
    means = np.zeros(max_position)
    variances = np.zeros(max_position)
    counts = np.zeros(max_position, dtype=np.int64)
    for pos, mean, var, n in rows:
        means[pos], variances[pos], counts[pos] = mean, var, n
    return PositionCurve(means, variances, counts, max_position, min_docs)


def write_histogram_csv(
    histogram: Sequence[tuple[int, int, int]], path, header: Iterable[str] = ()
) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for line in header:
            f.write(f"# {line}\n")
        f.write("bucket_start,bucket_end,n_docs\n")
        for start, end, n in histogram:
            f.write(f"{start},{end},{n}\n")


def read_histogram_csv(path) -> list[tuple[int, int, int]]:
    rows = []
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("bucket_start"):
                continue
            start, end, n = line.split(",")
            rows.append((int(start), int(end), int(n)))
    return rows
