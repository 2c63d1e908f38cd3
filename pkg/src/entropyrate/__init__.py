"""Toolkit for measuring per-word surprisal trends over the course of documents.

Pipeline: ingest a newline-delimited corpus, build a closed vocabulary,
train an interpolated trigram model (or ingest external per-word log
probabilities), average surprisal by word position, and test the resulting
curve for a monotonic trend.
"""

__version__ = "0.3.0"

from entropyrate.corpus import (
    Document,
    Vocabulary,
    CorpusSplit,
    tokenize,
    build_vocabulary,
    render_document,
    split_corpus,
)
from entropyrate.trigram import TrigramCounts, InterpolatedTrigramModel, count_corpus, mle
from entropyrate.scoring import (
    ScoreRecord,
    WordScore,
    SurprisalSequence,
    score_with_trigram,
    ingest_scores,
    mi_gap,
)
from entropyrate.curves import PositionCurve, build_curve, merge_curves, length_histogram
from entropyrate.trend import TrendReport, mann_kendall, trend_of_curve
from entropyrate.synth import MarkovSource, generate, true_entropy
