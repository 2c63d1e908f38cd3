from neural_scorer.adapters import Encoding, ToyBigramAdapter, default_toy_adapter
from neural_scorer.corpusio import CorpusDoc, read_corpus, read_manifest, render_words
from neural_scorer.score import ScorerConfig, score_corpus, score_document, write_records
from neural_scorer.windows import Window, plan_windows

__all__ = [
    "CorpusDoc",
    "Encoding",
    "ScorerConfig",
    "ToyBigramAdapter",
    "Window",
    "default_toy_adapter",
    "plan_windows",
    "read_corpus",
    "read_manifest",
    "render_words",
    "score_corpus",
    "score_document",
    "write_records",
]
