"""Command line front end.

    neural-scorer --corpus docs.jsonl --manifest test.txt --out scores.jsonl \
        --model gpt2 --context-window 1024 --stride 64

--model "toy" (or "toy:<vocab>") selects the built-in deterministic bigram
model; anything else is treated as a transformers model name or path.
Exit codes: 0 ok, 1 usage error, 2 data or model error.
"""

from __future__ import annotations

import argparse
import json
import sys

from neural_scorer.adapters import default_toy_adapter
from neural_scorer.corpusio import TITLE_MODES, read_corpus, read_manifest
from neural_scorer.score import ScorerConfig, score_corpus


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    p = _Parser(prog="neural-scorer", description=__doc__.splitlines()[0])
    p.add_argument("--corpus", required=True, help="corpus JSONL file")
    p.add_argument("--manifest", required=True, help="document id manifest")
    p.add_argument("--out", required=True, help="output score-record JSONL")
    p.add_argument("--model", default="toy")
    p.add_argument("--context-window", type=int, default=1024)
    p.add_argument("--stride", type=int, default=64)
    p.add_argument("--title-mode", choices=[m.replace("_", "-") for m in TITLE_MODES],
                   default="omit")
    p.add_argument("--device", default="cpu")
    p.add_argument("--resume", action="store_true",
                   help="skip documents already present in --out")
    return p


def load_adapter(config: ScorerConfig):
    if config.model == "toy" or config.model.startswith("toy:"):
        vocab = int(config.model.split(":", 1)[1]) if ":" in config.model else 64
        return default_toy_adapter(vocab)
    from neural_scorer.hf import TransformersAdapter

    return TransformersAdapter.from_pretrained(config.model, device=config.device)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = ScorerConfig(
        model=args.model,
        context_window=args.context_window,
        stride=args.stride,
        title_mode=args.title_mode.replace("-", "_"),
        device=args.device,
    )
    try:
        adapter = load_adapter(config)
        docs = read_corpus(args.corpus)
        ids = read_manifest(args.manifest)
        n = score_corpus(docs, ids, adapter, config, args.out, resume=args.resume)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"neural-scorer: error: {exc}", file=sys.stderr)
        return 2
    print(f"scored {n} documents -> {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
