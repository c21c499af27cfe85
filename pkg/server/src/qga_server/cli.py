"""qga-server command line: serve checkpoints, build toys, fine-tune."""

from __future__ import annotations

import argparse
import sys

from .app import create_app
from .config import ConfigError, ServerConfig
from .finetune import DataError, TrainConfig, finetune
from .models import load_model
from .toy import build_toy_checkpoint, load_texts


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qga-server")
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the generation HTTP service")
    serve.add_argument("--config", required=True, help="JSON config: qg, qa, device, max_batch_size, host, port")

    toy = sub.add_parser("make-toy", help="build a tiny random-weight checkpoint")
    toy.add_argument("--out", required=True)
    toy.add_argument("--texts", help="text or JSONL file for tokenizer training")
    toy.add_argument("--vocab-size", type=int, default=384)
    toy.add_argument("--seed", type=int, default=0)

    tune = sub.add_parser("finetune", help="fine-tune a checkpoint on example JSONL")
    tune.add_argument("--task", required=True, choices=("qg", "qa"))
    tune.add_argument("--data", required=True, help="JSONL with input/output fields")
    tune.add_argument("--base", required=True, help="starting checkpoint directory")
    tune.add_argument("--out", required=True, help="where to save the tuned checkpoint")
    tune.add_argument("--learning-rate", type=float, default=None, help="default: 1e-4 qg, 2e-4 qa")
    tune.add_argument("--weight-decay", type=float, default=1e-5)
    tune.add_argument("--epochs", type=int, default=20)
    tune.add_argument("--batch-size", type=int, default=2)
    tune.add_argument("--grad-accum", type=int, default=32)
    tune.add_argument("--warmup", type=float, default=0.1)
    tune.add_argument("--limit", type=int, default=None, help="use only the first N examples")
    tune.add_argument("--seed", type=int, default=13)
    return parser


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    config = ServerConfig.from_file(args.config)

    def loader():
        return {
            "qg": load_model(config.qg, "qg", device=config.device),
            "qa": load_model(config.qa, "qa", device=config.device),
        }

    app = create_app(loader=loader, max_batch_size=config.max_batch_size)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_make_toy(args: argparse.Namespace) -> int:
    texts = load_texts(args.texts) if args.texts else None
    path = build_toy_checkpoint(args.out, texts=texts, vocab_size=args.vocab_size, seed=args.seed)
    print(f"wrote toy checkpoint to {path}")
    return 0


def _cmd_finetune(args: argparse.Namespace) -> int:
    config = TrainConfig(
        task=args.task,
        learning_rate=args.learning_rate,
        weight_decay=args.weight_decay,
        epochs=args.epochs,
        batch_size=args.batch_size,
        grad_accum=args.grad_accum,
        warmup=args.warmup,
        limit=args.limit,
        seed=args.seed,
    )
    result = finetune(args.data, args.base, args.out, config)
    print(
        f"tuned {config.task} on {result.examples} examples:"
        f" {result.optimizer_steps} optimizer steps, final loss {result.final_loss:.4f},"
        f" saved to {result.output_dir}"
    )
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "serve":
            return _cmd_serve(args)
        if args.command == "make-toy":
            return _cmd_make_toy(args)
        return _cmd_finetune(args)
    except (ConfigError, DataError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
