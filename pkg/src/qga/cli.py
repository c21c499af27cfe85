"""Command line interface.

Subcommands mirror the pipeline stages so each can run standalone:
prepare-qg / prepare-qa build text-to-text datasets, infer calls a
backend, decode maps raw answers to spans, score compares predictions
against gold, pipeline runs everything from a config file, and
make-oracle derives a canned backend book from a gold corpus.

Exit codes: 0 success, 1 validation/config error, 2 backend failure.
(argparse usage errors keep argparse's own exit code 2.)
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Any

from . import backend as backend_mod
from .backend import BackendError
from .corpus import load_corpus
from .data import default_registry_path
from .decode import align_spans, parse_answer
from .errors import QgaError
from .ontology import load_registry
from .oracle import build_oracle_book, write_oracle_book
from .pipeline import PipelineConfig, _clean_question, enumerate_tasks, run_pipeline
from .qa_data import emit_qa_inference, emit_qa_training
from .question_gen import emit_qg_example
from .scoring import ArgumentUnit, ScoreReport, TriggerUnit, rouge1, score_arguments, score_triggers
from .seq2seq import example_from_dict


def _read_jsonl(path: str) -> list[dict]:
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    rows.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise QgaError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
    except OSError as exc:
        raise QgaError(f"cannot read {path}: {exc}") from exc
    return rows


def _write_jsonl(path: str, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _asked_tasks(registry, corpus):
    """Tasks limited to roles that actually have a template entry."""
    tasks, warnings = enumerate_tasks(registry, corpus)
    kept = []
    for task in tasks:
        if registry.has_entry(task.mention.event_type, task.role):
            kept.append(task)
        else:
            warnings.append(
                f"record {task.record.id!r} mention {task.mention_index}: no entry for"
                f" role {task.role!r} of {task.mention.event_type!r}, skipped"
            )
    return kept, warnings


def _warn(warnings: list[str]) -> None:
    for line in warnings:
        print(f"warning: {line}", file=sys.stderr)


def cmd_prepare_qg(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    corpus = load_corpus(args.corpus)
    tasks, warnings = _asked_tasks(registry, corpus)
    _warn(warnings)
    rows = [
        emit_qg_example(registry, t.record, t.mention, t.role, t.mention_index).to_dict()
        for t in tasks
    ]
    _write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} QG examples to {args.out}", file=sys.stderr)
    return 0


def cmd_prepare_qa(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    corpus = load_corpus(args.corpus)
    tasks, warnings = _asked_tasks(registry, corpus)
    _warn(warnings)

    rows: list[dict] = []
    if args.mode == "train":
        for t in tasks:
            for ex in emit_qa_training(registry, t.record, t.mention, t.role, t.mention_index):
                rows.append(ex.to_dict())
    else:
        if not args.questions:
            raise QgaError("--mode infer requires --questions (QG output JSONL)")
        questions: dict[tuple[str, int, str], str] = {}
        for row in _read_jsonl(args.questions):
            key = (row["id"], int(row.get("mention", 0)), row["role"])
            questions[key] = _clean_question(row["raw"], args.eos)
        for t in tasks:
            key = (t.record.id, t.mention_index, t.role)
            if key not in questions:
                raise QgaError(f"no generated question for task {key}")
            ex = emit_qa_inference(questions[key], t.record, t.mention, t.role, t.mention_index)
            rows.append(ex.to_dict())
    _write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} QA examples to {args.out}", file=sys.stderr)
    return 0


def cmd_infer(args: argparse.Namespace) -> int:
    examples = [example_from_dict(row) for row in _read_jsonl(args.inputs)]
    backend = backend_mod.make_backend(args.backend)
    params = (
        backend_mod.default_qg_params() if args.stage == "qg" else backend_mod.default_qa_params()
    )
    overrides: dict[str, Any] = {}
    if args.max_length is not None:
        overrides["max_length"] = args.max_length
    if args.num_beams is not None:
        overrides["num_beams"] = args.num_beams
    if args.length_penalty is not None:
        overrides["length_penalty"] = args.length_penalty
    params = dataclasses.replace(params, **overrides)

    outputs: list[str] = []
    inputs = [ex.input for ex in examples]
    for i in range(0, len(inputs), args.batch_size):
        request = params.with_inputs(inputs[i : i + args.batch_size])
        outputs.extend(backend_mod.generate(backend, request))
    rows = [
        {"id": ex.id, "mention": ex.mention, "role": ex.role, "raw": raw}
        for ex, raw in zip(examples, outputs)
    ]
    _write_jsonl(args.out, rows)
    print(f"wrote {len(rows)} raw outputs to {args.out}", file=sys.stderr)
    return 0


def cmd_decode(args: argparse.Namespace) -> int:
    corpus = {r.id: r for r in load_corpus(args.corpus)}
    predictions: list[dict] = []
    discards: list[dict] = []
    for row in _read_jsonl(args.answers):
        rid, role = row["id"], row["role"]
        mi = int(row.get("mention", 0))
        record = corpus.get(rid)
        if record is None:
            raise QgaError(f"answer row references unknown record id {rid!r}")
        if mi >= len(record.mentions):
            raise QgaError(f"record {rid!r} has no mention index {mi}")
        mention = record.mentions[mi]
        decoded = align_spans(parse_answer(row["raw"], args.eos), record.text)
        for span in decoded.spans:
            predictions.append(
                {
                    "id": rid,
                    "mention": mi,
                    "event_type": mention.event_type,
                    "role": role,
                    "start": span.start,
                    "end": span.end,
                    "surface": span.surface,
                }
            )
        for piece in decoded.discarded:
            discards.append({"id": rid, "mention": mi, "role": role, "piece": piece})
    _write_jsonl(args.out, predictions)
    if args.discards:
        _write_jsonl(args.discards, discards)
    print(
        f"wrote {len(predictions)} predictions to {args.out}"
        f" ({len(discards)} pieces discarded)",
        file=sys.stderr,
    )
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    if args.qg_eval:
        gold = {}
        for row in _read_jsonl(args.gold):
            ex = example_from_dict(row)
            gold[(ex.id, ex.mention, ex.role)] = ex.output
        scores = []
        for row in _read_jsonl(args.pred):
            key = (row["id"], int(row.get("mention", 0)), row["role"])
            if key not in gold:
                raise QgaError(f"no gold question for prediction {key}")
            question = _clean_question(row["raw"], args.eos)
            scores.append(rouge1(question, gold[key]))
        mean = sum(scores) / len(scores) if scores else 0.0
        print(f"QG ROUGE-1: {mean:.4f} over {len(scores)} questions")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                json.dump({"qg_rouge1": mean, "count": len(scores)}, fh)
                fh.write("\n")
        return 0

    gold_corpus = load_corpus(args.gold)
    gold_args = [
        ArgumentUnit(r.id, a.start, a.end, m.event_type, a.role)
        for r in gold_corpus
        for m in r.mentions
        for a in m.arguments
    ]
    pred_args = [
        ArgumentUnit(row["id"], row["start"], row["end"], row["event_type"], row["role"])
        for row in _read_jsonl(args.pred)
    ]
    arg_i, arg_c = score_arguments(pred_args, gold_args)

    trigger_id = trigger_c = None
    if args.triggers:
        gold_triggers = [
            TriggerUnit(r.id, m.trigger.start, m.trigger.end, m.event_type)
            for r in gold_corpus
            for m in r.mentions
        ]
        pred_triggers = [
            TriggerUnit(row["id"], row["start"], row["end"], row["event_type"])
            for row in _read_jsonl(args.triggers)
        ]
        trigger_id, trigger_c = score_triggers(pred_triggers, gold_triggers)

    report = ScoreReport(trigger_id=trigger_id, trigger_c=trigger_c, arg_i=arg_i, arg_c=arg_c)
    print(report.format_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2)
            fh.write("\n")
    return 0


def cmd_pipeline(args: argparse.Namespace) -> int:
    config = PipelineConfig.from_file(args.config)
    result = run_pipeline(config)
    _warn(result.warnings)
    print(result.report.format_table())
    print(
        f"tasks: {result.task_count}, skipped mentions: {result.skipped_mentions},"
        f" skipped roles: {result.skipped_roles}",
        file=sys.stderr,
    )
    print(f"artifacts in {result.output_dir}", file=sys.stderr)
    return 0


def cmd_make_oracle(args: argparse.Namespace) -> int:
    registry = load_registry(args.registry)
    corpus = load_corpus(args.corpus)
    book = build_oracle_book(registry, corpus, eos_token=args.eos)
    write_oracle_book(book, args.out)
    print(
        f"wrote oracle book with {len(book['qg'])} QG and {len(book['qa'])} QA entries"
        f" to {args.out}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qga",
        description="Event argument extraction via question generation + question answering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prepare-qg", help="emit QG training examples from a gold corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--registry", default=default_registry_path())
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare_qg)

    p = sub.add_parser("prepare-qa", help="emit QA examples (train: augmented; infer: from QG output)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--registry", default=default_registry_path())
    p.add_argument("--mode", choices=("train", "infer"), default="train")
    p.add_argument("--questions", help="QG raw-output JSONL (required for --mode infer)")
    p.add_argument("--eos", default="</s>")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_prepare_qa)

    p = sub.add_parser("infer", help="run a backend over text-to-text inputs")
    p.add_argument("--stage", choices=("qg", "qa"), required=True)
    p.add_argument("--inputs", required=True)
    p.add_argument("--backend", required=True, help="http(s)://... or oracle:<book path>")
    p.add_argument("--out", required=True)
    p.add_argument("--max-length", type=int)
    p.add_argument("--num-beams", type=int)
    p.add_argument("--length-penalty", type=float)
    p.add_argument("--batch-size", type=int, default=16)
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("decode", help="map raw answers to character spans")
    p.add_argument("--answers", required=True, help="raw QA output JSONL")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--discards", help="optional JSONL for unalignable answer pieces")
    p.add_argument("--eos", default="</s>")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("score", help="score predictions against a gold corpus")
    p.add_argument("--pred", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--triggers", help="trigger predictions JSONL (id/start/end/event_type)")
    p.add_argument("--qg-eval", action="store_true", help="ROUGE-1 of questions instead of spans")
    p.add_argument("--eos", default="</s>")
    p.add_argument("--out", help="write the report as JSON here")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("pipeline", help="run QG -> QA -> decode -> score from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("make-oracle", help="derive an oracle backend book from a gold corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--registry", default=default_registry_path())
    p.add_argument("--out", required=True)
    p.add_argument("--eos", default="</s>")
    p.set_defaults(func=cmd_make_oracle)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (QgaError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
