"""End-to-end run: enumerate tasks, generate questions, answer, decode, score.

Every intermediate is persisted to the output directory so failed or
surprising runs can be audited stage by stage:

    qg_inputs.jsonl    one row per task, text-to-text example format
    qg_outputs.jsonl   raw generated questions
    qa_inputs.jsonl    questions rewritten with the trigger clause
    qa_outputs.jsonl   raw generated answers
    predictions.jsonl  decoded argument spans
    discards.jsonl     answer pieces that failed span alignment
    report.json/.txt   scores and run counters

With an oracle backend the run is deterministic: identical config and
inputs produce byte-identical artifacts.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from . import backend as backend_mod
from .corpus import EventMention, SentenceRecord, load_corpus
from .decode import align_spans, parse_answer
from .errors import ConfigError
from .ontology import TemplateRegistry, load_registry
from .qa_data import emit_qa_inference
from .question_gen import qg_input, select_gold_question
from .scoring import ArgumentUnit, ScoreReport, TriggerUnit, rouge1, score_arguments, score_triggers
from .seq2seq import ExampleMeta, Seq2SeqExample


class Task(NamedTuple):
    """One (record, mention, role) question to ask."""

    record: SentenceRecord
    mention_index: int
    mention: EventMention
    role: str


@dataclass
class PipelineConfig:
    registry_path: str
    corpus_path: str
    backend: str
    output_dir: str
    eos_token: str = "</s>"
    gold_corpus_path: str | None = None
    qg_overrides: dict[str, Any] = field(default_factory=dict)
    qa_overrides: dict[str, Any] = field(default_factory=dict)
    batch_size: int = 16

    @classmethod
    def from_file(cls, path: str) -> "PipelineConfig":
        """Load a JSON config; relative paths resolve against the config dir."""
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError(f"config {path} must be a JSON object")

        base = os.path.dirname(os.path.abspath(path))

        def resolve(p: str) -> str:
            return p if os.path.isabs(p) else os.path.join(base, p)

        missing = [k for k in ("registry", "corpus", "backend", "output_dir") if k not in data]
        if missing:
            raise ConfigError(f"config {path} missing keys: {', '.join(missing)}")

        backend_spec = data["backend"]
        if backend_spec.startswith("oracle:"):
            backend_spec = "oracle:" + resolve(backend_spec[len("oracle:") :])

        known = {
            "registry", "corpus", "backend", "output_dir", "eos_token",
            "gold_corpus", "qg", "qa", "batch_size",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"config {path} has unknown keys: {', '.join(sorted(unknown))}")

        for stage in ("qg", "qa"):
            overrides = data.get(stage, {})
            bad = set(overrides) - {"max_length", "num_beams", "length_penalty"}
            if bad:
                raise ConfigError(f"config {path}: unknown {stage} override(s): {sorted(bad)}")

        return cls(
            registry_path=resolve(data["registry"]),
            corpus_path=resolve(data["corpus"]),
            backend=backend_spec,
            output_dir=resolve(data["output_dir"]),
            eos_token=data.get("eos_token", "</s>"),
            gold_corpus_path=resolve(data["gold_corpus"]) if data.get("gold_corpus") else None,
            qg_overrides=dict(data.get("qg", {})),
            qa_overrides=dict(data.get("qa", {})),
            batch_size=int(data.get("batch_size", 16)),
        )


@dataclass
class PipelineResult:
    report: ScoreReport
    task_count: int
    skipped_mentions: int
    skipped_roles: int
    warnings: list[str]
    output_dir: str


def enumerate_tasks(
    registry: TemplateRegistry, corpus: list[SentenceRecord]
) -> tuple[list[Task], list[str]]:
    """All (record, mention, role) tasks in deterministic order.

    Order: corpus order, then mention order, then the event type's role
    inventory order. Mentions of unknown event types are skipped with a
    warning instead of failing the run.
    """
    tasks: list[Task] = []
    warnings: list[str] = []
    for record in corpus:
        for mi, mention in enumerate(record.mentions):
            if not registry.has_event_type(mention.event_type):
                warnings.append(
                    f"record {record.id!r} mention {mi}: unknown event type"
                    f" {mention.event_type!r}, skipped"
                )
                continue
            for role in registry.roles_for(mention.event_type):
                tasks.append(Task(record, mi, mention, role))
    return tasks, warnings


def _generate_batched(
    backend, params: backend_mod.GenerationRequest, inputs: list[str], batch_size: int
) -> list[str]:
    outputs: list[str] = []
    for i in range(0, len(inputs), batch_size):
        request = params.with_inputs(inputs[i : i + batch_size])
        outputs.extend(backend_mod.generate(backend, request))
    return outputs


def _write_jsonl(path: str, rows: list[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def _clean_question(raw: str, eos_token: str) -> str:
    text = raw.strip()
    if eos_token and text.endswith(eos_token):
        text = text[: -len(eos_token)].strip()
    if not text.endswith("?"):
        raise backend_mod.ProtocolError(f"QG backend produced a non-question: {raw!r}")
    return text


def run_pipeline(config: PipelineConfig) -> PipelineResult:
    registry = load_registry(config.registry_path)
    corpus = load_corpus(config.corpus_path)
    if config.gold_corpus_path:
        gold_corpus = load_corpus(config.gold_corpus_path)
        scoring_against_self = False
    else:
        gold_corpus = corpus
        scoring_against_self = True

    backend = backend_mod.make_backend(config.backend)
    os.makedirs(config.output_dir, exist_ok=True)

    all_tasks, warnings = enumerate_tasks(registry, corpus)
    skipped_mentions = len(warnings)

    # Roles in the inventory without a template entry cannot be asked about.
    tasks: list[Task] = []
    skipped_roles = 0
    for task in all_tasks:
        if registry.has_entry(task.mention.event_type, task.role):
            tasks.append(task)
        else:
            skipped_roles += 1
            warnings.append(
                f"record {task.record.id!r} mention {task.mention_index}: no template"
                f" entry for role {task.role!r} of {task.mention.event_type!r}, skipped"
            )

    def meta(task: Task) -> ExampleMeta:
        return ExampleMeta(
            event_type=task.mention.event_type,
            trigger_start=task.mention.trigger.start,
            trigger_end=task.mention.trigger.end,
        )

    # Stage 1: question generation.
    qg_examples = [
        Seq2SeqExample(
            input=qg_input(task.record.text, task.mention, task.role),
            output="",
            id=task.record.id,
            role=task.role,
            mention=task.mention_index,
            meta=meta(task),
        )
        for task in tasks
    ]
    _write_jsonl(
        os.path.join(config.output_dir, "qg_inputs.jsonl"),
        [ex.to_dict() for ex in qg_examples],
    )
    qg_params = dataclasses.replace(backend_mod.default_qg_params(), **config.qg_overrides)
    raw_questions = _generate_batched(
        backend, qg_params, [ex.input for ex in qg_examples], config.batch_size
    )
    _write_jsonl(
        os.path.join(config.output_dir, "qg_outputs.jsonl"),
        [
            {"id": t.record.id, "mention": t.mention_index, "role": t.role, "raw": raw}
            for t, raw in zip(tasks, raw_questions)
        ],
    )
    questions = [_clean_question(raw, config.eos_token) for raw in raw_questions]

    # Stage 2: question answering.
    qa_examples = [
        emit_qa_inference(q, task.record, task.mention, task.role, task.mention_index)
        for q, task in zip(questions, tasks)
    ]
    _write_jsonl(
        os.path.join(config.output_dir, "qa_inputs.jsonl"),
        [ex.to_dict() for ex in qa_examples],
    )
    qa_params = dataclasses.replace(backend_mod.default_qa_params(), **config.qa_overrides)
    raw_answers = _generate_batched(
        backend, qa_params, [ex.input for ex in qa_examples], config.batch_size
    )
    _write_jsonl(
        os.path.join(config.output_dir, "qa_outputs.jsonl"),
        [
            {"id": t.record.id, "mention": t.mention_index, "role": t.role, "raw": raw}
            for t, raw in zip(tasks, raw_answers)
        ],
    )

    # Stage 3: decode answers to spans.
    prediction_rows: list[dict] = []
    discard_rows: list[dict] = []
    pred_args: list[ArgumentUnit] = []
    for task, raw in zip(tasks, raw_answers):
        candidates = parse_answer(raw, config.eos_token)
        decoded = align_spans(candidates, task.record.text)
        for span in decoded.spans:
            prediction_rows.append(
                {
                    "id": task.record.id,
                    "mention": task.mention_index,
                    "event_type": task.mention.event_type,
                    "role": task.role,
                    "start": span.start,
                    "end": span.end,
                    "surface": span.surface,
                }
            )
            pred_args.append(
                ArgumentUnit(
                    record_id=task.record.id,
                    start=span.start,
                    end=span.end,
                    event_type=task.mention.event_type,
                    role=task.role,
                )
            )
        for piece in decoded.discarded:
            discard_rows.append(
                {
                    "id": task.record.id,
                    "mention": task.mention_index,
                    "role": task.role,
                    "piece": piece,
                }
            )
    _write_jsonl(os.path.join(config.output_dir, "predictions.jsonl"), prediction_rows)
    _write_jsonl(os.path.join(config.output_dir, "discards.jsonl"), discard_rows)

    # Stage 4: score against gold.
    pred_triggers = [
        TriggerUnit(r.id, m.trigger.start, m.trigger.end, m.event_type)
        for r in corpus
        for m in r.mentions
    ]
    gold_triggers = [
        TriggerUnit(r.id, m.trigger.start, m.trigger.end, m.event_type)
        for r in gold_corpus
        for m in r.mentions
    ]
    gold_args = [
        ArgumentUnit(r.id, a.start, a.end, m.event_type, a.role)
        for r in gold_corpus
        for m in r.mentions
        for a in m.arguments
    ]
    trigger_id, trigger_c = score_triggers(pred_triggers, gold_triggers)
    arg_i, arg_c = score_arguments(pred_args, gold_args)

    qg_rouge = None
    if scoring_against_self and tasks:
        # Gold questions only line up with generated ones when the run
        # corpus is the gold corpus.
        gold_questions = [
            select_gold_question(registry, task.mention, task.role).text for task in tasks
        ]
        qg_rouge = sum(rouge1(q, g) for q, g in zip(questions, gold_questions)) / len(tasks)

    report = ScoreReport(
        trigger_id=trigger_id,
        trigger_c=trigger_c,
        arg_i=arg_i,
        arg_c=arg_c,
        qg_rouge1=qg_rouge,
    )
    report_obj = {
        "report": report.to_dict(),
        "counters": {
            "records": len(corpus),
            "mentions": sum(len(r.mentions) for r in corpus),
            "enumerated_tasks": len(all_tasks),
            "tasks": len(tasks),
            "skipped_mentions": skipped_mentions,
            "skipped_roles": skipped_roles,
            "predictions": len(prediction_rows),
            "discarded_pieces": len(discard_rows),
        },
        "warnings": warnings,
    }
    with open(os.path.join(config.output_dir, "report.json"), "w", encoding="utf-8") as fh:
        json.dump(report_obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")
    with open(os.path.join(config.output_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(report.format_table() + "\n")

    return PipelineResult(
        report=report,
        task_count=len(tasks),
        skipped_mentions=skipped_mentions,
        skipped_roles=skipped_roles,
        warnings=warnings,
        output_dir=config.output_dir,
    )
