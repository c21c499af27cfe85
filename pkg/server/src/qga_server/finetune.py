"""Fine-tune a local seq2seq checkpoint on input/output JSONL rows.

Reads the JSONL the pipeline's prepare commands write; only the "input"
and "output" fields matter here, everything else is provenance. Default
hyperparameters differ by task: question generation trains at 1e-4,
answering at 2e-4; both use Adafactor with weight decay 1e-5, 20 epochs,
batch size 2, gradient accumulation 32, and 10% linear warmup.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

TASK_LEARNING_RATES = {"qg": 1e-4, "qa": 2e-4}


class DataError(ValueError):
    pass


def default_learning_rate(task: str) -> float:
    if task not in TASK_LEARNING_RATES:
        raise ValueError(f"task must be one of {sorted(TASK_LEARNING_RATES)}, got {task!r}")
    return TASK_LEARNING_RATES[task]


@dataclass
class TrainConfig:
    task: str
    learning_rate: float | None = None  # None -> task default
    weight_decay: float = 1e-5
    epochs: int = 20
    batch_size: int = 2
    grad_accum: int = 32
    warmup: float = 0.1
    max_input_tokens: int = 256
    max_output_tokens: int = 64
    limit: int | None = None
    seed: int = 13

    def resolved_learning_rate(self) -> float:
        if self.learning_rate is not None:
            return self.learning_rate
        return default_learning_rate(self.task)


@dataclass
class TrainResult:
    examples: int
    optimizer_steps: int
    final_loss: float
    output_dir: str
    history: list[float] = field(default_factory=list)


def load_examples(path: str, limit: int | None = None) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = []
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise DataError(f"cannot read examples {path}: {exc}") from exc
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            row = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
        if not isinstance(row, dict) or not isinstance(row.get("input"), str):
            raise DataError(f"{path}:{lineno}: row must be an object with a string 'input'")
        output = row.get("output", "")
        if not isinstance(output, str):
            raise DataError(f"{path}:{lineno}: 'output' must be a string")
        pairs.append((row["input"], output))
        if limit is not None and len(pairs) >= limit:
            break
    if not pairs:
        raise DataError(f"{path}: no examples found")
    return pairs


def finetune(
    examples_path: str,
    base_checkpoint: str,
    out_dir: str,
    config: TrainConfig,
) -> TrainResult:
    import torch
    from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
    from transformers.optimization import Adafactor
    from transformers.utils import logging as hf_logging

    hf_logging.disable_progress_bar()
    pairs = load_examples(examples_path, limit=config.limit)
    model = AutoModelForSeq2SeqLM.from_pretrained(base_checkpoint)
    tokenizer = AutoTokenizer.from_pretrained(base_checkpoint)
    model.train()

    lr = config.resolved_learning_rate()
    optimizer = Adafactor(
        model.parameters(),
        lr=lr,
        weight_decay=config.weight_decay,
        scale_parameter=False,
        relative_step=False,
        warmup_init=False,
    )

    batches_per_epoch = (len(pairs) + config.batch_size - 1) // config.batch_size
    steps_per_epoch = (batches_per_epoch + config.grad_accum - 1) // config.grad_accum
    total_steps = max(1, steps_per_epoch * config.epochs)
    warmup_steps = int(config.warmup * total_steps)

    def lr_factor(step: int) -> float:
        if step < warmup_steps:
            return (step + 1) / warmup_steps
        remaining = max(1, total_steps - warmup_steps)
        return max(0.0, (total_steps - step) / remaining)

    scheduler = torch.optim.lr_scheduler.LambdaLR(optimizer, lr_factor)

    eos_id = tokenizer.eos_token_id
    eos_text = tokenizer.eos_token

    def encode_labels(targets: list[str]):
        # the pipeline's training JSONL carries bare answers; an EOS is
        # appended here. A textual EOS already present is normalized away
        # first so oracle-book style data does not end with two of them.
        rows = []
        for target in targets:
            text = target.rstrip()
            if eos_text and text.endswith(eos_text):
                text = text[: -len(eos_text)].rstrip()
            ids = tokenizer(
                text, truncation=True, max_length=config.max_output_tokens - 1
            )["input_ids"]
            rows.append(ids + [eos_id])
        width = max(len(r) for r in rows)
        return torch.tensor(
            [r + [-100] * (width - len(r)) for r in rows]  # -100: ignored by the loss
        )

    def encode(batch: list[tuple[str, str]]):
        enc = tokenizer(
            [p[0] for p in batch], return_tensors="pt", padding=True,
            truncation=True, max_length=config.max_input_tokens,
        )
        return enc, encode_labels([p[1] for p in batch])

    rng = random.Random(config.seed)
    torch.manual_seed(config.seed)
    history: list[float] = []
    optimizer_steps = 0
    last_loss = 0.0
    for _ in range(config.epochs):
        order = list(range(len(pairs)))
        rng.shuffle(order)
        pending = 0
        for start in range(0, len(order), config.batch_size):
            batch = [pairs[i] for i in order[start : start + config.batch_size]]
            enc, labels = encode(batch)
            loss = model(
                input_ids=enc["input_ids"],
                attention_mask=enc["attention_mask"],
                labels=labels,
            ).loss
            last_loss = float(loss.detach())
            history.append(last_loss)
            (loss / config.grad_accum).backward()
            pending += 1
            if pending == config.grad_accum:
                optimizer.step()
                scheduler.step()
                optimizer.zero_grad()
                optimizer_steps += 1
                pending = 0
        if pending:  # flush the tail of the epoch
            optimizer.step()
            scheduler.step()
            optimizer.zero_grad()
            optimizer_steps += 1

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return TrainResult(
        examples=len(pairs),
        optimizer_steps=optimizer_steps,
        final_loss=last_loss,
        output_dir=str(out),
        history=history,
    )
