"""Deterministic oracle books for offline pipeline runs.

A book maps the exact QG/QA input strings the pipeline will produce to
the canned outputs a perfect model would return: the gold question for
every task, and the gold "; "-joined answer (with a trailing eos token,
the way a raw decoder emits it).
"""

from __future__ import annotations

import json

from .corpus import SentenceRecord, arguments_for_role
from .ontology import TemplateRegistry
from .pipeline import enumerate_tasks
from .qa_data import qa_input, serialize_answer
from .question_gen import qg_input, select_gold_question


def build_oracle_book(
    registry: TemplateRegistry,
    corpus: list[SentenceRecord],
    eos_token: str = "</s>",
) -> dict:
    qg_book: dict[str, str] = {}
    qa_book: dict[str, str] = {}
    tasks, _ = enumerate_tasks(registry, corpus)
    for task in tasks:
        if not registry.has_entry(task.mention.event_type, task.role):
            continue
        gold = select_gold_question(registry, task.mention, task.role)

        qg_key = qg_input(task.record.text, task.mention, task.role)
        if qg_book.get(qg_key, gold.text) != gold.text:
            raise ValueError(f"conflicting QG oracle outputs for input: {qg_key!r}")
        qg_book[qg_key] = gold.text

        answer = serialize_answer(arguments_for_role(task.mention, task.role))
        raw = f"{answer} {eos_token}" if answer else eos_token
        qa_key = qa_input(gold.text, task.mention.trigger_surface, task.record.text)
        if qa_book.get(qa_key, raw) != raw:
            raise ValueError(f"conflicting QA oracle outputs for input: {qa_key!r}")
        qa_book[qa_key] = raw
    return {"eos_token": eos_token, "qg": qg_book, "qa": qa_book}


def write_oracle_book(book: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(book, fh, ensure_ascii=False, indent=2, sort_keys=True)
        fh.write("\n")
