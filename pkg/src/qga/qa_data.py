"""QA data construction: question + trigger clause in, answer list out.

Training answers join the role's gold argument surfaces with "; " in
ascending start order; a role with no arguments yields the empty string.
Training emits one example per applicable candidate question, so a
mention with m slotted roles present contributes 2^m examples for that
role (the augmentation that grows the QA set beyond one-per-role).
"""

from __future__ import annotations

import re

from .corpus import ArgumentSpan, EventMention, SentenceRecord, arguments_for_role
from .ontology import TemplateRegistry
from .question_gen import candidate_questions
from .seq2seq import ExampleMeta, Seq2SeqExample

# A question that already carries a trigger clause ends like "... in * shot * event?".
_TRIGGER_CLAUSE_RE = re.compile(r" in \* .+ \* event\?$")


def attach_trigger_clause(question: str, trigger_surface: str) -> str:
    """Rewrite the terminal "?" into an " in * <trigger> * event?" clause."""
    if not question.endswith("?"):
        raise ValueError(f"malformed question (no terminal '?'): {question!r}")
    if _TRIGGER_CLAUSE_RE.search(question):
        raise ValueError(f"question already carries a trigger clause: {question!r}")
    return question[:-1] + f" in * {trigger_surface} * event?"


def serialize_answer(arguments: list[ArgumentSpan]) -> str:
    """Join argument surfaces with "; "; empty list serializes to ""."""
    return "; ".join(a.surface for a in arguments)


def qa_input(question: str, trigger_surface: str, text: str) -> str:
    return f"question: {attach_trigger_clause(question, trigger_surface)} context: {text}"


def _meta(mention: EventMention) -> ExampleMeta:
    return ExampleMeta(
        event_type=mention.event_type,
        trigger_start=mention.trigger.start,
        trigger_end=mention.trigger.end,
    )


def emit_qa_training(
    registry: TemplateRegistry,
    record: SentenceRecord,
    mention: EventMention,
    role: str,
    mention_index: int = 0,
) -> list[Seq2SeqExample]:
    """All augmented QA examples for (mention, role): one per candidate."""
    answer = serialize_answer(arguments_for_role(mention, role))
    examples = []
    for candidate in candidate_questions(registry, mention, role):
        examples.append(
            Seq2SeqExample(
                input=qa_input(candidate.text, mention.trigger_surface, record.text),
                output=answer,
                id=record.id,
                role=role,
                mention=mention_index,
                meta=_meta(mention),
            )
        )
    return examples


def emit_qa_inference(
    question: str,
    record: SentenceRecord,
    mention: EventMention,
    role: str,
    mention_index: int = 0,
) -> Seq2SeqExample:
    """One QA inference example from a generated question (no gold output)."""
    return Seq2SeqExample(
        input=qa_input(question, mention.trigger_surface, record.text),
        output="",
        id=record.id,
        role=role,
        mention=mention_index,
        meta=_meta(mention),
    )
