"""Question generation over slot-filling question templates.

For a (mention, target role) pair the candidate questions are the
entry's templates whose slot roles all have at least one gold argument
in the mention, filled with those arguments' surfaces. The gold question
for training keeps the most specific candidate (most slots, earliest
template on ties); when the target role itself has no gold argument the
base template is used as-is.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import EventMention, SentenceRecord, arguments_for_role, mark_trigger
from .ontology import PLACEHOLDER_RE, DynamicTemplate, TemplateRegistry
from .seq2seq import ExampleMeta, Seq2SeqExample


@dataclass(frozen=True)
class CandidateQuestion:
    """A filled template: its index within the entry, slot count, and text."""

    template_index: int
    slot_count: int
    text: str


def applicable_templates(
    registry: TemplateRegistry, mention: EventMention, role: str
) -> list[DynamicTemplate]:
    """Templates whose every slot role has a gold argument, in entry order."""
    present = {a.role for a in mention.arguments}
    entry = registry.templates_for(mention.event_type, role)
    return [tpl for tpl in entry if set(tpl.slots) <= present]


def fill_template(
    registry: TemplateRegistry, template: DynamicTemplate, mention: EventMention
) -> CandidateQuestion:
    """Fill each placeholder with the earliest gold argument of that role."""
    entry = registry.templates_for(template.event_type, template.target_role)
    try:
        index = entry.index(template)
    except ValueError:
        raise ValueError(
            f"template {template.text!r} is not part of the"
            f" ({template.event_type}, {template.target_role}) entry"
        ) from None

    def replace(match):
        role = match.group(1)
        args = arguments_for_role(mention, role)
        if not args:
            raise ValueError(
                f"cannot fill [{role}] for ({template.event_type},"
                f" {template.target_role}): mention has no {role} argument"
            )
        return args[0].surface

    text = PLACEHOLDER_RE.sub(replace, template.text)
    return CandidateQuestion(template_index=index, slot_count=len(template.slots), text=text)


def candidate_questions(
    registry: TemplateRegistry, mention: EventMention, role: str
) -> list[CandidateQuestion]:
    """All applicable templates for the role, filled, in entry order."""
    return [
        fill_template(registry, tpl, mention)
        for tpl in applicable_templates(registry, mention, role)
    ]


def select_gold_question(
    registry: TemplateRegistry, mention: EventMention, role: str
) -> CandidateQuestion:
    """The training target question for (mention, role).

    Roles with no gold argument get the unfilled base template. Otherwise
    the applicable candidate with the most slots wins; ties break toward
    the smaller template index.
    """
    entry = registry.templates_for(mention.event_type, role)
    if not arguments_for_role(mention, role):
        base = entry[0]
        return CandidateQuestion(template_index=0, slot_count=0, text=base.text)
    candidates = candidate_questions(registry, mention, role)
    return max(candidates, key=lambda c: (c.slot_count, -c.template_index))


def qg_input(text: str, mention: EventMention, role: str) -> str:
    """Model input: lowercased role name plus the trigger-marked sentence."""
    return f"role: {role.lower()} context: {mark_trigger(text, mention.trigger)}"


def emit_qg_example(
    registry: TemplateRegistry,
    record: SentenceRecord,
    mention: EventMention,
    role: str,
    mention_index: int = 0,
) -> Seq2SeqExample:
    """One QG training example: marked context in, gold question out."""
    gold = select_gold_question(registry, mention, role)
    return Seq2SeqExample(
        input=qg_input(record.text, mention, role),
        output=gold.text,
        id=record.id,
        role=role,
        mention=mention_index,
        meta=ExampleMeta(
            event_type=mention.event_type,
            trigger_start=mention.trigger.start,
            trigger_end=mention.trigger.end,
        ),
    )
