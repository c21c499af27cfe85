"""Sentence-level corpus with event mentions and character-offset spans.

Offsets index Unicode code points of the record's own text field
(sentence-local, not document-local). Every span's surface must equal
text[start:end]; the loader rejects records where a stored surface
disagrees with the slice.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable

from .errors import CorpusError


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class ArgumentSpan:
    start: int
    end: int
    role: str
    surface: str


@dataclass(frozen=True)
class EventMention:
    event_type: str
    trigger: Span
    trigger_surface: str
    arguments: tuple[ArgumentSpan, ...]


@dataclass(frozen=True)
class SentenceRecord:
    id: str
    text: str
    mentions: tuple[EventMention, ...]


def _check_span(start: Any, end: Any, text: str, what: str, rid: str) -> None:
    if not isinstance(start, int) or not isinstance(end, int):
        raise CorpusError(f"record {rid!r}: {what} offsets must be integers")
    if not (0 <= start < end <= len(text)):
        raise CorpusError(
            f"record {rid!r}: {what} span ({start}, {end}) out of range for text of"
            f" length {len(text)}"
        )


def record_from_dict(obj: dict[str, Any]) -> SentenceRecord:
    """Validate one raw record object and build a SentenceRecord."""
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise CorpusError(f"record with id {rid!r}: id must be a non-empty string")
    text = obj.get("text")
    if not isinstance(text, str):
        raise CorpusError(f"record {rid!r}: text must be a string")

    mentions = []
    for m in obj.get("mentions", []):
        event_type = m.get("event_type")
        if not isinstance(event_type, str) or not event_type:
            raise CorpusError(f"record {rid!r}: mention missing event_type")
        trig = m.get("trigger")
        if not isinstance(trig, dict):
            raise CorpusError(f"record {rid!r}: mention missing trigger")
        _check_span(trig.get("start"), trig.get("end"), text, "trigger", rid)
        trig_surface = text[trig["start"] : trig["end"]]
        if "surface" in trig and trig["surface"] != trig_surface:
            raise CorpusError(
                f"record {rid!r}: trigger surface {trig['surface']!r} does not match"
                f" slice {trig_surface!r}"
            )

        args = []
        for a in m.get("arguments", []):
            role = a.get("role")
            if not isinstance(role, str) or not role:
                raise CorpusError(f"record {rid!r}: argument missing role")
            _check_span(a.get("start"), a.get("end"), text, f"argument ({role})", rid)
            surface = text[a["start"] : a["end"]]
            if "surface" in a and a["surface"] != surface:
                raise CorpusError(
                    f"record {rid!r}: argument surface {a['surface']!r} does not match"
                    f" slice {surface!r}"
                )
            args.append(ArgumentSpan(start=a["start"], end=a["end"], role=role, surface=surface))
        # Stable ascending-start order; ties keep input order.
        args.sort(key=lambda s: s.start)
        mentions.append(
            EventMention(
                event_type=event_type,
                trigger=Span(trig["start"], trig["end"]),
                trigger_surface=trig_surface,
                arguments=tuple(args),
            )
        )
    return SentenceRecord(id=rid, text=text, mentions=tuple(mentions))


def load_corpus(path: str) -> list[SentenceRecord]:
    """Load a JSONL corpus, one record per line. Blank lines are skipped."""
    records = []
    seen_ids: set[str] = set()
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise CorpusError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
                try:
                    record = record_from_dict(obj)
                except CorpusError as exc:
                    raise CorpusError(f"{path}:{lineno}: {exc}") from exc
                if record.id in seen_ids:
                    raise CorpusError(f"{path}:{lineno}: duplicate record id {record.id!r}")
                seen_ids.add(record.id)
                records.append(record)
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    return records


def record_to_dict(record: SentenceRecord) -> dict[str, Any]:
    """Canonical serialized form: surfaces included, arguments sorted."""
    return {
        "id": record.id,
        "text": record.text,
        "mentions": [
            {
                "event_type": m.event_type,
                "trigger": {
                    "start": m.trigger.start,
                    "end": m.trigger.end,
                    "surface": m.trigger_surface,
                },
                "arguments": [
                    {"start": a.start, "end": a.end, "role": a.role, "surface": a.surface}
                    for a in m.arguments
                ],
            }
            for m in record.mentions
        ],
    }


def dump_corpus(records: Iterable[SentenceRecord], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record_to_dict(record), ensure_ascii=False) + "\n")


def mark_trigger(text: str, trigger: Span) -> str:
    """Wrap the trigger span in asterisk markers: "* trigger *".

    Inserts "* " before the span and " *" after it, so the marked text is
    exactly four characters longer than the input.
    """
    return text[: trigger.start] + "* " + text[trigger.start : trigger.end] + " *" + text[trigger.end :]


def arguments_for_role(mention: EventMention, role: str) -> list[ArgumentSpan]:
    """Gold arguments of one role, in ascending start order."""
    return [a for a in mention.arguments if a.role == role]
