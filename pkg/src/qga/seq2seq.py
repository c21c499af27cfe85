"""Text-to-text example records shared by the QG and QA data builders."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


@dataclass(frozen=True)
class ExampleMeta:
    """Provenance of an example: which event mention produced it."""

    event_type: str
    trigger_start: int
    trigger_end: int


@dataclass(frozen=True)
class Seq2SeqExample:
    """One input/output pair for a text-to-text model.

    `output` may be empty (inference-time examples, or QA examples for a
    role with no arguments). `mention` is the index of the event mention
    within its record; records can hold several mentions, including
    several of the same event type, so (id, mention, role) is the key.
    """

    input: str
    output: str
    id: str
    role: str
    mention: int = 0
    meta: ExampleMeta | None = None

    def to_dict(self) -> dict[str, Any]:
        obj: dict[str, Any] = {
            "input": self.input,
            "output": self.output,
            "id": self.id,
            "role": self.role,
            "mention": self.mention,
        }
        if self.meta is not None:
            obj["meta"] = {
                "event_type": self.meta.event_type,
                "trigger": {"start": self.meta.trigger_start, "end": self.meta.trigger_end},
            }
        return obj


def example_from_dict(obj: dict[str, Any]) -> Seq2SeqExample:
    meta = None
    if "meta" in obj and obj["meta"] is not None:
        m = obj["meta"]
        meta = ExampleMeta(
            event_type=m["event_type"],
            trigger_start=m["trigger"]["start"],
            trigger_end=m["trigger"]["end"],
        )
    return Seq2SeqExample(
        input=obj["input"],
        output=obj.get("output", ""),
        id=obj["id"],
        role=obj["role"],
        mention=int(obj.get("mention", 0)),
        meta=meta,
    )
