"""Answer-string decoding back to character spans.

The answer format is "; "-separated surfaces in sentence order, so
alignment walks a cursor through the sentence: each surface is matched
at its first occurrence at or after the cursor, and the cursor then
advances to match_start + 1. Matched spans therefore have strictly
increasing starts; surfaces that never occur at or after the cursor are
discarded rather than guessed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import ArgumentSpan


@dataclass
class DecodedArguments:
    spans: list[ArgumentSpan]
    discarded: list[str]


def parse_answer(raw: str, eos_token: str = "</s>") -> list[str]:
    """Split a raw model answer into candidate surfaces.

    Strips one trailing eos token if present, splits on ";", trims
    whitespace, and drops empty pieces ("</s>" alone means no answer).
    """
    text = raw.rstrip()
    if eos_token and text.endswith(eos_token):
        text = text[: -len(eos_token)]
    parts = (piece.strip() for piece in text.split(";"))
    return [piece for piece in parts if piece]


def align_spans(candidates: list[str], text: str) -> DecodedArguments:
    """Map candidate surfaces to spans with an advancing cursor.

    Role fields on the returned spans are left empty; the caller attaches
    the role it asked about.
    """
    spans: list[ArgumentSpan] = []
    discarded: list[str] = []
    cursor = 0
    for candidate in candidates:
        pos = text.find(candidate, cursor)
        if pos < 0:
            discarded.append(candidate)
            continue
        spans.append(ArgumentSpan(start=pos, end=pos + len(candidate), role="", surface=candidate))
        cursor = pos + 1
    return DecodedArguments(spans=spans, discarded=discarded)
