"""Exact-match scoring for triggers and arguments, plus ROUGE-1 for questions.

All four criteria are one-to-one multiset matches on exact keys:

  Trigger-ID  (record id, start, end)
  Trigger-C   (record id, start, end, event type)
  Arg-I       (record id, start, end, event type)
  Arg-C       (record id, start, end, event type, role)

A prediction can satisfy at most one gold unit, so the true-positive
count per key is min(pred occurrences, gold occurrences).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class TriggerUnit(NamedTuple):
    record_id: str
    start: int
    end: int
    event_type: str


class ArgumentUnit(NamedTuple):
    record_id: str
    start: int
    end: int
    event_type: str
    role: str


@dataclass(frozen=True)
class PRF:
    """Precision/recall/F1 with the counts they came from.

    Zero denominators yield zero scores: no predictions means zero
    precision, no gold means zero recall, and F1 is zero when P+R is.
    """

    tp: int
    pred_count: int
    gold_count: int

    @property
    def precision(self) -> float:
        return self.tp / self.pred_count if self.pred_count else 0.0

    @property
    def recall(self) -> float:
        return self.tp / self.gold_count if self.gold_count else 0.0

    @property
    def f1(self) -> float:
        p, r = self.precision, self.recall
        return 2 * p * r / (p + r) if p + r else 0.0

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "pred_count": self.pred_count,
            "gold_count": self.gold_count,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
        }


def _matched(pred_keys: Iterable, gold_keys: Iterable) -> int:
    overlap = Counter(pred_keys) & Counter(gold_keys)
    return sum(overlap.values())


def score_triggers(
    pred: Sequence[TriggerUnit], gold: Sequence[TriggerUnit]
) -> tuple[PRF, PRF]:
    """(Trigger-ID, Trigger-C): span identification, then +event type."""
    id_tp = _matched(
        ((t.record_id, t.start, t.end) for t in pred),
        ((t.record_id, t.start, t.end) for t in gold),
    )
    c_tp = _matched(pred, gold)
    return (
        PRF(id_tp, len(pred), len(gold)),
        PRF(c_tp, len(pred), len(gold)),
    )


def score_arguments(
    pred: Sequence[ArgumentUnit], gold: Sequence[ArgumentUnit]
) -> tuple[PRF, PRF]:
    """(Arg-I, Arg-C): span + event type identification, then +role."""
    i_tp = _matched(
        ((a.record_id, a.start, a.end, a.event_type) for a in pred),
        ((a.record_id, a.start, a.end, a.event_type) for a in gold),
    )
    c_tp = _matched(pred, gold)
    return (
        PRF(i_tp, len(pred), len(gold)),
        PRF(c_tp, len(pred), len(gold)),
    )


def rouge1(candidate: str, reference: str) -> float:
    """Unigram-overlap F measure over lowercased whitespace tokens.

    Overlap counts are clipped per token type. Two empty strings score
    1.0; one empty string scores 0.0.
    """
    cand = candidate.lower().split()
    ref = reference.lower().split()
    if not cand and not ref:
        return 1.0
    if not cand or not ref:
        return 0.0
    overlap = sum((Counter(cand) & Counter(ref)).values())
    p = overlap / len(cand)
    r = overlap / len(ref)
    return 2 * p * r / (p + r) if p + r else 0.0


@dataclass
class ScoreReport:
    """Bundle of the four PRF rows plus the optional QG ROUGE-1 mean.

    Trigger rows are None when no trigger predictions were supplied
    (argument-only scoring).
    """

    trigger_id: PRF | None
    trigger_c: PRF | None
    arg_i: PRF
    arg_c: PRF
    qg_rouge1: float | None = None

    def to_dict(self) -> dict:
        return {
            "trigger_id": self.trigger_id.to_dict() if self.trigger_id else None,
            "trigger_c": self.trigger_c.to_dict() if self.trigger_c else None,
            "arg_i": self.arg_i.to_dict(),
            "arg_c": self.arg_c.to_dict(),
            "qg_rouge1": self.qg_rouge1,
        }

    def format_table(self) -> str:
        rows = [
            ("Trigger-ID", self.trigger_id),
            ("Trigger-C", self.trigger_c),
            ("Arg-I", self.arg_i),
            ("Arg-C", self.arg_c),
        ]
        lines = [f"{'criterion':<12} {'P':>7} {'R':>7} {'F1':>7} {'tp':>5} {'pred':>5} {'gold':>5}"]
        for name, prf in rows:
            if prf is None:
                lines.append(f"{name:<12} {'-':>7} {'-':>7} {'-':>7} {'-':>5} {'-':>5} {'-':>5}")
            else:
                lines.append(
                    f"{name:<12} {prf.precision:>7.4f} {prf.recall:>7.4f} {prf.f1:>7.4f}"
                    f" {prf.tp:>5d} {prf.pred_count:>5d} {prf.gold_count:>5d}"
                )
        if self.qg_rouge1 is not None:
            lines.append(f"{'QG ROUGE-1':<12} {self.qg_rouge1:>7.4f}")
        return "\n".join(lines)
