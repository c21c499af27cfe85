"""Acceptance gate: one test per required behavior, one line of output each.

Run with `pytest -v tests/test_acceptance.py` to get a pass/fail line per
criterion; each test also prints a [PASS] line with its elapsed time.
"""

import itertools
import json
import random
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

from qga.backend import OracleBackend
from qga.corpus import ArgumentSpan, EventMention, Span, arguments_for_role
from qga.data import default_registry_path, fixture_corpus_path, fixture_oracle_path
from qga.decode import align_spans, parse_answer
from qga.ontology import load_registry
from qga.pipeline import PipelineConfig, enumerate_tasks, run_pipeline
from qga.qa_data import emit_qa_training, serialize_answer
from qga.question_gen import applicable_templates, candidate_questions, emit_qg_example, select_gold_question
from qga.scoring import ArgumentUnit, rouge1, score_arguments, score_triggers, TriggerUnit
from tests.conftest import FIG1_MARKED, INJURE_TEXT


@contextmanager
def criterion(name, budget_seconds=None):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"[FAIL] {name}")
        raise
    elapsed = time.perf_counter() - start
    if budget_seconds is not None:
        assert elapsed < budget_seconds, f"{name}: {elapsed:.2f}s exceeds {budget_seconds}s"
    print(f"[PASS] {name} ({elapsed:.2f}s)")


def test_criterion_golden_qg_example(registry, by_id):
    with criterion("golden QG example is byte-exact", budget_seconds=1.0):
        rec = by_id["fig1-attack"]
        mention = rec.mentions[0]
        ex = emit_qg_example(registry, rec, mention, "Attacker")
        assert ex.input == "role: attacker context: " + FIG1_MARKED
        assert ex.output == "Who used jets in the attack in hills?"
        gold = select_gold_question(registry, mention, "Attacker")
        assert gold.text == "Who used jets in the attack in hills?"


def test_criterion_candidate_enumeration(registry, by_id):
    with criterion("candidate enumeration matches subset counting", budget_seconds=10.0):
        cands = candidate_questions(registry, by_id["fig1-attack"].mentions[0], "Attacker")
        assert [c.text for c in cands] == [
            "Who was the attacking agent?",
            "Who used jets in the attack?",
            "Who made the attack in hills?",
            "Who used jets in the attack in hills?",
        ]
        rng = random.Random(20260817)
        keys = registry.entry_keys()
        for _ in range(500):
            et, role = rng.choice(keys)
            inventory = registry.roles_for(et)
            present = [r for r in inventory if rng.random() < 0.5]
            mention = EventMention(
                et, Span(0, 1), "t",
                tuple(ArgumentSpan(i * 2, i * 2 + 1, r, "x") for i, r in enumerate(present)),
            )
            entry = registry.templates_for(et, role)
            brute = [t for t in entry if set(t.slots) <= set(present)]
            assert applicable_templates(registry, mention, role) == brute
            slotted = {s for t in entry for s in t.slots}
            if len(entry) == 2 ** len(slotted):  # complete powerset entry
                assert len(brute) == 2 ** len(slotted & set(present))


def test_criterion_registry_fidelity(registry):
    with criterion("shipped registry reproduces the template tables"):
        rows = [(t.slots, t.text) for t in registry.templates_for("Conflict.Attack", "Attacker")]
        assert rows == [
            ((), "Who was the attacking agent?"),
            (("Target",), "Who attacked [Target]?"),
            (("Instrument",), "Who used [Instrument] in the attack?"),
            (("Place",), "Who made the attack in [Place]?"),
            (("Target", "Instrument"), "Who attacked [Target] using [Instrument]?"),
            (("Target", "Place"), "Who attacked [Target] in [Place]?"),
            (("Instrument", "Place"), "Who used [Instrument] in the attack in [Place]?"),
            (("Target", "Instrument", "Place"),
             "Who attacked [Target] using [Instrument] in [Place]?"),
        ]
        fresh = load_registry(default_registry_path())  # full validation pass
        assert sum(len(fresh.templates_for(*k)) for k in fresh.entry_keys()) == 578
        assert len(fresh.event_types) == 33


def test_criterion_decode_round_trip(registry, corpus):
    with criterion("answer decoding round-trips and stays ordered", budget_seconds=10.0):
        decoded = align_spans(parse_answer("diplomats; convoy; victims </s>"), INJURE_TEXT)
        assert [(s.surface, s.start, s.end) for s in decoded.spans] == [
            ("diplomats", 16, 25), ("convoy", 32, 38), ("victims", 99, 106),
        ]
        assert decoded.discarded == []

        rng = random.Random(1000)
        alphabet = "abcdef "
        for _ in range(1000):
            text = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 50)))
            candidates = []
            for _ in range(rng.randint(0, 6)):
                if text and rng.random() < 0.7:
                    i = rng.randrange(len(text))
                    j = rng.randint(i + 1, min(len(text), i + 8))
                    piece = text[i:j].strip()
                else:
                    piece = "".join(rng.choice("abcxyz") for _ in range(rng.randint(1, 5)))
                if piece:
                    candidates.append(piece)
            result = align_spans(candidates, text)
            assert len(result.spans) + len(result.discarded) == len(candidates)
            starts = [s.start for s in result.spans]
            assert starts == sorted(set(starts))
            for span in result.spans:
                assert text[span.start:span.end] == span.surface

        # gold answers of every fixture task decode back to the gold spans
        for rec in corpus:
            for mention in rec.mentions:
                if not registry.has_event_type(mention.event_type):
                    continue
                for role in registry.roles_for(mention.event_type):
                    if not registry.has_entry(mention.event_type, role):
                        continue
                    gold = arguments_for_role(mention, role)
                    raw = serialize_answer(gold) + " </s>" if gold else "</s>"
                    again = align_spans(parse_answer(raw), rec.text)
                    assert [(s.start, s.end) for s in again.spans] == [
                        (a.start, a.end) for a in gold
                    ]
                    assert again.discarded == []


def test_criterion_oracle_end_to_end(tmp_path):
    with criterion("oracle pipeline is perfect; corruption drops recall exactly", budget_seconds=5.0):
        config = PipelineConfig(
            registry_path=str(default_registry_path()),
            corpus_path=str(fixture_corpus_path()),
            backend="oracle:" + str(fixture_oracle_path()),
            output_dir=str(tmp_path / "clean"),
        )
        result = run_pipeline(config)
        assert result.report.arg_i.f1 == 1.0
        assert result.report.arg_c.f1 == 1.0
        assert result.report.trigger_id.f1 == 1.0
        assert result.report.qg_rouge1 == 1.0

        book = json.loads(Path(fixture_oracle_path()).read_text())
        key = next(
            k for k, v in book["qa"].items()
            if v == "coalition </s>" and "Who used jets in the attack in hills" in k
        )
        book["qa"][key] = "zeppelin </s>"  # not a substring of any fixture text
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(book))
        config.backend = "oracle:" + str(bad)
        config.output_dir = str(tmp_path / "corrupt")
        corrupted = run_pipeline(config)
        n = corrupted.report.arg_c.gold_count
        assert n == 109
        assert corrupted.report.arg_c.precision == 1.0
        assert corrupted.report.arg_c.recall == pytest.approx((n - 1) / n, abs=1e-12)
        assert corrupted.report.arg_c.f1 == pytest.approx(
            2 * (n - 1) / (2 * n - 1), abs=1e-12
        )


def _brute_force_tp(pred, gold):
    k = min(len(pred), len(gold))
    best = 0
    for pis in itertools.permutations(range(len(pred)), k):
        for gis in itertools.combinations(range(len(gold)), k):
            best = max(best, sum(1 for pi, gi in zip(pis, gis) if pred[pi] == gold[gi]))
    return best


def test_criterion_scorer_vs_brute_force():
    with criterion("scorer equals brute-force optimal matching"):
        universe = [
            ArgumentUnit("a", 0, 1, "E.X", "R"),
            ArgumentUnit("a", 0, 1, "E.X", "S"),
            ArgumentUnit("b", 2, 5, "E.Y", "R"),
        ]
        pools = []
        for n in range(4):
            pools.extend(itertools.combinations_with_replacement(universe, n))
        for pred in pools:
            for gold in pools:
                _, arg_c = score_arguments(list(pred), list(gold))
                assert arg_c.tp == _brute_force_tp(list(pred), list(gold))

        rng = random.Random(424242)
        big = [
            ArgumentUnit(rid, s, s + 2, et, role)
            for rid in "ab" for s in (0, 4) for et in ("E.X", "E.Y") for role in ("R", "S")
        ]
        trig_universe = [TriggerUnit(rid, s, s + 2, et) for rid in "ab" for s in (0, 4)
                         for et in ("E.X", "E.Y")]
        for _ in range(200):
            pred = [rng.choice(big) for _ in range(rng.randint(0, 5))]
            gold = [rng.choice(big) for _ in range(rng.randint(0, 5))]
            arg_i, arg_c = score_arguments(pred, gold)
            assert arg_c.tp == _brute_force_tp(pred, gold)
            assert arg_c.tp <= arg_i.tp
            tp = [rng.choice(trig_universe) for _ in range(rng.randint(0, 5))]
            tg = [rng.choice(trig_universe) for _ in range(rng.randint(0, 5))]
            trig_id, trig_c = score_triggers(tp, tg)
            assert trig_c.tp <= trig_id.tp

        gold = [
            ArgumentUnit("a", 0, 3, "E.X", "R"),
            ArgumentUnit("a", 4, 7, "E.X", "R"),
            ArgumentUnit("a", 8, 11, "E.X", "R"),
            ArgumentUnit("b", 0, 2, "E.X", "R"),
        ]
        pred = gold[:2] + [ArgumentUnit("a", 20, 25, "E.X", "R")]
        _, arg_c = score_arguments(pred, gold)
        assert arg_c.f1 == pytest.approx(4 / 7, abs=1e-12)


def test_criterion_augmentation_accounting(registry, corpus):
    with criterion("QA augmentation count equals the powerset sum"):
        tasks, _ = enumerate_tasks(registry, corpus)
        tasks = [t for t in tasks if registry.has_entry(t.mention.event_type, t.role)]

        augmented = 0
        expected = 0
        for task in tasks:
            examples = emit_qa_training(
                registry, task.record, task.mention, task.role, task.mention_index
            )
            augmented += len(examples)
            entry = registry.templates_for(task.mention.event_type, task.role)
            slotted = {s for t in entry for s in t.slots}
            assert len(entry) == 2 ** len(slotted)  # fixture uses complete entries
            present = {a.role for a in task.mention.arguments}
            expected += 2 ** len(slotted & present)
        assert augmented == expected == 580
        assert augmented >= len(tasks)  # grows beyond one question per role
        assert len(tasks) == 120


def test_criterion_rouge1_hand_cases():
    with criterion("ROUGE-1 hand cases within 1e-9"):
        assert rouge1("Who attacked the village?", "Who attacked the village?") == pytest.approx(1.0, abs=1e-9)
        assert rouge1("alpha beta", "gamma delta") == pytest.approx(0.0, abs=1e-9)
        assert rouge1("Who attacked the village?", "Who attacked village?") == pytest.approx(6 / 7, abs=1e-9)
        assert rouge1("", "") == 1.0
        assert rouge1("anything", "") == 0.0


def test_criterion_oracle_backend_only():
    # the acceptance suite exercises no HTTP backend: the oracle book alone
    # drives every end-to-end criterion above
    with criterion("pipeline criteria need only the bundled oracle"):
        backend = OracleBackend.load(str(fixture_oracle_path()))
        book_sizes = {name: len(backend._books[name]) for name in ("qg", "qa")}
        assert book_sizes == {"qg": 120, "qa": 120}
