"""Toy fine-tuning: hyperparameter defaults and the 50-example smoke loop."""

import json
import math

import pytest

from qga_server.finetune import (
    DataError,
    TrainConfig,
    default_learning_rate,
    finetune,
    load_examples,
)
from qga_server.models import Seq2SeqModel


def test_task_defaults():
    assert default_learning_rate("qg") == 1e-4
    assert default_learning_rate("qa") == 2e-4
    with pytest.raises(ValueError, match="task"):
        default_learning_rate("t5")
    config = TrainConfig(task="qa")
    assert config.resolved_learning_rate() == 2e-4
    assert config.weight_decay == 1e-5
    assert config.epochs == 20
    assert config.batch_size == 2
    assert config.grad_accum == 32
    assert config.warmup == 0.1
    assert TrainConfig(task="qg", learning_rate=3e-5).resolved_learning_rate() == 3e-5


def write_examples(path, n):
    # pipeline training rows: bare answers, empty string for no-argument roles
    rows = []
    for i in range(n):
        rows.append({
            "input": f"question: Who acted in * event {i} * event? context: actor {i} acted",
            "output": f"actor {i}" if i % 3 else "",
            "id": f"rec-{i}",
            "role": "Agent",
            "mention": 0,
        })
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    return rows


def test_load_examples(tmp_path):
    path = tmp_path / "train.jsonl"
    write_examples(path, 5)
    pairs = load_examples(str(path))
    assert len(pairs) == 5
    assert pairs[1] == (
        "question: Who acted in * event 1 * event? context: actor 1 acted",
        "actor 1",
    )
    assert len(load_examples(str(path), limit=2)) == 2

    bad = tmp_path / "bad.jsonl"
    bad.write_text('{"input": "x"}\n{oops\n', encoding="utf-8")
    with pytest.raises(DataError, match="bad.jsonl:2"):
        load_examples(str(bad))
    empty = tmp_path / "empty.jsonl"
    empty.write_text("", encoding="utf-8")
    with pytest.raises(DataError, match="no examples"):
        load_examples(str(empty))


def test_criterion_toy_finetune_round_trip(tmp_path, toy_checkpoint):
    data = tmp_path / "qa50.jsonl"
    write_examples(data, 50)
    out = tmp_path / "tuned"
    config = TrainConfig(task="qa", epochs=1)
    result = finetune(str(data), toy_checkpoint, str(out), config)

    assert result.examples == 50
    # 25 batches of 2, accumulation 32 -> a single flushed optimizer step
    assert result.optimizer_steps == 1
    assert math.isfinite(result.final_loss) and result.final_loss > 0

    tuned = Seq2SeqModel.load(str(out))
    outputs = tuned.generate(["question: Who acted? context: someone acted"],
                             max_length=6, num_beams=2, length_penalty=0.0)
    assert len(outputs) == 1 and outputs[0]
    print("[PASS] 50-example 1-epoch fine-tune saves a loadable checkpoint")


def test_finetune_all_empty_outputs(tmp_path, toy_checkpoint):
    # every target empty: labels must still be one EOS token wide, not zero
    data = tmp_path / "empty-answers.jsonl"
    rows = [{"input": f"question: Who? context: {i}", "output": ""} for i in range(4)]
    data.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    out = tmp_path / "tuned-empty"
    result = finetune(str(data), toy_checkpoint, str(out),
                      TrainConfig(task="qa", epochs=1, grad_accum=1))
    assert result.examples == 4
    assert math.isfinite(result.final_loss)


def test_finetune_normalizes_textual_eos(tmp_path, toy_checkpoint):
    # oracle-book style targets with a trailing "</s>" train the same as bare ones
    bare = tmp_path / "bare.jsonl"
    tagged = tmp_path / "tagged.jsonl"
    for path, suffix in ((bare, ""), (tagged, " </s>")):
        rows = [{"input": "question: Who? context: actor acted", "output": "actor" + suffix}]
        path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")
    kwargs = dict(config=TrainConfig(task="qa", epochs=1, grad_accum=1))
    r1 = finetune(str(bare), toy_checkpoint, str(tmp_path / "o1"), **kwargs)
    r2 = finetune(str(tagged), toy_checkpoint, str(tmp_path / "o2"), **kwargs)
    assert r1.final_loss == pytest.approx(r2.final_loss)


def test_finetune_cli(tmp_path, toy_checkpoint, capsys):
    from qga_server.cli import main

    data = tmp_path / "qg.jsonl"
    write_examples(data, 4)
    out = tmp_path / "cli-tuned"
    rc = main([
        "finetune", "--task", "qg", "--data", str(data), "--base", toy_checkpoint,
        "--out", str(out), "--epochs", "1", "--grad-accum", "2",
    ])
    assert rc == 0
    assert "tuned qg on 4 examples" in capsys.readouterr().out
    assert (out / "model.safetensors").exists()

    rc = main(["finetune", "--task", "qa", "--data", str(tmp_path / "missing.jsonl"),
               "--base", toy_checkpoint, "--out", str(out)])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_make_toy_cli(tmp_path, capsys):
    from qga_server.cli import main

    data = tmp_path / "texts.jsonl"
    write_examples(data, 3)
    out = tmp_path / "toy2"
    rc = main(["make-toy", "--out", str(out), "--texts", str(data), "--seed", "1"])
    assert rc == 0
    assert (out / "tokenizer.json").exists()
    model = Seq2SeqModel.load(str(out))
    assert model.generate(["hi"], max_length=4, num_beams=1, length_penalty=0.0)[0]
