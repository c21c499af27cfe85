"""Build a tiny local checkpoint for smoke tests and toy fine-tuning.

Trains a byte-level BPE tokenizer on whatever text is supplied and pairs
it with a small randomly initialized encoder-decoder. Everything is
created locally; nothing is fetched from a model hub.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

SAMPLE_TEXTS = (
    "question: Who attacked the village in * raided * event? context: rebels raided the village at dawn",
    "question: Where did the meeting happen in * met * event? context: envoys met in Geneva on Tuesday",
    "role: attacker context: rebels * raided * the village at dawn",
    "role: place context: envoys * met * in Geneva on Tuesday",
    "soldiers; rebels",
    "Geneva",
)


def train_tokenizer(texts: Sequence[str], vocab_size: int = 384):
    from tokenizers import Tokenizer, decoders, models, pre_tokenizers, trainers

    tokenizer = Tokenizer(models.BPE(unk_token="<unk>"))
    tokenizer.pre_tokenizer = pre_tokenizers.ByteLevel(add_prefix_space=True)
    tokenizer.decoder = decoders.ByteLevel()
    trainer = trainers.BpeTrainer(
        vocab_size=vocab_size,
        special_tokens=["<pad>", "</s>", "<unk>"],
        initial_alphabet=pre_tokenizers.ByteLevel.alphabet(),
    )
    tokenizer.train_from_iterator(texts, trainer)
    return tokenizer


def load_texts(path: str) -> list[str]:
    """Plain text (one sample per line) or example JSONL with input/output."""
    texts: list[str] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("{"):
            row = json.loads(line)
            texts.append(row["input"])
            if row.get("output"):
                texts.append(row["output"])
        else:
            texts.append(line)
    return texts


def build_toy_checkpoint(
    out_dir: str,
    texts: Iterable[str] | None = None,
    vocab_size: int = 384,
    seed: int = 0,
) -> str:
    import torch
    from transformers import PreTrainedTokenizerFast, T5Config, T5ForConditionalGeneration
    from transformers.utils import logging as hf_logging

    hf_logging.disable_progress_bar()
    corpus = list(texts) if texts is not None else list(SAMPLE_TEXTS)
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=train_tokenizer(corpus, vocab_size=vocab_size),
        pad_token="<pad>",
        eos_token="</s>",
        unk_token="<unk>",
    )

    torch.manual_seed(seed)
    config = T5Config(
        vocab_size=len(tokenizer),
        d_model=64,
        d_kv=16,
        d_ff=128,
        num_layers=2,
        num_decoder_layers=2,
        num_heads=4,
        pad_token_id=tokenizer.pad_token_id,
        eos_token_id=tokenizer.eos_token_id,
        decoder_start_token_id=tokenizer.pad_token_id,
    )
    model = T5ForConditionalGeneration(config)

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.save_pretrained(out)
    tokenizer.save_pretrained(out)
    return str(out)
