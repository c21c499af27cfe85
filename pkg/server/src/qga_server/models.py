"""Generation model wrappers: the reference stub and real seq2seq checkpoints."""

from __future__ import annotations

from typing import Protocol, Sequence


class GenerationModel(Protocol):
    def generate(
        self,
        inputs: Sequence[str],
        max_length: int,
        num_beams: int,
        length_penalty: float,
    ) -> list[str]: ...


class StubModel:
    """Reference stub from the protocol document.

    Echoes each input prefixed with the model name and the effective
    generation parameters, so the golden suite can check that a server
    applies defaults and passes parameters through.
    """

    def __init__(self, name: str) -> None:
        self.name = name

    def generate(self, inputs, max_length, num_beams, length_penalty):
        prefix = f"{self.name}/b{num_beams}/lp{length_penalty:g}:"
        return [prefix + text for text in inputs]


class Seq2SeqModel:
    """A local encoder-decoder checkpoint (directory with model + tokenizer).

    max_length caps generated tokens; at least one non-special token is
    always produced so outputs are never empty strings.
    """

    def __init__(self, model, tokenizer, device: str = "cpu") -> None:
        self.model = model.to(device).eval()
        self.tokenizer = tokenizer
        self.device = device
        # pad/unk never belong in output text; banning them guarantees the
        # forced first token survives skip_special_tokens decoding
        self._banned = [
            [tid] for tid in {tokenizer.pad_token_id, tokenizer.unk_token_id}
            if tid is not None
        ]

    @classmethod
    def load(cls, path: str, device: str = "cpu") -> "Seq2SeqModel":
        import torch  # noqa: F401  (backend for transformers)
        from transformers import AutoModelForSeq2SeqLM, AutoTokenizer
        from transformers.utils import logging as hf_logging

        hf_logging.disable_progress_bar()
        model = AutoModelForSeq2SeqLM.from_pretrained(path)
        tokenizer = AutoTokenizer.from_pretrained(path)
        return cls(model, tokenizer, device=device)

    def generate(self, inputs, max_length, num_beams, length_penalty):
        import torch

        enc = self.tokenizer(
            list(inputs), return_tensors="pt", padding=True, truncation=True,
            max_length=512,
        ).to(self.device)
        with torch.no_grad():
            out = self.model.generate(
                **enc,
                max_new_tokens=max_length,
                min_new_tokens=1,
                num_beams=num_beams,
                length_penalty=length_penalty,
                bad_words_ids=self._banned or None,
            )
        return self.tokenizer.batch_decode(out, skip_special_tokens=True)


def load_model(spec: str, name: str, device: str = "cpu") -> GenerationModel:
    """Checkpoint spec -> model. The literal spec "stub" selects StubModel."""
    if spec == "stub":
        return StubModel(name)
    return Seq2SeqModel.load(spec, device=device)
