"""Event argument extraction as question generation + question answering.

The toolkit turns gold event triggers into role questions via dynamic
templates, asks a text-to-text backend those questions, aligns the
answers back to character spans, and scores the result with the exact
trigger/argument criteria.
"""

from .backend import (
    GenerationRequest,
    HttpBackend,
    OracleBackend,
    default_qa_params,
    default_qg_params,
    generate,
    make_backend,
)
from .corpus import (
    ArgumentSpan,
    EventMention,
    SentenceRecord,
    Span,
    dump_corpus,
    load_corpus,
    mark_trigger,
)
from .decode import DecodedArguments, align_spans, parse_answer
from .errors import ConfigError, CorpusError, QgaError, RegistryError
from .ontology import (
    DynamicTemplate,
    EventTypeDef,
    TemplateRegistry,
    expected_template_count,
    load_registry,
    templates_for,
)
from .pipeline import PipelineConfig, enumerate_tasks, run_pipeline
from .qa_data import attach_trigger_clause, emit_qa_inference, emit_qa_training, serialize_answer
from .question_gen import (
    CandidateQuestion,
    applicable_templates,
    candidate_questions,
    emit_qg_example,
    fill_template,
    select_gold_question,
)
from .scoring import PRF, ScoreReport, rouge1, score_arguments, score_triggers
from .seq2seq import Seq2SeqExample

__version__ = "0.1.0"

__all__ = [
    "ArgumentSpan",
    "CandidateQuestion",
    "ConfigError",
    "CorpusError",
    "DecodedArguments",
    "DynamicTemplate",
    "EventMention",
    "EventTypeDef",
    "GenerationRequest",
    "HttpBackend",
    "OracleBackend",
    "PRF",
    "PipelineConfig",
    "QgaError",
    "RegistryError",
    "ScoreReport",
    "SentenceRecord",
    "Seq2SeqExample",
    "Span",
    "TemplateRegistry",
    "align_spans",
    "applicable_templates",
    "attach_trigger_clause",
    "candidate_questions",
    "default_qa_params",
    "default_qg_params",
    "dump_corpus",
    "emit_qa_inference",
    "emit_qa_training",
    "emit_qg_example",
    "enumerate_tasks",
    "expected_template_count",
    "fill_template",
    "generate",
    "load_corpus",
    "load_registry",
    "make_backend",
    "mark_trigger",
    "parse_answer",
    "rouge1",
    "run_pipeline",
    "score_arguments",
    "score_triggers",
    "select_gold_question",
    "serialize_answer",
    "templates_for",
]
