"""Paths to packaged data: the template registry and the test fixture."""

from importlib import resources


def _path(relative: str) -> str:
    return str(resources.files("qga").joinpath("data", *relative.split("/")))


def default_registry_path() -> str:
    """The shipped ACE dynamic-template registry."""
    return _path("ace_templates.json")


def fixture_corpus_path() -> str:
    """Small synthetic corpus covering every event type in the registry."""
    return _path("fixture/corpus.jsonl")


def fixture_oracle_path() -> str:
    """Oracle book derived from the fixture corpus (gold questions/answers)."""
    return _path("fixture/oracle.json")
