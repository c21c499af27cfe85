import pytest

from qga.corpus import load_corpus
from qga.data import default_registry_path, fixture_corpus_path, fixture_oracle_path
from qga.ontology import load_registry

FIG1_TEXT = (
    "That's because coalition fighter jets pummeled this Iraqi position on the "
    "hills above Chamchamal and Iraqi troops made a hasty retreat."
)
FIG1_MARKED = (
    "That's because coalition fighter jets * pummeled * this Iraqi position on the "
    "hills above Chamchamal and Iraqi troops made a hasty retreat."
)
INJURE_TEXT = (
    "Injured Russian diplomats and a convoy of America's Kurdish comrades in arms "
    "were among unintended victims caught in crossfire and friendly fire Sunday."
)


@pytest.fixture(scope="session")
def registry():
    return load_registry(default_registry_path())


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(fixture_corpus_path())


@pytest.fixture(scope="session")
def by_id(corpus):
    return {rec.id: rec for rec in corpus}


@pytest.fixture(scope="session")
def oracle_path():
    return str(fixture_oracle_path())
