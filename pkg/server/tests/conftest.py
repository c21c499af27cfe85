import json
from pathlib import Path

import pytest

from qga_server.toy import build_toy_checkpoint

PROTOCOL_DIR = Path(__file__).resolve().parents[2] / "protocol"


@pytest.fixture(scope="session")
def goldens():
    return json.loads((PROTOCOL_DIR / "goldens.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_checkpoint(tmp_path_factory):
    out = tmp_path_factory.mktemp("ckpt") / "toy"
    return build_toy_checkpoint(str(out), seed=7)
