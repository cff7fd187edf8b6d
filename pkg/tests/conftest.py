import json
from pathlib import Path

import pytest

from mocktoric import io
from mocktoric.cli import CORPUS_DIR
from mocktoric.lattice import LatticeMap
from mocktoric.toroidal import relative_structure

INPUTS = Path(CORPUS_DIR) / "inputs"


def load_input(name, kind=None):
    return io.load(INPUTS / name, kind)


def load_pipeline(prefix):
    """(structure, π, section, relative structure, charted function) of a corpus case."""
    ms = load_input(f"{prefix}-structure.json", "mock")
    pi = section = LatticeMap.identity(ms.rank)
    w = relative_structure(ms, pi, section)
    data = json.loads((INPUTS / f"{prefix}-function.json").read_text(encoding="utf-8"))
    cf = io.dec_charted(data, "$", ms=w)
    return ms, pi, section, w, cf


@pytest.fixture(scope="session")
def pipeline_case():
    return load_pipeline("pipeline")


@pytest.fixture(scope="session")
def height2_case():
    return load_pipeline("height2")
