from __future__ import annotations

from pathlib import Path

import pytest

from tgrkit import parse_grammar

DATA = Path(__file__).parent / "data"


def load_grammar(name: str):
    return parse_grammar((DATA / name).read_text())


@pytest.fixture
def astar_b():
    return load_grammar("astar_b.grammar")


@pytest.fixture
def anbn():
    return load_grammar("anbn.kuroda")
