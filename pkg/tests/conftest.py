import json
from pathlib import Path

import pytest

from mbdiag.dpi import Component, Dpi, load_dpi
from mbdiag.formula import parse_formula

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"


def make_dpi(formulas, negative=(), positive=(), background=(), probs=None,
             name="test") -> Dpi:
    """Build a DPI from formula strings; probabilities default to uniform."""
    components = tuple(
        Component(i + 1, f"ax{i + 1}", parse_formula(text),
                  probs[i] if probs else 0.25)
        for i, text in enumerate(formulas))
    return Dpi(components,
               tuple(parse_formula(t) for t in background),
               tuple(parse_formula(t) for t in positive),
               tuple(parse_formula(t) for t in negative),
               name)


def demo_system() -> Dpi:
    return load_dpi((DATA / "demo_dpi.json").read_text())


@pytest.fixture
def demo_dpi() -> Dpi:
    return demo_system()


@pytest.fixture
def demo_doc() -> dict:
    return json.loads((DATA / "demo_dpi.json").read_text())
