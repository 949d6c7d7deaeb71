from pathlib import Path

import pytest

from chiral_qpt import adjudication

NOTES = Path(__file__).resolve().parents[1] / "NOTES.md"


@pytest.fixture(scope="module")
def findings():
    return {f.topic: f for f in adjudication.run_all()}


@pytest.mark.parametrize(
    "topic, winner",
    [
        ("weak-field limit spectrum", "exact"),
        ("strong-field limit spectrum", "exact"),
        ("energy inside kappa", "own level"),
        ("spin entropy closed form", "1 + 2 zeta"),
        ("squeeze parameter", "alpha mu_tilde"),
        ("right-regime doublet phase", "+i"),
        ("right-regime reduced states", "partner form on l"),
    ],
)
def test_winners(findings, topic, winner):
    f = findings[topic]
    assert f.winner.name == winner
    assert f.winner.error < 1e-9
    others = [c.error for c in f.candidates if c is not f.winner]
    assert min(others) > 1e-3


def test_notes_file_is_current(findings):
    assert NOTES.read_text() == adjudication.render_markdown(list(findings.values()))
