import json
import math
import os
from pathlib import Path

import pytest

import diafair

FIXTURES = Path(os.environ.get("DIAFAIR_FIXTURE_DIR", Path(__file__).resolve().parents[2] / "tests" / "fixtures"))
MANIFEST = FIXTURES / "tiny" / "manifest.tsv"
RTTM_DIR = FIXTURES / "tiny" / "rttm"


def test_margin_matches_reference():
    assert math.isclose(diafair.margin(0.5, 1000, 2.58), 0.040793381816172093, rel_tol=1e-12)
    assert diafair.margin(0.0, 10) == 0.0
    assert diafair.confidence_interval(0.01, 0.05) == (0.0, pytest.approx(0.06))
    assert round(diafair.invert_margin(0.9641, 0.0344)) == 195


def test_outcome_classes():
    assert diafair.classify_outcome(0) == "p0"
    assert diafair.classify_outcome(1) == "p1"
    assert diafair.classify_outcome(4) == "pplus"
    assert diafair.count_speakers([(0.0, 1.0, "a"), (1.0, 1.0, "A"), (2.0, 1.0, "a")]) == 2
    assert diafair.dfr(1, 2, 1) == 0.5


def test_rttm_round_trip():
    text = "SPEAKER u 1 0.00 1.50 <NA> <NA> spk0 <NA> <NA>\n"
    parsed = diafair.parse_rttm(text)
    assert parsed == {"u": [(0.0, 1.5, "spk0")]}
    assert diafair.serialize_rttm(parsed) == text


def test_errors_surface_as_python_exceptions():
    with pytest.raises(diafair.DiafairError, match="line 1"):
        diafair.parse_rttm("SPEAKER u 1 0.0 0.0 <NA> <NA> s <NA> <NA>\n")
    with pytest.raises(ValueError):
        diafair.invert_margin(0.0, 0.1)


def test_manifest_normalization():
    records = diafair.parse_manifest(MANIFEST.read_text(encoding="utf-8"))
    assert [r["utterance_id"] for r in records] == ["a1", "a2", "a3", "a4", "a5", "a6"]
    assert records[4]["sentence_length"] == 64
    assert records[4]["length_bin"] == "[50,70)"
    assert records[3]["accent"] == "Indian"


def test_evaluate_fixture():
    report = diafair.evaluate(MANIFEST, RTTM_DIR, min_group_n=1)
    assert report["metadata"]["total_utterances"] == 6
    gender = next(c for c in report["criteria"] if c["name"] == "gender")
    male = gender["groups"][0]
    assert male["group"] == "Male"
    assert male["counts"] == {"n0": 0, "n1": 1, "nplus": 1}
    assert math.isclose(male["margins"]["eps_p1"], 0.9121677477306463, rel_tol=1e-12)
    text = diafair.evaluate_json(MANIFEST, RTTM_DIR, min_group_n=1)
    assert text == diafair.evaluate_json(MANIFEST, RTTM_DIR, min_group_n=1)
    assert "| | Male | Female | Other |" in diafair.render_table(text, "md")


def test_evaluate_rejects_bad_policy():
    with pytest.raises(diafair.DiafairError):
        diafair.evaluate(MANIFEST, RTTM_DIR, missing="sometimes")


def test_simulation_and_coverage():
    assert diafair.simulate(0.0, 1.0, 0.0, 100, 1) == {"n0": 0, "n1": 100, "nplus": 0}
    assert diafair.simulate(0.2, 0.5, 0.3, 1000, 9) == diafair.simulate(0.2, 0.5, 0.3, 1000, 9)
    assert 0.98 <= diafair.coverage_experiment(0.5, 1000, 1000, 2.58, 3) <= 1.0


def test_reference_tables():
    checks = diafair.validate_tables()
    assert len(checks) == 62
    assert all(passed for _, passed, _ in checks)
