"""Smoke tests for the clozecore extension module and the CLI binary."""

import json
import os
import subprocess
import sys

import pytest

clozecore = pytest.importorskip("clozecore")

DOCUMENT = (
    "England coach peter moores talks to the news media during a press "
    "conference at the adelaide oval on sunday."
)
SUMMARY = "Peter moores talks to the adelaide oval on sunday."


def test_normalize():
    assert clozecore.normalize("The Adelaide Oval!") == ["adelaide", "oval"]
    assert clozecore.normalize("") == []


def test_split_sentences():
    spans = clozecore.split_sentences("A b. C d.")
    assert len(spans) == 2
    assert spans[0] == (0, 4)


def test_token_f1():
    assert clozecore.token_f1("seattle seahawks", "seattle seahawks") == 1.0
    assert clozecore.token_f1("seattle seahawks", "seattle hawks") == pytest.approx(0.5)
    assert clozecore.token_f1("The president", "brady") == 0.0


def test_gate():
    assert clozecore.gate(0.4, 0.4) == (True, 0.0)
    assert clozecore.gate(0.9, 0.4) == (False, 0.9)


def test_extract_factors():
    factors = clozecore.extract_factors(SUMMARY)
    surfaces = [f["surface"] for f in factors]
    assert any("adelaide" in s for s in surfaces)
    spans = [f["span"] for f in factors]
    assert spans == sorted(spans)


def test_evaluate_consistent_pair():
    result = clozecore.evaluate(DOCUMENT, SUMMARY)
    assert result["cloze_score"] == pytest.approx(1.0)
    assert result["error_spans"] == []
    assert result["backend_calls"] > 0


def test_evaluate_flags_unsupported_content():
    result = clozecore.evaluate(DOCUMENT, "Zanzibar Quixote talks to the adelaide oval.")
    assert result["cloze_score"] < 1.0
    assert len(result["error_spans"]) >= 1


def test_pearson():
    r, p = clozecore.pearson([1, 2, 3, 4, 5], [2, 4, 6, 8, 10])
    assert r == pytest.approx(1.0)
    assert p < 1e-6


def test_cli_evaluate(tmp_path):
    cli = os.environ.get("CLOZE_CLI")
    if not cli:
        pytest.skip("CLOZE_CLI not set")
    dataset = tmp_path / "units.jsonl"
    dataset.write_text(
        json.dumps({"id": "u0", "document": DOCUMENT, "summary": SUMMARY}) + "\n"
    )
    out = tmp_path / "report.json"
    subprocess.run(
        [cli, "evaluate", "--input", str(dataset), "--output", str(out)],
        check=True,
        capture_output=True,
    )
    report = json.loads(out.read_text())
    assert report["unit_count"] == 1
    assert report["corpus_mean"] == pytest.approx(1.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
