import pytest
from hypothesis import given
from hypothesis import strategies as st

from sinassist.diagnosis import (
    DEFAULT_TEMPLATES,
    ErrorClass,
    Verdict,
    build_prompt,
    diagnose,
)

sinhala_text = st.text(
    alphabet=st.characters(min_codepoint=0x0D9A, max_codepoint=0x0DC6), max_size=20
)


def test_diagnose_paper_pairs():
    assert diagnose("ගස", "කස").verdict is Verdict.SUBSTITUTION
    assert diagnose("ගම", "මග").verdict is Verdict.REVERSAL
    assert diagnose("ගසක්", "ගක්").verdict is Verdict.OMISSION


def test_diagnose_insertion():
    assert diagnose("ගස", "ගගස").verdict is Verdict.INSERTION


def test_diagnose_no_error():
    assert diagnose("ගස ගම", "ගස ගම").verdict is Verdict.NO_ERROR
    assert diagnose("", "").verdict is Verdict.NO_ERROR


def test_diagnose_complex_double_substitution():
    assert diagnose("ගස", "කම").verdict is Verdict.COMPLEX


def test_diagnose_word_count_change_is_complex():
    assert diagnose("ගස ගම", "ගස").verdict is Verdict.COMPLEX


def test_diagnose_no_error_evidence_cost_zero():
    d = diagnose("ගස ගම", "ගස ගම")
    assert d.evidence.cost == 0


def test_reversal_precedence_over_double_substitution():
    # adjacent crossing substitutions must never be reported as complex
    d = diagnose("කසග", "කගස")
    assert d.verdict is Verdict.REVERSAL


def test_long_range_transposition_is_complex():
    assert diagnose("ගසම", "මසග").verdict is Verdict.COMPLEX


@given(sinhala_text)
def test_diagnose_self_is_no_error(s):
    assert diagnose(s, s).verdict is Verdict.NO_ERROR


def test_build_prompt_templates():
    p = build_prompt(ErrorClass.OMISSION, "ගක්")
    assert p.payload == "ගක්"
    assert "ගක්" in p.instruction
    assert p.instruction == DEFAULT_TEMPLATES[ErrorClass.OMISSION].format(text="ගක්")

    r = build_prompt(ErrorClass.REVERSAL, "මග")
    assert "මග" in r.instruction
    assert r.instruction != p.instruction


def test_build_prompt_deterministic():
    assert build_prompt(ErrorClass.INSERTION, "ගගස") == build_prompt(
        ErrorClass.INSERTION, "ගගස"
    )


def test_build_prompt_override_template():
    p = build_prompt(
        ErrorClass.SUBSTITUTION, "කස", templates={ErrorClass.SUBSTITUTION: "fix: {text}"}
    )
    assert p.instruction == "fix: කස"


def test_build_prompt_rejects_empty_payload():
    with pytest.raises(ValueError):
        build_prompt(ErrorClass.OMISSION, "")


def test_build_prompt_rejects_unknown_class():
    with pytest.raises(ValueError):
        build_prompt("spelling", "ගස")  # type: ignore[arg-type]
