"""Shared builders for scripted-pipeline tests."""

from __future__ import annotations

from pathlib import Path

FIXTURES = Path(__file__).parent / "fixtures"

SAMPLE_NOTE = (FIXTURES / "sample_soap_note.txt").read_text(encoding="utf-8")
JUDGE_FEEDBACK_NOGO = (FIXTURES / "judge_feedback_nogo.txt").read_text(encoding="utf-8")

SCENARIO_LABELS = (
    "Medical Outcome",
    "Medical History",
    "Symptom Description",
    "Patient's self-reported habits and lifestyle",
    "Demographic Information",
    "Patient's Behavior",
    "Geographical Location",
    "Clinical Setting",
    "Type of Encounter",
    "Treatment Disparities",
    "Native or Non-Native English Speaking Patient",
    "Physical exams",
    "Investigation/Test results",
)


def make_scenario_text(
    role: str = "Cardiologist",
    variant: int = 0,
    overrides: dict[int, str] | None = None,
) -> str:
    """A well-formed provider output: ROLE marker plus 13 labelled blocks.

    ``overrides`` maps 1-based variable positions to replacement values.
    """
    overrides = overrides or {}
    lines = [f"ROLE: {role}", ""]
    for i, label in enumerate(SCENARIO_LABELS, start=1):
        value = overrides.get(i, f"{label} detail, variant {variant}.")
        lines.append(f"{i}) {label}: {value}")
    return "\n".join(lines)


def make_note_text(patient: str = "Jordan Wells", condition: str = "persistent dry cough") -> str:
    """A compact note that parses into four sections and lints clean."""
    return f"""SUBJECTIVE

Chief Complaint (CC): {condition.capitalize()} for two weeks.
History of Present Illness (HPI): {patient} reports {condition}, worse at night, with mild fatigue. No fever or chest pain.

OBJECTIVE

Vital Signs: Temperature 98.4 F, pulse 72, respiratory rate 16.
Lungs clear to auscultation bilaterally. No wheezing or crackles.

ASSESSMENT

Likely post-viral {condition}; differential includes postnasal drip.

PLAN

Start dextromethorphan syrup 10 ml orally every 8 hours as needed for 7 days.
Referral to Pulmonologist, Dr. Irene Vasquez, for evaluation of the {condition}.
Follow up in two weeks or sooner if symptoms worsen.
"""


def make_dialogue_text(patient: str = "Jordan", turns: int = 4) -> str:
    """A short canonical transcript alternating doctor and patient."""
    opening = [
        f"[doctor]: Hello {patient}, what brings you in today?",
        "[patient]: I've had this dry cough for about two weeks now.",
        "[doctor]: Any fever or chest pain along with it?",
        "[patient]: No fever, just the cough and feeling a bit tired.",
    ]
    lines = list(opening[: max(2, min(turns, 4))])
    speakers = ("doctor", "patient")
    while len(lines) < turns:
        speaker = speakers[len(lines) % 2]
        lines.append(f"[{speaker}]: Alright, noted, thanks for telling me that.")
    return "\n".join(lines)


def happy_code_script(pairs: int, variant_offset: int = 0) -> list[str]:
    """Scripted responses for one code's full happy path with ``pairs`` pairs.

    Order: (scenario, Go) per pair, then (note, polished note, dialogue,
    polished dialogue) per pair — matching the pipeline's call order.
    """
    script: list[str] = []
    for i in range(pairs):
        script.append(make_scenario_text(variant=variant_offset + i))
        script.append("DECISION: Go")
    for i in range(pairs):
        note = make_note_text(patient=f"Patient V{variant_offset + i}")
        dialogue = make_dialogue_text(patient=f"V{variant_offset + i}")
        script.extend([note, note, dialogue, dialogue])
    return script
