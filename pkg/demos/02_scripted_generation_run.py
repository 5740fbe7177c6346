"""A full generation run against the deterministic scripted backend.

Shows the whole per-code flow (scenario -> judge -> note -> polish ->
dialogue -> polish, with both validation gates), then demonstrates the two
run-management guarantees: byte-identical reruns and interrupt/resume with
no duplicates. No network involved. Run from the repo root:

    python3 demos/02_scripted_generation_run.py
"""

import tempfile
from pathlib import Path

from synthpipe import IcdEntry, build_plan, run_generation, validate_corpus
from synthpipe.pipeline import RunConfig, load_pairs

SCENARIO = """ROLE: Family Medicine Physician

1) Medical Outcome: Diagnosis confirmed; start lisinopril 10 mg oral daily, 90 tablets; lifestyle changes.
2) Medical History: No prior cardiovascular events; family history of hypertension.
3) Symptom Description: Mostly asymptomatic; occasional morning headaches for two months.
4) Patient's self-reported habits and lifestyle: Sedentary job, high-sodium diet, no tobacco.
5) Demographic Information: 52-year-old male accountant, suburban, college educated.
6) Patient's Behavior: Cooperative, asks detailed questions about side effects.
7) Geographical Location: Mid-size city, well served by transit.
8) Clinical Setting: Private practice clinic.
9) Type of Encounter: Routine check-up.
10) Treatment Disparities: None identified.
11) Native or Non-Native English Speaking Patient: Native speaker.
12) Physical exams: Blood pressure measurement both arms, cardiac auscultation.
13) Investigation/Test results: NA
"""

NOTE = """SUBJECTIVE

Chief Complaint (CC): Elevated blood pressure found at a pharmacy screening.
History of Present Illness (HPI): Thomas Reed, 52, reports occasional morning headaches over two months. No chest pain, no visual changes.

OBJECTIVE

Vital Signs: BP 152/94 left arm, 150/92 right arm, HR 76.
Cardiac auscultation: regular rhythm, no murmurs. No peripheral edema.

ASSESSMENT

Essential hypertension, newly diagnosed, stage 2.

PLAN

Start lisinopril 10 mg orally once daily, 90 tablets dispensed.
Order basic metabolic panel before follow-up.
Counsel on sodium reduction and regular aerobic exercise.
Follow up in four weeks with home readings.
"""

DIALOGUE = """[doctor]: Good morning, Mr. Reed. I see the pharmacy flagged your blood pressure?
[patient]: Yes, it read high twice, so I figured I should come in.
[doctor]: Smart move. Any headaches, chest pain, or vision problems lately?
[patient]: Some headaches in the morning, the last couple of months.
[doctor]: Okay. Today you're at 152 over 94, which puts you in stage two hypertension.
[patient]: Hmm, that sounds serious. What do we do?
[doctor]: We'll start lisinopril, 10 milligrams once a day, and I'll order a metabolic panel before your follow-up.
[patient]: Alright. Anything I should change day to day?
[doctor]: Less salt, more walking. Bring home readings when I see you in four weeks.
[patient]: Will do. Thanks, Doctor.
"""

# Script one code's six agent calls in pipeline order:
# scenario, verdict, note, polished note, dialogue, polished dialogue.
CODE_SCRIPT = [SCENARIO, "DECISION: Go", NOTE, NOTE, DIALOGUE, DIALOGUE]

entries = [
    IcdEntry("I10", "ESSENTIAL (PRIMARY) HYPERTENSION", 21_788_529),
    IcdEntry("E119", "TYPE 2 DIABETES MELLITUS WITHOUT COMPLICATIONS", 9_890_112),
]
plan = build_plan(entries, top_k=2, per_code=1)
scripts = {entry.code: list(CODE_SCRIPT) for entry in entries}

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "corpus.jsonl"
    summary = run_generation(plan, RunConfig(out_path=out, mock_scripts=scripts, seed=3))
    print(f"emitted {summary.pairs_emitted} pairs to {out.name}; "
          f"{summary.backend_calls} agent calls; codes done: {summary.codes_done}")

    report = validate_corpus(out)
    print(f"validation gate re-run: {report.records_checked} records, "
          f"{report.total_errors} errors, {report.total_warnings} warnings")

    record = load_pairs(out)[0]
    print("\nfirst record:")
    print(f"  id:       {record.id}")
    print(f"  role:     {record.role}")
    print(f"  turns:    {len(record.dialogue)}")
    print(f"  exemplars used: {record.provenance['exemplars']}")

    # Guarantee 1: same seed, same bytes.
    again = Path(tmp) / "again.jsonl"
    run_generation(plan, RunConfig(out_path=again, mock_scripts=scripts, seed=3))
    print(f"\nrerun byte-identical: {out.read_bytes() == again.read_bytes()}")

    # Guarantee 2: interrupting after one pair and resuming yields the same
    # corpus with no duplicate ids.
    resumed = Path(tmp) / "resumed.jsonl"
    run_generation(plan, RunConfig(out_path=resumed, mock_scripts=scripts, seed=3,
                                   stop_after_pairs=1))
    run_generation(plan, RunConfig(out_path=resumed, mock_scripts=scripts, seed=3,
                                   resume=True))
    print(f"interrupt+resume byte-identical: {out.read_bytes() == resumed.read_bytes()}")
