"""Pairwise LLM-jury evaluation with majority voting.

Three judges from distinct model families each see a reference, two
candidates and a task rubric, and answer with a single token; the majority
of cast votes decides the case. Candidate order can be randomized per judge
(seeded) to blunt position bias, with parsed choices mapped back to the
original labels, so the protocol's outcome is order-independent.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from typing import Sequence

from .errors import UnresolvedCaseError, ValidationError
from .gateway import (
    AgentConfig,
    ChatMessage,
    RetryPolicy,
    UsageLedger,
    assistant,
    complete,
    system,
    user,
)

DIAL2NOTE = "d2n"
NOTE2DIAL = "n2d"


@dataclass(frozen=True)
class Rubric:
    task: str
    criteria: tuple[tuple[str, str], ...]  # (name, description)

    def render(self) -> str:
        lines = []
        for i, (name, description) in enumerate(self.criteria, start=1):
            lines.append(f"{i}. {name}:")
            for part in description.splitlines():
                lines.append(f"    - {part}")
        return "\n".join(lines)


DIAL2NOTE_RUBRIC = Rubric(
    task=DIAL2NOTE,
    criteria=(
        (
            "Hallucination",
            "Does the summary note accurately and comprehensively reflect the "
            "doctor-patient dialogue and ground truth note?",
        ),
        (
            "Critical Omissions",
            "Does the summary note capture all essential medical facts from the "
            "doctor-patient dialogue and ground truth note?",
        ),
        (
            "Professional Tone",
            "Does the summary note maintain a consistently professional tone "
            "appropriate for expert use?",
        ),
        (
            "Logical Structure",
            "Does the summary note exhibit a clear and logical structure?",
        ),
        (
            "Adherence to the Format",
            "Does the summary note follow the same structure as the ground-truth note?",
        ),
        (
            "Section Relevance",
            "Does the summary note accurately assign clinical information to the "
            "correct sections (e.g., patient-reported details in Subjective, "
            "objective findings in Objective, clinician insights in Assessment, "
            "and treatment strategies in Plan)?",
        ),
    ),
)

NOTE2DIAL_RUBRIC = Rubric(
    task=NOTE2DIAL,
    criteria=(
        (
            "Completeness",
            "Does the conversation cover all significant components of the note?",
        ),
        (
            "Accuracy",
            "How accurately does the conversation reflect the details of the note "
            "as they were recorded?\n"
            "Are there any discrepancies between the note and the generated dialogue?",
        ),
        (
            "Naturalness and Flow",
            "Is the conversation realistic and natural, following a logical and "
            "smooth progression?\n"
            "Does it sound like a genuine interaction between a doctor and patient?",
        ),
        (
            "Use of Medical Terminology",
            "Is medical terminology used correctly and effectively within the "
            "conversational context?\n"
            "Does the use of terminology enhance the accuracy and professionalism "
            "of the conversation?\n"
            "Does the technical terminology used by the doctor and the patient "
            "represent their respective knowledge levels (e.g., layperson language "
            "for the patient)?",
        ),
        (
            "Evidence-Based Support",
            "Are the doctor's statements and responses consistent with the medical "
            "details and recommendations in the notes?",
        ),
    ),
)

RUBRICS = {DIAL2NOTE: DIAL2NOTE_RUBRIC, NOTE2DIAL: NOTE2DIAL_RUBRIC}


@dataclass(frozen=True)
class ComparisonCase:
    case_id: str
    task: str
    reference: str
    candidate_a: str
    candidate_b: str
    model_a: str = "A"
    model_b: str = "B"

    def __post_init__(self):
        for field_name in ("reference", "candidate_a", "candidate_b"):
            if not getattr(self, field_name).strip():
                raise ValidationError(f"{field_name} must be non-empty")
        if self.model_a == self.model_b:
            raise ValidationError("the two candidates must carry distinct identifiers")


@dataclass(frozen=True)
class JuryVerdict:
    case_id: str
    per_judge: tuple[tuple[str, str | None], ...]  # (judge id, A/B or None)
    winner: str | None  # None when unresolved
    unanimous: bool

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "per_judge": [
                {"judge": judge, "choice": choice} for judge, choice in self.per_judge
            ],
            "winner": self.winner,
            "unanimous": self.unanimous,
        }


def build_judge_prompt(
    case: ComparisonCase, rubric: Rubric, order_swapped: bool = False
) -> list[ChatMessage]:
    """Messages embedding the reference, both candidates, and the rubric.

    ``order_swapped`` controls which candidate is shown as A; the caller is
    responsible for mapping the parsed choice back to the original labels.
    """
    first, second = case.candidate_a, case.candidate_b
    if order_swapped:
        first, second = second, first
    instructions = (
        "You are an impartial expert evaluator of clinical documentation. "
        "You will be shown a reference text and two candidate texts, A and B, "
        "produced by two different systems for the same input. Decide which "
        "candidate is better according to the rubric below, judging against "
        "the reference.\n\n"
        "Rubric:\n"
        f"{rubric.render()}\n\n"
        "Think through each rubric aspect, then give your verdict. "
        "The final line of your reply must contain only the single letter "
        "A or B."
    )
    comparison = (
        "REFERENCE:\n"
        f"{case.reference}\n\n"
        "CANDIDATE A:\n"
        f"{first}\n\n"
        "CANDIDATE B:\n"
        f"{second}\n\n"
        "Which candidate is better, A or B?"
    )
    return [system(instructions), user(comparison)]


_STANDALONE_RE = re.compile(r"(?<![A-Za-z0-9])([AB])(?![A-Za-z0-9])")


def parse_choice(text: str) -> str | None:
    """Extract the judge's final A/B decision; ``None`` means abstention.

    The last line is authoritative when it is a bare token; otherwise the
    last standalone capital A or B in the reply wins.
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if lines:
        final = re.fullmatch(r"[^A-Za-z0-9]*([AB])[^A-Za-z0-9]*", lines[-1])
        if final:
            return final.group(1)
    matches = _STANDALONE_RE.findall(text)
    return matches[-1] if matches else None


def _flip(choice: str | None) -> str | None:
    if choice == "A":
        return "B"
    if choice == "B":
        return "A"
    return choice


def adjudicate(
    judges: Sequence[tuple[object, AgentConfig]],
    case: ComparisonCase,
    rubric: Rubric,
    *,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
    randomize_order: bool = True,
    rng: random.Random | None = None,
) -> JuryVerdict:
    """Query three judges once each and take the majority of cast votes.

    Each judge may see the candidates in swapped order (seeded via ``rng``;
    disable with ``randomize_order=False`` for strict replication). A judge
    that abstains is re-asked once and then dropped from the count. A tie
    among cast votes leaves the case unresolved (winner ``None``); if every
    judge abstains the case is an error.
    """
    if len(judges) != 3:
        raise ValidationError(f"exactly 3 judges required, got {len(judges)}")
    model_ids = [config.model_id for _, config in judges]
    if len(set(model_ids)) != 3:
        raise ValidationError(
            f"judges must come from three distinct model families, got {model_ids}"
        )
    rng = rng or random.Random(0)

    per_judge: list[tuple[str, str | None]] = []
    for backend, config in judges:
        swapped = randomize_order and rng.random() < 0.5
        messages = build_judge_prompt(case, rubric, order_swapped=swapped)
        result = complete(
            backend, config, messages,
            ledger=ledger, role=f"judge:{config.model_id}", policy=policy,
        )
        choice = parse_choice(result.text)
        if choice is None:
            retry = messages + [
                assistant(result.text or "(empty)"),
                user("Reply with a single token: A or B."),
            ]
            second = complete(
                backend, config, retry,
                ledger=ledger, role=f"judge:{config.model_id}", policy=policy,
            )
            choice = parse_choice(second.text)
        if swapped:
            choice = _flip(choice)
        per_judge.append((config.model_id, choice))

    votes = [choice for _, choice in per_judge if choice is not None]
    if not votes:
        raise UnresolvedCaseError(f"all judges abstained on case {case.case_id}")
    a_votes = votes.count("A")
    b_votes = votes.count("B")
    if a_votes > b_votes:
        winner = "A"
    elif b_votes > a_votes:
        winner = "B"
    else:
        winner = None
    unanimous = len(per_judge) == 3 and len(votes) == 3 and len(set(votes)) == 1
    return JuryVerdict(
        case_id=case.case_id,
        per_judge=tuple(per_judge),
        winner=winner,
        unanimous=unanimous,
    )


def preference_rate(verdicts: Sequence[JuryVerdict], favored: str) -> float:
    """Percentage of resolved cases won by ``favored`` ("A" or "B").

    Unresolved verdicts are excluded from the denominator; callers report
    them separately. Undefined (raises) when no case resolved.
    """
    if favored not in ("A", "B"):
        raise ValidationError(f"favored must be 'A' or 'B', got {favored!r}")
    if not verdicts:
        raise ValidationError("preference rate is undefined on an empty verdict list")
    resolved = [v for v in verdicts if v.winner is not None]
    if not resolved:
        raise ValidationError("preference rate is undefined with zero resolved cases")
    wins = sum(1 for v in resolved if v.winner == favored)
    return 100.0 * wins / len(resolved)
