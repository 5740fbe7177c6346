"""Scenario provider and judge agents plus the per-code approval loop.

A scenario is a clinician role plus thirteen named clinical variables; it is
the unit that gets judged for diversity, medical accuracy and plausibility
before any note is written. The approval loop alternates provide and judge
until enough scenarios are approved for a code, feeding rejection feedback
back into the provider conversation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Callable, Sequence

from . import prompts
from .catalog import IcdEntry
from .errors import GenerationError, JudgingError, ParseError, ValidationError
from .gateway import (
    AgentConfig,
    ChatMessage,
    RetryPolicy,
    UsageLedger,
    assistant,
    complete,
    default_agent_configs,
    system,
    user,
)

VARIABLE_COUNT = 13

# Default number of variables that must differ from every earlier approval
# for a scenario to count as diverse.
DIVERSITY_THRESHOLD = 4

# Label spellings accepted for each variable, longest first where it matters.
_FIELD_ALIASES: tuple[tuple[str, tuple[str, ...]], ...] = (
    ("medical_outcome", ("medical outcome",)),
    ("medical_history", ("medical history",)),
    ("symptom_description", ("symptom description", "symptoms description")),
    (
        "lifestyle_habits",
        (
            "patient's self-reported habits and lifestyle",
            "patients self-reported habits and lifestyle",
            "self-reported habits and lifestyle",
            "habits and lifestyle",
            "lifestyle habits",
            "lifestyle",
        ),
    ),
    ("demographics", ("demographic information", "demographics")),
    (
        "patient_behavior",
        ("patient's behavior", "patient's behaviour", "patient behavior", "patient behaviour"),
    ),
    ("geographic_location", ("geographical location", "geographic location")),
    ("clinical_setting", ("clinical setting",)),
    ("encounter_type", ("type of encounter", "encounter type")),
    ("treatment_disparities", ("treatment disparities", "treatment disparity")),
    (
        "english_speaking_status",
        (
            "native or non-native english speaking patient",
            "native or non-native english speaking",
            "native or non-native english-speaking patient",
            "english speaking status",
            "english-speaking status",
        ),
    ),
    ("physical_exams", ("physical exams", "physical exam", "physical examinations")),
    (
        "investigations_tests",
        (
            "investigation/test results",
            "investigations/test results",
            "investigation / test results",
            "investigation and test results",
            "investigations/tests",
            "investigation/tests",
            "investigation/test",
            "test results",
        ),
    ),
)

FIELD_NAMES = tuple(name for name, _ in _FIELD_ALIASES)

_DISPLAY_NAMES = {
    "medical_outcome": "Medical Outcome",
    "medical_history": "Medical History",
    "symptom_description": "Symptom Description",
    "lifestyle_habits": "Habits and Lifestyle",
    "demographics": "Demographic Information",
    "patient_behavior": "Patient's Behavior",
    "geographic_location": "Geographical Location",
    "clinical_setting": "Clinical Setting",
    "encounter_type": "Type of Encounter",
    "treatment_disparities": "Treatment Disparities",
    "english_speaking_status": "Native or Non-Native English Speaking Patient",
    "physical_exams": "Physical Exams",
    "investigations_tests": "Investigation/Test Results",
}


@dataclass(frozen=True)
class ScenarioVariables:
    """The thirteen named clinical variables of one scenario."""

    medical_outcome: str
    medical_history: str
    symptom_description: str
    lifestyle_habits: str
    demographics: str
    patient_behavior: str
    geographic_location: str
    clinical_setting: str
    encounter_type: str
    treatment_disparities: str
    english_speaking_status: str
    physical_exams: str
    investigations_tests: str

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name).strip():
                raise ValidationError(f"scenario variable {f.name} must be non-empty")

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in FIELD_NAMES}

    @classmethod
    def from_dict(cls, data: dict) -> "ScenarioVariables":
        return cls(**{name: data[name] for name in FIELD_NAMES})


@dataclass(frozen=True)
class Scenario:
    role: str
    variables: ScenarioVariables
    raw_text: str

    def __post_init__(self):
        if not self.role.strip():
            raise ValidationError("scenario role must be non-empty")


@dataclass(frozen=True)
class JudgeDecision:
    verdict: str  # "Go" | "NoGo"
    feedback: str | None = None

    def __post_init__(self):
        if self.verdict not in ("Go", "NoGo"):
            raise ValidationError(f"verdict must be Go or NoGo, got {self.verdict!r}")
        if self.verdict == "NoGo" and not (self.feedback or "").strip():
            raise ValidationError("a NoGo decision must carry feedback")
        if self.verdict == "Go" and self.feedback is not None:
            raise ValidationError("a Go decision carries no feedback")

    @property
    def approved(self) -> bool:
        return self.verdict == "Go"


@dataclass(frozen=True)
class AttemptRecord:
    """One provider attempt as logged to the approval JSONL."""

    code: str
    attempt: int
    role: str
    verdict: str  # "Go" | "NoGo" | "error"
    diff_counts: tuple[int, ...]
    feedback: str | None = None

    def to_dict(self) -> dict:
        record = {
            "code": self.code,
            "attempt": self.attempt,
            "role": self.role,
            "verdict": self.verdict,
            "diff_counts": list(self.diff_counts),
        }
        if self.feedback is not None:
            record["feedback"] = self.feedback
        return record


_ROLE_RE = re.compile(
    r"^[\s>*_#-]*role[\s*_]*:[\s*_]*(.+?)[\s*_]*$", re.IGNORECASE | re.MULTILINE
)


def _normalize_label_line(line: str) -> str:
    line = line.replace("’", "'").replace("‘", "'").strip()
    line = re.sub(r"^[\s*\-•#>]+", "", line)
    line = re.sub(r"^\d{1,2}\s*[.)\]]\s*", "", line)
    return line


def _match_label(line: str) -> tuple[str, str] | None:
    """Return (field_name, inline_value) when the line opens a variable block."""
    cleaned = _normalize_label_line(line)
    lowered = cleaned.lower()
    for field_name, aliases in _FIELD_ALIASES:
        for alias in aliases:
            if not lowered.startswith(alias):
                continue
            rest = cleaned[len(alias):]
            stripped = rest.lstrip(" *_")
            if stripped.startswith(":"):
                return field_name, stripped[1:].strip(" *_\t")
            if stripped == "":
                return field_name, ""
    return None


def parse_scenario(text: str) -> Scenario:
    """Extract the role marker and the thirteen labelled variable blocks.

    Labels are matched case-insensitively and tolerate numbering, bullets
    and markdown emphasis. A block's value runs to the next label. Raises
    :class:`ParseError` naming whatever is missing.
    """
    role_match = _ROLE_RE.search(text)
    if not role_match or not role_match.group(1).strip():
        raise ParseError("scenario output is missing the ROLE: marker")
    role = role_match.group(1).strip()

    values: dict[str, list[str]] = {}
    current: str | None = None
    for line in text.splitlines():
        if _ROLE_RE.match(line):
            current = None
            continue
        label = _match_label(line)
        if label is not None:
            field_name, inline = label
            current = field_name
            values.setdefault(field_name, [])
            if inline:
                values[field_name].append(inline)
        elif current is not None and line.strip():
            values[current].append(line.strip())

    collected = {name: "\n".join(chunks).strip() for name, chunks in values.items()}
    missing = tuple(
        _DISPLAY_NAMES[name] for name in FIELD_NAMES if not collected.get(name)
    )
    if missing:
        raise ParseError("scenario is missing variables", missing=missing)
    variables = ScenarioVariables(**{name: collected[name] for name in FIELD_NAMES})
    return Scenario(role=role, variables=variables, raw_text=text)


def _normalize_value(value: str) -> str:
    return " ".join(value.casefold().split())


def diff_variables(a: ScenarioVariables, b: ScenarioVariables) -> int:
    """How many of the thirteen variables differ after normalization.

    Comparison is exact string inequality over case-folded,
    whitespace-collapsed values; symmetric, and zero for identical inputs.
    """
    return sum(
        1
        for name in FIELD_NAMES
        if _normalize_value(getattr(a, name)) != _normalize_value(getattr(b, name))
    )


_DECISION_RE = re.compile(r"decision\s*:\s*(no\s*go|nogo|go)\b", re.IGNORECASE)


def parse_judge_decision(text: str) -> JudgeDecision:
    """Read the judge's verdict line; NoGo keeps the surrounding feedback."""
    match = _DECISION_RE.search(text)
    if match:
        raw = match.group(1).lower().replace(" ", "")
        verdict = "Go" if raw == "go" else "NoGo"
    else:
        bare = text.strip().strip("*_ ").lower()
        if bare == "go":
            verdict = "Go"
        elif bare == "nogo":
            verdict = "NoGo"
        else:
            raise ParseError("judge reply carries no recognizable DECISION marker")
    if verdict == "Go":
        return JudgeDecision(verdict="Go")
    feedback = text[match.end():].strip() if match else ""
    return JudgeDecision(verdict="NoGo", feedback=feedback or text.strip())


def _provider_messages(
    icd: IcdEntry, exemplar_note: str, feedback: str | None
) -> list[ChatMessage]:
    messages = [
        system(prompts.scenario_provider_prompt(exemplar_note)),
        user(f"ICD-10 description of the disease: {icd.description}"),
    ]
    if feedback:
        messages.append(
            user(
                "Your previous scenario was not approved. Incorporate the "
                f"following feedback and generate a new scenario:\n\n{feedback}"
            )
        )
    return messages


def _provider_round(
    backend,
    config: AgentConfig,
    icd: IcdEntry,
    exemplar_note: str,
    feedback: str | None,
    *,
    ledger: UsageLedger | None,
    policy: RetryPolicy | None,
    max_reasks: int,
) -> tuple[Scenario | None, int, ParseError | None]:
    """One provider attempt with bounded re-asks; returns calls actually made."""
    messages = _provider_messages(icd, exemplar_note, feedback)
    calls = 0
    last_error: ParseError | None = None
    while calls <= max_reasks:
        result = complete(
            backend, config, messages, ledger=ledger, role="scenario_provider", policy=policy
        )
        calls += 1
        try:
            return parse_scenario(result.text), calls, None
        except ParseError as exc:
            last_error = exc
            messages = messages + [
                assistant(result.text or "(empty)"),
                user(
                    f"That output could not be used ({exc}). Start with your role on "
                    "the keyword 'ROLE:' and then list all 13 variables, each "
                    "labelled on its own line."
                ),
            ]
    return None, calls, last_error


def provide_scenario(
    backend,
    icd: IcdEntry,
    exemplar_note: str,
    feedback: str | None = None,
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
    max_reasks: int = 1,
) -> Scenario:
    """Ask the provider agent for one scenario for the given code.

    ``feedback`` (present only on retry after a rejection) is appended to
    the conversation verbatim. Output that stays unparseable after
    ``max_reasks`` corrective turns raises :class:`GenerationError`.
    """
    config = config or default_agent_configs()["scenario_provider"]
    scenario, _, error = _provider_round(
        backend, config, icd, exemplar_note, feedback,
        ledger=ledger, policy=policy, max_reasks=max_reasks,
    )
    if scenario is None:
        raise GenerationError(f"scenario generation failed for {icd.code}: {error}")
    return scenario


def judge_scenario(
    backend,
    candidate: Scenario,
    approved: Sequence[Scenario],
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
) -> JudgeDecision:
    """Submit a candidate plus all prior approvals for the same code.

    With no prior approvals the judge's own instructions restrict it to the
    accuracy and plausibility checks. An unparseable verdict is re-asked
    once, then raises :class:`JudgingError`.
    """
    config = config or default_agent_configs()["scenario_judge"]
    if approved:
        previous = "\n\n".join(
            f"--- Approved scenario {i + 1} ---\n{s.raw_text}" for i, s in enumerate(approved)
        )
    else:
        previous = "(none yet)"
    messages = [
        system(prompts.scenario_judge_prompt()),
        user(
            "PREVIOUSLY APPROVED SCENARIOS:\n"
            f"{previous}\n\n"
            "CANDIDATE SCENARIO:\n"
            f"{candidate.raw_text}"
        ),
    ]
    result = complete(
        backend, config, messages, ledger=ledger, role="scenario_judge", policy=policy
    )
    try:
        return parse_judge_decision(result.text)
    except ParseError:
        retry = messages + [
            assistant(result.text or "(empty)"),
            user(
                "Reply in the required format: 'DECISION: Go' or 'DECISION: NoGo' "
                "followed by your feedback."
            ),
        ]
        second = complete(
            backend, config, retry, ledger=ledger, role="scenario_judge", policy=policy
        )
        try:
            return parse_judge_decision(second.text)
        except ParseError as exc:
            raise JudgingError(f"judge verdict unparseable after re-ask: {exc}") from exc


def approve_loop(
    backends,
    icd: IcdEntry,
    target: int,
    max_attempts: int | None = None,
    *,
    exemplar_note: str | Callable[[], str],
    configs: dict[str, AgentConfig] | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
    enforce_diversity: bool = False,
    min_diff: int = DIVERSITY_THRESHOLD,
    max_reasks: int = 1,
    attempt_log: list[AttemptRecord] | None = None,
) -> list[Scenario]:
    """Alternate provide and judge until ``target`` scenarios are approved.

    ``backends`` is a single backend shared by both agents or a
    ``(provider, judge)`` pair. ``exemplar_note`` may be a fixed note or a
    zero-argument sampler invoked once per provider attempt. At most
    ``max_attempts`` provider calls (default ``4 * target``) are issued, so
    a stubborn code cannot burn unbounded budget; coming back with fewer
    than ``target`` approvals (possibly none) is not an error here — the
    caller records the shortfall.

    Every attempt is appended to ``attempt_log`` with its verdict and the
    number of variables differing from each earlier approval. With
    ``enforce_diversity`` the loop additionally rejects any candidate that
    differs from some earlier approval in fewer than ``min_diff`` variables,
    regardless of the judge's verdict.
    """
    if target < 1:
        raise ValidationError(f"target must be >= 1, got {target}")
    if max_attempts is None:
        max_attempts = 4 * target
    if max_attempts < target:
        raise ValidationError(
            f"max_attempts ({max_attempts}) must be at least target ({target})"
        )
    if isinstance(backends, (tuple, list)):
        provider_backend, judge_backend = backends
    else:
        provider_backend = judge_backend = backends
    configs = configs or default_agent_configs()
    sample = exemplar_note if callable(exemplar_note) else (lambda: exemplar_note)

    approved: list[Scenario] = []
    calls = 0
    attempt_no = 0
    feedback: str | None = None
    while len(approved) < target and calls < max_attempts:
        attempt_no += 1
        reask_budget = min(max_reasks, max_attempts - calls - 1)
        scenario, used, error = _provider_round(
            provider_backend,
            configs["scenario_provider"],
            icd,
            sample(),
            feedback,
            ledger=ledger,
            policy=policy,
            max_reasks=reask_budget,
        )
        calls += used
        if scenario is None:
            if attempt_log is not None:
                attempt_log.append(
                    AttemptRecord(
                        code=icd.code,
                        attempt=attempt_no,
                        role="",
                        verdict="error",
                        diff_counts=(),
                        feedback=str(error),
                    )
                )
            feedback = None
            continue

        diffs = tuple(diff_variables(scenario.variables, s.variables) for s in approved)
        try:
            decision = judge_scenario(
                judge_backend,
                scenario,
                approved,
                config=configs["scenario_judge"],
                ledger=ledger,
                policy=policy,
            )
        except JudgingError as exc:
            if attempt_log is not None:
                attempt_log.append(
                    AttemptRecord(
                        code=icd.code,
                        attempt=attempt_no,
                        role=scenario.role,
                        verdict="error",
                        diff_counts=diffs,
                        feedback=str(exc),
                    )
                )
            feedback = None
            continue

        if decision.approved and enforce_diversity and any(d < min_diff for d in diffs):
            low = min(diffs)
            decision = JudgeDecision(
                verdict="NoGo",
                feedback=(
                    f"Rejected by the diversity gate: only {low} of {VARIABLE_COUNT} "
                    f"variables differ from an already approved scenario; at least "
                    f"{min_diff} must differ. Vary more of the variables."
                ),
            )

        if attempt_log is not None:
            attempt_log.append(
                AttemptRecord(
                    code=icd.code,
                    attempt=attempt_no,
                    role=scenario.role,
                    verdict=decision.verdict,
                    diff_counts=diffs,
                    feedback=decision.feedback,
                )
            )
        if decision.approved:
            approved.append(scenario)
            feedback = None
        else:
            feedback = decision.feedback
    return approved
