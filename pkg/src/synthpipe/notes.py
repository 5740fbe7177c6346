"""SOAP note agents plus the structural parser and lint checks.

Notes flow writer -> polisher -> parser/validator. The parser recognizes
the four section headers under the layouts models actually emit
(``**1. Subjective:**``, ``SUBJECTIVE``, ``Assessment:`` ...), keeps
Subjective's optional CC/HPI/ROS subsections optional, and feeds a linter
that flags misplaced content instead of silently accepting it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import prompts
from .errors import GenerationError, ParseError
from .gateway import AgentConfig, RetryPolicy, UsageLedger, complete, default_agent_configs, system, user
from .reports import Finding, ValidationReport
from .scenario import Scenario

SECTION_NAMES = ("subjective", "objective", "assessment", "plan")
_DISPLAY = {
    "subjective": "Subjective",
    "objective": "Objective",
    "assessment": "Assessment",
    "plan": "Plan",
}

_HEADER_ONLY_RE = re.compile(
    r"^[\s>*_#\-]*(?:\d{1,2}\s*[.)])?[\s*_]*(subjective|objective|assessment|plan)\s*[:\s*_#]*$",
    re.IGNORECASE,
)
_HEADER_INLINE_RE = re.compile(
    r"^[\s>*_#\-]*(?:\d{1,2}\s*[.)])?[\s*_]*(subjective|objective|assessment|plan)[\s*_]*:\s*(\S.*)$",
    re.IGNORECASE,
)

_SUBSECTION_PATTERNS = (
    ("CC", re.compile(r"chief\s+complaint|\(cc\)|\bcc\s*:", re.IGNORECASE)),
    ("HPI", re.compile(r"history\s+of\s+present\s+illness|\(hpi\)|\bhpi\s*:", re.IGNORECASE)),
    ("ROS", re.compile(r"review\s+of\s+systems?|\(ros\)|\bros\s*:", re.IGNORECASE)),
)

_FRAMING_PATTERNS = (
    re.compile(r"please ensure this note is reviewed", re.IGNORECASE),
    re.compile(r"^\s*(?:the\s+)?(?:medical\s+)?note is\s*:", re.IGNORECASE | re.MULTILINE),
    re.compile(r"here is the (?:revised |polished |final )?(?:medical )?note", re.IGNORECASE),
    re.compile(r"hope this (?:helps|is helpful)", re.IGNORECASE),
    re.compile(r"\bas an ai\b", re.IGNORECASE),
)

_REFERRAL_RE = re.compile(r"\breferral\b|\brefer(?:red|ring)?\b", re.IGNORECASE)
_DOCTOR_NAME_RE = re.compile(r"\bDr\.?\s+[A-Z][a-z]")
_SPECIALTY_RE = re.compile(
    r"pulmonolog|cardiolog|dermatolog|neurolog|orthoped|gastroenterolog|endocrinolog|"
    r"oncolog|urolog|gynecolog|psychiatr|psycholog|nephrolog|hematolog|rheumatolog|"
    r"ophthalmolog|otolaryngolog|allerg|immunolog|podiatr|audiolog|obstetric|pediatric|"
    r"geriatric|surgeon|surgery|physical therap|physiotherap|dietitian|nutritionist|specialist",
    re.IGNORECASE,
)
_REFERRAL_REASON_RE = re.compile(r"\bfor\b|\bdue to\b|\bbecause\b|\breason\b", re.IGNORECASE)
_ORDER_PHRASING_RE = re.compile(
    r"\bwill\s+(?:order|obtain|schedule)\b|\border(?:s|ing)?\b|\bto\s+be\s+ordered\b",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class SoapNote:
    """A parsed four-section note; ``raw_text`` keeps the original layout."""

    subjective: str
    objective: str
    assessment: str
    plan: str
    raw_text: str
    leading_text: str = ""
    subjective_subsections: tuple[str, ...] = ()

    def section(self, name: str) -> str:
        return getattr(self, name)


class NoteValidationReport(ValidationReport):
    pass


def parse_soap(text: str) -> SoapNote:
    """Split a note into its four sections.

    Headers are detected per line, case-insensitively, tolerating numbering
    and emphasis markers; intervening text belongs to the preceding section.
    Missing or out-of-order sections raise :class:`ParseError`. Text before
    the first header is preserved for the validator to flag.
    """
    bodies: dict[str, list[str]] = {}
    order: list[str] = []
    leading: list[str] = []
    current: str | None = None
    for line in text.splitlines():
        match = _HEADER_ONLY_RE.match(line)
        inline = None
        if not match:
            match = _HEADER_INLINE_RE.match(line)
            if match:
                inline = match.group(2)
        if match:
            name = match.group(1).lower()
            if name in bodies:
                raise ParseError(f"section {_DISPLAY[name]} appears more than once")
            order.append(name)
            bodies[name] = []
            current = name
            if inline:
                bodies[name].append(inline)
        elif current is None:
            leading.append(line)
        else:
            bodies[current].append(line)

    missing = tuple(_DISPLAY[name] for name in SECTION_NAMES if name not in bodies)
    if missing:
        raise ParseError("note is missing sections", missing=missing)
    positions = [SECTION_NAMES.index(name) for name in order]
    if positions != sorted(positions):
        raise ParseError(
            "sections out of order: " + ", ".join(_DISPLAY[n] for n in order)
        )

    subjective = "\n".join(bodies["subjective"]).strip()
    subsections = tuple(
        label for label, pattern in _SUBSECTION_PATTERNS if pattern.search(subjective)
    )
    return SoapNote(
        subjective=subjective,
        objective="\n".join(bodies["objective"]).strip(),
        assessment="\n".join(bodies["assessment"]).strip(),
        plan="\n".join(bodies["plan"]).strip(),
        raw_text=text,
        leading_text="\n".join(leading).strip(),
        subjective_subsections=subsections,
    )


def render_soap(note: SoapNote) -> str:
    """Canonical form: upper-case headers, blank-line separated bodies."""
    parts = []
    for name in SECTION_NAMES:
        parts.append(name.upper())
        parts.append("")
        parts.append(note.section(name))
        parts.append("")
    return "\n".join(parts).strip() + "\n"


def validate_soap(note: SoapNote) -> NoteValidationReport:
    """Lint a parsed note; errors make a note unusable, warnings do not.

    Checks: framing text around the note, empty section bodies, referrals
    in Plan lacking a reason/specialty/doctor name, and order-something
    phrasing filed under Objective when it belongs in Plan.
    """
    findings: list[Finding] = []
    if note.leading_text:
        findings.append(
            Finding(
                rule="framing-text",
                severity="error",
                message=f"text before the first section header: {note.leading_text[:80]!r}",
                location="before Subjective",
            )
        )
    for name in SECTION_NAMES:
        body = note.section(name)
        if not body:
            findings.append(
                Finding(
                    rule="empty-section",
                    severity="error",
                    message=f"{_DISPLAY[name]} section has no content",
                    location=_DISPLAY[name],
                )
            )
            continue
        for pattern in _FRAMING_PATTERNS:
            found = pattern.search(body)
            if found:
                findings.append(
                    Finding(
                        rule="framing-text",
                        severity="error",
                        message=f"framing text inside the note: {found.group(0)!r}",
                        location=_DISPLAY[name],
                    )
                )

    if _REFERRAL_RE.search(note.plan):
        missing = []
        if not _DOCTOR_NAME_RE.search(note.plan):
            missing.append("doctor name")
        if not _SPECIALTY_RE.search(note.plan):
            missing.append("specialty")
        if not _REFERRAL_REASON_RE.search(note.plan):
            missing.append("reason")
        if missing:
            findings.append(
                Finding(
                    rule="referral-details",
                    severity="warning",
                    message="referral in Plan lacks: " + ", ".join(missing),
                    location="Plan",
                )
            )

    order_match = _ORDER_PHRASING_RE.search(note.objective)
    if order_match:
        findings.append(
            Finding(
                rule="test-location",
                severity="warning",
                message=(
                    f"ordering phrasing {order_match.group(0)!r} under Objective; "
                    "pending tests belong in Plan"
                ),
                location="Objective",
            )
        )
    return NoteValidationReport(findings=tuple(findings))


def write_note(
    backend,
    scenario: Scenario,
    exemplar_note: str,
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
) -> str:
    """Draft a note from an approved scenario, one exemplar in context."""
    config = config or default_agent_configs()["note_writer"]
    messages = [
        system(prompts.note_writer_prompt(exemplar_note)),
        user(scenario.raw_text),
    ]
    result = complete(backend, config, messages, ledger=ledger, role="note_writer", policy=policy)
    if not result.text.strip():
        raise GenerationError("note writer returned an empty completion")
    return result.text


def polish_note(
    backend,
    raw_note: str,
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
) -> str:
    """Run the section-placement polisher over a drafted note."""
    config = config or default_agent_configs()["note_polisher"]
    messages = [system(prompts.note_polisher_prompt()), user(raw_note)]
    result = complete(
        backend, config, messages, ledger=ledger, role="note_polisher", policy=policy
    )
    if not result.text.strip():
        raise GenerationError("note polisher returned an empty completion")
    return result.text
