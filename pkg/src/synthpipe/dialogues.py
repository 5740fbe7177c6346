"""Dialogue agents plus the transcript parser and lint checks.

Transcripts use one bracketed speaker label per turn (``[doctor]: ...``);
any label is allowed so extra participants (a parent, an interpreter) work
unchanged. The validator guards the corpus-level rules: no placeholder
tokens, no leaked ICD code, both doctor and patient present.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import prompts
from .catalog import IcdEntry
from .errors import GenerationError, ParseError, ValidationError
from .gateway import AgentConfig, RetryPolicy, UsageLedger, complete, default_agent_configs, system, user
from .notes import SoapNote, render_soap
from .reports import Finding, ValidationReport

DEFAULT_MIN_TURNS = 20

_TURN_RE = re.compile(r"^\s*\[([^\[\]\n]+)\]\s*:\s*(.*)$")
_PLACEHOLDER_RE = re.compile(
    r"\[[^\[\]]*\b(?:name|placeholder|insert|redacted|tbd|xxx)\b[^\[\]]*\]",
    re.IGNORECASE,
)


@dataclass(frozen=True)
class Turn:
    speaker: str
    text: str

    def __post_init__(self):
        if not self.speaker.strip():
            raise ValidationError("turn speaker must be non-empty")
        if self.speaker != self.speaker.lower():
            raise ValidationError(f"speaker label must be lowercase: {self.speaker!r}")
        if not self.text.strip():
            raise ValidationError("turn text must be non-empty")

    def to_dict(self) -> dict:
        return {"speaker": self.speaker, "text": self.text}


@dataclass(frozen=True)
class Dialogue:
    turns: tuple[Turn, ...]
    raw_text: str

    @property
    def speakers(self) -> set[str]:
        return {t.speaker for t in self.turns}


class DialogueValidationReport(ValidationReport):
    pass


def parse_dialogue(text: str) -> Dialogue:
    """Split a transcript into speaker turns.

    A line matching ``[speaker]: utterance`` opens a turn; following lines
    without a marker are appended to the current turn. Speaker labels are
    normalized to lowercase. Non-blank text before the first marker is a
    framing-text parse error, as is a transcript with no turns at all.
    """
    pending: list[tuple[str, list[str]]] = []
    leading: list[str] = []
    for line in text.splitlines():
        match = _TURN_RE.match(line)
        if match:
            speaker = match.group(1).strip().lower()
            pending.append((speaker, [match.group(2)]))
        elif pending:
            pending[-1][1].append(line)
        elif line.strip():
            leading.append(line)
    if not pending:
        raise ParseError("no recognizable [speaker]: turns in transcript")
    if leading:
        raise ParseError(
            f"framing text before the first turn marker: {' '.join(leading)[:80]!r}"
        )
    turns = []
    for i, (speaker, lines) in enumerate(pending, start=1):
        utterance = "\n".join(lines).rstrip()
        if not utterance.strip():
            raise ParseError(f"turn {i} ([{speaker}]) has an empty utterance")
        turns.append(Turn(speaker=speaker, text=utterance))
    return Dialogue(turns=tuple(turns), raw_text=text)


def render_dialogue(dialogue: Dialogue) -> str:
    """Canonical transcript: one ``[speaker]: text`` line per turn."""
    lines = []
    for turn in dialogue.turns:
        flat = " ".join(part.strip() for part in turn.text.splitlines() if part.strip())
        lines.append(f"[{turn.speaker}]: {flat}")
    return "\n".join(lines) + "\n"


def validate_dialogue(
    dialogue: Dialogue,
    note: SoapNote,
    icd: IcdEntry,
    min_turns: int = DEFAULT_MIN_TURNS,
) -> DialogueValidationReport:
    """Lint a parsed transcript against the pair it belongs to.

    Errors: placeholder tokens, the ICD code leaking into an utterance,
    fewer than two turns, or a missing doctor/patient speaker. Short
    transcripts (under ``min_turns`` turns) only warn, since usable pairs
    come in well under the generator's aspirational length.
    """
    findings: list[Finding] = []
    code_re = re.compile(rf"(?<![A-Za-z0-9]){re.escape(icd.code)}(?![A-Za-z0-9])", re.IGNORECASE)
    for i, turn in enumerate(dialogue.turns, start=1):
        placeholder = _PLACEHOLDER_RE.search(turn.text)
        if placeholder:
            findings.append(
                Finding(
                    rule="placeholder",
                    severity="error",
                    message=f"placeholder token {placeholder.group(0)!r} in utterance",
                    location=f"turn {i} [{turn.speaker}]",
                )
            )
        if code_re.search(turn.text):
            findings.append(
                Finding(
                    rule="icd-leak",
                    severity="error",
                    message=f"ICD code {icd.code!r} appears in an utterance",
                    location=f"turn {i} [{turn.speaker}]",
                )
            )

    if len(dialogue.turns) < 2:
        findings.append(
            Finding(
                rule="turn-count",
                severity="error",
                message=f"dialogue has {len(dialogue.turns)} turn(s); at least 2 required",
            )
        )
    elif len(dialogue.turns) < min_turns:
        findings.append(
            Finding(
                rule="min-turns",
                severity="warning",
                message=f"dialogue has {len(dialogue.turns)} turns; expected at least {min_turns}",
            )
        )
    for required in ("doctor", "patient"):
        if required not in dialogue.speakers:
            findings.append(
                Finding(
                    rule="missing-speaker",
                    severity="error",
                    message=f"no [{required}] turn in the dialogue",
                )
            )
    return DialogueValidationReport(findings=tuple(findings))


def generate_dialogue(
    backend,
    note: SoapNote,
    exemplars: Sequence[tuple[str, str]],
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
) -> str:
    """Draft a transcript for a note, three exemplar pairs in context."""
    if len(exemplars) != 3:
        raise ValidationError(
            f"dialogue generation uses exactly 3 exemplar pairs, got {len(exemplars)}"
        )
    config = config or default_agent_configs()["dialogue_generator"]
    messages = [
        system(prompts.dialogue_generator_prompt(exemplars)),
        user(render_soap(note)),
    ]
    result = complete(
        backend, config, messages, ledger=ledger, role="dialogue_generator", policy=policy
    )
    if not result.text.strip():
        raise GenerationError("dialogue generator returned an empty completion")
    return result.text


def polish_dialogue(
    backend,
    raw: str,
    note: SoapNote,
    *,
    config: AgentConfig | None = None,
    ledger: UsageLedger | None = None,
    policy: RetryPolicy | None = None,
) -> str:
    """Expand and align a transcript against its note."""
    config = config or default_agent_configs()["dialogue_polisher"]
    messages = [
        system(prompts.dialogue_polisher_prompt(render_soap(note))),
        user(raw),
    ]
    result = complete(
        backend, config, messages, ledger=ledger, role="dialogue_polisher", policy=policy
    )
    if not result.text.strip():
        raise GenerationError("dialogue polisher returned an empty completion")
    return result.text
