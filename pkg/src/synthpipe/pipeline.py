"""End-to-end batch orchestration with checkpointed, resumable runs.

For every plan item the pipeline runs the approval loop, then for each
approved scenario: write note -> polish -> parse/validate gate -> generate
dialogue -> polish -> parse/validate gate -> append the finished pair to
the output JSONL and checkpoint. A code that fails never aborts the run;
it is recorded and the run moves on.

Determinism contract: with scripted per-code backends and a fixed seed,
output bytes are identical run to run, for any worker count, and across
interrupt/resume cycles. Records are always written in plan order; exemplar
sampling is seeded per (run seed, code, pair index); record ids and
deterministic-mode timestamps are pure functions of the plan position. On
resume, a partially finished code is regenerated from scratch and already
persisted pair ids are skipped on write, which re-spends a few calls but
can never produce duplicates.
"""

from __future__ import annotations

import json
import os
import random
import threading
import time
from concurrent.futures import FIRST_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from .catalog import GenerationPlan, IcdEntry, PlanItem
from .dialogues import (
    DEFAULT_MIN_TURNS,
    Dialogue,
    Turn,
    generate_dialogue,
    parse_dialogue,
    polish_dialogue,
    validate_dialogue,
)
from .errors import GenerationError, ParseError, SynthPipeError, ValidationError
from .exemplars import ExemplarPool
from .gateway import (
    AgentConfig,
    RetryPolicy,
    ScriptedBackend,
    ScriptedFailure,
    UsageLedger,
    default_agent_configs,
)
from .notes import SoapNote, parse_soap, polish_note, validate_soap, write_note
from .scenario import AttemptRecord, Scenario, ScenarioVariables, approve_loop


@dataclass(frozen=True)
class DialogueNotePair:
    """One finished corpus record; both gates have passed by construction."""

    id: str
    icd_code: str
    icd_description: str
    role: str
    scenario: ScenarioVariables
    note_text: str
    dialogue: tuple[Turn, ...]
    provenance: dict

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "icd_code": self.icd_code,
            "icd_description": self.icd_description,
            "role": self.role,
            "scenario": self.scenario.to_dict(),
            "note_text": self.note_text,
            "dialogue": [t.to_dict() for t in self.dialogue],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DialogueNotePair":
        return cls(
            id=data["id"],
            icd_code=data["icd_code"],
            icd_description=data["icd_description"],
            role=data["role"],
            scenario=ScenarioVariables.from_dict(data["scenario"]),
            note_text=data["note_text"],
            dialogue=tuple(Turn(t["speaker"], t["text"]) for t in data["dialogue"]),
            provenance=data.get("provenance", {}),
        )


@dataclass
class CodeState:
    status: str = "pending"  # pending | in_progress | done | failed
    done_pairs: int = 0
    reason: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status, "done_pairs": self.done_pairs, "reason": self.reason}


@dataclass
class RunState:
    seed: int
    codes: dict[str, CodeState] = field(default_factory=dict)
    usage: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "codes": {code: s.to_dict() for code, s in self.codes.items()},
            "usage": self.usage,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunState":
        state = cls(seed=int(data["seed"]))
        for code, raw in data.get("codes", {}).items():
            state.codes[code] = CodeState(
                status=raw.get("status", "pending"),
                done_pairs=int(raw.get("done_pairs", 0)),
                reason=raw.get("reason", ""),
            )
        state.usage = data.get("usage", {})
        return state


@dataclass(frozen=True)
class RunSummary:
    out_path: str
    pairs_emitted: int
    total_records: int
    codes_done: int
    codes_failed: int
    failures: dict[str, str]
    backend_calls: int
    usage: dict
    stopped_early: bool = False

    def to_dict(self) -> dict:
        return {
            "out_path": self.out_path,
            "pairs_emitted": self.pairs_emitted,
            "total_records": self.total_records,
            "codes_done": self.codes_done,
            "codes_failed": self.codes_failed,
            "failures": self.failures,
            "backend_calls": self.backend_calls,
            "usage": self.usage,
            "stopped_early": self.stopped_early,
        }


@dataclass
class RunConfig:
    """Everything a generation run needs besides the plan itself."""

    out_path: str | Path
    backend: object | None = None
    mock_scripts: dict[str, list] | None = None
    agent_configs: dict[str, AgentConfig] = field(default_factory=default_agent_configs)
    exemplar_pool: ExemplarPool = field(default_factory=ExemplarPool.builtin)
    seed: int = 0
    workers: int = 1
    resume: bool = False
    retry_policy: RetryPolicy | None = None
    min_dialogue_turns: int = DEFAULT_MIN_TURNS
    enforce_diversity: bool = False
    min_diff: int = 4
    max_attempts_factor: int = 4
    note_regen_cap: int = 2
    dialogue_regen_cap: int = 2
    stop_after_pairs: int | None = None
    checkpoint_path: str | Path | None = None
    attempt_log_path: str | Path | None = None

    def __post_init__(self):
        if self.backend is None and self.mock_scripts is None:
            raise ValidationError("run config needs a backend or mock scripts")
        if self.workers < 1:
            raise ValidationError(f"workers must be >= 1, got {self.workers}")

    @property
    def deterministic(self) -> bool:
        return self.mock_scripts is not None

    def resolved_checkpoint_path(self) -> Path:
        if self.checkpoint_path is not None:
            return Path(self.checkpoint_path)
        return Path(str(self.out_path) + ".state.json")

    def resolved_attempt_log_path(self) -> Path:
        if self.attempt_log_path is not None:
            return Path(self.attempt_log_path)
        return Path(str(self.out_path) + ".attempts.jsonl")


def load_mock_scripts(path: str | Path) -> dict[str, list]:
    """Read a per-code mock script file.

    Format: ``{"per_code": {"<code>": [entry, ...]}}`` where an entry is a
    response string, ``{"fail": "transient"}``, or ``{"fail": <status>}``.
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    scripts: dict[str, list] = {}
    for code, entries in data["per_code"].items():
        parsed: list = []
        for entry in entries:
            if isinstance(entry, str):
                parsed.append(entry)
            elif isinstance(entry, dict) and "fail" in entry:
                fail = entry["fail"]
                parsed.append(
                    ScriptedFailure() if fail == "transient" else ScriptedFailure(status=int(fail))
                )
            else:
                raise ValidationError(f"bad mock script entry for {code}: {entry!r}")
        scripts[code] = parsed
    return scripts


def _atomic_write_json(path: Path, payload: dict) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(json.dumps(payload, indent=2, sort_keys=True), encoding="utf-8")
    os.replace(tmp, path)


def _scan_output(path: Path) -> tuple[set[str], int]:
    """Existing record ids and count; truncates a torn trailing line."""
    if not path.exists():
        return set(), 0
    ids: set[str] = set()
    good_bytes = 0
    count = 0
    raw = path.read_bytes()
    offset = 0
    for line in raw.splitlines(keepends=True):
        end = offset + len(line)
        stripped = line.strip()
        if stripped:
            try:
                record = json.loads(stripped.decode("utf-8"))
                ids.add(record["id"])
            except (ValueError, KeyError, UnicodeDecodeError) as exc:
                if end >= len(raw):
                    break  # torn final line from an interrupted write
                raise ValidationError(f"corrupt corpus line at byte {offset}: {exc}")
            count += 1
        if line.endswith(b"\n"):
            good_bytes = end
        offset = end
    if good_bytes < len(raw):
        with open(path, "r+b") as fh:
            fh.truncate(good_bytes)
    return ids, count


class _Emitter:
    """Serialized plan-order appender with per-pair atomic checkpointing."""

    def __init__(
        self,
        out_path: Path,
        state: RunState,
        state_path: Path,
        existing_ids: set[str],
        run_ledger: UsageLedger,
        prior_usage: dict,
        stop_after: int | None,
    ):
        self._out_path = out_path
        self._state = state
        self._state_path = state_path
        self._existing = existing_ids
        self._ledger = run_ledger
        self._prior_usage = prior_usage
        self._stop_after = stop_after
        self._lock = threading.Lock()
        self.emitted = 0
        self.stop_requested = False

    @property
    def known_records(self) -> int:
        return len(self._existing)

    def emit(self, pair: DialogueNotePair) -> None:
        with self._lock:
            if pair.id in self._existing:
                return
            line = json.dumps(pair.to_dict(), ensure_ascii=False)
            with open(self._out_path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
            self._existing.add(pair.id)
            self.emitted += 1
            self._ledger.add_pair()
            code_state = self._state.codes[pair.icd_code]
            code_state.done_pairs += 1
            self.save_state()
            if self._stop_after is not None and self.emitted >= self._stop_after:
                self.stop_requested = True

    def save_state(self) -> None:
        self._state.usage = _combine_usage(self._prior_usage, self._ledger.snapshot())
        _atomic_write_json(self._state_path, self._state.to_dict())


def _combine_usage(prior: dict, current: dict) -> dict:
    if not prior:
        return current
    combined = {"by_role": {}, "pairs_completed": 0}
    for source in (prior, current):
        for role, usage in source.get("by_role", {}).items():
            slot = combined["by_role"].setdefault(
                role, {"prompt_tokens": 0, "completion_tokens": 0, "calls": 0}
            )
            for key in slot:
                slot[key] += usage.get(key, 0)
        combined["pairs_completed"] += source.get("pairs_completed", 0)
    return combined


def _pair_rng(seed: int, code: str, pair_index: int, stage: str) -> random.Random:
    return random.Random(f"{seed}|{code}|{pair_index}|{stage}")


def _make_note(
    backend,
    scenario: Scenario,
    exemplar_note: str,
    config: RunConfig,
    ledger: UsageLedger,
    policy: RetryPolicy | None,
) -> tuple[str, SoapNote, dict]:
    """Write + polish with the parse/validate gate; bounded regeneration."""
    generations = 0
    polishes = 0
    last_problem = ""
    for _ in range(config.note_regen_cap + 1):
        raw = write_note(
            backend, scenario, exemplar_note,
            config=config.agent_configs["note_writer"], ledger=ledger, policy=policy,
        )
        generations += 1
        polished = polish_note(
            backend, raw,
            config=config.agent_configs["note_polisher"], ledger=ledger, policy=policy,
        )
        polishes += 1
        for attempt in range(2):
            try:
                note = parse_soap(polished)
                report = validate_soap(note)
                if not report.errors:
                    return polished, note, {
                        "note_generations": generations,
                        "note_polishes": polishes,
                    }
                last_problem = "; ".join(f.message for f in report.errors)
            except ParseError as exc:
                last_problem = str(exc)
            if attempt == 0:
                polished = polish_note(
                    backend, polished,
                    config=config.agent_configs["note_polisher"],
                    ledger=ledger, policy=policy,
                )
                polishes += 1
    raise GenerationError(f"note failed the validation gate after retries: {last_problem}")


def _make_dialogue(
    backend,
    note: SoapNote,
    icd: IcdEntry,
    exemplar_pairs: Sequence[tuple[str, str]],
    config: RunConfig,
    ledger: UsageLedger,
    policy: RetryPolicy | None,
) -> tuple[Dialogue, dict]:
    """Generate + polish with the parse/validate gate; bounded regeneration."""
    generations = 0
    polishes = 0
    last_problem = ""
    for _ in range(config.dialogue_regen_cap + 1):
        raw = generate_dialogue(
            backend, note, exemplar_pairs,
            config=config.agent_configs["dialogue_generator"], ledger=ledger, policy=policy,
        )
        generations += 1
        polished = polish_dialogue(
            backend, raw, note,
            config=config.agent_configs["dialogue_polisher"], ledger=ledger, policy=policy,
        )
        polishes += 1
        for attempt in range(2):
            try:
                dialogue = parse_dialogue(polished)
                report = validate_dialogue(dialogue, note, icd, min_turns=config.min_dialogue_turns)
                if not report.errors:
                    return dialogue, {
                        "dialogue_generations": generations,
                        "dialogue_polishes": polishes,
                    }
                last_problem = "; ".join(f.message for f in report.errors)
            except ParseError as exc:
                last_problem = str(exc)
            if attempt == 0:
                polished = polish_dialogue(
                    backend, polished, note,
                    config=config.agent_configs["dialogue_polisher"],
                    ledger=ledger, policy=policy,
                )
                polishes += 1
    raise GenerationError(f"dialogue failed the validation gate after retries: {last_problem}")


@dataclass
class _CodeResult:
    code: str
    pairs: list[DialogueNotePair]
    failure: str | None
    attempts: list[AttemptRecord]
    ledger: UsageLedger


def _process_code(
    item: PlanItem,
    config: RunConfig,
    plan_offset: int,
    emit: Callable[[DialogueNotePair], bool],
) -> _CodeResult:
    """Run all six agents for one code; ``emit`` returns False to stop early."""
    icd = item.entry
    code_ledger = UsageLedger()
    policy = config.retry_policy or (
        RetryPolicy.immediate() if config.deterministic else RetryPolicy()
    )
    if config.mock_scripts is not None:
        if icd.code not in config.mock_scripts:
            return _CodeResult(icd.code, [], "no mock script for this code", [], code_ledger)
        backend = ScriptedBackend(config.mock_scripts[icd.code])
    else:
        backend = config.backend

    scenario_rng = random.Random(f"{config.seed}|{icd.code}|scenario")
    sampled_scenario_exemplars: list[str] = []

    def sample_scenario_exemplar() -> str:
        name, note = config.exemplar_pool.sample_note(scenario_rng)
        sampled_scenario_exemplars.append(name)
        return note

    attempts: list[AttemptRecord] = []
    try:
        scenarios = approve_loop(
            backend,
            icd,
            target=item.pairs_to_generate,
            max_attempts=config.max_attempts_factor * item.pairs_to_generate,
            exemplar_note=sample_scenario_exemplar,
            configs=config.agent_configs,
            ledger=code_ledger,
            policy=policy,
            enforce_diversity=config.enforce_diversity,
            min_diff=config.min_diff,
            attempt_log=attempts,
        )
    except SynthPipeError as exc:
        return _CodeResult(icd.code, [], f"scenario stage failed: {exc}", attempts, code_ledger)

    if not scenarios:
        return _CodeResult(
            icd.code, [], "no scenario approved within the attempt budget", attempts, code_ledger
        )
    approved_attempts = [r.attempt for r in attempts if r.verdict == "Go"]

    pairs: list[DialogueNotePair] = []
    failure: str | None = None
    if len(scenarios) < item.pairs_to_generate:
        failure = (
            f"only {len(scenarios)} of {item.pairs_to_generate} scenarios approved "
            "within the attempt budget"
        )
    models = {role: cfg.model_id for role, cfg in config.agent_configs.items()}

    for pair_index, scenario in enumerate(scenarios):
        pair_ledger = UsageLedger()
        try:
            note_rng = _pair_rng(config.seed, icd.code, pair_index, "note")
            note_exemplar_name, note_exemplar = config.exemplar_pool.sample_note(note_rng)
            note_text, note, note_counts = _make_note(
                backend, scenario, note_exemplar, config, pair_ledger, policy
            )
            dialogue_rng = _pair_rng(config.seed, icd.code, pair_index, "dialogue")
            sampled = config.exemplar_pool.sample_pairs(dialogue_rng, 3)
            dialogue, dialogue_counts = _make_dialogue(
                backend,
                note,
                icd,
                [pair for _, pair in sampled],
                config,
                pair_ledger,
                policy,
            )
        except SynthPipeError as exc:
            failure = f"pair {pair_index} failed: {exc}"
            code_ledger.merge(pair_ledger)
            break
        code_ledger.merge(pair_ledger)

        provider_attempt = (
            approved_attempts[pair_index] if pair_index < len(approved_attempts) else None
        )
        scenario_exemplar = (
            sampled_scenario_exemplars[provider_attempt - 1]
            if provider_attempt is not None and provider_attempt <= len(sampled_scenario_exemplars)
            else None
        )
        ordinal = plan_offset + pair_index
        timestamp = float(ordinal) if config.deterministic else time.time()
        provenance = {
            "models": models,
            "attempts": {"provider_attempt": provider_attempt, **note_counts, **dialogue_counts},
            "exemplars": {
                "scenario": scenario_exemplar,
                "note": note_exemplar_name,
                "dialogue": [name for name, _ in sampled],
            },
            "timestamp": timestamp,
            "usage": {
                "prompt_tokens": pair_ledger.total_prompt_tokens,
                "completion_tokens": pair_ledger.total_completion_tokens,
            },
        }
        pair = DialogueNotePair(
            id=f"{icd.code}-{pair_index:04d}",
            icd_code=icd.code,
            icd_description=icd.description,
            role=scenario.role,
            scenario=scenario.variables,
            note_text=note_text,
            dialogue=dialogue.turns,
            provenance=provenance,
        )
        pairs.append(pair)
        if not emit(pair):
            break
    return _CodeResult(icd.code, pairs, failure, attempts, code_ledger)


def run_generation(plan: GenerationPlan, config: RunConfig) -> RunSummary:
    """Execute a generation plan; see the module docstring for guarantees.

    An unwritable output path is fatal; everything that goes wrong for a
    single code is recorded in the summary and the run continues.
    """
    out_path = Path(config.out_path)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    state_path = config.resolved_checkpoint_path()
    attempt_path = config.resolved_attempt_log_path()

    if config.resume and state_path.exists():
        state = RunState.from_dict(json.loads(state_path.read_text(encoding="utf-8")))
        if state.seed != config.seed:
            raise ValidationError(
                f"checkpoint seed {state.seed} does not match run seed {config.seed}"
            )
        existing_ids, _ = _scan_output(out_path)
    else:
        state = RunState(seed=config.seed)
        existing_ids = set()
        out_path.write_text("", encoding="utf-8")
        attempt_path.write_text("", encoding="utf-8")

    prior_usage = state.usage
    run_ledger = UsageLedger()
    emitter = _Emitter(
        out_path=out_path,
        state=state,
        state_path=state_path,
        existing_ids=existing_ids,
        run_ledger=run_ledger,
        prior_usage=prior_usage,
        stop_after=config.stop_after_pairs,
    )

    todo: list[tuple[int, PlanItem]] = []
    offset = 0
    offsets: dict[str, int] = {}
    for item in plan.items:
        if item.entry.code in offsets:
            raise ValidationError(f"plan contains duplicate code {item.entry.code!r}")
        offsets[item.entry.code] = offset
        code_state = state.codes.setdefault(item.entry.code, CodeState())
        if code_state.status != "done":
            todo.append((offset, item))
        offset += item.pairs_to_generate

    failures: dict[str, str] = {}
    attempt_records: list[AttemptRecord] = []

    def finish_code(result: _CodeResult, target: int) -> None:
        run_ledger.merge(result.ledger)
        attempt_records.extend(result.attempts)
        code_state = state.codes[result.code]
        if emitter.stop_requested and code_state.done_pairs < target and result.failure is None:
            code_state.status = "in_progress"
        elif result.failure is None and code_state.done_pairs >= target:
            code_state.status = "done"
            code_state.reason = ""
        else:
            code_state.status = "failed"
            code_state.reason = result.failure or "incomplete"
            failures[result.code] = code_state.reason
        emitter.save_state()

    stopped = False
    if config.workers == 1:
        for code_offset, item in todo:
            if emitter.stop_requested:
                stopped = True
                break
            state.codes[item.entry.code].status = "in_progress"

            def emit_now(pair: DialogueNotePair) -> bool:
                emitter.emit(pair)
                return not emitter.stop_requested

            result = _process_code(item, config, code_offset, emit_now)
            finish_code(result, item.pairs_to_generate)
    else:
        stopped = _run_concurrent(todo, config, state, emitter, finish_code)

    for record in attempt_records:
        with open(attempt_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record.to_dict(), ensure_ascii=False) + "\n")

    emitter.save_state()
    done = sum(1 for s in state.codes.values() if s.status == "done")
    failed = sum(1 for s in state.codes.values() if s.status == "failed")
    return RunSummary(
        out_path=str(out_path),
        pairs_emitted=emitter.emitted,
        total_records=emitter.known_records,
        codes_done=done,
        codes_failed=failed,
        failures=failures,
        backend_calls=run_ledger.total_calls,
        usage=state.usage,
        stopped_early=stopped or emitter.stop_requested,
    )


def _run_concurrent(todo, config: RunConfig, state: RunState, emitter, finish_code) -> bool:
    """Worker pool over codes; results flushed strictly in plan order."""
    buffered: dict[str, _CodeResult] = {}
    queue = list(todo)
    frontier = 0
    stopped = False
    with ThreadPoolExecutor(max_workers=config.workers) as pool:
        futures = {}
        for code_offset, item in queue:
            state.codes[item.entry.code].status = "in_progress"
            future = pool.submit(_process_code, item, config, code_offset, lambda _pair: True)
            futures[future] = item
        pending = set(futures)
        while pending:
            finished, pending = wait(pending, return_when=FIRST_COMPLETED)
            for future in finished:
                result = future.result()
                buffered[result.code] = result
            while frontier < len(queue) and queue[frontier][1].entry.code in buffered:
                _, item = queue[frontier]
                result = buffered.pop(item.entry.code)
                for pair in result.pairs:
                    if emitter.stop_requested:
                        break
                    emitter.emit(pair)
                finish_code(result, item.pairs_to_generate)
                frontier += 1
                if emitter.stop_requested:
                    stopped = True
                    break
            if stopped:
                for future in pending:
                    future.cancel()
                break
    return stopped


@dataclass(frozen=True)
class CorpusValidationSummary:
    records_checked: int
    malformed_lines: tuple[tuple[int, str], ...]
    error_counts: dict[str, int]
    warning_counts: dict[str, int]
    invalid_records: tuple[tuple[str, tuple[str, ...]], ...]

    @property
    def total_errors(self) -> int:
        return sum(self.error_counts.values()) + len(self.malformed_lines)

    @property
    def total_warnings(self) -> int:
        return sum(self.warning_counts.values())

    @property
    def is_clean(self) -> bool:
        return self.total_errors == 0

    def to_dict(self) -> dict:
        return {
            "records_checked": self.records_checked,
            "malformed_lines": [
                {"line": line, "message": message} for line, message in self.malformed_lines
            ],
            "error_counts": self.error_counts,
            "warning_counts": self.warning_counts,
            "invalid_records": [
                {"id": record_id, "rules": list(rules)}
                for record_id, rules in self.invalid_records
            ],
        }


_REQUIRED_RECORD_KEYS = (
    "id", "icd_code", "icd_description", "role", "scenario", "note_text", "dialogue",
)


def validate_corpus(
    path: str | Path, min_turns: int = DEFAULT_MIN_TURNS
) -> CorpusValidationSummary:
    """Re-run both gates over every record of a corpus file.

    Malformed JSONL lines are reported with their line number and skipped;
    per-record findings are tallied by rule id.
    """
    malformed: list[tuple[int, str]] = []
    error_counts: dict[str, int] = {}
    warning_counts: dict[str, int] = {}
    invalid: list[tuple[str, tuple[str, ...]]] = []
    checked = 0

    def bump(counter: dict[str, int], rule: str) -> None:
        counter[rule] = counter.get(rule, 0) + 1

    with open(path, encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except ValueError as exc:
                malformed.append((line_number, f"not valid JSON: {exc}"))
                continue
            checked += 1
            record_id = str(record.get("id", f"line-{line_number}"))
            rules: list[str] = []

            missing_keys = [k for k in _REQUIRED_RECORD_KEYS if k not in record]
            if missing_keys:
                bump(error_counts, "record-schema")
                rules.append("record-schema")
                invalid.append((record_id, tuple(rules)))
                continue

            try:
                ScenarioVariables.from_dict(record["scenario"])
            except (KeyError, TypeError, ValidationError):
                bump(error_counts, "scenario-schema")
                rules.append("scenario-schema")

            icd = IcdEntry(
                code=record["icd_code"],
                description=record["icd_description"],
                claim_count=0,
            )
            note = None
            try:
                note = parse_soap(record["note_text"])
            except ParseError as exc:
                bump(error_counts, "note-parse")
                rules.append(f"note-parse: {exc}")
            if note is not None:
                for finding in validate_soap(note).findings:
                    counter = error_counts if finding.severity == "error" else warning_counts
                    bump(counter, finding.rule)
                    if finding.severity == "error":
                        rules.append(finding.rule)

            try:
                turns = tuple(Turn(t["speaker"], t["text"]) for t in record["dialogue"])
                dialogue = Dialogue(turns=turns, raw_text="")
            except (KeyError, TypeError, ValidationError) as exc:
                bump(error_counts, "dialogue-schema")
                rules.append("dialogue-schema")
                dialogue = None
            if dialogue is not None and note is not None:
                for finding in validate_dialogue(dialogue, note, icd, min_turns=min_turns).findings:
                    counter = error_counts if finding.severity == "error" else warning_counts
                    bump(counter, finding.rule)
                    if finding.severity == "error":
                        rules.append(finding.rule)

            if rules:
                invalid.append((record_id, tuple(rules)))

    return CorpusValidationSummary(
        records_checked=checked,
        malformed_lines=tuple(malformed),
        error_counts=error_counts,
        warning_counts=warning_counts,
        invalid_records=tuple(invalid),
    )


def iter_pairs(path: str | Path):
    """Yield :class:`DialogueNotePair` records from a corpus file."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                yield DialogueNotePair.from_dict(json.loads(line))


def load_pairs(path: str | Path) -> list[DialogueNotePair]:
    return list(iter_pairs(path))
