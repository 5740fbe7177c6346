"""Command-line interface.

Subcommands: ``analyze``, ``plan``, ``generate``, ``validate``, ``stats``,
``eval metrics`` and ``eval jury``. Everything prints JSON so runs compose
with shell tooling; ``validate`` exits non-zero when the corpus has errors.
"""

from __future__ import annotations

import argparse
import json
import statistics
import sys
from pathlib import Path

from . import catalog, jury, metrics, pipeline
from .errors import SynthPipeError
from .exemplars import ExemplarPool
from .gateway import (
    AgentConfig,
    HttpBackend,
    RetryPolicy,
    ScriptedBackend,
    UsageLedger,
    default_agent_configs,
)


def _emit(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2, ensure_ascii=False)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _cmd_analyze(args) -> int:
    entries = catalog.load_claims(args.claims)
    report = catalog.bin_distribution(entries)
    _emit(report.to_dict(), args.out)
    return 0


def _cmd_plan(args) -> int:
    entries = catalog.load_claims(args.claims)
    plan = catalog.build_plan(entries, top_k=args.top_k, per_code=args.per_code)
    _emit(plan.to_dict(), args.out)
    return 0


def _load_run_options(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _build_run_config(args, options: dict) -> pipeline.RunConfig:
    model_id = options.get("model_id", "gpt-4o")
    agent_configs = default_agent_configs(model_id)
    for role, overrides in options.get("agents", {}).items():
        if role not in agent_configs:
            raise SynthPipeError(f"unknown agent role in config: {role!r}")
        base = agent_configs[role]
        merged = {
            "model_id": overrides.get("model_id", base.model_id),
            "temperature": overrides.get("temperature", base.temperature),
            "max_tokens": overrides.get("max_tokens", base.max_tokens),
            "top_p": overrides.get("top_p", base.top_p),
            "frequency_penalty": overrides.get("frequency_penalty", base.frequency_penalty),
            "presence_penalty": overrides.get("presence_penalty", base.presence_penalty),
        }
        agent_configs[role] = AgentConfig(**merged)

    mock_scripts = None
    backend = None
    if args.mock_script:
        mock_scripts = pipeline.load_mock_scripts(args.mock_script)
    else:
        backend_options = options.get("backend")
        if not backend_options or "base_url" not in backend_options:
            raise SynthPipeError(
                "config must define backend.base_url (or pass --mock-script)"
            )
        backend = HttpBackend(
            base_url=backend_options["base_url"],
            api_key=backend_options.get("api_key"),
            api_key_env=backend_options.get("api_key_env", "SYNTHPIPE_API_KEY"),
            timeout=backend_options.get("timeout", 120.0),
        )

    retry_options = options.get("retry", {})
    policy = RetryPolicy(
        max_attempts=retry_options.get("max_attempts", 5),
        base_delay=retry_options.get("base_delay", 0.5),
        max_delay=retry_options.get("max_delay", 30.0),
    )
    if mock_scripts is not None:
        policy = RetryPolicy(max_attempts=policy.max_attempts, sleep=lambda _: None)

    gates = options.get("gates", {})
    exemplar_dir = options.get("exemplar_dir")
    pool = ExemplarPool.from_dir(exemplar_dir) if exemplar_dir else ExemplarPool.builtin()

    return pipeline.RunConfig(
        out_path=args.out,
        backend=backend,
        mock_scripts=mock_scripts,
        agent_configs=agent_configs,
        exemplar_pool=pool,
        seed=args.seed,
        workers=args.workers,
        resume=args.resume,
        retry_policy=policy,
        min_dialogue_turns=gates.get("min_dialogue_turns", 20),
        enforce_diversity=gates.get("enforce_diversity", False),
        min_diff=gates.get("min_diff", 4),
        max_attempts_factor=gates.get("max_attempts_factor", 4),
        note_regen_cap=gates.get("note_regen_cap", 2),
        dialogue_regen_cap=gates.get("dialogue_regen_cap", 2),
        stop_after_pairs=args.stop_after,
    )


def _cmd_generate(args) -> int:
    plan = catalog.GenerationPlan.from_json_file(args.plan)
    options = _load_run_options(args.config)
    run_config = _build_run_config(args, options)
    summary = pipeline.run_generation(plan, run_config)
    _emit(summary.to_dict(), None)
    return 0


def _cmd_validate(args) -> int:
    summary = pipeline.validate_corpus(args.pairs)
    _emit(summary.to_dict(), args.out)
    return 0 if summary.is_clean else 1


def _cmd_stats(args) -> int:
    stats = metrics.corpus_stats(pipeline.iter_pairs(args.pairs))
    _emit(stats.to_dict(), args.out)
    return 0


def _read_texts(path: str) -> list[str]:
    """JSONL where each line is a JSON string or an object with a text key."""
    texts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            value = json.loads(line)
            if isinstance(value, str):
                texts.append(value)
            elif isinstance(value, dict) and "text" in value:
                texts.append(value["text"])
            else:
                raise SynthPipeError(f"cannot read a text from line: {line[:80]!r}")
    return texts


def _cmd_eval_metrics(args) -> int:
    hyps = _read_texts(args.hyps)
    refs = _read_texts(args.refs)
    report = metrics.score_corpus(hyps, refs)
    per_pair = [metrics.score_pair(h, r) for h, r in zip(hyps, refs)]

    def spread(values: list[float]) -> float:
        return statistics.pstdev(values) if len(values) > 1 else 0.0

    payload = report.to_dict()
    payload["pairs"] = len(hyps)
    payload["std"] = {
        "bleu": spread([p.bleu for p in per_pair]),
        "rouge1_f1": spread([p.rouge1.f1 for p in per_pair]),
        "rouge2_f1": spread([p.rouge2.f1 for p in per_pair]),
        "rougeL_f1": spread([p.rougeL.f1 for p in per_pair]),
        "rougeLsum_f1": spread([p.rougeLsum.f1 for p in per_pair]),
        "meteor": spread([p.meteor for p in per_pair]),
    }
    _emit(payload, args.out)
    return 0


def _load_judges(path: str, mock_script: str | None) -> list[tuple[object, AgentConfig]]:
    with open(path, encoding="utf-8") as fh:
        described = json.load(fh)
    entries = described["judges"] if isinstance(described, dict) else described
    scripts = {}
    if mock_script:
        with open(mock_script, encoding="utf-8") as fh:
            scripts = json.load(fh)["per_judge"]
    judges: list[tuple[object, AgentConfig]] = []
    for entry in entries:
        config = AgentConfig(
            model_id=entry["model_id"],
            temperature=entry.get("temperature", 0.0),
            max_tokens=entry.get("max_tokens", 1024),
            top_p=entry.get("top_p", 1.0),
        )
        if mock_script:
            backend = ScriptedBackend(scripts[entry["model_id"]])
        else:
            backend = HttpBackend(
                base_url=entry["base_url"],
                api_key=entry.get("api_key"),
                api_key_env=entry.get("api_key_env", "SYNTHPIPE_API_KEY"),
            )
        judges.append((backend, config))
    return judges


def _cmd_eval_jury(args) -> int:
    import random

    judges = _load_judges(args.judges, args.mock_script)
    rubric = jury.RUBRICS[args.task]
    ledger = UsageLedger()
    rng = random.Random(args.seed)
    policy = RetryPolicy.immediate() if args.mock_script else RetryPolicy()

    verdicts = []
    unresolved_errors = 0
    out_lines = []
    with open(args.cases, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            raw = json.loads(line)
            case = jury.ComparisonCase(
                case_id=str(raw["case_id"]),
                task=args.task,
                reference=raw["reference"],
                candidate_a=raw["candidate_a"],
                candidate_b=raw["candidate_b"],
                model_a=raw.get("model_a", "A"),
                model_b=raw.get("model_b", "B"),
            )
            try:
                verdict = jury.adjudicate(
                    judges, case, rubric,
                    ledger=ledger, policy=policy,
                    randomize_order=not args.no_swap, rng=rng,
                )
            except SynthPipeError as exc:
                unresolved_errors += 1
                out_lines.append(json.dumps({"case_id": case.case_id, "error": str(exc)}))
                continue
            verdicts.append(verdict)
            out_lines.append(json.dumps(verdict.to_dict(), ensure_ascii=False))

    if args.out:
        Path(args.out).write_text("\n".join(out_lines) + "\n", encoding="utf-8")
    else:
        for line in out_lines:
            print(line)

    resolved = [v for v in verdicts if v.winner is not None]
    summary = {
        "cases": len(verdicts) + unresolved_errors,
        "resolved": len(resolved),
        "unresolved": len(verdicts) - len(resolved) + unresolved_errors,
        "preference_rate_a": jury.preference_rate(verdicts, "A") if resolved else None,
        "preference_rate_b": jury.preference_rate(verdicts, "B") if resolved else None,
    }
    print(json.dumps(summary, indent=2), file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synthpipe",
        description="Synthetic clinical dialogue-note corpus engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="bin a claims table by code frequency")
    p.add_argument("--claims", required=True, help="CSV with header code,description,count")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("plan", help="build a generation plan from a claims table")
    p.add_argument("--claims", required=True)
    p.add_argument("--top-k", type=int, required=True, help="number of codes to cover")
    p.add_argument("--per-code", type=int, required=True, help="pairs per code")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("generate", help="run the generation pipeline over a plan")
    p.add_argument("--plan", required=True, help="plan JSON from `synthpipe plan`")
    p.add_argument("--config", help="run config JSON (backend, agents, gates, retry)")
    p.add_argument("--out", required=True, help="output corpus JSONL path")
    p.add_argument("--resume", action="store_true", help="continue from the checkpoint")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--mock-script", help="per-code scripted responses JSON (offline runs)")
    p.add_argument("--stop-after", type=int, help="stop after N emitted pairs (smoke runs)")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("validate", help="re-run both gates over a corpus file")
    p.add_argument("--pairs", required=True, help="corpus JSONL path")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("stats", help="corpus size and average-length statistics")
    p.add_argument("--pairs", required=True, help="corpus JSONL path")
    p.add_argument("--out", help="write JSON here instead of stdout")
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("eval", help="evaluation tools")
    eval_sub = p.add_subparsers(dest="eval_command", required=True)

    pm = eval_sub.add_parser("metrics", help="n-gram metrics between two text files")
    pm.add_argument("--refs", required=True, help="JSONL of reference texts")
    pm.add_argument("--hyps", required=True, help="JSONL of hypothesis texts")
    pm.add_argument("--out", help="write JSON here instead of stdout")
    pm.set_defaults(func=_cmd_eval_metrics)

    pj = eval_sub.add_parser("jury", help="pairwise three-judge evaluation")
    pj.add_argument("--cases", required=True, help="JSONL of comparison cases")
    pj.add_argument("--judges", required=True, help="JSON describing the three judges")
    pj.add_argument("--task", required=True, choices=[jury.DIAL2NOTE, jury.NOTE2DIAL])
    pj.add_argument("--out", help="write verdict JSONL here instead of stdout")
    pj.add_argument("--seed", type=int, default=0, help="seed for candidate order swapping")
    pj.add_argument("--no-swap", action="store_true", help="never swap candidate order")
    pj.add_argument("--mock-script", help="per-judge scripted responses JSON")
    pj.set_defaults(func=_cmd_eval_jury)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SynthPipeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
