"""Batch engine for synthetic clinical dialogue-note corpora.

Plan generation work from a disease-frequency table, drive a six-agent
generation pipeline (scenario -> judged approval -> note -> polish ->
dialogue -> polish) over any OpenAI-compatible endpoint or a deterministic
scripted mock, and evaluate corpora with from-scratch n-gram metrics and a
pairwise LLM jury.
"""

from .catalog import (
    DistributionReport,
    GenerationPlan,
    IcdEntry,
    bin_distribution,
    build_plan,
    load_claims,
)
from .dialogues import Dialogue, Turn, parse_dialogue, render_dialogue, validate_dialogue
from .errors import SynthPipeError
from .gateway import (
    AgentConfig,
    ChatMessage,
    CompletionResult,
    HttpBackend,
    RetryPolicy,
    ScriptedBackend,
    UsageLedger,
    complete,
    create_scripted_backend,
    default_agent_configs,
    estimate_cost,
)
from .jury import ComparisonCase, JuryVerdict, Rubric, adjudicate, preference_rate
from .metrics import (
    CorpusStats,
    MetricReport,
    bleu,
    corpus_stats,
    meteor,
    rouge_l,
    rouge_n,
    score_corpus,
    tokenize,
)
from .notes import SoapNote, parse_soap, render_soap, validate_soap
from .pipeline import DialogueNotePair, RunConfig, RunSummary, run_generation, validate_corpus
from .scenario import Scenario, ScenarioVariables, approve_loop, diff_variables, parse_scenario

__version__ = "0.1.0"

__all__ = [
    "AgentConfig",
    "ChatMessage",
    "ComparisonCase",
    "CompletionResult",
    "CorpusStats",
    "Dialogue",
    "DialogueNotePair",
    "DistributionReport",
    "GenerationPlan",
    "HttpBackend",
    "IcdEntry",
    "JuryVerdict",
    "MetricReport",
    "RetryPolicy",
    "Rubric",
    "RunConfig",
    "RunSummary",
    "Scenario",
    "ScenarioVariables",
    "ScriptedBackend",
    "SoapNote",
    "SynthPipeError",
    "Turn",
    "UsageLedger",
    "adjudicate",
    "approve_loop",
    "bin_distribution",
    "bleu",
    "build_plan",
    "complete",
    "corpus_stats",
    "create_scripted_backend",
    "default_agent_configs",
    "diff_variables",
    "estimate_cost",
    "load_claims",
    "meteor",
    "parse_dialogue",
    "parse_scenario",
    "parse_soap",
    "preference_rate",
    "render_dialogue",
    "render_soap",
    "rouge_l",
    "rouge_n",
    "run_generation",
    "score_corpus",
    "tokenize",
    "validate_corpus",
    "validate_dialogue",
    "validate_soap",
]
