"""Pairwise jury evaluation with three scripted judges.

Demonstrates prompt assembly against both task rubrics, majority voting,
abstention handling, and preference-rate aggregation. Run from the repo
root:

    python3 demos/04_jury_evaluation.py
"""

import random

from synthpipe import AgentConfig, ComparisonCase, adjudicate, preference_rate
from synthpipe.gateway import RetryPolicy, create_scripted_backend
from synthpipe.jury import DIAL2NOTE_RUBRIC, NOTE2DIAL_RUBRIC, build_judge_prompt

NO_SLEEP = RetryPolicy.immediate()

case = ComparisonCase(
    case_id="demo-1",
    task="d2n",
    reference="SUBJECTIVE ... OBJECTIVE ... ASSESSMENT ... PLAN ...",
    candidate_a="A tightly structured four-section note.",
    candidate_b="A rambling unstructured summary.",
    model_a="tuned-model",
    model_b="baseline-model",
)

print("rubric criteria per task:")
for rubric in (DIAL2NOTE_RUBRIC, NOTE2DIAL_RUBRIC):
    names = ", ".join(name for name, _ in rubric.criteria)
    print(f"  {rubric.task}: {names}")

messages = build_judge_prompt(case, DIAL2NOTE_RUBRIC, order_swapped=False)
print("\njudge prompt skeleton (system message, first 3 lines):")
for line in messages[0].content.splitlines()[:3]:
    print(f"  | {line}")

configs = [AgentConfig(model_id=name, max_tokens=32) for name in ("alpha-9b", "beta-70b", "gamma-32b")]

print("\ncase 1: split decision (A, A, B)")
judges = [(create_scripted_backend([vote]), cfg) for vote, cfg in zip("AAB", configs)]
verdict = adjudicate(judges, case, DIAL2NOTE_RUBRIC, policy=NO_SLEEP, randomize_order=False)
print(f"  winner {verdict.winner}, unanimous={verdict.unanimous}, votes={[c for _, c in verdict.per_judge]}")

print("\ncase 2: one judge waffles, is re-asked, then abstains")
judges = [
    (create_scripted_backend(["they both look fine to me", "really cannot choose"]), configs[0]),
    (create_scripted_backend(["my pick is B"]), configs[1]),
    (create_scripted_backend(["B"]), configs[2]),
]
verdict2 = adjudicate(judges, case, DIAL2NOTE_RUBRIC, policy=NO_SLEEP, randomize_order=False)
print(f"  winner {verdict2.winner}, votes={[c for _, c in verdict2.per_judge]}")

print("\ncase 3: seeded candidate-order swapping does not move a content-based verdict")
from synthpipe.gateway import CallableBackend


def prefers_structure(config, msgs):
    body = msgs[1].content
    return "A" if body.index("tightly structured") < body.index("rambling") else "B"


for seed in (1, 2, 3):
    judges = [(CallableBackend(prefers_structure), cfg) for cfg in configs]
    v = adjudicate(judges, case, DIAL2NOTE_RUBRIC, policy=NO_SLEEP,
                   randomize_order=True, rng=random.Random(seed))
    print(f"  seed {seed}: winner {v.winner}")

print("\npreference rate over a batch of 40 verdicts (24 wins for A):")
batch = [verdict] * 24 + [
    adjudicate([(create_scripted_backend(["B"]), cfg) for cfg in configs],
               case, DIAL2NOTE_RUBRIC, policy=NO_SLEEP, randomize_order=False)
] * 16
print(f"  preference rate for A: {preference_rate(batch, 'A'):.1f}%")
print(f"  preference rate for B: {preference_rate(batch, 'B'):.1f}%")
