"""From a raw claims-frequency table to a generation plan.

Builds a small synthetic claims table, shows how skewed the code-frequency
distribution is, and derives the ordered work plan the generation pipeline
consumes. Run from the repo root:

    python3 demos/01_claims_to_plan.py
"""

import json
import random
import tempfile
from pathlib import Path

from synthpipe import bin_distribution, build_plan, load_claims

rng = random.Random(0)

# A toy catalog with a realistically skewed count distribution: a handful of
# very common conditions, a long tail of rare ones.
rows = ["code,description,count"]
rows.append("I10,ESSENTIAL (PRIMARY) HYPERTENSION,21788529")
rows.append("E119,TYPE 2 DIABETES MELLITUS WITHOUT COMPLICATIONS,9890112")
rows.append("J45,MILD PERSISTENT ASTHMA,1250000")
for i in range(200):
    count = int(10 ** rng.uniform(0, 6))
    rows.append(f"X{i:03d},SYNTHETIC CONDITION {i},{count}")

with tempfile.TemporaryDirectory() as tmp:
    claims_path = Path(tmp) / "claims.csv"
    claims_path.write_text("\n".join(rows) + "\n", encoding="utf-8")

    entries = load_claims(claims_path)
    print(f"loaded {len(entries)} catalog entries\n")

    print("claim-frequency distribution (codes per bin):")
    report = bin_distribution(entries)
    for bin_ in report.bins:
        bar = "#" * min(bin_.code_count, 60)
        print(f"  {bin_.label:>10}  {bin_.code_count:>4}  {bar}")
    print(f"  total: {report.total_codes} codes\n")

    # Cover the 10 most frequent codes with 5 pairs each. Ties at the
    # selection boundary break toward the lexicographically smaller code,
    # so the same table always yields byte-identical plans.
    plan = build_plan(entries, top_k=10, per_code=5)
    print(f"plan: {len(plan.items)} codes x 5 pairs = {plan.total_pairs} pairs")
    for item in plan.items[:5]:
        print(f"  {item.entry.code:<6} {item.entry.claim_count:>12,}  {item.entry.description[:50]}")
    print("  ...")

    print("\nserialized plan (first item):")
    print(json.dumps(plan.to_dict()["items"][0], indent=2))
