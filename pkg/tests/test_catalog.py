import json
import random

import pytest
from hypothesis import given, strategies as st

from synthpipe.catalog import (
    BIN_EDGES,
    DistributionReport,
    IcdEntry,
    bin_distribution,
    build_plan,
    load_claims,
)
from synthpipe.errors import ClaimsParseError, ValidationError


def write_claims(tmp_path, rows, header="code,description,count"):
    path = tmp_path / "claims.csv"
    path.write_text(header + "\n" + "\n".join(rows) + ("\n" if rows else ""), encoding="utf-8")
    return path


class TestLoadClaims:
    def test_two_top_codes(self, tmp_path):
        path = write_claims(
            tmp_path,
            [
                "I10,ESSENTIAL (PRIMARY) HYPERTENSION,21788529",
                "Z0000,ENCOUNTER FOR GENERAL ADULT MEDICAL EXAMINATION WITHOUT ABNORMAL FINDINGS,19497471",
            ],
        )
        entries = load_claims(path)
        assert len(entries) == 2
        assert entries[0] == IcdEntry("I10", "ESSENTIAL (PRIMARY) HYPERTENSION", 21788529)
        assert entries[1].claim_count == 19497471

    def test_header_only_gives_empty_list(self, tmp_path):
        assert load_claims(write_claims(tmp_path, [])) == []

    def test_negative_count_rejected(self, tmp_path):
        path = write_claims(tmp_path, ["I10,hypertension,-5"])
        with pytest.raises(ValidationError, match="negative"):
            load_claims(path)

    def test_malformed_row_names_line_number(self, tmp_path):
        path = write_claims(tmp_path, ["I10,hypertension,100", "J45,asthma"])
        with pytest.raises(ClaimsParseError, match="line 3"):
            load_claims(path)

    def test_non_integer_count_names_line_number(self, tmp_path):
        path = write_claims(tmp_path, ["I10,hypertension,lots"])
        with pytest.raises(ClaimsParseError, match="line 2"):
            load_claims(path)

    def test_duplicate_code_rejected(self, tmp_path):
        path = write_claims(tmp_path, ["I10,hypertension,100", "I10,hypertension again,90"])
        with pytest.raises(ValidationError, match="duplicate code"):
            load_claims(path)

    def test_bad_header_rejected(self, tmp_path):
        path = write_claims(tmp_path, ["I10,x,1"], header="icd,name,n")
        with pytest.raises(ClaimsParseError, match="header"):
            load_claims(path)

    def test_quoted_description_with_comma(self, tmp_path):
        path = write_claims(tmp_path, ['E119,"TYPE 2 DIABETES, NO COMPLICATIONS",5'])
        entries = load_claims(path)
        assert entries[0].description == "TYPE 2 DIABETES, NO COMPLICATIONS"


class TestBinDistribution:
    def test_empty_input(self):
        report = bin_distribution([])
        assert report.total_codes == 0
        assert all(b.code_count == 0 for b in report.bins)

    def test_threshold_arithmetic(self):
        entries = [
            IcdEntry("A", "low", 5),
            IcdEntry("B", "mid", 5_000),
            IcdEntry("C", "high", 20_000_000),
        ]
        report = bin_distribution(entries)
        by_label = {b.label: b.code_count for b in report.bins}
        assert by_label["Below 1k"] == 1
        assert by_label["1k - 10k"] == 1
        assert by_label["Above 10M"] == 1
        assert report.total_codes == 3

    def test_boundaries_are_lower_inclusive(self):
        report = bin_distribution([IcdEntry("A", "x", 1_000), IcdEntry("B", "y", 999)])
        by_label = {b.label: b.code_count for b in report.bins}
        assert by_label["1k - 10k"] == 1
        assert by_label["Below 1k"] == 1

    def test_bins_ordered_most_frequent_first(self):
        labels = [b.label for b in bin_distribution([]).bins]
        assert labels == [
            "Above 10M", "1M - 10M", "100k - 1M", "10k - 100k", "1k - 10k", "Below 1k",
        ]

    def test_random_catalogs_partition(self):
        rng = random.Random(7)
        for _ in range(50):
            entries = [
                IcdEntry(f"C{i}", "x", rng.randrange(0, 50_000_000))
                for i in range(rng.randrange(0, 200))
            ]
            report = bin_distribution(entries)
            assert sum(b.code_count for b in report.bins) == len(entries)
            assert report.total_codes == len(entries)

    @given(st.lists(st.integers(min_value=0, max_value=10**9), max_size=60))
    def test_each_count_falls_in_exactly_one_bin(self, counts):
        for count in counts:
            hits = sum(
                1
                for _, lower, upper in BIN_EDGES
                if count >= lower and (upper is None or count < upper)
            )
            assert hits == 1

    def test_serializes_with_stable_field_names(self):
        payload = bin_distribution([IcdEntry("A", "x", 10)]).to_dict()
        assert set(payload) == {"bins", "total_codes"}
        assert set(payload["bins"][0]) == {"label", "lower", "upper", "code_count"}


def make_catalog(n, seed=0):
    rng = random.Random(seed)
    return [IcdEntry(f"C{i:05d}", f"condition {i}", rng.randrange(0, 30_000_000)) for i in range(n)]


class TestBuildPlan:
    def test_full_scale_plan_totals(self):
        entries = make_catalog(2500)
        plan = build_plan(entries, top_k=2000, per_code=5)
        assert len(plan.items) == 2000
        assert plan.total_pairs == 10_000

    def test_top_k_zero(self):
        plan = build_plan(make_catalog(5), top_k=0, per_code=5)
        assert plan.items == ()
        assert plan.total_pairs == 0

    def test_per_code_below_one_rejected(self):
        with pytest.raises(ValidationError):
            build_plan(make_catalog(3), top_k=2, per_code=0)

    def test_negative_top_k_rejected(self):
        with pytest.raises(ValidationError):
            build_plan(make_catalog(3), top_k=-1, per_code=1)

    def test_tie_at_boundary_prefers_smaller_code(self):
        entries = [
            IcdEntry("B99", "tied", 100),
            IcdEntry("A01", "tied", 100),
            IcdEntry("Z00", "big", 500),
        ]
        plan = build_plan(entries, top_k=2, per_code=1)
        assert [item.entry.code for item in plan.items] == ["Z00", "A01"]

    def test_plan_bytes_are_deterministic(self):
        entries = make_catalog(300, seed=3)
        shuffled = list(entries)
        random.Random(9).shuffle(shuffled)
        first = build_plan(entries, top_k=100, per_code=5).to_json()
        second = build_plan(shuffled, top_k=100, per_code=5).to_json()
        assert first == second

    def test_plan_is_prefix_of_sorted_catalog(self):
        entries = make_catalog(200, seed=5)
        ranked = sorted(entries, key=lambda e: (-e.claim_count, e.code))
        plan = build_plan(entries, top_k=50, per_code=2)
        assert [item.entry for item in plan.items] == ranked[:50]

    def test_plan_round_trips_through_json(self, tmp_path):
        plan = build_plan(make_catalog(20), top_k=10, per_code=3)
        path = tmp_path / "plan.json"
        path.write_text(plan.to_json(), encoding="utf-8")
        from synthpipe.catalog import GenerationPlan

        loaded = GenerationPlan.from_json_file(path)
        assert loaded.total_pairs == plan.total_pairs
        assert [i.entry.code for i in loaded.items] == [i.entry.code for i in plan.items]


class TestEntryInvariants:
    def test_empty_code_rejected(self):
        with pytest.raises(ValidationError):
            IcdEntry("", "x", 1)

    def test_negative_count_rejected(self):
        with pytest.raises(ValidationError):
            IcdEntry("A", "x", -1)
