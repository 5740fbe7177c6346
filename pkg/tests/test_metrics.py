import math
import random
from types import SimpleNamespace

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from synthpipe.metrics import (
    MetricReport,
    bleu,
    corpus_stats,
    count_sentences,
    lcs_length,
    meteor,
    rouge_l,
    rouge_n,
    score_corpus,
    score_pair,
    tokenize,
)
from synthpipe.stemming import stem

T = tokenize


class TestTokenize:
    def test_punctuation_detached(self):
        assert T("The cat sat.") == ["the", "cat", "sat", "."]

    def test_empty(self):
        assert T("") == []

    def test_abbreviation(self):
        assert T("Dr. Smith") == ["dr", ".", "smith"]

    def test_hyphen_and_numbers(self):
        assert T("follow-up in 2 weeks") == ["follow", "-", "up", "in", "2", "weeks"]


class TestSentences:
    def test_two_sentences(self):
        assert count_sentences("A. B.") == 2

    def test_unterminated_tail_counts(self):
        assert count_sentences("Hello there") == 1

    def test_exclamations_and_questions(self):
        assert count_sentences("Really?! Yes. Hmm") == 3


class TestBleu:
    def test_identity_is_one(self):
        seq = T("the quick brown fox jumps over the lazy dog")
        assert bleu([seq], [seq]) == pytest.approx(1.0)

    def test_clipped_precision_case(self):
        # p1 = 2/4, p2 = 1/3, no length penalty: sqrt(1/6)
        score = bleu([T("the cat the cat")], [T("the cat sat")], max_n=2)
        assert score == pytest.approx(math.sqrt(1 / 6), abs=1e-12)
        assert score == pytest.approx(0.4082, abs=5e-5)

    def test_brevity_penalty_case(self):
        # perfect precisions, hypothesis of 2 vs reference of 4 tokens: e^-1
        score = bleu([T("the cat")], [T("the cat sat on")], max_n=2)
        assert score == pytest.approx(math.exp(-1), abs=1e-12)
        assert score == pytest.approx(0.3679, abs=5e-5)

    def test_zero_when_an_order_has_no_match(self):
        assert bleu([T("a b c d")], [T("x y z w")]) == 0.0

    def test_empty_corpus_is_an_error(self):
        with pytest.raises(ValueError):
            bleu([], [])

    def test_length_mismatch_is_an_error(self):
        with pytest.raises(ValueError):
            bleu([T("a")], [])

    def test_permutation_invariance(self):
        hyps = [T("the cat sat"), T("a dog barked loudly"), T("rain fell all day")]
        refs = [T("the cat sat down"), T("the dog barked"), T("rain fell today")]
        base = bleu(hyps, refs)
        order = [2, 0, 1]
        assert bleu([hyps[i] for i in order], [refs[i] for i in order]) == pytest.approx(
            base, abs=1e-15
        )

    def test_smoothing_keeps_score_positive(self):
        assert bleu([T("a b")], [T("a c")], smooth=True) > 0.0


class TestRougeN:
    def test_identity(self):
        seq = T("the cat sat")
        assert rouge_n(seq, seq, 1) == (1.0, 1.0, 1.0)

    def test_hand_counted_unigrams(self):
        p, r, f1 = rouge_n(T("the cat"), T("the cat sat"), 1)
        assert (p, r) == (1.0, 2 / 3)
        assert f1 == pytest.approx(0.8)

    def test_disjoint_vocabulary(self):
        assert rouge_n(T("a b"), T("c d"), 1) == (0.0, 0.0, 0.0)

    def test_role_swap_duality(self):
        hyp, ref = T("a b a c"), T("a c c d b")
        for n in (1, 2):
            assert rouge_n(hyp, ref, n).precision == rouge_n(ref, hyp, n).recall

    def test_n_too_large_gives_zero(self):
        assert rouge_n(T("a"), T("a"), 3) == (0.0, 0.0, 0.0)


class TestRougeL:
    def test_identity(self):
        seq = T("the cat sat")
        assert rouge_l(seq, seq) == (1.0, 1.0, 1.0)

    def test_transposition(self):
        p, r, f1 = rouge_l(T("the cat sat"), T("the sat cat"))
        assert p == pytest.approx(2 / 3)
        assert r == pytest.approx(2 / 3)
        assert f1 == pytest.approx(2 / 3)

    def test_lsum_beats_plain_l_on_reordered_sentences(self):
        hyp_text = "c d\na b"
        ref_text = "a b\nc d"
        plain = rouge_l(T(hyp_text.replace("\n", " ")), T(ref_text.replace("\n", " ")))
        summary = rouge_l(hyp_text, ref_text, summary_level=True)
        assert summary.f1 == pytest.approx(1.0)
        assert plain.f1 == pytest.approx(0.5)
        assert summary.f1 > plain.f1

    def test_lsum_accepts_pretokenized_sentences(self):
        result = rouge_l([["a", "b"], ["c"]], [["a", "b"], ["c"]], summary_level=True)
        assert result == (1.0, 1.0, 1.0)


class TestMeteor:
    def test_identity_formula(self):
        seq = T("the cat sat")
        expected = 1 - 0.5 * (1 / 3) ** 3
        assert meteor(seq, seq) == pytest.approx(expected, abs=1e-12)
        assert meteor(seq, seq) == pytest.approx(0.9815, abs=5e-5)

    def test_no_overlap_is_zero(self):
        assert meteor(T("a b"), T("c d")) == 0.0

    def test_stem_stage_matches_inflection(self):
        # "cats" and "cat" differ exactly, match at the stem stage
        assert stem("cats") == stem("cat") == "cat"
        assert meteor(["cats"], ["cat"]) == pytest.approx(0.5)

    def test_fragmentation_lowers_score(self):
        contiguous = meteor(T("a b c d"), T("a b c d x"))
        fragmented = meteor(T("a b c d"), T("a x b x c x d"))
        assert fragmented < contiguous


def random_sequences(rng, alphabet=("a", "b", "c", "d"), max_len=8):
    length = rng.randrange(1, max_len + 1)
    return [rng.choice(alphabet) for _ in range(length)]


class TestOracleAgreement:
    def test_bleu_matches_oracle(self):
        rng = random.Random(11)
        for _ in range(150):
            hyps = [random_sequences(rng) for _ in range(rng.randrange(1, 4))]
            refs = [random_sequences(rng) for _ in hyps]
            max_n = rng.randrange(1, 5)
            assert bleu(hyps, refs, max_n=max_n) == pytest.approx(
                oracles.oracle_bleu(hyps, refs, max_n=max_n), abs=1e-9
            )

    def test_rouge_n_matches_oracle(self):
        rng = random.Random(13)
        for _ in range(150):
            hyp, ref = random_sequences(rng), random_sequences(rng)
            n = rng.randrange(1, 4)
            assert rouge_n(hyp, ref, n) == pytest.approx(
                oracles.oracle_rouge_n(hyp, ref, n), abs=1e-9
            )

    def test_rouge_l_matches_oracle(self):
        rng = random.Random(17)
        for _ in range(150):
            hyp, ref = random_sequences(rng), random_sequences(rng)
            assert lcs_length(hyp, ref) == oracles.oracle_lcs_length(hyp, ref)
            assert rouge_l(hyp, ref) == pytest.approx(
                oracles.oracle_rouge_l(hyp, ref), abs=1e-9
            )

    def test_rouge_lsum_matches_oracle(self):
        rng = random.Random(19)
        for _ in range(100):
            hyp_sents = [random_sequences(rng, max_len=6) for _ in range(rng.randrange(1, 4))]
            ref_sents = [random_sequences(rng, max_len=6) for _ in range(rng.randrange(1, 4))]
            assert rouge_l(hyp_sents, ref_sents, summary_level=True) == pytest.approx(
                oracles.oracle_rouge_lsum(hyp_sents, ref_sents), abs=1e-9
            )

    def test_meteor_matches_oracle(self):
        rng = random.Random(23)
        words = ("cat", "cats", "run", "running", "dog", "the")
        for _ in range(150):
            hyp = random_sequences(rng, alphabet=words)
            ref = random_sequences(rng, alphabet=words)
            assert meteor(hyp, ref) == pytest.approx(
                oracles.oracle_meteor(hyp, ref, stem), abs=1e-9
            )


@settings(max_examples=60, deadline=None)
@given(
    st.lists(st.sampled_from("abcd"), min_size=1, max_size=8),
    st.lists(st.sampled_from("abcd"), min_size=1, max_size=8),
)
def test_all_metrics_stay_in_unit_interval(hyp, ref):
    values = [bleu([hyp], [ref]), meteor(hyp, ref)]
    for n in (1, 2):
        values.extend(rouge_n(hyp, ref, n))
    values.extend(rouge_l(hyp, ref))
    values.extend(rouge_l([hyp], [ref], summary_level=True))
    assert all(0.0 <= v <= 1.0 for v in values)


def make_pair(code, note_text, turns):
    return SimpleNamespace(
        icd_code=code,
        note_text=note_text,
        dialogue=[SimpleNamespace(speaker=s, text=t) for s, t in turns],
    )


class TestCorpusStats:
    def test_sentence_rule(self):
        stats = corpus_stats([make_pair("I10", "A. B.", [("doctor", "Hi.")])])
        assert stats.note_avg_sentences == 2

    def test_speaker_labels_not_counted(self):
        pair = make_pair("I10", "Note.", [("doctor", "one two three"), ("patient", "four")])
        stats = corpus_stats([pair])
        assert stats.dialogue_avg_tokens == 4

    def test_duplicate_codes_collapse(self):
        pairs = [
            make_pair("I10", "A.", [("doctor", "Hi.")]),
            make_pair("I10", "B.", [("patient", "Yo.")]),
        ]
        stats = corpus_stats(pairs)
        assert stats.pair_count == 2
        assert stats.unique_code_count == 1

    def test_empty_corpus_is_an_error(self):
        with pytest.raises(ValueError):
            corpus_stats([])

    def test_dict_turns_accepted(self):
        pair = SimpleNamespace(
            icd_code="J45",
            note_text="Hello there.",
            dialogue=[{"speaker": "doctor", "text": "Hi."}],
        )
        assert corpus_stats([pair]).dialogue_avg_tokens == 2


class TestReports:
    def test_score_pair_identity(self):
        text = "the cat sat on the mat.\nthe dog slept."
        report = score_pair(text, text)
        assert report.bleu == pytest.approx(1.0)
        assert report.rouge1.f1 == pytest.approx(1.0)
        assert report.rougeLsum.f1 == pytest.approx(1.0)

    def test_score_corpus_means(self):
        reports = score_corpus(["a b c", "x y"], ["a b c", "x q"])
        assert isinstance(reports, MetricReport)
        assert 0.0 <= reports.rouge1.f1 <= 1.0

    def test_report_dict_field_names(self):
        payload = score_pair("a b", "a b").to_dict()
        assert set(payload) == {"bleu", "rouge1", "rouge2", "rougeL", "rougeLsum", "meteor"}
        assert set(payload["rouge1"]) == {"precision", "recall", "f1"}
