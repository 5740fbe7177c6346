"""From-scratch n-gram and alignment text metrics, plus corpus statistics.

All scoring operates on token sequences produced by :func:`tokenize`
(case-folded, punctuation detached). Conventions that the literature leaves
open are pinned here so scores are reproducible:

* BLEU is corpus-level with clipped modified n-gram precision, geometric
  mean over orders 1..max_n and brevity penalty ``exp(1 - r/c)`` when the
  hypothesis corpus is shorter than the reference corpus. Without smoothing
  the score is 0 whenever any order has zero matches.
* ROUGE-L uses the longest common subsequence over whole sequences;
  ROUGE-LSum splits texts on newlines and aggregates per-sentence union-LCS
  matches with hypothesis-side token clipping.
* Where an LCS alignment is ambiguous, the canonical alignment is the one
  whose reference-index set is lexicographically smallest among all
  maximum-length common subsequences.
* METEOR aligns unigrams in two stages (exact, then stem match with the
  Porter stemmer), greedily left to right; there is no synonym stage.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .stemming import stem

TokenSequence = Sequence[str]

_TOKEN_RE = re.compile(r"\w+|[^\w\s]")
_SENTENCE_SPLIT_RE = re.compile(r"[.!?]+")


def tokenize(text: str) -> list[str]:
    """Case-fold and split text into word and punctuation tokens.

    Punctuation characters become their own tokens: ``"Dr. Smith"`` yields
    ``["dr", ".", "smith"]``.
    """
    return _TOKEN_RE.findall(text.casefold())


def count_sentences(text: str) -> int:
    """Number of non-blank segments delimited by terminal punctuation."""
    return sum(1 for seg in _SENTENCE_SPLIT_RE.split(text) if seg.strip())


class PRF(NamedTuple):
    precision: float
    recall: float
    f1: float


_ZERO_PRF = PRF(0.0, 0.0, 0.0)


def _prf(matches: float, hyp_total: int, ref_total: int) -> PRF:
    if hyp_total == 0 or ref_total == 0:
        return _ZERO_PRF
    p = matches / hyp_total
    r = matches / ref_total
    f1 = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return PRF(p, r, f1)


def _ngram_counts(tokens: TokenSequence, n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(
    hypotheses: Sequence[TokenSequence],
    references: Sequence[TokenSequence],
    max_n: int = 4,
    smooth: bool = False,
) -> float:
    """Corpus-level BLEU over paired hypothesis/reference token sequences.

    ``smooth=True`` applies add-one smoothing to every order's precision;
    by default any zero precision sends the whole score to 0.
    """
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypothesis/reference counts differ: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise ValueError("bleu is undefined on an empty corpus")
    if max_n < 1:
        raise ValueError(f"max_n must be >= 1, got {max_n}")

    clipped = [0] * max_n
    totals = [0] * max_n
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_len += len(hyp)
        ref_len += len(ref)
        for n in range(1, max_n + 1):
            hyp_counts = _ngram_counts(hyp, n)
            if not hyp_counts:
                continue
            ref_counts = _ngram_counts(ref, n)
            totals[n - 1] += sum(hyp_counts.values())
            clipped[n - 1] += sum(
                min(count, ref_counts[gram]) for gram, count in hyp_counts.items()
            )

    if hyp_len == 0:
        return 0.0

    log_sum = 0.0
    for n in range(max_n):
        if smooth:
            p = (clipped[n] + 1) / (totals[n] + 1)
        elif totals[n] == 0 or clipped[n] == 0:
            return 0.0
        else:
            p = clipped[n] / totals[n]
        log_sum += math.log(p)

    brevity = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return brevity * math.exp(log_sum / max_n)


def rouge_n(hyp: TokenSequence, ref: TokenSequence, n: int) -> PRF:
    """N-gram multiset overlap between one hypothesis and one reference."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    hyp_counts = _ngram_counts(hyp, n)
    ref_counts = _ngram_counts(ref, n)
    matches = sum(min(count, ref_counts[gram]) for gram, count in hyp_counts.items())
    return _prf(matches, sum(hyp_counts.values()), sum(ref_counts.values()))


def lcs_length(a: TokenSequence, b: TokenSequence) -> int:
    """Length of the longest common subsequence of two token sequences."""
    if not a or not b:
        return 0
    prev = [0] * (len(b) + 1)
    for i in range(len(a) - 1, -1, -1):
        row = [0] * (len(b) + 1)
        for j in range(len(b) - 1, -1, -1):
            if a[i] == b[j]:
                row[j] = prev[j + 1] + 1
            else:
                row[j] = max(prev[j], row[j + 1])
        prev = row
    return prev[0]


def lcs_match_positions(ref: TokenSequence, hyp: TokenSequence) -> tuple[int, ...]:
    """Reference-side indices of the canonical maximum common subsequence.

    Among all maximum-length common subsequences, the canonical one is the
    one whose reference-index tuple is lexicographically smallest (ties on
    the hypothesis side broken toward the smallest index as well).
    """
    n, m = len(ref), len(hyp)
    if n == 0 or m == 0:
        return ()
    # suffix table: length of LCS of ref[i:], hyp[j:]
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(m - 1, -1, -1):
            if ref[i] == hyp[j]:
                table[i][j] = table[i + 1][j + 1] + 1
            else:
                table[i][j] = max(table[i + 1][j], table[i][j + 1])

    positions: list[int] = []
    i = j = 0
    while i < n and j < m and table[i][j] > 0:
        # take ref[i] iff some optimal alignment from (i, j) uses it; pair it
        # with the earliest hypothesis index that preserves optimality
        match_j = -1
        for jj in range(j, m):
            if hyp[jj] == ref[i] and 1 + table[i + 1][jj + 1] == table[i][j]:
                match_j = jj
                break
        if match_j >= 0:
            positions.append(i)
            i += 1
            j = match_j + 1
        else:
            i += 1
    return tuple(positions)


def rouge_l(hyp, ref, summary_level: bool = False) -> PRF:
    """LCS-based overlap; summary level aggregates per-sentence union LCS.

    With ``summary_level=False`` both arguments are token sequences. With
    ``summary_level=True`` each argument may be raw text (split into
    sentences on newlines and tokenized), a list of pre-tokenized sentences,
    or a single token sequence treated as one sentence.
    """
    if not summary_level:
        length = lcs_length(hyp, ref)
        return _prf(length, len(hyp), len(ref))

    hyp_sents = _as_sentences(hyp)
    ref_sents = _as_sentences(ref)
    hyp_total = sum(len(s) for s in hyp_sents)
    ref_total = sum(len(s) for s in ref_sents)
    if hyp_total == 0 or ref_total == 0:
        return _ZERO_PRF

    # Each hypothesis token may be credited at most as often as it occurs.
    budget = Counter(token for sent in hyp_sents for token in sent)
    hits = 0
    for ref_sent in ref_sents:
        matched: set[int] = set()
        for hyp_sent in hyp_sents:
            matched.update(lcs_match_positions(ref_sent, hyp_sent))
        for idx in sorted(matched):
            token = ref_sent[idx]
            if budget[token] > 0:
                budget[token] -= 1
                hits += 1
    return _prf(hits, hyp_total, ref_total)


def _as_sentences(value) -> list[list[str]]:
    if isinstance(value, str):
        sents = [tokenize(line) for line in value.splitlines()]
        return [s for s in sents if s]
    value = list(value)
    if not value:
        return []
    if isinstance(value[0], str):
        return [list(value)]
    return [list(sent) for sent in value]


def meteor(hyp: TokenSequence, ref: TokenSequence) -> float:
    """Unigram-alignment score with a fragmentation penalty.

    Alignment runs in two stages (exact token match, then Porter-stem
    match), each greedy left to right over the hypothesis with the earliest
    free reference token taken. ``F_mean = 10PR / (R + 9P)`` is discounted
    by ``0.5 * (chunks / matches)^3``.
    """
    pairs = _align_unigrams(hyp, ref)
    matches = len(pairs)
    if matches == 0:
        return 0.0
    precision = matches / len(hyp)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    chunks = _count_chunks(pairs)
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1 - penalty)


def _align_unigrams(hyp: TokenSequence, ref: TokenSequence) -> list[tuple[int, int]]:
    ref_free = [True] * len(ref)
    hyp_match: list[int | None] = [None] * len(hyp)

    def run_stage(hyp_keys: Sequence[str], ref_keys: Sequence[str]) -> None:
        for i, key in enumerate(hyp_keys):
            if hyp_match[i] is not None:
                continue
            for j, ref_key in enumerate(ref_keys):
                if ref_free[j] and ref_key == key:
                    ref_free[j] = False
                    hyp_match[i] = j
                    break

    run_stage(hyp, ref)
    run_stage([stem(t) for t in hyp], [stem(t) for t in ref])
    return sorted((i, j) for i, j in enumerate(hyp_match) if j is not None)


def _count_chunks(pairs: Sequence[tuple[int, int]]) -> int:
    chunks = 0
    prev = None
    for i, j in pairs:
        if prev is None or i != prev[0] + 1 or j != prev[1] + 1:
            chunks += 1
        prev = (i, j)
    return chunks


@dataclass(frozen=True)
class MetricReport:
    bleu: float
    rouge1: PRF
    rouge2: PRF
    rougeL: PRF
    rougeLsum: PRF
    meteor: float

    def to_dict(self) -> dict:
        def triple(v: PRF) -> dict:
            return {"precision": v.precision, "recall": v.recall, "f1": v.f1}

        return {
            "bleu": self.bleu,
            "rouge1": triple(self.rouge1),
            "rouge2": triple(self.rouge2),
            "rougeL": triple(self.rougeL),
            "rougeLsum": triple(self.rougeLsum),
            "meteor": self.meteor,
        }


def score_pair(hyp_text: str, ref_text: str) -> MetricReport:
    """All metrics for a single hypothesis/reference text pair."""
    hyp = tokenize(hyp_text)
    ref = tokenize(ref_text)
    return MetricReport(
        bleu=bleu([hyp], [ref]),
        rouge1=rouge_n(hyp, ref, 1),
        rouge2=rouge_n(hyp, ref, 2),
        rougeL=rouge_l(hyp, ref),
        rougeLsum=rouge_l(hyp_text, ref_text, summary_level=True),
        meteor=meteor(hyp, ref),
    )


def score_corpus(hyp_texts: Sequence[str], ref_texts: Sequence[str]) -> MetricReport:
    """Corpus-level BLEU plus per-pair means of the other metrics."""
    if len(hyp_texts) != len(ref_texts):
        raise ValueError("hypothesis/reference counts differ")
    if not hyp_texts:
        raise ValueError("metric report is undefined on an empty corpus")
    reports = [score_pair(h, r) for h, r in zip(hyp_texts, ref_texts)]
    corpus_bleu = bleu([tokenize(h) for h in hyp_texts], [tokenize(r) for r in ref_texts])

    def mean_prf(values: list[PRF]) -> PRF:
        k = len(values)
        return PRF(
            sum(v.precision for v in values) / k,
            sum(v.recall for v in values) / k,
            sum(v.f1 for v in values) / k,
        )

    return MetricReport(
        bleu=corpus_bleu,
        rouge1=mean_prf([r.rouge1 for r in reports]),
        rouge2=mean_prf([r.rouge2 for r in reports]),
        rougeL=mean_prf([r.rougeL for r in reports]),
        rougeLsum=mean_prf([r.rougeLsum for r in reports]),
        meteor=sum(r.meteor for r in reports) / len(reports),
    )


@dataclass(frozen=True)
class CorpusStats:
    """Size and average-length statistics for a dialogue-note corpus."""

    pair_count: int
    unique_code_count: int
    dialogue_avg_tokens: float
    dialogue_avg_sentences: float
    note_avg_tokens: float
    note_avg_sentences: float

    def to_dict(self) -> dict:
        return {
            "pair_count": self.pair_count,
            "unique_code_count": self.unique_code_count,
            "dialogue_avg_tokens": self.dialogue_avg_tokens,
            "dialogue_avg_sentences": self.dialogue_avg_sentences,
            "note_avg_tokens": self.note_avg_tokens,
            "note_avg_sentences": self.note_avg_sentences,
        }


def _turn_text(turn) -> str:
    if isinstance(turn, dict):
        return turn["text"]
    if isinstance(turn, (tuple, list)):
        return turn[1]
    return turn.text


def corpus_stats(pairs: Iterable) -> CorpusStats:
    """Averages over dialogue-note pairs; speaker labels are not counted.

    Each pair must expose ``icd_code``, ``note_text`` and ``dialogue``
    (an iterable of turns carrying utterance text).
    """
    pair_count = 0
    codes: set[str] = set()
    dialogue_tokens = dialogue_sentences = 0
    note_tokens = note_sentences = 0
    for pair in pairs:
        pair_count += 1
        codes.add(pair.icd_code)
        note_tokens += len(tokenize(pair.note_text))
        note_sentences += count_sentences(pair.note_text)
        for turn in pair.dialogue:
            text = _turn_text(turn)
            dialogue_tokens += len(tokenize(text))
            dialogue_sentences += count_sentences(text)
    if pair_count == 0:
        raise ValueError("corpus statistics are undefined on an empty corpus")
    return CorpusStats(
        pair_count=pair_count,
        unique_code_count=len(codes),
        dialogue_avg_tokens=dialogue_tokens / pair_count,
        dialogue_avg_sentences=dialogue_sentences / pair_count,
        note_avg_tokens=note_tokens / pair_count,
        note_avg_sentences=note_sentences / pair_count,
    )
