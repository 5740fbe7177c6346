"""Brute-force reference implementations used only to check the metrics.

Everything here favors exhaustive enumeration and naive loops over the
dynamic programming / counting tricks the library uses, so agreement is
meaningful. Intended for short sequences (<= 8 tokens).
"""

from __future__ import annotations

import math
from itertools import combinations


def ngram_list(tokens, n):
    grams = []
    for i in range(len(tokens) - n + 1):
        grams.append(tuple(tokens[i : i + n]))
    return grams


def clipped_matches(hyp, ref, n):
    """Greedy one-to-one n-gram pairing (equivalent to multiset min)."""
    hyp_grams = ngram_list(hyp, n)
    ref_grams = ngram_list(ref, n)
    used = [False] * len(ref_grams)
    matches = 0
    for gram in hyp_grams:
        for j, ref_gram in enumerate(ref_grams):
            if not used[j] and ref_gram == gram:
                used[j] = True
                matches += 1
                break
    return matches, len(hyp_grams), len(ref_grams)


def oracle_bleu(hypotheses, references, max_n=4):
    hyp_len = sum(len(h) for h in hypotheses)
    ref_len = sum(len(r) for r in references)
    if hyp_len == 0:
        return 0.0
    product = 1.0
    for n in range(1, max_n + 1):
        matched = 0
        total = 0
        for hyp, ref in zip(hypotheses, references):
            m, t, _ = clipped_matches(hyp, ref, n)
            matched += m
            total += t
        if total == 0 or matched == 0:
            return 0.0
        product *= matched / total
    brevity = 1.0 if hyp_len >= ref_len else math.exp(1 - ref_len / hyp_len)
    return brevity * product ** (1 / max_n)


def oracle_rouge_n(hyp, ref, n):
    matches, hyp_total, ref_total = clipped_matches(hyp, ref, n)
    if hyp_total == 0 or ref_total == 0:
        return (0.0, 0.0, 0.0)
    p = matches / hyp_total
    r = matches / ref_total
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


def is_subsequence(candidate, sequence):
    pos = 0
    for token in candidate:
        while pos < len(sequence) and sequence[pos] != token:
            pos += 1
        if pos == len(sequence):
            return False
        pos += 1
    return True


def oracle_lcs_length(a, b):
    """Longest common subsequence by exhaustive subset enumeration."""
    for length in range(min(len(a), len(b)), 0, -1):
        for indices in combinations(range(len(a)), length):
            if is_subsequence([a[i] for i in indices], b):
                return length
    return 0


def oracle_lcs_positions(ref, hyp):
    """Canonical max-length common subsequence: lexicographically smallest
    reference-index tuple, found by exhaustive enumeration."""
    for length in range(min(len(ref), len(hyp)), 0, -1):
        for indices in combinations(range(len(ref)), length):
            if is_subsequence([ref[i] for i in indices], hyp):
                return indices
    return ()


def oracle_rouge_l(hyp, ref):
    lcs = oracle_lcs_length(hyp, ref)
    if not hyp or not ref:
        return (0.0, 0.0, 0.0)
    p = lcs / len(hyp)
    r = lcs / len(ref)
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


def oracle_rouge_lsum(hyp_sentences, ref_sentences):
    hyp_total = sum(len(s) for s in hyp_sentences)
    ref_total = sum(len(s) for s in ref_sentences)
    if hyp_total == 0 or ref_total == 0:
        return (0.0, 0.0, 0.0)
    budget: dict[str, int] = {}
    for sentence in hyp_sentences:
        for token in sentence:
            budget[token] = budget.get(token, 0) + 1
    hits = 0
    for ref_sentence in ref_sentences:
        union: set[int] = set()
        for hyp_sentence in hyp_sentences:
            union.update(oracle_lcs_positions(ref_sentence, hyp_sentence))
        for index in sorted(union):
            token = ref_sentence[index]
            if budget.get(token, 0) > 0:
                budget[token] -= 1
                hits += 1
    p = hits / hyp_total
    r = hits / ref_total
    f1 = 2 * p * r / (p + r) if p + r else 0.0
    return (p, r, f1)


def oracle_meteor(hyp, ref, stem_fn):
    """Greedy two-stage alignment rebuilt with index pools, then the formula."""
    pairs = []
    taken = set()
    matched_hyp = set()
    for keyer in (lambda t: t, stem_fn):
        pool: dict[str, list[int]] = {}
        for j, token in enumerate(ref):
            if j not in taken:
                pool.setdefault(keyer(token), []).append(j)
        for i, token in enumerate(hyp):
            if i in matched_hyp:
                continue
            key = keyer(token)
            slots = pool.get(key)
            while slots and slots[0] in taken:
                slots.pop(0)
            if slots:
                j = slots.pop(0)
                taken.add(j)
                matched_hyp.add(i)
                pairs.append((i, j))
    pairs.sort()
    matches = len(pairs)
    if matches == 0:
        return 0.0
    precision = matches / len(hyp)
    recall = matches / len(ref)
    f_mean = 10 * precision * recall / (recall + 9 * precision)
    chunks = 0
    previous = None
    for pair in pairs:
        if previous is None or pair != (previous[0] + 1, previous[1] + 1):
            chunks += 1
        previous = pair
    penalty = 0.5 * (chunks / matches) ** 3
    return f_mean * (1 - penalty)
