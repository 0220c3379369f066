"""Candidate-pair generation.

Two routes feed verification. The shared-token route groups records through an
inverted index of their tokens. The similar-token route finds all token pairs
whose normalized edit distance is within the threshold by indexing each token's
even partition segments and probing with position-restricted substrings of the
other side's tokens, then expands the surviving token pairs through the posting
lists. Together (with no frequency cap) they reach every record pair within the
join threshold.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .errors import DataError, NotPartitionable
from .setdist import LdCache
from .strdist import max_ld_given_nld, normalized_within
from .textnorm import TokenizedString

SHARED_TOKEN = "shared-token"
SIMILAR_TOKEN = "similar-token"

RecordId = Hashable


@dataclass(frozen=True, slots=True)
class CandidatePair:
    """A record pair surviving generation, not yet verified."""

    left_id: RecordId
    right_id: RecordId
    left_len: int
    right_len: int
    source: str


@dataclass(frozen=True, slots=True)
class TokenSpace:
    """Distinct tokens of a corpus mapped to the sorted ids containing them."""

    entries: dict[str, tuple[RecordId, ...]]

    def frequency(self, token: str) -> int:
        return len(self.entries.get(token, ()))


def build_token_space(
    corpus: Sequence[TokenizedString], max_freq: int | float = math.inf
) -> TokenSpace:
    """Invert the corpus, dropping tokens present in more than ``max_freq`` records.

    Capped tokens stay inside the records themselves (verification always sees
    the full multisets); they just stop generating candidates.
    """
    if max_freq < 1:
        raise ValueError("max_freq must be >= 1")
    seen_ids: set[RecordId] = set()
    postings: dict[str, set[RecordId]] = {}
    for rec in corpus:
        if rec.id in seen_ids:
            raise DataError(f"duplicate record id {rec.id!r}")
        seen_ids.add(rec.id)
        for tok in rec.tokens:
            bucket = postings.get(tok)
            if bucket is None:
                postings[tok] = {rec.id}
            else:
                bucket.add(rec.id)
    entries = {
        tok: tuple(sorted(ids))
        for tok, ids in sorted(postings.items())
        if len(ids) <= max_freq
    }
    return TokenSpace(entries)


def shared_token_candidates(
    space_r: TokenSpace,
    space_p: TokenSpace,
    self_join: bool,
    lengths: Mapping[RecordId, int],
) -> Iterator[CandidatePair]:
    """Emit every id pair co-occurring in some token's posting lists.

    Self-joins enumerate each unordered pair once per shared token (duplicates
    across tokens are the dedup stage's job); two-set joins cross the two
    posting lists per token.
    """
    if self_join:
        for postings in space_r.entries.values():
            n = len(postings)
            for i in range(n - 1):
                left = postings[i]
                for j in range(i + 1, n):
                    right = postings[j]
                    yield CandidatePair(left, right, lengths[left], lengths[right], SHARED_TOKEN)
    else:
        for tok, postings_r in space_r.entries.items():
            postings_p = space_p.entries.get(tok)
            if not postings_p:
                continue
            for left in postings_r:
                llen = lengths[left]
                for right in postings_p:
                    yield CandidatePair(left, right, llen, lengths[right], SHARED_TOKEN)


@lru_cache(maxsize=None)
def segment_layout(length: int, u: int) -> tuple[tuple[int, int], ...]:
    """(start, length) of each of the u+1 even segments of a token this long.

    The first ``length mod (u+1)`` segments take the ceiling length, the rest
    the floor, so shortest and longest differ by at most one.
    """
    if u < 0:
        raise ValueError("u must be >= 0")
    parts = u + 1
    if length < parts:
        raise NotPartitionable(f"cannot split length {length} into {parts} non-empty segments")
    base, extra = divmod(length, parts)
    layout = []
    start = 0
    for slot in range(parts):
        seg_len = base + 1 if slot < extra else base
        layout.append((start, seg_len))
        start += seg_len
    return tuple(layout)


def partition_even(token: str, u: int) -> list[str]:
    """Split ``token`` into u+1 contiguous non-empty segments of even length."""
    return [token[start : start + seg_len] for start, seg_len in segment_layout(len(token), u)]


@lru_cache(maxsize=None)
def partner_len_ceiling(x_len: int, threshold: float) -> int:
    """Largest partner length |y| >= |x| allowed by the length-condition.

    ceil((1-T)*|y|) <= |x| holds exactly for |y| <= floor(|x|/(1-T)); exact
    rational arithmetic as everywhere else.
    """
    t = Fraction(threshold)
    if not 0 <= t < 1:
        raise ValueError(f"threshold must be in [0, 1), got {threshold!r}")
    return math.floor(Fraction(x_len) / (1 - t))


class NldIndex:
    """Segment index over one side's tokens for the similar-token search.

    Tokens too short for their own partition count are listed separately per
    length (and still indexed whole) so probes can fall back to direct
    evaluation against them.
    """

    __slots__ = ("threshold", "chunks", "shorts_by_len", "lens_sorted")

    def __init__(self, tokens: Iterable[str], threshold: float):
        self.threshold = threshold
        self.chunks: dict[tuple[str, int, int], list[str]] = {}
        self.shorts_by_len: dict[int, list[str]] = {}
        lens: set[int] = set()
        for tok in tokens:
            length = len(tok)
            lens.add(length)
            u = max_ld_given_nld(length, threshold, True)
            if length >= u + 1:
                for slot, (start, seg_len) in enumerate(segment_layout(length, u)):
                    key = (tok[start : start + seg_len], length, slot)
                    self.chunks.setdefault(key, []).append(tok)
            else:
                self.chunks.setdefault((tok, length, 0), []).append(tok)
                self.shorts_by_len.setdefault(length, []).append(tok)
        self.lens_sorted = sorted(lens)

    def probe(self, x: str, ld_cache: LdCache) -> list[tuple[str, str, int]]:
        """All indexed tokens y with |y| >= |x| and nld(x, y) within threshold."""
        t = self.threshold
        x_len = len(x)
        if x_len == 0:
            return []
        hi = partner_len_ceiling(x_len, t)
        lens = self.lens_sorted
        found: dict[str, int] = {}
        for idx in range(bisect_left(lens, x_len), bisect_right(lens, hi)):
            y_len = lens[idx]
            u = max_ld_given_nld(y_len, t, True)
            if y_len >= u + 1:
                for slot, (start, seg_len) in enumerate(segment_layout(y_len, u)):
                    if seg_len > x_len:
                        continue
                    p_lo = start - u
                    if p_lo < 0:
                        p_lo = 0
                    p_hi = min(x_len - seg_len, start + u)
                    for p in range(p_lo, p_hi + 1):
                        hits = self.chunks.get((x[p : p + seg_len], y_len, slot))
                        if not hits:
                            continue
                        for y in hits:
                            if y not in found:
                                d = ld_cache.bounded(x, y, u)
                                if d is not None and normalized_within(d, x_len + y_len, t):
                                    found[y] = d
            else:
                for y in self.shorts_by_len.get(y_len, ()):
                    if y not in found:
                        d = ld_cache.bounded(x, y, u)
                        if d is not None and normalized_within(d, x_len + y_len, t):
                            found[y] = d
        return [(x, y, d) for y, d in found.items()]


def similar_token_pairs(
    space_r: TokenSpace,
    space_p: TokenSpace,
    threshold: float,
    self_join: bool,
) -> list[tuple[str, str, int]]:
    """Exactly the distinct token pairs across the two spaces within threshold.

    Self-joins run the single |x| <= |y| direction over one space and emit each
    unordered pair once, shorter (then lexicographically smaller) token first;
    two-set joins run both role assignments and emit (r-side, p-side) tuples.
    """
    cache = LdCache()
    pairs: dict[tuple[str, str], int] = {}
    if self_join:
        index = NldIndex(space_r.entries.keys(), threshold)
        for x in space_r.entries:
            for _, y, d in index.probe(x, cache):
                key = (x, y) if (len(x), x) <= (len(y), y) else (y, x)
                pairs[key] = d
    else:
        index_r = NldIndex(space_r.entries.keys(), threshold)
        for x in space_p.entries:
            for _, y, d in index_r.probe(x, cache):
                pairs[(y, x)] = d
        index_p = NldIndex(space_p.entries.keys(), threshold)
        for x in space_r.entries:
            for _, y, d in index_p.probe(x, cache):
                pairs[(x, y)] = d
    return sorted((tr, tp, d) for (tr, tp), d in pairs.items())


def similar_token_candidates(
    pairs: Iterable[tuple[str, str, int]],
    space_r: TokenSpace,
    space_p: TokenSpace,
    self_join: bool,
    lengths: Mapping[RecordId, int],
) -> Iterator[CandidatePair]:
    """Expand verified token pairs through the posting lists into record pairs."""
    if self_join:
        for tok_a, tok_b, _ in pairs:
            postings_a = space_r.entries.get(tok_a)
            postings_b = space_r.entries.get(tok_b)
            if not postings_a or not postings_b:
                continue
            if tok_a == tok_b:
                n = len(postings_a)
                for i in range(n - 1):
                    left = postings_a[i]
                    for j in range(i + 1, n):
                        right = postings_a[j]
                        yield CandidatePair(
                            left, right, lengths[left], lengths[right], SIMILAR_TOKEN
                        )
            else:
                for a in postings_a:
                    for b in postings_b:
                        if a == b:
                            continue
                        left, right = (a, b) if a < b else (b, a)
                        yield CandidatePair(
                            left, right, lengths[left], lengths[right], SIMILAR_TOKEN
                        )
    else:
        for tok_r, tok_p, _ in pairs:
            postings_r = space_r.entries.get(tok_r)
            postings_p = space_p.entries.get(tok_p)
            if not postings_r or not postings_p:
                continue
            for left in postings_r:
                llen = lengths[left]
                for right in postings_p:
                    yield CandidatePair(left, right, llen, lengths[right], SIMILAR_TOKEN)
