"""Join orchestration: generate, dedup, filter, verify.

Every stage has map/group/reduce semantics over in-memory partitions and is
deterministic: output depends only on the corpora and the configuration, never
on the worker count or input record order. Heavy stages (similar-token probing
and verification) fan out over a fork-based process pool; everything else runs
serially at C-dict speed.

Record ids are interned to dense integers in sorted-id order; candidate pairs
travel as single packed integers (left in the high 32 bits) to keep the
multi-million-pair streams compact.
"""

from __future__ import annotations

import math
import multiprocessing
import threading
import time
from dataclasses import dataclass, field
from itertools import chain
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping, Sequence

import numpy as np

from . import candidates as cand
from .candidates import CandidatePair, NldIndex, TokenSpace
from .errors import ConfigError, DataError, StageError
from .filters import FilterStats, histogram_prunes, length_prunes
from .setdist import LdCache, sld_capped
from .strdist import threshold_ratio
from .textnorm import TOKENIZER_SCHEMES, WHITESPACE_PUNCT, TokenizedString

FUZZY = "fuzzy"
GREEDY = "greedy"
EXACT_TOKEN = "exact-token"
MATCHING_MODES = (FUZZY, GREEDY, EXACT_TOKEN)

ONE_STRING = "one-string"
BOTH_STRINGS = "both-strings"
DEDUP_STRATEGIES = (ONE_STRING, BOTH_STRINGS)

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF
_PACK_MASK = 0xFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """64-bit FNV-1a, fixed constants, bit-exact across platforms."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _U64
    return h


def one_string_key_is_left(hash_left: int, hash_right: int) -> bool:
    """Load-balancing side choice for grouping-on-one-string dedup.

    The left id becomes the key iff int(HASH(left) < HASH(right)) equals
    (HASH(left) + HASH(right)) mod 2.
    """
    return (1 if hash_left < hash_right else 0) == ((hash_left + hash_right) & 1)


@dataclass(frozen=True)
class JoinConfig:
    """Everything a join run depends on besides the corpora themselves."""

    threshold: float = 0.1
    max_token_freq: int | float = 1000
    matching: str = FUZZY
    dedup: str = ONE_STRING
    self_join: bool = True
    workers: int = 1
    tokenizer: str = WHITESPACE_PUNCT

    def validate(self) -> None:
        t = self.threshold
        if isinstance(t, bool) or not isinstance(t, (int, float)) or not 0 <= t < 1:
            raise ConfigError(f"threshold must be in [0, 1), got {t!r}")
        m = self.max_token_freq
        if m != math.inf and (isinstance(m, bool) or not isinstance(m, int) or m < 1):
            raise ConfigError(f"max_token_freq must be a positive integer or inf, got {m!r}")
        if self.matching not in MATCHING_MODES:
            raise ConfigError(f"matching must be one of {MATCHING_MODES}, got {self.matching!r}")
        if self.dedup not in DEDUP_STRATEGIES:
            raise ConfigError(f"dedup must be one of {DEDUP_STRATEGIES}, got {self.dedup!r}")
        if isinstance(self.workers, bool) or not isinstance(self.workers, int) or self.workers < 1:
            raise ConfigError(f"workers must be a positive integer, got {self.workers!r}")
        if self.tokenizer not in TOKENIZER_SCHEMES:
            raise ConfigError(f"tokenizer must be one of {TOKENIZER_SCHEMES}, got {self.tokenizer!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "threshold": self.threshold,
            "max_token_freq": "inf" if self.max_token_freq == math.inf else self.max_token_freq,
            "matching": self.matching,
            "dedup": self.dedup,
            "self_join": self.self_join,
            "workers": self.workers,
            "tokenizer": self.tokenizer,
        }


@dataclass(frozen=True, slots=True)
class JoinResult:
    """A verified pair and its normalized setwise distance (<= threshold)."""

    left_id: str
    right_id: str
    distance: float


@dataclass(slots=True)
class StageCounts:
    items_in: int = 0
    items_out: int = 0
    millis: float = 0.0


@dataclass(slots=True)
class StageReport:
    """Per-stage item counts and wall times plus the filter counters."""

    stages: dict[str, StageCounts] = field(default_factory=dict)
    filters: FilterStats = field(default_factory=FilterStats)

    def record(self, name: str, items_in: int, items_out: int, millis: float) -> None:
        self.stages[name] = StageCounts(items_in, items_out, millis)

    def to_dict(self) -> dict[str, Any]:
        return {
            "stages": {
                name: {"items_in": c.items_in, "items_out": c.items_out, "millis": c.millis}
                for name, c in self.stages.items()
            },
            "filters": self.filters.to_dict(),
        }


# ---------------------------------------------------------------------------
# Generic map/group/reduce stage execution
# ---------------------------------------------------------------------------

def _run_map_partition(args):
    stage, idx, map_fn, part = args
    try:
        out = []
        for item in part:
            out.extend(map_fn(item))
        return ("ok", idx, out)
    except Exception as exc:  # surfaced as StageError with partition identity
        return ("error", idx, f"{type(exc).__name__}: {exc}")


def run_stage(
    items: Iterable,
    map_fn: Callable[[Any], Iterable[tuple[Hashable, Any]]],
    reduce_fn: Callable[[Hashable, list], Iterable],
    workers: int = 1,
    *,
    stage: str = "stage",
    pool=None,
) -> list:
    """Map items to keyed values, group by key, reduce each complete group.

    Output is exactly what sequential execution produces (reduce over sorted
    keys, values in item order); the worker count changes only wall time. Map
    fans out over the pool when one is supplied (or created here for a
    standalone parallel call); grouping and reducing stay in the caller.
    Parallel execution ships ``map_fn`` to worker processes, so it must be
    picklable (a module-level function, not a closure).
    """
    items = list(items) if not isinstance(items, (list, tuple)) else items
    own_pool = None
    try:
        if workers > 1 and pool is None and len(items) >= 2:
            own_pool = _make_pool(workers, None)
            pool = own_pool
        grouped: dict[Hashable, list] = {}
        if pool is not None and workers > 1 and len(items) >= 2:
            n_parts = min(len(items), workers * 4)
            size = (len(items) + n_parts - 1) // n_parts
            tasks = [
                (stage, idx, map_fn, items[idx * size : (idx + 1) * size])
                for idx in range(n_parts)
            ]
            for status, idx, payload in pool.map(_run_map_partition, tasks):
                if status != "ok":
                    raise StageError(stage, idx, payload)
                for k, v in payload:
                    bucket = grouped.get(k)
                    if bucket is None:
                        grouped[k] = [v]
                    else:
                        bucket.append(v)
        else:
            try:
                for item in items:
                    for k, v in map_fn(item):
                        bucket = grouped.get(k)
                        if bucket is None:
                            grouped[k] = [v]
                        else:
                            bucket.append(v)
            except StageError:
                raise
            except Exception as exc:
                raise StageError(stage, None, f"{type(exc).__name__}: {exc}") from exc
        out = []
        try:
            for k in sorted(grouped):
                out.extend(reduce_fn(k, grouped[k]))
        except Exception as exc:
            raise StageError(stage, None, f"{type(exc).__name__}: {exc}") from exc
        return out
    finally:
        if own_pool is not None:
            own_pool.close()
            own_pool.join()


# ---------------------------------------------------------------------------
# Worker context plumbing: the context reaches pool workers through fork
# inheritance (set around pool creation) and the calling thread through TLS.
# ---------------------------------------------------------------------------

_FORK_LOCK = threading.Lock()
_FORKED_CTX = None
_TLS = threading.local()


def _current_ctx():
    ctx = getattr(_TLS, "ctx", None)
    return ctx if ctx is not None else _FORKED_CTX


def _make_pool(workers: int, ctx):
    global _FORKED_CTX
    try:
        mp = multiprocessing.get_context("fork")
    except ValueError:
        return None  # no fork on this platform: stages run inline
    with _FORK_LOCK:
        _FORKED_CTX = ctx
        try:
            return mp.Pool(processes=workers)
        finally:
            _FORKED_CTX = None


class _JoinCtx:
    """Read-only state shared with stage workers (copied into them by fork)."""

    __slots__ = (
        "tokens_left",
        "tokens_right",
        "lens_left",
        "lens_right",
        "lens_arr_left",
        "lens_arr_right",
        "hist_mat_left",
        "hist_mat_right",
        "hist_width",
        "num",
        "den",
        "greedy",
        "threshold",
        "index_r",
        "index_p",
        "self_join",
        "ld_cache",
    )

    def __init__(self):
        self.ld_cache = LdCache()


def _probe_map(item):
    """(direction, token) -> [((token_r, token_p), ld)] for the similar-token join."""
    ctx = _current_ctx()
    direction, token = item
    out = []
    if ctx.self_join:
        for x, y, d in ctx.index_r.probe(token, ctx.ld_cache):
            key = (x, y) if (len(x), x) <= (len(y), y) else (y, x)
            out.append((key, d))
    elif direction == 0:
        # probe P-side token against the R-side index: hits are (x=p, y=r)
        for x, y, d in ctx.index_r.probe(token, ctx.ld_cache):
            out.append(((y, x), d))
    else:
        for x, y, d in ctx.index_p.probe(token, ctx.ld_cache):
            out.append(((x, y), d))
    return out


def _pair_reduce(key, values):
    yield (key[0], key[1], values[0])


def _verify_map(packed: int):
    """packed pair -> [(packed, distance)] if within threshold, else []."""
    ctx = _current_ctx()
    left = packed >> 32
    right = packed & _PACK_MASK
    total_len = ctx.lens_left[left] + ctx.lens_right[right]
    cap = (ctx.num * total_len) // (2 * ctx.den - ctx.num)
    s = sld_capped(
        ctx.tokens_left[left],
        ctx.tokens_right[right],
        cap,
        greedy=ctx.greedy,
        ld_cache=ctx.ld_cache,
    )
    if s is None:
        return ()
    return ((packed, (2.0 * s) / (total_len + s)),)


def _identity_reduce(key, values):
    yield (key, values[0])


# ---------------------------------------------------------------------------
# Deduplication
# ---------------------------------------------------------------------------

def dedup_candidates(
    pairs: Iterable[CandidatePair],
    strategy: str,
    *,
    hash_bytes: Callable[[Any], bytes] | None = None,
) -> Iterator[CandidatePair]:
    """Pass each distinct (left, right) pair through exactly once.

    ``both-strings`` groups on the full pair key; ``one-string`` keys each pair
    on the side chosen by the hash-parity rule and dedups within that key's
    value set. The fingerprint is 64-bit FNV-1a over the id bytes (utf-8 of
    str(id) unless ``hash_bytes`` overrides).
    """
    if strategy not in DEDUP_STRATEGIES:
        raise ConfigError(f"dedup must be one of {DEDUP_STRATEGIES}, got {strategy!r}")
    if hash_bytes is None:
        hash_bytes = lambda rid: str(rid).encode("utf-8")
    if strategy == BOTH_STRINGS:
        seen: set[tuple] = set()
        for pair in pairs:
            key = (pair.left_id, pair.right_id)
            if key not in seen:
                seen.add(key)
                yield pair
    else:
        by_key: dict[Any, set] = {}
        hashes: dict[Any, int] = {}
        for pair in pairs:
            hl = hashes.get(pair.left_id)
            if hl is None:
                hl = hashes[pair.left_id] = fnv1a_64(hash_bytes(pair.left_id))
            hr = hashes.get(pair.right_id)
            if hr is None:
                hr = hashes[pair.right_id] = fnv1a_64(hash_bytes(pair.right_id))
            if one_string_key_is_left(hl, hr):
                key, partner = pair.left_id, pair.right_id
            else:
                key, partner = pair.right_id, pair.left_id
            bucket = by_key.get(key)
            if bucket is None:
                by_key[key] = {partner}
                yield pair
            elif partner not in bucket:
                bucket.add(partner)
                yield pair


# ---------------------------------------------------------------------------
# The join itself
# ---------------------------------------------------------------------------

@dataclass(slots=True)
class _Side:
    ids: list[str]
    tokens: list[tuple[str, ...]]
    lens: list[int]
    hists: list[tuple[int, ...]]
    fnv: list[int]
    empties: list[int]

    def fnv_array(self) -> np.ndarray:
        return np.array(self.fnv, dtype=np.uint64)

    def lens_array(self) -> np.ndarray:
        return np.array(self.lens, dtype=np.int64)

    def hist_matrix(self, width: int) -> np.ndarray:
        """Sorted token lengths, right-aligned into a zero-padded matrix.

        Front-padding both sides of a pair to a common width leaves the
        pairwise sorted alignment (and therefore the |difference| sum)
        unchanged, so the histogram bound vectorizes as a row difference.
        """
        out = np.zeros((len(self.hists), width), dtype=np.int64)
        for i, lens in enumerate(self.hists):
            if lens:
                out[i, width - len(lens) :] = lens
        return out


def _prepare_side(corpus: Sequence[TokenizedString], label: str) -> _Side:
    recs = sorted(corpus, key=lambda r: r.id)
    ids: list[str] = []
    tokens: list[tuple[str, ...]] = []
    lens: list[int] = []
    hists: list[tuple[int, ...]] = []
    fnv: list[int] = []
    empties: list[int] = []
    prev = None
    for dense, rec in enumerate(recs):
        if rec.id == prev:
            raise DataError(f"duplicate record id {rec.id!r} in {label} corpus")
        prev = rec.id
        ids.append(rec.id)
        tokens.append(rec.tokens)
        lens.append(rec.agg_len)
        hists.append(tuple(sorted(len(t) for t in rec.tokens)))
        fnv.append(fnv1a_64(rec.id.encode("utf-8")))
        if not rec.tokens:
            empties.append(dense)
    return _Side(ids, tokens, lens, hists, fnv, empties)


def _build_space(side: _Side, max_freq: int | float) -> TokenSpace:
    postings: dict[str, set[int]] = {}
    for dense, toks in enumerate(side.tokens):
        for tok in toks:
            bucket = postings.get(tok)
            if bucket is None:
                postings[tok] = {dense}
            else:
                bucket.add(dense)
    entries = {
        tok: tuple(sorted(ids))
        for tok, ids in sorted(postings.items())
        if len(ids) <= max_freq
    }
    return TokenSpace(entries)


def _shared_pairs_packed(space_r: TokenSpace, space_p: TokenSpace, self_join: bool) -> Iterator[int]:
    if self_join:
        for postings in space_r.entries.values():
            n = len(postings)
            for i in range(n - 1):
                hi = postings[i] << 32
                for j in range(i + 1, n):
                    yield hi | postings[j]
    else:
        for tok, postings_r in space_r.entries.items():
            postings_p = space_p.entries.get(tok)
            if not postings_p:
                continue
            for left in postings_r:
                hi = left << 32
                for right in postings_p:
                    yield hi | right


def _similar_pairs_packed(
    token_pairs: Sequence[tuple[str, str, int]],
    space_r: TokenSpace,
    space_p: TokenSpace,
    self_join: bool,
) -> Iterator[int]:
    if self_join:
        for tok_a, tok_b, _ in token_pairs:
            postings_a = space_r.entries.get(tok_a)
            postings_b = space_r.entries.get(tok_b)
            if not postings_a or not postings_b:
                continue
            if tok_a == tok_b:
                n = len(postings_a)
                for i in range(n - 1):
                    hi = postings_a[i] << 32
                    for j in range(i + 1, n):
                        yield hi | postings_a[j]
            else:
                for a in postings_a:
                    for b in postings_b:
                        if a == b:
                            continue
                        yield (a << 32) | b if a < b else (b << 32) | a
    else:
        for tok_r, tok_p, _ in token_pairs:
            postings_r = space_r.entries.get(tok_r)
            postings_p = space_p.entries.get(tok_p)
            if not postings_r or not postings_p:
                continue
            for left in postings_r:
                hi = left << 32
                for right in postings_p:
                    yield hi | right


def join(
    corpus_r: Sequence[TokenizedString],
    corpus_p: Sequence[TokenizedString] | None,
    cfg: JoinConfig,
    *,
    use_filters: bool = True,
) -> tuple[list[JoinResult], StageReport]:
    """Find every record pair within the configured distance threshold.

    ``corpus_p`` of None selects a self-join. Fuzzy matching with no frequency
    cap returns exactly the true pair set; greedy and exact-token modes return
    subsets of it (never false positives). Results are sorted by
    (left_id, right_id) and byte-identical across runs and worker counts.
    ``use_filters=False`` skips the pruning stage (the output must not change;
    the differential tests rely on this knob).
    """
    cfg.validate()
    self_join = corpus_p is None
    if self_join != cfg.self_join:
        raise ConfigError(
            "cfg.self_join must match the corpora: "
            f"self_join={cfg.self_join} but corpus_p is {'absent' if corpus_p is None else 'present'}"
        )
    report = StageReport()
    num, den = threshold_ratio(cfg.threshold)

    t0 = time.perf_counter()
    side_r = _prepare_side(corpus_r, "left")
    side_p = side_r if self_join else _prepare_side(corpus_p, "right")
    n_records = len(side_r.ids) + (0 if self_join else len(side_p.ids))
    report.record("prepare", n_records, n_records, _ms(t0))

    t0 = time.perf_counter()
    space_r = _build_space(side_r, cfg.max_token_freq)
    space_p = space_r if self_join else _build_space(side_p, cfg.max_token_freq)
    kept_tokens = len(space_r.entries) + (0 if self_join else len(space_p.entries))
    report.record("index", n_records, kept_tokens, _ms(t0))

    ctx = _JoinCtx()
    ctx.tokens_left = side_r.tokens
    ctx.tokens_right = side_p.tokens
    ctx.lens_left = side_r.lens
    ctx.lens_right = side_p.lens
    ctx.num = num
    ctx.den = den
    ctx.greedy = cfg.matching == GREEDY
    ctx.threshold = cfg.threshold
    ctx.self_join = self_join
    ctx.index_r = None
    ctx.index_p = None
    ctx.hist_width = max(
        max((len(h) for h in side_r.hists), default=0),
        max((len(h) for h in side_p.hists), default=0),
    )
    ctx.lens_arr_left = side_r.lens_array()
    ctx.lens_arr_right = side_p.lens_array() if not self_join else ctx.lens_arr_left
    if ctx.hist_width:
        ctx.hist_mat_left = side_r.hist_matrix(ctx.hist_width)
        ctx.hist_mat_right = (
            side_p.hist_matrix(ctx.hist_width) if not self_join else ctx.hist_mat_left
        )
    else:
        ctx.hist_mat_left = None
        ctx.hist_mat_right = None

    want_similar = cfg.matching in (FUZZY, GREEDY)
    probe_items: list[tuple[int, str]] = []
    t0 = time.perf_counter()
    if want_similar:
        ctx.index_r = NldIndex(space_r.entries.keys(), cfg.threshold)
        if self_join:
            probe_items = [(0, tok) for tok in space_r.entries]
        else:
            ctx.index_p = NldIndex(space_p.entries.keys(), cfg.threshold)
            probe_items = [(0, tok) for tok in space_p.entries]
            probe_items += [(1, tok) for tok in space_r.entries]
    index_ms = _ms(t0)

    pool = None
    _TLS.ctx = ctx
    try:
        if cfg.workers > 1:
            pool = _make_pool(cfg.workers, ctx)

        t0 = time.perf_counter()
        token_pairs: list[tuple[str, str, int]] = []
        if want_similar:
            token_pairs = run_stage(
                probe_items,
                _probe_map,
                _pair_reduce,
                cfg.workers,
                stage="similar-tokens",
                pool=pool,
            )
        report.record("similar-tokens", len(probe_items), len(token_pairs), index_ms + _ms(t0))

        t0 = time.perf_counter()
        stream = _shared_pairs_packed(space_r, space_p, self_join)
        if want_similar:
            stream = chain(stream, _similar_pairs_packed(token_pairs, space_r, space_p, self_join))
        raw = np.fromiter(stream, dtype=np.uint64)
        report.record("generate", kept_tokens + len(token_pairs), int(raw.size), _ms(t0))

        t0 = time.perf_counter()
        unique = _dedup_packed(raw, cfg.dedup, side_r, side_p)
        report.record("dedup", int(raw.size), int(unique.size), _ms(t0))
        del raw

        t0 = time.perf_counter()
        if use_filters:
            survivors, fstats = _filter_packed(
                unique, side_r, side_p, num, den, ctx=ctx, workers=cfg.workers, pool=pool
            )
        else:
            survivors = unique.tolist()
            fstats = FilterStats(input_pairs=len(survivors), surviving=len(survivors))
        report.filters = fstats
        report.record("filter", int(unique.size), len(survivors), _ms(t0))
        del unique

        t0 = time.perf_counter()
        accepted: list[tuple[int, float]] = run_stage(
            survivors,
            _verify_map,
            _identity_reduce,
            cfg.workers,
            stage="verify",
            pool=pool,
        )
        report.record("verify", len(survivors), len(accepted), _ms(t0))
    finally:
        _TLS.ctx = None
        if pool is not None:
            pool.close()
            pool.join()

    t0 = time.perf_counter()
    if self_join:
        emp = side_r.empties
        for i in range(len(emp) - 1):
            hi = emp[i] << 32
            accepted.extend((hi | emp[j], 0.0) for j in range(i + 1, len(emp)))
    else:
        for left in side_r.empties:
            hi = left << 32
            accepted.extend((hi | right, 0.0) for right in side_p.empties)
    accepted.sort()
    ids_l, ids_r = side_r.ids, side_p.ids
    results = [
        JoinResult(ids_l[packed >> 32], ids_r[packed & _PACK_MASK], dist)
        for packed, dist in accepted
    ]
    results.sort(key=lambda jr: (jr.left_id, jr.right_id))
    report.record("finalize", len(accepted), len(results), _ms(t0))
    return results, report


def _ms(t0: float) -> float:
    return (time.perf_counter() - t0) * 1000.0


def _dedup_packed(raw: np.ndarray, strategy: str, side_r: _Side, side_p: _Side) -> np.ndarray:
    """First occurrence of each distinct pair, in stream order.

    ``both-strings`` groups on the packed pair directly. ``one-string``
    regroups each pair under the key side chosen by the hash-parity rule
    (with the value side as the dedup key within the group); the grouping
    key is (key side, partner), which identifies the pair exactly, so the
    surviving stream is the same and only the grouping topology differs.
    """
    if raw.size == 0:
        return raw
    if strategy == BOTH_STRINGS:
        combo = raw
    else:
        left = raw >> np.uint64(32)
        right = raw & np.uint64(_PACK_MASK)
        hl = side_r.fnv_array()[left.astype(np.int64)]
        hr = side_p.fnv_array()[right.astype(np.int64)]
        # int(HASH(l) < HASH(r)) == (HASH(l) + HASH(r)) mod 2; the parity of a
        # wrapping sum is the xor of the low bits
        key_is_left = (hl < hr) == ((hl ^ hr) & np.uint64(1)).astype(bool)
        key = np.where(key_is_left, left, right)
        partner = np.where(key_is_left, right, left)
        # high bit disambiguates which side the key came from (two-set joins
        # may reuse dense ids on both sides)
        side_bit = np.where(key_is_left, np.uint64(0), np.uint64(1))
        combo = (side_bit << np.uint64(63)) | (key << np.uint64(32)) | partner
    _, first_idx = np.unique(combo, return_index=True)
    first_idx.sort()
    return raw[first_idx]


def _filter_scalar(
    unique, side_r: _Side, side_p: _Side, num: int, den: int
) -> tuple[list[int], FilterStats]:
    stats = FilterStats()
    stats.input_pairs = len(unique)
    lens_l, lens_r = side_r.lens, side_p.lens
    hists_l, hists_r = side_r.hists, side_p.hists
    survivors: list[int] = []
    pruned_len = 0
    pruned_hist = 0
    for packed in unique:
        packed = int(packed)
        left = packed >> 32
        right = packed & _PACK_MASK
        la = lens_l[left]
        lb = lens_r[right]
        if length_prunes(la, lb, num, den):
            pruned_len += 1
        elif histogram_prunes(hists_l[left], hists_r[right], la, lb, num, den):
            pruned_hist += 1
        else:
            survivors.append(packed)
    stats.pruned_by_length = pruned_len
    stats.pruned_by_histogram = pruned_hist
    stats.surviving = len(survivors)
    return survivors, stats


_FILTER_BLOCK = 1 << 19


def _filter_blocks(
    arr: np.ndarray,
    lens_l: np.ndarray,
    lens_r: np.ndarray,
    hist_l: np.ndarray | None,
    hist_r: np.ndarray | None,
    num: int,
    den: int,
) -> tuple[list[int], int, int]:
    """Length then histogram pruning over packed pairs, block by block."""
    survivors: list[int] = []
    pruned_len = 0
    pruned_hist = 0
    for start in range(0, arr.size, _FILTER_BLOCK):
        block = arr[start : start + _FILTER_BLOCK]
        li = (block >> np.uint64(32)).astype(np.int64)
        ri = (block & np.uint64(_PACK_MASK)).astype(np.int64)
        la = lens_l[li]
        lb = lens_r[ri]
        mx = np.maximum(la, lb)
        len_prune = (mx - np.minimum(la, lb)) * den > num * mx
        pruned_len += int(len_prune.sum())
        keep = ~len_prune
        if hist_l is not None:
            lk = li[keep]
            rk = ri[keep]
            lower = np.abs(hist_l[lk] - hist_r[rk]).sum(axis=1)
            hist_prune = 2 * lower * den > num * (la[keep] + lb[keep] + lower)
            pruned_hist += int(hist_prune.sum())
            survivors.extend(block[keep][~hist_prune].tolist())
        else:
            survivors.extend(block[keep].tolist())
    return survivors, pruned_len, pruned_hist


def _filter_map_chunk(arr: np.ndarray) -> tuple[list[int], int, int]:
    ctx = _current_ctx()
    return _filter_blocks(
        arr,
        ctx.lens_arr_left,
        ctx.lens_arr_right,
        ctx.hist_mat_left,
        ctx.hist_mat_right,
        ctx.num,
        ctx.den,
    )


def _filter_packed(
    unique: np.ndarray,
    side_r: _Side,
    side_p: _Side,
    num: int,
    den: int,
    ctx: "_JoinCtx | None" = None,
    workers: int = 1,
    pool=None,
) -> tuple[list[int], FilterStats]:
    """Vectorized length + histogram pruning with exact integer predicates.

    Runs over the pool in contiguous chunks when one is available (merge order
    is partition order, so results match the serial pass exactly). Falls back
    to the scalar reference when the cross-multiplied comparisons could
    overflow int64 (enormous records or a pathological threshold).
    """
    stats = FilterStats()
    stats.input_pairs = int(unique.size)
    if unique.size == 0:
        stats.surviving = 0
        return [], stats
    max_len = max(max(side_r.lens, default=0), max(side_p.lens, default=0))
    if (4 * max_len + 4) * max(num, den) >= 2**62:
        return _filter_scalar(unique, side_r, side_p, num, den)

    if ctx is not None and pool is not None and workers > 1 and unique.size >= 4 * _FILTER_BLOCK:
        n_parts = workers * 2
        size = (unique.size + n_parts - 1) // n_parts
        chunks = [unique[i * size : (i + 1) * size] for i in range(n_parts)]
        parts = pool.map(_filter_map_chunk, chunks)
        survivors: list[int] = []
        pruned_len = 0
        pruned_hist = 0
        for part_survivors, n_len, n_hist in parts:
            survivors.extend(part_survivors)
            pruned_len += n_len
            pruned_hist += n_hist
    else:
        width = max(
            max((len(h) for h in side_r.hists), default=0),
            max((len(h) for h in side_p.hists), default=0),
        )
        lens_l = side_r.lens_array()
        lens_r = side_p.lens_array() if side_p is not side_r else lens_l
        hist_l = side_r.hist_matrix(width) if width else None
        hist_r = (side_p.hist_matrix(width) if side_p is not side_r else hist_l) if width else None
        survivors, pruned_len, pruned_hist = _filter_blocks(
            unique, lens_l, lens_r, hist_l, hist_r, num, den
        )
    stats.pruned_by_length = pruned_len
    stats.pruned_by_histogram = pruned_hist
    stats.surviving = len(survivors)
    return survivors, stats
