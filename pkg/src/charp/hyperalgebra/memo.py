"""Suffix memoization for products m * x.

Every spanning monomial is applied to x one letter at a time from the
right, so monomials that end in the same letters share work.  The cache
maps (config, lambda, suffix) to the packed vector suffix * x.
"""

from __future__ import annotations

import threading
from collections import OrderedDict
from dataclasses import dataclass, field

import numpy as np

from ..kernels import get_backend
from ..roots import GroupConfig, Weight
from .pbw import AlgebraVector, Monomial, Word, binomial_table, build_x, root_table
from .straighten import Straightener

Suffix = tuple  # letters (root_index, exponent), rightmost letter first
Packed = tuple  # (keys int64[], coefs int64[])


def pack_vector(v: AlgebraVector, q: int) -> Packed:
    if not v:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    n = len(next(iter(v)))
    powers = q ** np.arange(n, dtype=np.int64)
    mons = np.array(list(v), dtype=np.int64)
    if mons.max() >= q:
        raise ValueError("vector has exponents outside the packed range")
    keys = mons @ powers
    coefs = np.array(list(v.values()), dtype=np.int64)
    order = np.argsort(keys)
    return keys[order], coefs[order]


def unpack_vector(packed: Packed, n: int, q: int) -> AlgebraVector:
    keys, coefs = packed
    digits = (np.asarray(keys, dtype=np.int64)[:, None] // q ** np.arange(n, dtype=np.int64)) % q
    return {tuple(map(int, d)): int(c) for d, c in zip(digits, coefs)}


def pack_monomial(m: Monomial, q: int) -> int:
    key = 0
    for d in reversed(m):
        key = key * q + d
    return key


def monomial_suffix(m: Monomial) -> Suffix:
    """Letters of a PBW monomial, rightmost first."""
    return tuple((a, e) for a, e in reversed(list(enumerate(m))) if e)


@dataclass
class CacheStats:
    hits: int = 0
    misses: int = 0
    inserts: int = 0
    evictions: int = 0
    disk_hits: int = 0


class MemoCache:
    """LRU map (config, lambda, suffix) -> packed vector, bounded by total terms.

    Inserts are idempotent; concurrent workers may race on the same key
    and both insert the same value.
    """

    def __init__(self, max_terms: int = 4_000_000, store=None, spill_depth: int = 2):
        self.max_terms = max_terms
        self.store = store
        self.spill_depth = spill_depth
        self._data: OrderedDict = OrderedDict()
        self._terms = 0
        self._lock = threading.Lock()
        self.stats = CacheStats()

    def __len__(self) -> int:
        return len(self._data)

    def __contains__(self, key) -> bool:
        return key in self._data

    @property
    def terms(self) -> int:
        return self._terms

    def get(self, config: GroupConfig, lam: Weight, suffix: Suffix):
        key = (config.key, tuple(lam), suffix)
        with self._lock:
            hit = self._data.get(key)
            if hit is not None:
                self._data.move_to_end(key)
                self.stats.hits += 1
                return hit
        if self.store is not None and len(suffix) <= self.spill_depth:
            hit = self.store.load_vector(config, lam, suffix)
            if hit is not None:
                self.stats.disk_hits += 1
                self.stats.hits += 1
                self._insert(key, hit)
                return hit
        with self._lock:
            self.stats.misses += 1
        return None

    def put(self, config: GroupConfig, lam: Weight, suffix: Suffix, value: Packed) -> None:
        key = (config.key, tuple(lam), suffix)
        self._insert(key, value)
        if self.store is not None and len(suffix) <= self.spill_depth:
            self.store.save_vector(config, lam, suffix, value)

    def _insert(self, key, value: Packed) -> None:
        size = len(value[0]) + 1
        with self._lock:
            old = self._data.pop(key, None)
            if old is not None:
                self._terms -= len(old[0]) + 1
            self._data[key] = value
            self._terms += size
            self.stats.inserts += 1
            while self._terms > self.max_terms and len(self._data) > 1:
                _, ev = self._data.popitem(last=False)
                self._terms -= len(ev[0]) + 1
                self.stats.evictions += 1

    def clear(self) -> None:
        with self._lock:
            self._data.clear()
            self._terms = 0


@dataclass
class ApplyCounter:
    applies: int = 0
    lookups: int = 0
    hits: int = 0

    def add(self, other: "ApplyCounter") -> None:
        self.applies += other.applies
        self.lookups += other.lookups
        self.hits += other.hits


class PushCache:
    """Per-thread cache of single-monomial push results, dropped when too large.

    Push results depend only on (rank, p, q), so every lambda shares one.
    """

    def __init__(self, kernels):
        self.kernels = kernels
        self._local = threading.local()

    def get(self, n: int):
        """(push table, scratch workspace) for the calling thread."""
        d = getattr(self._local, "d", None)
        if d is None:
            d = self._local.d = self.kernels.make_push_cache()
            self._local.ws = self.kernels.make_workspace(n)
        elif self.kernels.push_cache_full(d):
            d[0].fill(-1)
            d[5][:] = 0
        return d, self._local.ws


_push_caches: dict = {}
_push_lock = threading.Lock()


def push_cache_for(kernels, config: GroupConfig) -> PushCache:
    key = (kernels.__name__, config.key)
    with _push_lock:
        pc = _push_caches.get(key)
        if pc is None:
            pc = _push_caches[key] = PushCache(kernels)
        return pc


class XEngine:
    """Applies words to x_{(q-1)rho - lam} for one restricted lam."""

    def __init__(self, config: GroupConfig, lam: Weight, cache: MemoCache | None = None,
                 backend: str | None = None, memo: bool = True):
        self.config = config
        self.lam = tuple(lam)
        if not config.is_restricted(self.lam):
            raise ValueError(f"{self.lam} is not restricted for {config.key}")
        self.cache = cache if cache is not None else MemoCache()
        self.memo = memo
        self.kernels = get_backend(backend)
        table = root_table(config.rank)
        self.n = table.size
        self.comm_root = np.ascontiguousarray(table.comm_root)
        self.comm_sign = np.ascontiguousarray(table.comm_sign)
        self.q = config.q
        self.binom = binomial_table(config.prime, self.q)
        self.counter = ApplyCounter()
        self.push_cache = push_cache_for(self.kernels, config)
        self._x = None

    @property
    def x(self) -> Packed:
        if self._x is None:
            shift = tuple(self.q - 1 - c for c in self.lam)
            v = Straightener(self.config.rank, self.config.prime).straighten(build_x(shift))
            self._x = pack_vector(v, self.q)
        return self._x

    def apply(self, a: int, e: int, v: Packed) -> Packed:
        self.counter.applies += 1
        keys, coefs = v
        if keys.size == 0:
            return v
        return self.kernels.apply_letter(
            a, e, keys, coefs, self.comm_root, self.comm_sign, self.binom,
            self.config.prime, self.q, *self.push_cache.get(self.n),
        )

    def apply_suffix(self, suffix: Suffix) -> Packed:
        """suffix * x, with suffix given rightmost letter first."""
        if not self.memo:
            v = self.x
            for a, e in suffix:
                v = self.apply(a, e, v)
            return v
        # find the longest cached suffix, then extend it
        v = None
        start = 0
        for i in range(len(suffix), 0, -1):
            self.counter.lookups += 1
            hit = self.cache.get(self.config, self.lam, suffix[:i])
            if hit is not None:
                self.counter.hits += 1
                v, start = hit, i
                break
        if v is None:
            v = self.x
        for i in range(start, len(suffix)):
            a, e = suffix[i]
            v = self.apply(a, e, v)
            self.cache.put(self.config, self.lam, suffix[: i + 1], v)
        return v

    def apply_word(self, word: Word) -> Packed:
        return self.apply_suffix(tuple(reversed([tuple(t) for t in word if t[1]])))

    def apply_monomial(self, m: Monomial) -> Packed:
        return self.apply_suffix(monomial_suffix(m))

    def vector(self, packed: Packed) -> AlgebraVector:
        return unpack_vector(packed, self.n, self.q)


def memo_apply(config: GroupConfig, lam: Weight, word: Word, cache: MemoCache,
               backend: str | None = None) -> AlgebraVector:
    """word * x_{(q-1)rho - lam}, straightened, sharing suffixes through ``cache``."""
    eng = XEngine(config, lam, cache, backend=backend, memo=True)
    return eng.vector(eng.apply_word(word))
