"""Characters of the simple modules L(lambda) and decomposition matrices.

For restricted lambda, dim L(lambda)_nu is the GF(p) rank of the vectors
m * x_{(q-1)rho - lambda}, with m running over the restricted PBW
monomials of weight lambda - nu.  Other dominant weights go through the
Steinberg tensor product.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .hyperalgebra.memo import ApplyCounter, MemoCache, XEngine, monomial_suffix, pack_monomial
from .hyperalgebra.pbw import Monomial, build_x, root_table, word_weight
from .roots import (
    GroupConfig,
    Weight,
    dominance_leq,
    dominant_weights_below,
    is_dominant,
    linkage_class_below,
    root_coords,
    scaled_inner_product,
    steinberg_split,
    sub,
)
from .weyl import CharVector, DecompMatrix, char_dim, char_product, char_twist, matrix_A

log = logging.getLogger(__name__)


class InvariantError(RuntimeError):
    """A computed quantity broke a structural guarantee; signals a bug upstream."""


@dataclass(frozen=True)
class RankTask:
    lam: Weight
    nu: Weight

    @property
    def beta(self) -> tuple[int, ...]:
        return root_coords(sub(self.lam, self.nu))


def _group_rows(rank: int) -> list[list[int]]:
    """PBW indices of the roots starting at each simple root, by increasing end."""
    table = root_table(rank)
    groups = [[] for _ in range(rank)]
    for k, r in sorted(enumerate(table.roots), key=lambda t: (t[1].lo, t[1].hi)):
        groups[r.lo - 1].append(k)
    return groups


def spanning_monomials(beta, rank: int, q: int) -> list[Monomial]:
    """Restricted PBW monomials of weight beta (simple-root coordinates), sorted.

    Roots starting at alpha_i are chosen together, longest first.  No
    later root touches coordinate i, so the shortest one takes whatever
    is left there.
    """
    beta = tuple(beta)
    if len(beta) != rank or any(b < 0 for b in beta):
        return []
    table = root_table(rank)
    groups = _group_rows(rank)
    out: list[Monomial] = []
    mono = [0] * table.size
    rem = list(beta)

    def group(i: int):
        if i == rank:
            out.append(tuple(mono))
            return
        pick(i, rank - 1)

    def pick(i: int, h: int):
        # choose the exponent of the root alpha_i + ... + alpha_h (0-based ends)
        k = groups[i][h - i]
        if h == i:
            a = rem[i]
            if a < q:
                mono[k] = a
                rem[i] = 0
                group(i + 1)
                rem[i] = a
                mono[k] = 0
            return
        for a in range(min(q - 1, *rem[i : h + 1]) + 1):
            mono[k] = a
            for j in range(i, h + 1):
                rem[j] -= a
            pick(i, h - 1)
            for j in range(i, h + 1):
                rem[j] += a
        mono[k] = 0

    group(0)
    return sorted(out)


def restricted_monomial_keys(gamma, rank: int, q: int) -> np.ndarray:
    """Packed keys of all restricted monomials of weight gamma, sorted."""
    mons = spanning_monomials(gamma, rank, q)
    return np.array(sorted(pack_monomial(m, q) for m in mons), dtype=np.int64)


@dataclass
class RankResult:
    dim: int
    monomials: int
    columns: int
    seconds: float


class CharacterEngine:
    """Computes ch_p(lambda) in the orbit-sum basis, plus the matrices B and D.

    ``memo`` switches suffix sharing on or off; both modes give identical
    numbers.  ``workers`` runs rank tasks for one lambda on threads (the
    compiled kernels release the GIL).
    """

    batch = 96

    def __init__(self, config: GroupConfig | None = None, memo: bool = True,
                 cache: MemoCache | None = None, store=None, backend: str | None = None,
                 workers: int = 1, progress: bool = False):
        self.config = config or GroupConfig()
        self.memo = memo
        self.store = store
        self.cache = cache if cache is not None else MemoCache(store=store)
        self.backend = backend
        self.workers = max(1, int(workers))
        self.progress = progress
        self.counter = ApplyCounter()
        self._rows: dict[Weight, CharVector] = {}
        self._dims: dict[tuple[Weight, Weight], int] = {}
        self._engines: dict[Weight, XEngine] = {}

    # -- single weight spaces ----------------------------------------------

    def _engine(self, lam: Weight) -> XEngine:
        eng = self._engines.get(lam)
        if eng is None:
            eng = XEngine(self.config, lam, self.cache, backend=self.backend, memo=self.memo)
            self._engines[lam] = eng
        return eng

    def _check_task(self, lam: Weight, nu: Weight) -> tuple[int, ...]:
        cfg = self.config
        lam, nu = cfg.check_weight(lam), cfg.check_weight(nu)
        if not cfg.is_restricted(lam):
            raise ValueError(f"{lam} is not restricted")
        if not is_dominant(nu):
            raise ValueError(f"{nu} is not dominant")
        if not dominance_leq(nu, lam):
            raise ValueError(f"{nu} is not below {lam}")
        return root_coords(sub(lam, nu))

    def rank_task(self, lam: Weight, nu: Weight, monomials=None, cap: int | None = None) -> RankResult:
        """Rank of {m * x : m in monomials}; monomials default to the spanning set."""
        t0 = time.perf_counter()
        lam, nu = tuple(lam), tuple(nu)
        beta = self._check_task(lam, nu)
        cfg = self.config
        q, p = cfg.q, cfg.prime
        eng = self._engine(lam)
        monomials_are_pbw = monomials is None
        if monomials is None:
            monomials = spanning_monomials(beta, cfg.rank, q)
        words = sorted(
            (monomial_suffix(m) if not isinstance(m, list) else tuple(reversed(m)) for m in monomials)
        )
        if not words:
            return RankResult(0, 0, 0, time.perf_counter() - t0)
        shift = tuple(q - 1 - c for c in lam)
        if not any(shift) and monomials_are_pbw:
            # x is 1, so the vectors are distinct PBW basis elements
            dim = len(words) if cap is None else min(len(words), cap)
            return RankResult(dim, len(words), len(words), time.perf_counter() - t0)
        gamma = tuple(a + b for a, b in zip(word_weight(build_x(shift), cfg.rank), beta))
        cols = restricted_monomial_keys(gamma, cfg.rank, q)
        kern = eng.kernels
        limit = min(len(words), cols.size)
        if cap is not None:
            limit = min(limit, cap)
        pivots = np.zeros((max(limit, 1), p - 1, cols.size), dtype=np.uint8)
        piv_cols = np.zeros(max(limit, 1), dtype=np.int64)
        rank = 0
        for b in range(0, len(words), self.batch):
            if rank >= limit:
                break
            vecs = [eng.apply_suffix(w) for w in words[b : b + self.batch]]
            starts = np.zeros(len(vecs) + 1, dtype=np.int64)
            starts[1:] = np.cumsum([v[0].size for v in vecs])
            keys = np.concatenate([v[0] for v in vecs])
            coefs = np.concatenate([v[1] for v in vecs])
            if keys.size and not np.all(np.isin(keys, cols)):
                raise InvariantError(f"vector of weight {gamma} left its weight space")
            rows = kern.scatter_rows(cols, starts, keys, coefs, cols.size)
            rank = kern.reduce_rows(rows, pivots, piv_cols, rank, p, limit)
        return RankResult(int(rank), len(words), int(cols.size), time.perf_counter() - t0)

    def weight_space_dim(self, lam: Weight, nu: Weight) -> int:
        lam, nu = tuple(lam), tuple(nu)
        if lam == nu:
            self._check_task(lam, nu)
            return 1
        hit = self._dims.get((lam, nu))
        if hit is not None:
            return hit
        if self.store is not None:
            hit = self.store.load_dim(self.config, lam, nu)
            if hit is not None:
                return hit
        before = self._engine(lam).counter.applies
        res = self.rank_task(lam, nu)
        if self.progress:
            log.info("dim L(%s)_%s = %d  [%d monomials, %d columns, %d applies, %.2fs]",
                     lam, nu, res.dim, res.monomials, res.columns,
                     self._engine(lam).counter.applies - before, res.seconds)
        if self.store is not None:
            self.store.save_dim(self.config, lam, nu, res.dim)
        self._dims[(lam, nu)] = res.dim
        return res.dim

    def weight_space_dims(self, lam: Weight, nus) -> dict[Weight, int]:
        lam = tuple(lam)
        nus = [tuple(nu) for nu in nus]
        if self.workers == 1:
            return {nu: self.weight_space_dim(lam, nu) for nu in nus}
        # heavy tasks first so the pool drains evenly; results keyed, so order is irrelevant
        order = sorted(nus, key=lambda nu: -sum(root_coords(sub(lam, nu))))
        with ThreadPoolExecutor(self.workers) as pool:
            dims = dict(zip(order, pool.map(lambda nu: self.weight_space_dim(lam, nu), order)))
        return {nu: dims[nu] for nu in nus}

    # -- characters ----------------------------------------------------------

    def restricted_ch(self, lam: Weight, support=None) -> CharVector:
        """ch_p(lam) for restricted lam; ``support`` limits which nu are computed."""
        lam = self.config.check_weight(lam)
        if not self.config.is_restricted(lam):
            raise ValueError(f"{lam} is not restricted")
        full = support is None
        if full and lam in self._rows:
            return dict(self._rows[lam])
        if full and self.store is not None:
            hit = self.store.load_row(self.config, lam)
            if hit is not None:
                self._rows[lam] = hit
                return dict(hit)
        nus = dominant_weights_below(lam) if full else [nu for nu in support if dominance_leq(nu, lam)]
        t0 = time.perf_counter()
        dims = self.weight_space_dims(lam, nus)
        row = {nu: d for nu, d in dims.items() if d}
        if row.get(lam) != 1:
            raise InvariantError(f"highest weight space of L({lam}) has dimension {row.get(lam)}")
        if full:
            self._rows[lam] = row
            if self.store is not None:
                self.store.save_row(self.config, lam, row)
            if self.progress:
                log.info("ch L(%s): %d weights, %.1fs", lam, len(nus), time.perf_counter() - t0)
        self._sync_counter()
        return dict(row)

    def _sync_counter(self) -> None:
        total = ApplyCounter()
        for eng in self._engines.values():
            total.add(eng.counter)
        self.counter = total

    def steinberg_ch(self, lam: Weight, restricted_table: dict | None = None) -> CharVector:
        """ch_p(lam0 + q lam1) = ch_p(lam0) * ch_p(lam1)^[q]."""
        lam = self.config.check_weight(lam)
        if not is_dominant(lam):
            raise ValueError(f"{lam} is not dominant")
        q = self.config.q
        lam0, lam1 = steinberg_split(lam, q)

        def restricted(mu):
            if restricted_table is not None:
                if mu not in restricted_table:
                    raise KeyError(f"restricted character of {mu} missing from the table")
                return dict(restricted_table[mu])
            return self.restricted_ch(mu)

        c0 = restricted(lam0)
        if not any(lam1):
            return c0
        c1 = self.steinberg_ch(lam1, restricted_table)
        return char_product(c0, char_twist(c1, q))

    def ch(self, lam: Weight) -> CharVector:
        lam = self.config.check_weight(lam)
        if self.config.is_restricted(lam):
            return self.restricted_ch(lam)
        return self.steinberg_ch(lam)

    def dim_L(self, lam: Weight) -> int:
        return char_dim(self.ch(lam))

    # -- matrices ------------------------------------------------------------

    def _b_row(self, mu: Weight, index) -> np.ndarray:
        if self.config.is_restricted(mu):
            below = [nu for nu in index if dominance_leq(nu, mu)]
            row = self.restricted_ch(mu) if len(below) == len(dominant_weights_below(mu)) \
                else self.restricted_ch(mu, support=below)
        else:
            row = self.steinberg_ch(mu)
        return np.array([row.get(nu, 0) for nu in index], dtype=np.int64)

    def matrix_B(self, lam: Weight, index=None) -> DecompMatrix:
        """Rows ch_p(mu) for mu in the index (all dominant mu <= lam by default)."""
        lam = self.config.check_weight(lam)
        index = tuple(index) if index is not None else dominant_weights_below(lam)
        rows = np.vstack([self._b_row(mu, index) for mu in index])
        B = DecompMatrix(index, rows)
        if not B.is_unitriangular():
            raise InvariantError(f"B for {lam} is not unitriangular")
        return B

    def index_for(self, lam: Weight, mode: str = "block") -> tuple[Weight, ...]:
        lam = self.config.check_weight(lam)
        if mode == "full":
            return dominant_weights_below(lam)
        if mode == "block":
            return linkage_class_below(lam, self.config.prime)
        raise ValueError(f"unknown mode {mode!r}")

    def matrix_D(self, lam: Weight, mode: str = "block") -> DecompMatrix:
        """D = A B^-1: entry (mu, nu) is [H^0(mu) : L(nu)].

        ``block`` restricts the index to the dot-orbit of lam, which is
        enough because D is block diagonal by linkage while A = D B holds
        column by column.
        """
        return self.matrix_D_on(self.index_for(lam, mode))

    def matrix_D_on(self, index) -> DecompMatrix:
        """D on an index closed downward (within each linkage class) and ordered by dominance."""
        index = tuple(tuple(w) for w in index)
        A = matrix_A(index[-1], index)
        B = self.matrix_B(index[-1], index)
        return solve_decomposition(A, B)

    def closed_index(self, weights) -> tuple[Weight, ...]:
        """Union of the linkage classes below each weight, in an order refining dominance."""
        out = set()
        for lam in weights:
            out.update(linkage_class_below(self.config.check_weight(lam), self.config.prime))
        # mu < lam implies |mu + rho| < |lam + rho|, so the norm orders any dominance chain
        return tuple(sorted(out, key=lambda w: (_rho_norm(w), w)))


def _rho_norm(w: Weight) -> int:
    shifted = tuple(c + 1 for c in w)
    return scaled_inner_product(shifted, shifted)


def solve_decomposition(A: DecompMatrix, B: DecompMatrix) -> DecompMatrix:
    """Solve A = D B for D with B lower unitriangular."""
    if A.index != B.index:
        raise ValueError("A and B are indexed differently")
    a, b = A.rows, B.rows
    k = len(A.index)
    d = np.zeros_like(a)
    for c in range(k - 1, -1, -1):
        d[:, c] = a[:, c] - d[:, c + 1 :] @ b[c + 1 :, c]
    bad = np.argwhere(d < 0)
    if bad.size:
        i, j = bad[0]
        raise InvariantError(
            f"negative multiplicity {d[i, j]} for [H^0({A.index[i]}) : L({A.index[j]})]"
        )
    D = DecompMatrix(A.index, d)
    if not D.is_unitriangular():
        raise InvariantError("D is not unitriangular")
    return D
