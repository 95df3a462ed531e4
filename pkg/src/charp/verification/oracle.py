"""Independent oracles built on tensor powers of the natural module.

Nothing here touches the straightening engine.  Root vectors act on
V = Z^{rank+1} as signed elementary matrices, divided powers on V^{(x)m}
are computed exactly over the integers, and everything is reduced mod p
only at the end.

Sign convention (shared with the PBW code by definition, not by import):
f_[i,j], the root alpha_i + ... + alpha_j, acts as (-1)^(j-i) E_{j+1,i},
so that [f_[i,j], f_[j+1,l]] = f_[i,l].
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import factorial

import numpy as np
import scipy.sparse as sp

MAX_DIM = 20000  # largest tensor power the oracles will build


def rank_mod_p(m: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p), plain row reduction."""
    a = np.array(m, dtype=np.int64) % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = np.flatnonzero(a[r:, c])
        if piv.size == 0:
            continue
        k = r + piv[0]
        a[[r, k]] = a[[k, r]]
        a[r] = a[r] * pow(int(a[r, c]), -1, p) % p
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % p
        r += 1
    return r


def interval_roots(rank: int) -> list[tuple[int, int]]:
    """Positive roots as (lo, hi) intervals, by height then start."""
    return [(i, i + h - 1) for h in range(1, rank + 1) for i in range(1, rank - h + 2)]


class TensorPower:
    """Integer operators of divided powers f_[i,j]^(e) on V^{(x)m}, V of dimension rank + 1."""

    def __init__(self, rank: int, m: int):
        self.rank = rank
        self.m = m
        self.n = rank + 1
        self.dim = self.n**m
        if self.dim > MAX_DIM:
            raise ValueError(f"V^{m} for A{rank} has dimension {self.dim}, above the oracle limit {MAX_DIM}")
        self._ops: dict = {}

    def root_matrix(self, root: tuple[int, int]) -> sp.csr_matrix:
        lo, hi = root
        e = sp.lil_matrix((self.n, self.n), dtype=np.int64)
        e[hi, lo - 1] = -1 if (hi - lo) % 2 else 1
        return e.tocsr()

    def _sum_over_factors(self, x: sp.csr_matrix) -> sp.csr_matrix:
        eye = sp.identity(self.n, dtype=np.int64, format="csr")
        total = sp.csr_matrix((self.dim, self.dim), dtype=np.int64)
        for s in range(self.m):
            term = sp.identity(1, dtype=np.int64, format="csr")
            for t in range(self.m):
                term = sp.kron(term, x if t == s else eye, format="csr")
            total = total + term
        return total.tocsr()

    def divided_power(self, root: tuple[int, int], e: int) -> sp.csr_matrix:
        key = (tuple(root), e)
        op = self._ops.get(key)
        if op is None:
            f = self._sum_over_factors(self.root_matrix(root))
            op = sp.identity(self.dim, dtype=np.int64, format="csr")
            for _ in range(e):
                op = (op @ f).tocsr()
            k = factorial(e)
            if np.any(op.data % k):
                raise ArithmeticError(f"f^{e} is not divisible by {e}! on V^{self.m}")
            op.data //= k
            op.eliminate_zeros()
            self._ops[key] = op
        return op

    def word(self, letters) -> sp.csr_matrix:
        """Operator of a word [((lo, hi), e), ...] read left to right."""
        op = sp.identity(self.dim, dtype=np.int64, format="csr")
        for root, e in letters:
            op = (op @ self.divided_power(root, e)).tocsr()
        return op

    def basis_index(self, digits) -> int:
        """Position of e_{d1+1} (x) ... (x) e_{dm+1} (digits are 0-based)."""
        k = 0
        for d in digits:
            k = k * self.n + d
        return k


def _wedge_top(tp: TensorPower, sizes) -> np.ndarray:
    """(x)_k (e_1 ^ ... ^ e_{s_k}) realized inside V^{(x)m} by antisymmetrization."""
    from itertools import permutations

    v = np.zeros(tp.dim, dtype=np.int64)
    pieces = []
    for s in sizes:
        block = []
        for perm in permutations(range(s)):
            sign = 1
            for i in range(s):
                for j in range(i + 1, s):
                    if perm[i] > perm[j]:
                        sign = -sign
            block.append((perm, sign))
        pieces.append(block)
    for choice in product(*pieces):
        digits, sign = [], 1
        for perm, sg in choice:
            digits.extend(perm)
            sign *= sg
        v[tp.basis_index(digits)] += sign
    return v


def gram_dim_L(rank: int, p: int, lam) -> int:
    """dim L(lam) as the GF(p) rank of the contravariant form on the Weyl module.

    The Weyl module is the Z-span of PBW divided-power monomials applied
    to the highest weight vector of V^{(x)m}; the standard dot product
    divided by its value on that vector is the contravariant form.
    """
    lam = tuple(int(c) for c in lam)
    if rank > 2:
        raise ValueError("the Gram oracle is limited to rank <= 2")
    if len(lam) != rank or any(c < 0 for c in lam):
        raise ValueError(f"bad weight {lam} for A{rank}")
    sizes = [i + 1 for i, c in enumerate(lam) for _ in range(c)]
    m = sum(sizes)
    if m == 0:
        return 1
    tp = TensorPower(rank, m)
    v = _wedge_top(tp, sizes)
    norm = int(v @ v)
    roots = interval_roots(rank)
    by_weight: dict[tuple[int, ...], list[np.ndarray]] = {}
    for exps in product(range(m + 1), repeat=len(roots)):
        w = v
        for root, e in reversed(list(zip(roots, exps))):
            if e:
                w = tp.divided_power(root, e) @ w
        if not np.any(w):
            continue
        depth = [0] * rank
        for (lo, hi), e in zip(roots, exps):
            for i in range(lo - 1, hi):
                depth[i] += e
        by_weight.setdefault(tuple(depth), []).append(w)
    total = 0
    for vecs in by_weight.values():
        y = np.array(vecs, dtype=np.int64)
        g = y @ y.T
        if np.any(g % norm):
            raise ArithmeticError("Gram matrix is not divisible by the norm of the highest vector")
        total += rank_mod_p(g // norm, p)
    return total


@lru_cache(maxsize=None)
def oracle_dim_L_small(rank: int, p: int, lam: tuple[int, ...]) -> int:
    return gram_dim_L(rank, p, lam)


def operators_equal_mod(a: sp.csr_matrix, b: sp.csr_matrix, p: int) -> int:
    """Number of entries where a and b differ mod p."""
    d = (a - b).tocsr()
    d.data %= p
    d.eliminate_zeros()
    return int(d.nnz)
