"""Characters of the induced modules H^0(lambda) in the orbit-sum basis."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .roots import (
    Weight,
    _raw_epsilon,
    dominance_leq,
    dominant_weights_below,
    from_epsilon,
    is_dominant,
    orbit_list,
    orbit_size,
    positive_roots,
)

CharVector = dict  # dominant Weight -> multiplicity of the orbit sum e(weight)


@dataclass(frozen=True)
class DecompMatrix:
    """Lower-unitriangular integer matrix on an ordered list of dominant weights."""

    index: tuple[Weight, ...]
    rows: np.ndarray

    def __post_init__(self):
        k = len(self.index)
        if self.rows.shape != (k, k):
            raise ValueError(f"rows has shape {self.rows.shape}, index has {k} weights")

    def position(self, lam: Weight) -> int:
        return self.index.index(tuple(lam))

    def entry(self, lam: Weight, nu: Weight) -> int:
        return int(self.rows[self.position(lam), self.position(nu)])

    def row(self, lam: Weight) -> dict[Weight, int]:
        i = self.position(lam)
        return {nu: int(v) for nu, v in zip(self.index, self.rows[i]) if v}

    def is_unitriangular(self) -> bool:
        r = self.rows
        return bool(np.all(np.diag(r) == 1) and not np.any(np.triu(r, 1)))

    def restrict(self, weights) -> "DecompMatrix":
        keep = [i for i, w in enumerate(self.index) if w in set(map(tuple, weights))]
        return DecompMatrix(tuple(self.index[i] for i in keep), self.rows[np.ix_(keep, keep)].copy())

    def __eq__(self, other):
        if not isinstance(other, DecompMatrix):
            return NotImplemented
        return self.index == other.index and np.array_equal(self.rows, other.rows)

    __hash__ = None


def _fold(c: list[int]) -> Weight:
    return from_epsilon(sorted(c, reverse=True))


@lru_cache(maxsize=2048)
def _freudenthal(lam: Weight) -> tuple[tuple[Weight, int], ...]:
    n1 = len(lam) + 1
    roots = positive_roots(len(lam))

    def ip(a, b):
        return n1 * sum(x * y for x, y in zip(a, b)) - sum(a) * sum(b)

    lr = _raw_epsilon(tuple(x + 1 for x in lam))
    top = ip(lr, lr)
    mult: dict[Weight, int] = {}
    for mu in reversed(dominant_weights_below(lam)):
        if mu == lam:
            mult[mu] = 1
            continue
        c = _raw_epsilon(mu)
        total = 0
        for a in roots:
            i, j = a.lo - 1, a.hi  # alpha = eps_i - eps_j (0-based)
            k = 1
            while True:
                ck = list(c)
                ck[i] += k
                ck[j] -= k
                m = mult.get(_fold(ck))
                if m is None:
                    break
                # (mu + k alpha, alpha), scaled by n+1; alpha has epsilon entries +1, -1
                total += (n1 * (ck[i] - ck[j])) * m
                k += 1
        mr = _raw_epsilon(tuple(x + 1 for x in mu))
        denom = top - ip(mr, mr)
        assert denom > 0, f"Freudenthal denominator vanished at {mu} for {lam}"
        num = 2 * total
        assert num % denom == 0, f"non-integral multiplicity at {mu} for {lam}"
        mult[mu] = num // denom
    return tuple(mult.items())


def freudenthal_row(lam: Weight) -> CharVector:
    """Dominant weight multiplicities of H^0(lam) by Freudenthal's recursion."""
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    return dict(_freudenthal(lam))


def weyl_dim(lam: Weight) -> int:
    """Weyl dimension formula: product over positive roots of <lam+rho, a>/<rho, a>."""
    lam = tuple(lam)
    num = 1
    den = 1
    for a in positive_roots(len(lam)):
        num *= sum(lam[a.lo - 1 : a.hi]) + a.height
        den *= a.height
    assert num % den == 0
    return num // den


def weyl_dim_a5(a: int, b: int, c: int, d: int, e: int) -> int:
    """Closed product for dim H^0(a,b,c,d,e) in type A5."""
    num = (
        (a + 1) * (b + 1) * (c + 1) * (d + 1) * (e + 1)
        * (a + b + 2) * (b + c + 2) * (c + d + 2) * (d + e + 2)
        * (a + b + c + 3) * (b + c + d + 3) * (c + d + e + 3)
        * (a + b + c + d + 4) * (b + c + d + e + 4)
        * (a + b + c + d + e + 5)
    )
    den = 2**8 * 3**3 * 5
    assert num % den == 0
    return num // den


def matrix_A(lam: Weight, index=None) -> DecompMatrix:
    """Orbit-sum expansions of ch(mu) for every mu in the index."""
    lam = tuple(lam)
    if index is None:
        index = dominant_weights_below(lam)
    pos = {w: i for i, w in enumerate(index)}
    rows = np.zeros((len(index), len(index)), dtype=np.int64)
    for i, mu in enumerate(index):
        for nu, m in freudenthal_row(mu).items():
            j = pos.get(nu)
            if j is not None:
                rows[i, j] = m
    return DecompMatrix(tuple(index), rows)


@lru_cache(maxsize=8192)
def _orbit_array(nu: Weight) -> np.ndarray:
    return np.array(orbit_list(nu), dtype=np.int64).reshape(-1, len(nu))


def orbit_sum_product(mu: Weight, nu: Weight) -> CharVector:
    """Expand e(mu) * e(nu) in the orbit-sum basis."""
    mu, nu = tuple(mu), tuple(nu)
    a = _orbit_array(mu)
    b = _orbit_array(nu)
    if len(a) > len(b):
        a, b = b, a
    out: dict[Weight, int] = {}
    # a W-invariant product: the coefficient of e(k) is the number of pairs summing to k
    for w in a:
        s = b + w
        dom = s[np.all(s >= 0, axis=1)]
        for row in map(tuple, dom.tolist()):
            out[row] = out.get(row, 0) + 1
    return out


def char_product(c1: CharVector, c2: CharVector) -> CharVector:
    out: dict[Weight, int] = {}
    for mu, a in c1.items():
        for nu, b in c2.items():
            for k, m in orbit_sum_product(mu, nu).items():
                out[k] = out.get(k, 0) + a * b * m
    return {k: v for k, v in out.items() if v}


def char_twist(c: CharVector, q: int) -> CharVector:
    """Frobenius twist: scale every weight by q."""
    return {tuple(q * x for x in nu): m for nu, m in c.items()}


def char_dim(c: CharVector) -> int:
    return sum(m * orbit_size(nu) for nu, m in c.items())


def character_support_ok(c: CharVector, lam: Weight) -> bool:
    return c.get(tuple(lam)) == 1 and all(dominance_leq(nu, lam) for nu in c)

