"""PBW monomials of the negative part of the divided-power Z-form.

A monomial is a tuple of exponents indexed by the positive roots in PBW
order.  A vector is a dict from monomials to nonzero residues mod p.
Words are lists of ``(root_index, exponent)`` letters read left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from ..roots import PositiveRoot, Weight, positive_roots

Monomial = tuple[int, ...]
AlgebraVector = dict  # Monomial -> int in 1..p-1
Letter = tuple[int, int]
Word = list


@dataclass(frozen=True)
class RootTable:
    """Index tables for the positive roots of A_rank in PBW order."""

    rank: int
    roots: tuple[PositiveRoot, ...]
    comm_root: np.ndarray  # [a, b] -> index of gamma, or -1
    comm_sign: np.ndarray  # [a, b] -> +1 / -1 (0 when they commute)

    @property
    def size(self) -> int:
        return len(self.roots)

    def index(self, root) -> int:
        if isinstance(root, str):
            root = parse_root(root)
        return self.roots.index(PositiveRoot(*root))

    def simple(self, i: int) -> int:
        """Index of the simple root alpha_i (1-based)."""
        return i - 1

    def root_vectors(self) -> np.ndarray:
        """Matrix whose row k holds root k in simple-root coordinates."""
        out = np.zeros((self.size, self.rank), dtype=np.int64)
        for k, r in enumerate(self.roots):
            out[k, r.lo - 1 : r.hi] = 1
        return out


def commutator(alpha: PositiveRoot, beta: PositiveRoot) -> tuple[PositiveRoot, int] | None:
    """f_alpha f_beta = f_beta f_alpha + sign * f_gamma, or None when they commute."""
    alpha, beta = PositiveRoot(*alpha), PositiveRoot(*beta)
    if alpha == beta:
        raise ValueError("commutator needs two distinct roots")
    if beta.lo == alpha.hi + 1:
        return PositiveRoot(alpha.lo, beta.hi), 1
    if alpha.lo == beta.hi + 1:
        return PositiveRoot(beta.lo, alpha.hi), -1
    return None


@lru_cache(maxsize=None)
def root_table(rank: int) -> RootTable:
    roots = positive_roots(rank)
    n = len(roots)
    pos = {r: k for k, r in enumerate(roots)}
    croot = np.full((n, n), -1, dtype=np.int64)
    csign = np.zeros((n, n), dtype=np.int64)
    for a, ra in enumerate(roots):
        for b, rb in enumerate(roots):
            if a == b:
                continue
            c = commutator(ra, rb)
            if c is not None:
                croot[a, b] = pos[c[0]]
                csign[a, b] = c[1]
    croot.setflags(write=False)
    csign.setflags(write=False)
    return RootTable(rank, roots, croot, csign)


def lucas_binomial(a: int, b: int, p: int) -> int:
    """C(a+b, a) mod p, digit by digit in base p."""
    if a < 0 or b < 0:
        raise ValueError("lucas_binomial needs nonnegative arguments")
    r = 1
    x, y = a + b, a
    while x or y:
        xd, yd = x % p, y % p
        if yd > xd:
            return 0
        r = r * comb(xd, yd) % p
        x //= p
        y //= p
    return r


def binomial_table(p: int, q: int) -> np.ndarray:
    """table[a, b] = C(a+b, a) mod p for 0 <= a, b < q."""
    t = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            t[a, b] = lucas_binomial(a, b, p)
    return t


def build_x(lam: Weight) -> Word:
    """The staircase word x_lam in simple divided powers.

    Block k (k = 1..n) runs over f_1 .. f_{n+1-k}; letter f_j there has
    exponent lam_k + ... + lam_{k+j-1}.  Zero exponents are dropped.
    """
    lam = tuple(lam)
    if any(c < 0 for c in lam):
        raise ValueError(f"build_x needs nonnegative coordinates, got {lam}")
    n = len(lam)
    word = []
    for k in range(1, n + 1):
        for j in range(1, n + 2 - k):
            e = sum(lam[k - 1 : k - 1 + j])
            if e:
                word.append((j - 1, e))
    return word


def monomial_weight(m: Monomial, rank: int) -> tuple[int, ...]:
    """Weight of a monomial in simple-root coordinates (as a positive sum)."""
    out = [0] * rank
    for r, e in zip(root_table(rank).roots, m):
        if e:
            for i in range(r.lo - 1, r.hi):
                out[i] += e
    return tuple(out)


def word_weight(word: Word, rank: int) -> tuple[int, ...]:
    out = [0] * rank
    roots = root_table(rank).roots
    for a, e in word:
        r = roots[a]
        for i in range(r.lo - 1, r.hi):
            out[i] += e
    return tuple(out)


def letter(root, exponent: int, rank: int) -> Letter:
    return root_table(rank).index(root), exponent


def parse_root(text: str) -> PositiveRoot:
    """'3' -> alpha_3, '234' -> alpha_2 + alpha_3 + alpha_4, '9,11' for multi-digit indices."""
    if "," in text:
        lo, hi = (int(t) for t in text.split(","))
    elif text.isdigit() and all(int(b) == int(a) + 1 for a, b in zip(text, text[1:])):
        lo, hi = int(text[0]), int(text[-1])
    else:
        raise ValueError(f"cannot parse root {text!r}")
    if not 1 <= lo <= hi:
        raise ValueError(f"cannot parse root {text!r}")
    return PositiveRoot(lo, hi)


def parse_word(text: str, rank: int) -> Word:
    """Parse 'f_2 f_3^(2) f_23' into a word."""
    table = root_table(rank)
    word = []
    for tok in text.split():
        tok = tok.removeprefix("f_").removeprefix("f")
        exp = 1
        if "^" in tok:
            tok, e = tok.split("^")
            exp = int(e.strip("()"))
        word.append((table.index(tok), exp))
    return word


def format_letter(a: int, e: int, rank: int) -> str:
    lab = root_table(rank).roots[a].label
    return f"f_{lab}" if e == 1 else f"f_{lab}^({e})"


def format_monomial(m: Monomial, rank: int) -> str:
    parts = [format_letter(a, e, rank) for a, e in enumerate(m) if e]
    return " ".join(parts) if parts else "1"


def format_word(word: Word, rank: int) -> str:
    return " ".join(format_letter(a, e, rank) for a, e in word) or "1"


def format_vector(v: AlgebraVector, rank: int) -> str:
    if not v:
        return "0"
    terms = []
    for m in sorted(v):
        c = v[m]
        s = format_monomial(m, rank)
        terms.append(s if c == 1 else f"{c}*{s}")
    return " + ".join(terms)


def monomial_word(m: Monomial) -> Word:
    """The monomial as a word in PBW order."""
    return [(a, e) for a, e in enumerate(m) if e]


def identity(rank: int) -> AlgebraVector:
    return {(0,) * root_table(rank).size: 1}
