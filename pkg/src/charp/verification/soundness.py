"""Straightening checked against the tensor-power matrices of the oracle module."""

from __future__ import annotations

import random

import scipy.sparse as sp

from ..hyperalgebra.pbw import root_table
from ..hyperalgebra.straighten import Straightener
from .oracle import TensorPower, operators_equal_mod


def random_word(rng: random.Random, rank: int, max_len: int = 8, max_exp: int = 3):
    """Random word of divided powers as [(root index, exponent), ...]."""
    n = len(root_table(rank).roots)
    return [(rng.randrange(n), rng.randint(1, max_exp)) for _ in range(rng.randint(1, max_len))]


def straightening_mismatches(word, rank: int, m: int, p: int, tp: TensorPower | None = None) -> int:
    """Entries where word and its straightened PBW expansion act differently on V^{(x)m}, mod p."""
    table = root_table(rank)
    tp = tp or TensorPower(rank, m)
    roots = [(r.lo, r.hi) for r in table.roots]
    lhs = tp.word([(roots[a], e) for a, e in word])
    rhs = sp.csr_matrix((tp.dim, tp.dim), dtype=lhs.dtype)
    for mono, c in Straightener(rank, p).straighten(word).items():
        letters = [(roots[a], e) for a, e in enumerate(mono) if e]
        rhs = rhs + c * tp.word(letters)
    return operators_equal_mod(lhs, rhs.tocsr(), p)
