"""Reference straightening engine over GF(p) with unbounded exponents.

This is the plain-Python path.  It handles any exponents, which the x
construction needs; the packed kernels take over once every exponent
is known to stay below p^n_F.
"""

from __future__ import annotations

from .pbw import AlgebraVector, Monomial, Word, lucas_binomial, root_table


class Straightener:
    """Moves divided powers into PBW position.

    The exchange rule for f_a to the left of f_b with [f_a, f_b] = s f_g is

        f_a^(e) f_b^(c) = sum_k s^k f_b^(c-k) f_a^(e-k) f_g^(k),

    and equal roots merge with the coefficient C(e+c, e).  Results of
    pushing one letter into one monomial are cached; the cache is dropped
    when it grows past ``cache_limit`` entries.
    """

    def __init__(self, rank: int, p: int, cache_limit: int = 200_000):
        self.rank = rank
        self.p = p
        t = root_table(rank)
        self.n = t.size
        self.comm = [
            [
                None if t.comm_root[a, b] < 0 else (int(t.comm_root[a, b]), int(t.comm_sign[a, b]))
                for b in range(self.n)
            ]
            for a in range(self.n)
        ]
        self.cache_limit = cache_limit
        self._cache: dict = {}

    def push(self, a: int, e: int, mono: Monomial, start: int = 0) -> tuple:
        """f_a^(e) * mono, where mono's positions before ``start`` are already passed."""
        key = (a, e, mono, start)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        p = self.p
        out: dict = {}
        for pos in range(start, self.n):
            c = mono[pos]
            if pos == a:
                co = lucas_binomial(e, c, p)
                if co:
                    m = list(mono)
                    m[a] = e + c
                    out[tuple(m)] = co
                break
            if c == 0:
                continue
            cm = self.comm[a][pos]
            if cm is None:
                continue
            g, s = cm
            for k in range(1, min(e, c) + 1):
                m = list(mono)
                m[pos] = c - k
                co = 1 if (s == 1 or k % 2 == 0) else p - 1
                for m2, c2 in self.push(g, k, tuple(m), pos + 1):
                    if e > k:
                        for m3, c3 in self.push(a, e - k, m2, pos + 1):
                            out[m3] = (out.get(m3, 0) + co * c2 * c3) % p
                    else:
                        out[m2] = (out.get(m2, 0) + co * c2) % p
        res = tuple((m, c) for m, c in out.items() if c)
        if len(self._cache) >= self.cache_limit:
            self._cache.clear()
        self._cache[key] = res
        return res

    def apply_letter(self, a: int, e: int, v: AlgebraVector) -> AlgebraVector:
        """f_a^(e) * v, straightened."""
        if e == 0:
            return dict(v)
        p = self.p
        out: dict = {}
        for m, c in v.items():
            for m2, c2 in self.push(a, e, m, 0):
                out[m2] = (out.get(m2, 0) + c * c2) % p
        return {m: c for m, c in out.items() if c}

    def apply_word(self, word: Word, v: AlgebraVector) -> AlgebraVector:
        for a, e in reversed(word):
            v = self.apply_letter(a, e, v)
        return v

    def straighten(self, word: Word) -> AlgebraVector:
        return self.apply_word(word, {(0,) * self.n: 1})


def straighten(word: Word, rank: int, p: int) -> AlgebraVector:
    """Expand a word of divided powers in the PBW basis over GF(p)."""
    return Straightener(rank, p).straighten(word)


def apply_letter(letter, v: AlgebraVector, rank: int, p: int) -> AlgebraVector:
    a, e = letter
    return Straightener(rank, p).apply_letter(a, e, v)
