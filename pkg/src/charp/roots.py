"""Root system and weight lattice of type A_n.

Weights are plain tuples of fundamental-weight coordinates.  Most
computations go through the epsilon realization, where a weight of A_n
is an (n+1)-vector modulo (1, ..., 1), the Weyl group acts by
permutations and dominance becomes a prefix-sum test.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterator, NamedTuple

Weight = tuple[int, ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class GroupConfig:
    """Type A_rank in characteristic ``prime``.

    ``frobenius_level`` is the n of X_n(T): weights with all coordinates
    below ``prime ** frobenius_level`` are restricted.
    """

    rank: int = 5
    prime: int = 3
    frobenius_level: int = 1

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if not _is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        if self.frobenius_level < 1:
            raise ValueError("frobenius_level must be >= 1")

    @property
    def q(self) -> int:
        """p ** n_F, the restriction bound."""
        return self.prime**self.frobenius_level

    @property
    def key(self) -> str:
        return f"A{self.rank}-p{self.prime}-n{self.frobenius_level}"

    def rho(self) -> Weight:
        return (1,) * self.rank

    def zero(self) -> Weight:
        return (0,) * self.rank

    def is_restricted(self, lam: Weight) -> bool:
        return is_dominant(lam) and all(c < self.q for c in lam)

    def restricted_weights(self) -> list[Weight]:
        from itertools import product

        return [tuple(w) for w in product(range(self.q), repeat=self.rank)]

    def check_weight(self, lam) -> Weight:
        lam = tuple(int(c) for c in lam)
        if len(lam) != self.rank:
            raise ValueError(f"weight {lam} has length {len(lam)}, expected {self.rank}")
        return lam


class PositiveRoot(NamedTuple):
    """The root alpha_lo + ... + alpha_hi (1-based, inclusive)."""

    lo: int
    hi: int

    @property
    def height(self) -> int:
        return self.hi - self.lo + 1

    @property
    def label(self) -> str:
        """'123' for alpha_1 + alpha_2 + alpha_3; '9,11' once indices pass 9."""
        if self.hi <= 9:
            return "".join(str(i) for i in range(self.lo, self.hi + 1))
        return str(self.lo) if self.lo == self.hi else f"{self.lo},{self.hi}"

    def fundamental(self, rank: int) -> Weight:
        """Coordinates on the fundamental weights (a sum of Cartan rows)."""
        v = [0] * rank
        v[self.lo - 1] += 1
        v[self.hi - 1] += 1
        if self.lo > 1:
            v[self.lo - 2] -= 1
        if self.hi < rank:
            v[self.hi] -= 1
        return tuple(v)


@lru_cache(maxsize=None)
def positive_roots(rank: int) -> tuple[PositiveRoot, ...]:
    """Positive roots in PBW order: by height, then by starting index.

    For A5 this is 1,2,3,4,5,12,23,34,45,13,24,35,14,25,15.
    """
    return tuple(
        PositiveRoot(i, i + h - 1) for h in range(1, rank + 1) for i in range(1, rank - h + 2)
    )


def cartan_matrix(rank: int) -> list[list[int]]:
    return [
        [2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank)]
        for i in range(rank)
    ]


# -- epsilon realization ----------------------------------------------------


def _raw_epsilon(lam: Weight) -> list[int]:
    c = [0] * (len(lam) + 1)
    for i in range(len(lam) - 1, -1, -1):
        c[i] = c[i + 1] + lam[i]
    return c


def to_epsilon(lam: Weight) -> tuple[int, ...]:
    """Normalized epsilon coordinates: all entries >= 0, minimum entry 0."""
    c = _raw_epsilon(lam)
    m = min(c)
    return tuple(x - m for x in c)


def from_epsilon(c) -> Weight:
    return tuple(c[i] - c[i + 1] for i in range(len(c) - 1))


def root_coords(diff: Weight) -> tuple[int, ...] | None:
    """Express a weight as an integer combination of simple roots.

    Returns None when the weight is not in the root lattice.
    """
    c = _raw_epsilon(diff)
    s = sum(c)
    n1 = len(c)
    if s % n1:
        return None
    t = s // n1
    out = []
    acc = 0
    for x in c[:-1]:
        acc += x - t
        out.append(acc)
    return tuple(out)


def from_root_coords(beta) -> Weight:
    """Inverse of root_coords: apply the Cartan matrix."""
    n = len(beta)
    return tuple(
        2 * beta[i] - (beta[i - 1] if i > 0 else 0) - (beta[i + 1] if i < n - 1 else 0)
        for i in range(n)
    )


def sub(a: Weight, b: Weight) -> Weight:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Weight, b: Weight) -> Weight:
    return tuple(x + y for x, y in zip(a, b))


def scale(a: Weight, k: int) -> Weight:
    return tuple(k * x for x in a)


def is_dominant(lam: Weight) -> bool:
    return all(c >= 0 for c in lam)


def height(beta) -> int:
    return sum(beta)


# -- pairings and forms -----------------------------------------------------


def pairing(lam: Weight, alpha: PositiveRoot) -> int:
    """<lam, alpha^vee> for the root alpha_lo + ... + alpha_hi."""
    return sum(lam[alpha.lo - 1 : alpha.hi])


def scaled_inner_product(lam: Weight, mu: Weight) -> int:
    """(n+1) times the normalized form, as an integer."""
    a = _raw_epsilon(lam)
    b = _raw_epsilon(mu)
    n1 = len(a)
    return n1 * sum(x * y for x, y in zip(a, b)) - sum(a) * sum(b)


def inner_product(lam: Weight, mu: Weight) -> Fraction:
    """W-invariant form with (alpha, alpha) = 2 for every root."""
    return Fraction(scaled_inner_product(lam, mu), len(lam) + 1)


# -- Weyl group orbits ------------------------------------------------------


def _distinct_permutations(seq) -> Iterator[tuple[int, ...]]:
    a = sorted(seq)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1 :] = reversed(a[i + 1 :])


@lru_cache(maxsize=4096)
def _orbit(nu: Weight) -> tuple[Weight, ...]:
    return tuple(from_epsilon(c) for c in _distinct_permutations(to_epsilon(nu)))


def orbit(nu: Weight) -> frozenset[Weight]:
    """The W-orbit of a dominant weight (W = S_{n+1} on epsilon coordinates)."""
    if not is_dominant(nu):
        raise ValueError(f"orbit() expects a dominant weight, got {nu}")
    return frozenset(_orbit(tuple(nu)))


def orbit_list(nu: Weight) -> tuple[Weight, ...]:
    if not is_dominant(nu):
        raise ValueError(f"orbit() expects a dominant weight, got {nu}")
    return _orbit(tuple(nu))


def stabilizer_size(nu: Weight) -> int:
    out = 1
    c = to_epsilon(nu)
    for v in set(c):
        out *= factorial(c.count(v))
    return out


def orbit_size(nu: Weight) -> int:
    return factorial(len(nu) + 1) // stabilizer_size(nu)


def dominant_rep(lam: Weight) -> Weight:
    """The dominant weight in the W-orbit of an arbitrary weight."""
    return from_epsilon(sorted(_raw_epsilon(lam), reverse=True))


# -- dominance --------------------------------------------------------------


def dominance_leq(mu: Weight, lam: Weight) -> bool:
    """True iff lam - mu is a nonnegative integer combination of simple roots."""
    beta = root_coords(sub(lam, mu))
    return beta is not None and all(b >= 0 for b in beta)


def _dominated_partitions(c: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Partitions with len(c) parts (zeros allowed) dominated by c."""
    n1 = len(c)
    total = sum(c)
    prefix = [sum(c[: i + 1]) for i in range(n1)]
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec(i, rem, prev, acc):
        if i == n1:
            if rem == 0:
                out.append(tuple(cur))
            return
        # remaining parts are <= v, so v * (parts left) must cover rem
        left = n1 - i
        lo = -(-rem // left)
        for v in range(min(prev, rem, prefix[i] - acc), lo - 1, -1):
            cur.append(v)
            rec(i + 1, rem - v, v, acc + v)
            cur.pop()

    rec(0, total, total, 0)
    return out


@lru_cache(maxsize=1024)
def dominant_weights_below(lam: Weight) -> tuple[Weight, ...]:
    """All dominant mu <= lam, ordered so that matrices on it are lower-triangular.

    Order: height of lam - mu descending, ties broken lexicographically;
    lam itself comes last.
    """
    lam = tuple(lam)
    if not is_dominant(lam):
        raise ValueError(f"{lam} is not dominant")
    found = {from_epsilon(d) for d in _dominated_partitions(to_epsilon(lam))}
    return tuple(sorted(found, key=lambda mu: (-height(root_coords(sub(lam, mu))), mu)))


# -- dot action and linkage -------------------------------------------------


def dot_reflect(mu: Weight, alpha: PositiveRoot, m: int, p: int) -> Weight:
    """s_{alpha, mp} . mu = mu - (<mu + rho, alpha^vee> - m p) alpha."""
    k = pairing(mu, alpha) + alpha.height - m * p
    a = alpha.fundamental(len(mu))
    return tuple(x - k * y for x, y in zip(mu, a))


def same_dot_orbit(mu: Weight, lam: Weight, p: int) -> bool:
    """True iff mu lies in W_p . lam (affine Weyl group, dot action)."""
    rho = (1,) * len(lam)
    a = _raw_epsilon(add(lam, rho))
    b = _raw_epsilon(add(mu, rho))
    n1 = len(a)
    d = sum(a) - sum(b)
    if d % n1:
        return False
    t = d // n1
    return sorted((x - t) % p for x in a) == sorted(x % p for x in b)


def strongly_linked(mu: Weight, lam: Weight, p: int) -> bool:
    """mu up-arrow lam: a descending chain of affine dot-reflections from lam to mu.

    Intermediate weights may be non-dominant; they are confined to the
    interval [mu, lam] of the dominance order, which keeps the search finite.
    """
    mu, lam = tuple(mu), tuple(lam)
    if mu == lam:
        return True
    box = root_coords(sub(lam, mu))
    if box is None or any(b < 0 for b in box):
        return False
    if not same_dot_orbit(mu, lam, p):
        return False
    rank = len(lam)
    roots = positive_roots(rank)
    # search in root coordinates relative to lam: state = lam - state_beta
    start = (0,) * rank
    target = box
    seen = {start}
    queue = deque([start])
    lam_rho = tuple(x + 1 for x in lam)
    while queue:
        beta = queue.popleft()
        nu_rho = sub(lam_rho, from_root_coords(beta))
        for a in roots:
            r = pairing(nu_rho, a) % p
            k = r if r else p
            # stepping down by k*alpha; k runs through the residue class of <nu+rho, a>
            kmax = min(target[i - 1] - beta[i - 1] for i in range(a.lo, a.hi + 1))
            while k <= kmax:
                if k != 0:
                    nb = list(beta)
                    for i in range(a.lo - 1, a.hi):
                        nb[i] += k
                    nb = tuple(nb)
                    if nb == target:
                        return True
                    if nb not in seen:
                        seen.add(nb)
                        queue.append(nb)
                k += p
    return False


def dual_weight(lam: Weight) -> Weight:
    """-w_0 lam, which for type A reverses the coordinates."""
    return tuple(reversed(lam))


def steinberg_split(lam: Weight, q: int) -> tuple[Weight, Weight]:
    """lam = lam0 + q * lam1 with lam0 restricted."""
    return tuple(c % q for c in lam), tuple(c // q for c in lam)


def linkage_class_below(lam: Weight, p: int) -> tuple[Weight, ...]:
    """Dominant weights below lam in the dot orbit of lam, in matrix order."""
    return tuple(mu for mu in dominant_weights_below(lam) if same_dot_orbit(mu, lam, p))


def format_weight(lam: Weight, compact: bool | None = None) -> str:
    """'00200' style labels when every coordinate is one digit, else '0,10,2'."""
    if compact is None:
        compact = all(0 <= c <= 9 for c in lam)
    if compact:
        return "".join(str(c) for c in lam)
    return ",".join(str(c) for c in lam)


def parse_weight(text: str, rank: int | None = None) -> Weight:
    text = text.strip()
    if "," in text:
        parts = [int(t) for t in text.split(",") if t.strip() != ""]
    elif rank == 1 and text.lstrip("-").isdigit():
        parts = [int(text)]
    elif text.lstrip("-").isdigit() and (rank is None or len(text) == rank):
        parts = [int(ch) for ch in text]
    else:
        raise ValueError(f"cannot parse weight {text!r}")
    if rank is not None and len(parts) != rank:
        raise ValueError(f"weight {text!r} has {len(parts)} coordinates, expected {rank}")
    return tuple(parts)
