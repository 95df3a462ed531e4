import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from charp.hyperalgebra.memo import pack_vector, unpack_vector
from charp.hyperalgebra.pbw import (
    binomial_table,
    build_x,
    commutator,
    format_vector,
    lucas_binomial,
    monomial_weight,
    parse_word,
    root_table,
    word_weight,
)
from charp.hyperalgebra.straighten import Straightener, straighten
from charp.kernels import _numpy, get_backend
from charp.roots import PositiveRoot

N5 = root_table(5).size
q3_monomial = st.lists(st.integers(0, 2), min_size=N5, max_size=N5).map(tuple)


def test_commutator_convention():
    assert commutator((2, 2), (3, 3)) == (PositiveRoot(2, 3), 1)
    assert commutator((3, 3), (2, 2)) == (PositiveRoot(2, 3), -1)
    assert commutator((1, 2), (3, 4)) == (PositiveRoot(1, 4), 1)
    assert commutator((1, 2), (2, 3)) is None
    assert commutator((1, 1), (3, 3)) is None


@given(st.integers(0, 30), st.integers(0, 30))
def test_lucas_binomial(a, b):
    from math import comb

    assert lucas_binomial(a, b, 3) == comb(a + b, a) % 3
    assert lucas_binomial(a, b, 2) == comb(a + b, a) % 2


def test_binomial_table():
    t = binomial_table(3, 3)
    assert t.tolist() == [[1, 1, 1], [1, 2, 0], [1, 0, 0]]


def test_straighten_examples():
    s = Straightener(5, 3)
    w = parse_word("f_2 f_1", 5)
    assert format_vector(s.straighten(w), 5) == "2*f_12 + f_1 f_2"
    w = parse_word("f_2^(2) f_1^(2)", 5)
    assert format_vector(s.straighten(w), 5) == "f_12^(2) + 2*f_1 f_2 f_12 + f_1^(2) f_2^(2)"
    assert s.straighten(parse_word("f_1^(2) f_1^(2)", 5)) == {}
    assert straighten(parse_word("f_1 f_2", 5), 5, 3) == {tuple(int(i in (0, 1)) for i in range(N5)): 1}


def test_build_x_matches_the_reference_word():
    listed = parse_word("f_2 f_1 f_3 f_2 f_4^(2) f_3^(2) f_2 f_1 f_5^(2) f_4^(2) f_3 f_2", 5)
    ours = build_x((0, 1, 0, 1, 0))
    assert word_weight(ours, 5) == word_weight(listed, 5)
    s = Straightener(5, 3)
    assert s.straighten(ours) == s.straighten(listed)


@pytest.mark.parametrize("lam", [(2, 1, 2, 1, 2), (0, 0, 1, 1, 1), (1, 0, 0, 0, 1), (2, 2, 2, 2, 2)])
def test_x_is_restricted_and_homogeneous(lam):
    shift = tuple(2 - c for c in lam)
    v = Straightener(5, 3).straighten(build_x(shift))
    assert v
    assert max(max(m) for m in v) <= 2
    weights = {monomial_weight(m, 5) for m in v}
    assert weights == {word_weight(build_x(shift), 5)}


@given(st.dictionaries(q3_monomial, st.integers(1, 2), max_size=20))
def test_pack_round_trip(v):
    assert unpack_vector(pack_vector(v, 3), N5, 3) == v


def _reference_apply(a, e, v):
    return Straightener(5, 3).apply_letter(a, e, v)


@pytest.mark.parametrize("backend", ["numba", "numba-cached", "numpy"])
@given(data=st.data())
def test_kernels_agree_with_reference(backend, data):
    kern = get_backend(backend.split("-")[0])
    t = root_table(5)
    v = data.draw(st.dictionaries(q3_monomial, st.integers(1, 2), min_size=1, max_size=12))
    a = data.draw(st.integers(0, N5 - 1))
    e = data.draw(st.integers(1, 2))
    keys, coefs = pack_vector(v, 3)
    args = (a, e, keys, coefs, t.comm_root.copy(), t.comm_sign.copy(), binomial_table(3, 3), 3, 3)
    if backend == "numpy":
        got = kern.apply_letter(*args)
    else:
        cache = kern.make_push_cache(slots_log2=8, pool=4096) if backend == "numba-cached" else None
        got = kern.apply_letter(*args, cache, kern.make_workspace(N5))
    # restricted inputs stay restricted: every exponent overflow carries a binomial divisible by p
    assert unpack_vector(got, N5, 3) == _reference_apply(a, e, v)


def test_full_push_cache_still_answers():
    from charp.kernels import _numba

    t = root_table(5)
    cache = _numba.make_push_cache(slots_log2=2, pool=64)
    ws = _numba.make_workspace(N5)
    rng = random.Random(3)
    binom = binomial_table(3, 3)
    for _ in range(30):
        v = {tuple(rng.randint(0, 2) for _ in range(N5)): 1 for _ in range(5)}
        keys, coefs = pack_vector(v, 3)
        a, e = rng.randrange(N5), rng.randint(1, 2)
        got = _numba.apply_letter(a, e, keys, coefs, t.comm_root.copy(), t.comm_sign.copy(), binom, 3, 3,
                                  cache, ws)
        want = _reference_apply(a, e, v)
        assert unpack_vector(got, N5, 3) == want


@given(st.lists(st.tuples(st.integers(0, 10 ** 6), st.integers(0, 2)), max_size=200))
def test_merge_sorted_backends(items):
    from charp.kernels import _numba

    keys = np.array([k for k, _ in items], dtype=np.int64)
    coefs = np.array([c for _, c in items], dtype=np.int64)
    a = _numba.merge_sorted(keys, coefs, 3)
    b = _numpy.merge_sorted(keys, coefs, 3)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    acc = {}
    for k, c in items:
        acc[k] = (acc.get(k, 0) + c) % 3
    assert dict(zip(a[0].tolist(), a[1].tolist())) == {k: c for k, c in acc.items() if c}


@pytest.mark.parametrize("p", [2, 3, 5])
def test_reduce_rows_backends_agree(p):
    from charp.kernels import _numba

    rng = np.random.default_rng(p)
    rows = rng.integers(0, p, size=(30, 25)).astype(np.uint8)
    rows[10] = rows[3]
    ranks = []
    for kern in (_numba, _numpy):
        piv = np.zeros((25, p - 1, 25), dtype=np.uint8)
        pc = np.zeros(25, dtype=np.int64)
        r = kern.reduce_rows(rows[:15], piv, pc, 0, p, 25)
        r = kern.reduce_rows(rows[15:], piv, pc, r, p, 25)
        ranks.append(r)
    from charp.verification.oracle import rank_mod_p

    assert ranks[0] == ranks[1] == rank_mod_p(rows.astype(np.int64), p)


def test_backend_selection(monkeypatch):
    monkeypatch.setenv("CHARP_BACKEND", "numpy")
    assert get_backend() is _numpy
    with pytest.raises(ValueError):
        get_backend("fortran")


def test_root_labels_round_trip():
    from charp.hyperalgebra.pbw import parse_root

    for r in root_table(5).roots:
        assert parse_root(r.label) == r
    assert parse_root("234") == PositiveRoot(2, 4)
    assert parse_root("9,11") == PositiveRoot(9, 11)
    for bad in ("13", "x", "0"):
        with pytest.raises(ValueError):
            parse_root(bad)
