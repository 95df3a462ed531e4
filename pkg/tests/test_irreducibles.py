import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from charp.hyperalgebra.pbw import parse_word
from charp.irreducibles import (
    CharacterEngine,
    InvariantError,
    solve_decomposition,
    spanning_monomials,
)
from charp.roots import GroupConfig, dominance_leq, dominant_weights_below, orbit_size
from charp.store import DiskStore
from charp.weyl import DecompMatrix, char_dim, freudenthal_row, matrix_A, weyl_dim
from oracles import brute_restricted_monomials, weight_multiset

LAM = (2, 1, 2, 1, 2)

# hand-picked word sets for two weight spaces of 21212, rightmost letter applied first
S_NU = ["f_2 f_3", "f_23"]
S_MU = [
    "f_1 f_2 f_2 f_3 f_3 f_4", "f_1 f_2 f_2 f_3 f_34", "f_1 f_2 f_3 f_234", "f_1 f_2 f_23 f_34",
    "f_1 f_23 f_234", "f_1 f_2 f_23 f_3 f_4", "f_1 f_23 f_23 f_4", "f_12 f_2 f_3 f_3 f_4",
    "f_12 f_2 f_3 f_34", "f_12 f_23 f_34", "f_12 f_234 f_3", "f_12 f_23 f_3 f_4", "f_123 f_23 f_4",
    "f_123 f_2 f_3 f_4", "f_123 f_2 f_34", "f_123 f_234", "f_1234 f_23", "f_1234 f_2 f_3",
]


def test_spanning_monomial_examples():
    assert spanning_monomials((1, 0, 0, 0, 0), 5, 3) == [(1,) + (0,) * 14]
    got = spanning_monomials((1, 1, 0), 3, 3)
    assert len(got) == 2
    assert len(spanning_monomials((0, 1, 1, 0, 0), 5, 3)) == 2
    assert spanning_monomials((-1, 0, 0, 0, 0), 5, 3) == []


@settings(max_examples=40)
@given(st.lists(st.integers(0, 3), min_size=3, max_size=3), st.sampled_from([2, 3]))
def test_spanning_monomials_brute_force(beta, q):
    assert spanning_monomials(beta, 3, q) == brute_restricted_monomials(beta, 3, q)


def test_worked_weight_spaces(a5):
    assert a5.weight_space_dim(LAM, (3, 0, 1, 2, 2)) == 2
    assert a5.weight_space_dim(LAM, (2, 0, 1, 1, 3)) == 13
    assert a5.weight_space_dim(LAM, LAM) == 1


def test_hand_picked_word_sets_give_the_same_ranks(a5):
    s_nu = [parse_word(w, 5) for w in S_NU]
    s_mu = [parse_word(w, 5) for w in S_MU]
    assert a5.rank_task(LAM, (3, 0, 1, 2, 2), monomials=s_nu).dim == 2
    assert a5.rank_task(LAM, (2, 0, 1, 1, 3), monomials=s_mu).dim == 13


def test_weight_space_preconditions(a5):
    with pytest.raises(ValueError):
        a5.weight_space_dim((3, 0, 0, 0, 0), (1, 1, 0, 0, 0))
    with pytest.raises(ValueError):
        a5.weight_space_dim(LAM, (2, 2, 2, 2, 2))
    with pytest.raises(ValueError):
        a5.weight_space_dim(LAM, (-1, 2, 1, 1, 2))


def test_backends_and_workers_agree():
    nus = [(3, 0, 1, 2, 2), (2, 0, 1, 1, 3), (1, 0, 2, 0, 1)]
    ref = CharacterEngine(backend="numba").weight_space_dims(LAM, nus)
    assert CharacterEngine(backend="numpy").weight_space_dims(LAM, nus) == ref
    assert CharacterEngine(workers=2).weight_space_dims(LAM, nus) == ref
    assert CharacterEngine(memo=False).weight_space_dims(LAM, nus) == ref


def test_dim_L_examples(a5):
    assert a5.dim_L((0, 0, 0, 0, 0)) == 1
    assert a5.dim_L((0, 2, 0, 0, 0)) == 15 + 60 + 15
    assert a5.dim_L((2, 2, 2, 2, 2)) == weyl_dim((2, 2, 2, 2, 2))
    assert a5.ch((0, 2, 0, 0, 0)) == {(0, 2, 0, 0, 0): 1, (1, 0, 1, 0, 0): 1, (0, 0, 0, 1, 0): 1}


@pytest.mark.parametrize("lam", [(0, 0, 2, 0, 0), (1, 0, 0, 0, 1), (0, 1, 1, 0, 0), (1, 1, 0, 0, 1)])
def test_sandwich_between_zero_and_weyl(a5, lam):
    row = a5.restricted_ch(lam)
    weyl = freudenthal_row(lam)
    assert row[lam] == 1
    for nu, m in row.items():
        assert dominance_leq(nu, lam)
        assert 0 < m <= weyl[nu]


def test_steinberg_examples(a5):
    assert a5.steinberg_ch((1, 0, 0, 0, 1)) == a5.restricted_ch((1, 0, 0, 0, 1))
    twisted = a5.steinberg_ch((0, 0, 3, 0, 0))
    assert twisted == {tuple(3 * c for c in nu): m for nu, m in a5.restricted_ch((0, 0, 1, 0, 0)).items()}
    with pytest.raises(KeyError):
        a5.steinberg_ch((0, 2, 0, 0, 3), restricted_table={})


def test_steinberg_against_weight_multisets(a5):
    got = a5.steinberg_ch((0, 2, 0, 0, 3))
    low = weight_multiset(a5.restricted_ch((0, 2, 0, 0, 0)))
    high = weight_multiset({(0, 0, 0, 0, 3): 1})
    brute = {}
    for x, a in low.items():
        for y, b in high.items():
            s = tuple(i + j for i, j in zip(x, y))
            brute[s] = brute.get(s, 0) + a * b
    assert dict(weight_multiset(got)) == brute
    assert char_dim(got) == 90 * 6


def test_matrix_B_small(a5):
    B = a5.matrix_B((0, 0, 0, 0, 0))
    assert B.rows.tolist() == [[1]]
    B = a5.matrix_B((0, 2, 0, 0, 0))
    assert B.row((0, 2, 0, 0, 0)) == {(0, 2, 0, 0, 0): 1, (1, 0, 1, 0, 0): 1, (0, 0, 0, 1, 0): 1}
    assert B.index == dominant_weights_below((0, 2, 0, 0, 0))


def test_matrix_D_small_rows(a5):
    D = a5.matrix_D((0, 0, 2, 0, 0))
    assert D.index == ((0, 0, 0, 0, 0), (1, 0, 0, 0, 1), (0, 0, 2, 0, 0))
    assert D.rows[2].tolist() == [0, 1, 1]
    assert a5.matrix_D((0, 0, 2, 0, 1)).row((0, 0, 2, 0, 1)) == {(0, 0, 2, 0, 1): 1, (1, 0, 0, 0, 2): 1}
    assert a5.matrix_D((1, 0, 2, 0, 0)).row((1, 0, 2, 0, 0)) == {(1, 0, 2, 0, 0): 1, (2, 0, 0, 0, 1): 1}


def test_block_and_full_index_agree(a5):
    lam = (0, 0, 2, 0, 0)
    full = a5.matrix_D(lam, "full")
    block = a5.matrix_D(lam, "block")
    assert full.restrict(block.index) == block
    with pytest.raises(ValueError):
        a5.index_for(lam, "diagonal")


def test_solve_decomposition_rejects_negative_entries():
    idx = ((0,), (1,))
    A = DecompMatrix(idx, np.array([[1, 0], [1, 1]]))
    B = DecompMatrix(idx, np.array([[1, 0], [2, 1]]))
    with pytest.raises(InvariantError):
        solve_decomposition(A, B)
    D = solve_decomposition(A, DecompMatrix(idx, np.array([[1, 0], [1, 1]])))
    assert D.rows.tolist() == [[1, 0], [0, 1]]


@pytest.mark.parametrize("rank,p", [(1, 3), (2, 3), (2, 2), (3, 2)])
def test_characters_sum_to_dims_and_A_equals_DB(rank, p):
    eng = CharacterEngine(GroupConfig(rank, p))
    for lam in eng.config.restricted_weights():
        ch = eng.ch(lam)
        assert char_dim(ch) <= weyl_dim(lam)
        D = eng.matrix_D(lam, "full")
        B = eng.matrix_B(lam)
        assert np.array_equal(D.rows @ B.rows, matrix_A(lam).rows)


def test_resume_from_stored_dims(tmp_path):
    lam = (0, 1, 1, 0, 0)
    first = CharacterEngine(store=DiskStore(tmp_path))
    nus = dominant_weights_below(lam)
    for nu in nus[: len(nus) // 2]:
        first.weight_space_dim(lam, nu)
    second = CharacterEngine(store=DiskStore(tmp_path))
    row = second.restricted_ch(lam)
    assert row == CharacterEngine().restricted_ch(lam)
    third = CharacterEngine(store=DiskStore(tmp_path))
    assert third.restricted_ch(lam) == row
    assert third.counter.applies == 0
