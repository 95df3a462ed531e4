import json
import random
import shutil
from itertools import product

import numpy as np
import pytest

from charp.irreducibles import CharacterEngine
from charp.roots import GroupConfig, dual_weight, linkage_class_below
from charp.verification import golden as golden_mod
from charp.verification.checks import (
    check_linkage,
    check_positivity,
    check_symmetry_dims,
    check_symmetry_factors,
    compare_with_golden,
)
from charp.verification.golden import (
    GoldenFormatError,
    golden_rows,
    irreducible_list,
    irreducible_set,
    load_golden_tables,
    parse_table,
)
from charp.verification.oracle import TensorPower, gram_dim_L, rank_mod_p
from charp.verification.runner import verify_weights
from charp.verification.soundness import random_word, straightening_mismatches
from charp.weyl import DecompMatrix

# -- golden tables ---------------------------------------------------------------


def test_tables_load_with_consistent_rows():
    tables = load_golden_tables()
    assert sorted({tid.split(".")[0] for tid in tables}, key=int) == [str(i) for i in range(1, 10)]
    for t in tables.values():
        for k, (lam, entries) in enumerate(t.rows):
            assert lam == t.weights[k] and len(entries) == k + 1 and entries[-1] == 1


def test_table_examples():
    t1 = load_golden_tables()["1.1"]
    lam, entries = t1.rows[2]
    assert lam == (0, 0, 2, 0, 0) and entries == (0, 1, 1)
    g = golden_rows()
    src, row = g.get((1, 0, 2, 0, 0))
    assert src.endswith("*")
    assert {k: v for k, v in row.items() if v} == {(1, 0, 2, 0, 0): 1, (2, 0, 0, 0, 1): 1}
    assert g.conflicts == []


def test_block_weights_lie_in_the_linkage_class_of_the_top():
    for t in load_golden_tables().values():
        cls = set(linkage_class_below(t.weights[-1], 3))
        assert set(t.weights) <= cls, t.table_id


def test_tables_and_irreducible_list_cover_every_restricted_weight():
    covered = set()
    for t in load_golden_tables().values():
        covered |= {w for w in t.weights if max(w) < 3}
    covered |= {dual_weight(w) for w in covered} | irreducible_set()
    assert covered == set(product(range(3), repeat=5))


def test_irreducible_list_is_deduplicated_and_closed_under_duality():
    listed = irreducible_list()
    assert len(listed) == 13 and len(set(listed)) == 12
    closed = irreducible_set()
    assert len(closed) == 13
    assert (2, 2, 2, 2, 1) in closed and (2, 2, 2, 2, 1) not in listed


@pytest.mark.parametrize("mutate,where", [
    (lambda d: d["rows"][1]["entries"].append(0), "row 1"),
    (lambda d: d["rows"][1].__setitem__("entries", [1, 2]), "row 1 column 1"),
    (lambda d: d["rows"][0]["entries"].__setitem__(0, -1), "row 0 column 0"),
    (lambda d: d["rows"][2].__setitem__("lambda", [9, 9, 9, 9, 9]), "row 2"),
    (lambda d: d.pop("weights"), "missing field"),
])
def test_malformed_tables_report_their_position(mutate, where):
    doc = load_golden_tables()["4.2"].to_document()
    mutate(doc)
    with pytest.raises(GoldenFormatError, match=where):
        parse_table(doc, "table_4_2.json")


def test_bad_json_reports_line(tmp_path):
    src = golden_mod._data_dir()
    for f in src.glob("*.json"):
        shutil.copy(f, tmp_path / f.name)
    (tmp_path / "table_4_2.json").write_text('{"table_id": "4.2",\n "weights": [}')
    with pytest.raises(GoldenFormatError, match="table_4_2.json: line 2"):
        load_golden_tables(tmp_path)


def test_to_document_round_trip():
    for t in load_golden_tables().values():
        assert parse_table(json.loads(json.dumps(t.to_document()))) == t


# -- checks ----------------------------------------------------------------------


def _matrix(index, rows):
    return DecompMatrix(tuple(index), np.array(rows, dtype=np.int64))


def test_check_reports_flag_violations():
    idx = [(0, 0, 0, 0, 0), (0, 1, 0, 0, 0)]
    bad = _matrix(idx, [[1, 0], [-1, 1]])
    assert not check_positivity(idx[1], bad).ok
    # L(0) cannot occur in H^0(01000): different linkage class
    r = check_linkage(idx[1], _matrix(idx, [[1, 0], [1, 1]]), 3)
    assert not r.ok and "01000" in r.violations[0]
    assert check_linkage(idx[1], _matrix(idx, [[1, 0], [0, 1]]), 3).ok


def test_factor_symmetry_needs_the_dual_matrix():
    idx = [(0, 0, 0, 0, 0), (1, 0, 0, 0, 1)]
    D = _matrix(idx, [[1, 0], [1, 1]])
    assert check_symmetry_factors((1, 0, 0, 0, 1), D).ok
    with pytest.raises(ValueError):
        check_symmetry_factors((0, 0, 2, 0, 1), D)


def test_compare_with_golden_statuses(a5):
    g = golden_rows()
    D = a5.matrix_D((0, 0, 2, 0, 0))
    assert compare_with_golden((0, 0, 2, 0, 0), D, g).status == "pass"
    assert compare_with_golden((2, 2, 2, 2, 2), a5.matrix_D((2, 2, 2, 2, 2)), g).status == "pass"
    wrong = DecompMatrix(D.index, D.rows.copy())
    wrong.rows[2, 0] = 1
    r = compare_with_golden((0, 0, 2, 0, 0), wrong, g)
    assert r.status == "fail" and "reference 0, computed 1" in r.violations[0]
    a3 = CharacterEngine(GroupConfig(3, 3))
    assert compare_with_golden((1, 0, 1), a3.matrix_D((1, 0, 1)), g).status == "not covered"


def test_symmetry_of_dims_small(a5):
    assert check_symmetry_dims(a5, (0, 0, 0, 0, 0)).ok
    assert check_symmetry_dims(a5, (0, 2, 0, 0, 0)).ok
    a = a5.restricted_ch((0, 2, 0, 0, 0))
    b = a5.restricted_ch((0, 0, 0, 2, 0))
    assert b == {dual_weight(nu): m for nu, m in a.items()}


@pytest.mark.parametrize("rank", [2, 3])
def test_all_checks_pass_on_small_ranks(rank):
    eng = CharacterEngine(GroupConfig(rank, 3))
    reports = verify_weights(eng, eng.config.restricted_weights(), None)
    assert reports and all(r.ok for r in reports), [r.line() for r in reports if not r.ok]


def test_sign_mutation_is_caught(monkeypatch):
    from charp.hyperalgebra import memo, pbw

    orig = pbw.commutator

    def flipped(a, b):
        r = orig(a, b)
        return (r[0], 1) if r is not None else r

    monkeypatch.setattr(pbw, "commutator", flipped)
    pbw.root_table.cache_clear()
    monkeypatch.setattr(memo, "_push_caches", {})
    try:
        eng = CharacterEngine(GroupConfig(3, 3))
        reports = verify_weights(eng, eng.config.restricted_weights(), None)
        assert any(not r.ok for r in reports)
        rng = random.Random(0)
        words = [[(1, 1), (0, 1)]] + [random_word(rng, 2, 4, 1) for _ in range(30)]
        tp = TensorPower(2, 3)
        assert sum(straightening_mismatches(w, 2, 3, 3, tp) for w in words) > 0
    finally:
        pbw.root_table.cache_clear()


# -- oracles ---------------------------------------------------------------------


def test_rank_mod_p():
    assert rank_mod_p(np.array([[1, 2], [2, 4]]), 3) == 1
    assert rank_mod_p(np.array([[3, 0], [0, 1]]), 3) == 1
    assert rank_mod_p(np.eye(4, dtype=np.int64), 2) == 4


def test_gram_oracle_examples():
    assert [gram_dim_L(1, 3, (a,)) for a in range(3)] == [1, 2, 3]
    assert gram_dim_L(2, 3, (1, 1)) == 7
    assert gram_dim_L(2, 2, (1, 1)) == 8
    with pytest.raises(ValueError):
        gram_dim_L(3, 3, (1, 0, 0))


def test_gram_oracle_cross_checks_a_non_restricted_weight(a2):
    assert gram_dim_L(2, 3, (3, 0)) == a2.dim_L((3, 0))


def test_tensor_power_relations():
    tp = TensorPower(2, 2)
    f1, f2, f12 = (tp.divided_power(r, 1) for r in [(1, 1), (2, 2), (1, 2)])
    assert ((f1 @ f2 - f2 @ f1) - f12).nnz == 0
    # f_1^(2) on V (x) V is the product of the two single-factor actions
    assert (tp.divided_power((1, 1), 2) * 2 - f1 @ f1).nnz == 0
    with pytest.raises(ValueError):
        TensorPower(5, 8)


def test_straightening_matches_matrices_small():
    rng = random.Random(11)
    tp = TensorPower(3, 4)
    for _ in range(40):
        assert straightening_mismatches(random_word(rng, 3), 3, 4, 3, tp) == 0
