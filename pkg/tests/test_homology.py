"""Integer matrices, Smith reduction, cokernels and chain homology."""
from __future__ import annotations

import pytest

from krtorus.homology import (CokernelInvariants, IntMatrix, cellular_homology,
                              chain_homology, cokernel_invariants, h1_action,
                              smith_normal_form, unimodular_inverse)
from krtorus.symmetry import identity_automorphism

import oracles


def snf_ok(rows):
    a = IntMatrix.from_rows(rows)
    res = smith_normal_form(a)
    assert res.u.is_unimodular() and res.v.is_unimodular()
    assert (res.u @ a @ res.v).to_lists() == res.d.to_lists()
    diag = res.diagonal
    for i in range(len(diag) - 1):
        if diag[i + 1]:
            assert diag[i] and diag[i + 1] % diag[i] == 0
    return res


def test_snf_frozen_cases():
    assert snf_ok([[6, 0], [0, 2]]).diagonal == (2, 6)
    assert snf_ok([[2, 2], [0, 4]]).diagonal == (2, 4)
    assert snf_ok([[2, 0], [1, 2]]).diagonal == (1, 4)
    assert snf_ok([[1, 2, 3], [4, 5, 6], [7, 8, 9]]).diagonal == (1, 3, 0)
    assert snf_ok([[0, 0], [0, 0]]).diagonal == (0, 0)
    assert snf_ok([[5]]).diagonal == (5,)


def test_snf_rectangular():
    assert snf_ok([[2, 4, 4]]).diagonal == (2,)
    assert snf_ok([[1], [2], [3]]).diagonal == (1,)
    res = snf_ok([[2, 0], [0, 3], [0, 0]])
    assert res.diagonal == (1, 6)
    assert res.rank == 2


def test_snf_negative_entries():
    res = snf_ok([[-2, 0], [0, -3]])
    assert res.diagonal == (1, 6)
    assert all(d >= 0 for d in res.diagonal)


def test_det_and_identity():
    a = IntMatrix.from_rows([[2, 2], [0, 4]])
    assert a.det() == 8
    i3 = IntMatrix.identity(3)
    assert i3.det() == 1 and i3.is_unimodular()
    assert (a @ IntMatrix.identity(2)).to_lists() == a.to_lists()


def test_unimodular_inverse():
    u = IntMatrix.from_rows([[2, 1], [1, 1]])
    w = unimodular_inverse(u)
    assert (u @ w).to_lists() == IntMatrix.identity(2).to_lists()
    assert (w @ u).to_lists() == IntMatrix.identity(2).to_lists()
    with pytest.raises(ValueError):
        unimodular_inverse(IntMatrix.from_rows([[2, 0], [0, 1]]))


def test_cokernel_against_oracle_spot():
    for rows in ([[2, 0], [0, 4]], [[2, 2], [0, 4]], [[3, 1], [0, 3]],
                 [[1, 0], [0, 1]], [[4, 2], [2, 4]]):
        inv = cokernel_invariants(IntMatrix.from_rows(rows))
        assert inv.free_rank == 0
        assert inv.pair_nm() == oracles.cokernel_pair(rows)


def test_cokernel_with_free_part():
    inv = cokernel_invariants(IntMatrix.from_rows([[2, 0], [0, 0]]))
    assert inv.free_rank == 1
    assert inv.factors == (2,)


def test_pair_nm_requires_two_factors_dividing():
    inv = CokernelInvariants(diagonal=(2, 6), free_rank=0)
    assert inv.pair_nm() == (2, 6)
    assert CokernelInvariants((1, 1), 0).pair_nm() == (1, 1)
    assert CokernelInvariants((1, 5), 0).pair_nm() == (1, 5)
    with pytest.raises(ValueError):
        CokernelInvariants((2, 3, 5), 0).pair_nm()


def test_chain_homology_circle():
    # one 0-cell, one 1-cell, no 2-cells: d1 = 0
    d1 = IntMatrix.zeros(1, 1)
    d2 = IntMatrix.zeros(1, 0)
    h = chain_homology(d1, d2)
    assert h.betti == (1, 1, 0)
    assert h.torsion == ((), (), ())


def test_chain_homology_klein_bottle():
    # standard square-identification CW structure
    d1 = IntMatrix.zeros(1, 2)
    d2 = IntMatrix.from_rows([[2], [0]])
    h = chain_homology(d1, d2)
    assert h.betti == (1, 1, 0)
    assert h.torsion == ((), (2,), ())


def test_chain_homology_torus_square():
    d1 = IntMatrix.zeros(1, 2)
    d2 = IntMatrix.zeros(2, 1)
    h = chain_homology(d1, d2)
    assert h.betti == (1, 2, 1)
    assert h.torsion == ((), (), ())


def test_cellular_homology_of_partitions(stage):
    for name in ("two-cell", "z2-sym", "z2xz2-sym"):
        h = cellular_homology(stage(name).part)
        assert h.betti == (1, 2, 1)
        assert h.torsion == ((), (), ())


def test_h1_action_identity(stage):
    st = stage("z2xz2-sym")
    a = identity_automorphism(st.part)
    assert h1_action(st.part, a).to_lists() == IntMatrix.identity(2).to_lists()
