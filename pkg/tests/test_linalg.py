from fractions import Fraction

import pytest

from corpus import cyclic_sts, sts_corpus
from tsflow.constructions import exists_with_flow
from tsflow.design import affine_sts9, check_admissible, incidence_matrix, make_design
from tsflow.errors import DegenerateOrder
from tsflow.linalg import (
    RationalMatrix,
    bound_flow,
    determinant,
    echelon,
    in_span,
    is_symmetric_noflow,
    nullspace_basis,
    rank,
)


def fano():
    return cyclic_sts(7)


def ts42():
    return make_design(4, 2, 3, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])


def test_fano_is_nonsingular():
    m = incidence_matrix(fano())
    assert nullspace_basis(m) == []
    assert abs(determinant(m)) == 24


def test_equal_columns_give_one_kernel_vector():
    assert nullspace_basis([[1, 1]] * 3) == [(1, -1)]


def test_ts42_is_nonsingular():
    assert nullspace_basis(incidence_matrix(ts42())) == []


def test_symmetric_noflow():
    assert is_symmetric_noflow(fano())
    assert is_symmetric_noflow(ts42())
    assert is_symmetric_noflow(make_design(3, 1, 3, [(0, 1, 2)]))
    assert not is_symmetric_noflow(exists_with_flow(6, 4).design)


def test_rank_nullity():
    m = incidence_matrix(affine_sts9())
    assert rank(m) + len(nullspace_basis(m)) == 12


def test_elimination_on_rationals():
    rows, piv = echelon(RationalMatrix.of([[Fraction(1, 2), 1], [1, 2]]))
    assert piv == [0]


def test_determinant_known():
    assert determinant([[2, 0, 1], [1, 3, 2], [1, 1, 2]]) == 6
    assert determinant([[2, 0, 1], [1, 3, 2], [1, 1, 1]]) == 0


def test_flow_lies_in_nullspace():
    fd = exists_with_flow(13, 2)
    basis = nullspace_basis(incidence_matrix(fd.design))
    assert in_span(fd.flow.weights, basis)
    assert not in_span([1] * fd.design.b, basis)


def test_bound_flow_sts9():
    sol = bound_flow(affine_sts9())
    assert sol.entry_set == frozenset({-3, 9, 1, 5})
    assert (sol.a, sol.b_val) == (9, -3)
    w = sol.flow.weights
    anchor = set(affine_sts9().blocks[0])
    for blk, x in zip(affine_sts9().blocks, w):
        meet = len(anchor & set(blk))
        assert x == {3: -3, 1: 1, 0: -3}[meet]


def test_bound_flow_sts13():
    sol = bound_flow(cyclic_sts(13))
    assert sol.entry_set == frozenset({-15, -3, 15, 3, 9})


@pytest.mark.parametrize("anchor", [0, 5, 11])
def test_bound_flow_any_anchor(anchor):
    d = cyclic_sts(13)
    sol = bound_flow(d, anchor)
    m = RationalMatrix.of(incidence_matrix(d))
    assert all(x == 0 for x in m @ sol.flow.weights)
    assert sol.flow.weights[anchor] == -sol.t // 3


@pytest.mark.parametrize("v", [3, 4, 7])
def test_bound_flow_degenerate(v):
    d = {3: make_design(3, 1, 3, [(0, 1, 2)]), 4: ts42(), 7: fano()}[v]
    with pytest.raises(DegenerateOrder):
        bound_flow(d)


def _bound_ok(d):
    sol = bound_flow(d)
    x = sol.flow.weights
    m = RationalMatrix.of(incidence_matrix(d))
    half = Fraction(d.lam * (d.v - 3), 2)
    return (all(e == 0 for e in m @ x) and len(set(x)) <= 5
            and set(x) <= sol.entry_set and max(map(abs, x)) <= half * half)


def test_bound_flow_on_sts_corpus():
    assert all(_bound_ok(d) for d in sts_corpus().values())


@pytest.mark.parametrize("v,lam", [(5, 3), (6, 4), (8, 6), (10, 4), (12, 2), (13, 5), (16, 2), (21, 3)])
def test_bound_flow_higher_index(v, lam):
    assert check_admissible(v, lam)
    assert _bound_ok(exists_with_flow(v, lam).design)
