from __future__ import annotations

import json

import pytest

from carlitz.classmod import (
    PolyMatrix,
    bareiss_det,
    check_conjecture,
    fitting_data,
    gamma_matrix_oracle,
    mn_matrix,
    pn_poly,
    reduced_matrix,
)
from carlitz.ff import ff_make
from carlitz.polyring import PolyT, XPoly
from carlitz.tate import PrecisionError, TwistParams

F2 = ff_make(2)
F3 = ff_make(3)
F4 = ff_make(2, 2)
F5 = ff_make(5)


def params(n, F):
    return TwistParams.of(n, F.q, F.p)


def xpoly(F, coeffs):
    return XPoly.from_list(F, [PolyT.from_list(F, c) for c in coeffs])


def test_mn_matrix_examples():
    t3 = PolyT.monomial(F3, 3)
    zero, one = PolyT.zero(F3), PolyT.one(F3)
    assert mn_matrix(params(2, F3), F3) == PolyMatrix(F3, [[one]])
    assert mn_matrix(params(4, F3), F3) == PolyMatrix(F3, [[one, zero], [t3, zero]])
    assert mn_matrix(params(0, F3), F3).size == 0


def test_mn_entries_vanish_outside_range():
    for n in range(30):
        p = params(n, F3)
        M = mn_matrix(p, F3)
        for i in range(p.h):
            for j in range(p.h):
                k = i * 3 - j + p.delta
                if k < 0 or k > n:
                    assert not M[i, j]


def test_pn_examples():
    one_2x = xpoly(F3, [[1], [2]])
    assert pn_poly(params(2, F3), F3) == one_2x
    assert pn_poly(params(4, F3), F3) == one_2x
    assert pn_poly(params(0, F3), F3) == XPoly.one(F3)
    assert fitting_data(params(2, F3), F3) == (1, PolyT.constant(F3, 2))
    assert fitting_data(params(0, F3), F3) == (0, PolyT.one(F3))
    assert fitting_data(params(3, F3), F3)[0] == 0
    with pytest.raises(ValueError):
        pn_poly(params(2, F3), F3, method="cofactor")


def _cofactor_det(A):
    """Laplace expansion along the first row (tiny matrices only)."""
    if not A:
        return None
    if len(A) == 1:
        return A[0][0]
    total = None
    for j, a in enumerate(A[0]):
        minor = [row[:j] + row[j + 1 :] for row in A[1:]]
        term = a * _cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_bareiss_matches_cofactor(F):
    for n in range(1, 16):
        M = mn_matrix(params(n, F), F)
        if not 1 <= M.size <= 5:
            continue
        one = XPoly.one(F)
        A = [[(one if i == j else XPoly(F, {})) - XPoly(F, {1: e}) for j, e in enumerate(row)] for i, row in enumerate(M.rows)]
        assert bareiss_det(A, F) == _cofactor_det(A)


def test_bareiss_rejects_bad_pivot():
    A = [[XPoly(F3, {}), XPoly.one(F3)], [XPoly.one(F3), XPoly(F3, {})]]
    with pytest.raises(ValueError):
        bareiss_det(A, F3)


@pytest.mark.parametrize("F,top", [(F2, 30), (F3, 44), (F4, 60), (F5, 60)])
def test_reduced_matches_direct(F, top):
    for n in range(top + 1):
        p = params(n, F)
        assert reduced_matrix(p, F).size <= max(p.h, 0)
        assert pn_poly(p, F, "reduced") == pn_poly(p, F, "direct"), n


@pytest.mark.parametrize("F", [F2, F3, F4, F5])
def test_pn_constant_term(F):
    for n in range(0, 101, 7):
        assert pn_poly(params(n, F), F).coeff(0) == PolyT.one(F)


def test_gamma_examples():
    N = gamma_matrix_oracle(params(2, F3), F3)
    assert N == PolyMatrix(F3, [[PolyT.one(F3)]])
    N4 = gamma_matrix_oracle(params(4, F3), F3)
    assert N4.char_det() == xpoly(F3, [[1], [2]])
    with pytest.raises(ValueError):
        gamma_matrix_oracle(params(1, F3), F3)


def test_gamma_window_too_small():
    with pytest.raises(PrecisionError):
        gamma_matrix_oracle(params(8, F3), F3, T=1, floor=-3)


@pytest.mark.parametrize("F", [F2, F3])
def test_gamma_matches_pn_small(F):
    for n in range(F.q - 1, 9):
        p = params(n, F)
        assert gamma_matrix_oracle(p, F).char_det() == pn_poly(p, F), n


def test_report():
    rep = check_conjecture(2, F3)
    assert rep.equal and rep.rank == 1 and rep.lambda_ == "2" and rep.zeta_star == "2" and rep.rank_consistent
    d = rep.to_dict()
    assert list(d) == [
        "p", "s", "q", "n", "h", "delta", "P_coeffs", "Z_coeffs", "equal",
        "rank", "lambda", "h_n", "zeta_star", "rank_consistent", "timings_ms",
    ]
    json.dumps(d)
    assert "timings_ms" not in rep.to_dict(timings=False)
    rep3 = check_conjecture(3, F3)
    assert rep3.rank == 0 and rep3.equal
    rep0 = check_conjecture(0, F3)
    assert rep0.equal and rep0.P_coeffs == ["1"]
    assert check_conjecture(10, F3, method="direct").equal
