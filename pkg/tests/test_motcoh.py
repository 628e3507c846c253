from __future__ import annotations

import pytest

from carlitz.ff import ff_make
from carlitz.motcoh import (
    en_compute,
    epsilon_computed,
    epsilon_formula,
    epsilon_root_degrees,
    ext_structure,
    gn_compute,
    root_locus,
    squarefree_root,
)
from carlitz.polyring import BiPoly, PolyT, gcd_t
from carlitz.tate import TwistParams

F2 = ff_make(2)
F3 = ff_make(3)
F4 = ff_make(2, 2)


def params(n, F):
    return TwistParams.of(n, F.q, F.p)


def tpoly(F, degs):
    """Sum of t^d over ``degs`` with coefficient 1, or (d, c) pairs."""
    out = PolyT.zero(F)
    for d in degs:
        e, c = d if isinstance(d, tuple) else (d, 1)
        out = out + PolyT.monomial(F, e, c)
    return out


def _content_by_coefficients(e: BiPoly) -> PolyT:
    """Monic gcd of the theta-coefficients, one Euclid chain at a time."""
    g = PolyT.zero(e.field)
    for c in e.theta_coeffs().values():
        a, b = g, c
        while b:
            a, b = b, a % b
        g = a
    return g.monic()


def test_epsilon_formula_examples():
    assert epsilon_formula(params(2, F3), F3) == tpoly(F3, [3, (1, 2)])
    assert epsilon_formula(params(6, F2), F2) == tpoly(F2, [8, 2])
    assert epsilon_formula(params(1, F2), F2) == tpoly(F2, [2, 1])
    with pytest.raises(ValueError):
        epsilon_formula(params(3, F3), F3)


def test_worked_example_over_f3():
    p = params(2, F3)
    g = gn_compute(p, F3)
    assert g == BiPoly.theta(F3, 1, 2) + BiPoly.t(F3)
    e = en_compute(p, F3)
    # (t - theta)^2 (2 theta + t) - (2 theta^3 + t) expanded by hand
    assert e == BiPoly.from_polyt(tpoly(F3, [3, (1, 2)]))
    assert epsilon_computed(p, F3) == tpoly(F3, [3, (1, 2)])


def test_small_epsilons():
    assert epsilon_computed(params(1, F2), F2) == tpoly(F2, [2, 1])
    assert en_compute(params(2, F2), F2).deg_theta < 2


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_degree_bounds(F):
    for n in range(F.q - 1, 40, F.q - 1):
        p = params(n, F)
        g = gn_compute(p, F)
        assert g.deg_theta == p.m
        assert g.deg_t <= p.m
        assert en_compute(p, F, g).deg_theta < n


@pytest.mark.parametrize("F,n", [(F3, 2), (F3, 4), (F2, 1), (F2, 3), (F4, 3)])
def test_p_multiples(F, n):
    p1, pp = params(n, F), params(F.p * n, F)
    assert gn_compute(pp, F) == gn_compute(p1, F) ** F.p
    assert epsilon_computed(pp, F) == epsilon_computed(p1, F) ** F.p


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_content_matches_coefficient_gcd(F):
    for n in range(F.q - 1, 30, F.q - 1):
        e = en_compute(params(n, F), F)
        assert epsilon_computed(params(n, F), F) == _content_by_coefficients(e)


@pytest.mark.parametrize("F", [F2, F3, F4])
def test_epsilon_is_lcm_over_root_degrees(F):
    for n in range(F.q - 1, 50, F.q - 1):
        p = params(n, F)
        assert epsilon_computed(p, F) == epsilon_root_degrees(p, F), n


def test_closed_form_fails_for_21_over_f2():
    # 2^r - 1 divides 21 for r = 1, 2, 3 but not for r = 6 = lcm(1, 2, 3),
    # so eps_21 = lcm(t^2 - t, t^4 - t, t^8 - t), not t^64 - t
    p = params(21, F2)
    eps = epsilon_computed(p, F2)
    assert eps == tpoly(F2, [10, 9, 8, 3, 2, 1])
    assert eps.degree == 10
    assert epsilon_formula(p, F2) == tpoly(F2, [64, 1])
    assert eps != epsilon_formula(p, F2)
    rows = root_locus(p, F2, 6, eps=eps)
    assert [r.n_roots_exact_degree for r in rows] == [2, 2, 6, 0, 0, 0]
    assert all(r.consistent for r in rows)
    assert epsilon_computed(params(42, F2), F2) == eps**2


def test_closed_form_holds_when_ell_divides():
    # ell itself qualifies: formula and lcm agree
    for F in (F2, F3, F4):
        for n in range(F.q - 1, 61, F.q - 1):
            p = params(n, F)
            if n % (F.q**p.ell - 1) == 0:
                assert epsilon_formula(p, F) == epsilon_root_degrees(p, F)


def test_squarefree_root():
    f = tpoly(F2, [8, 2])  # (t^4 + t)^2
    root, k = squarefree_root(f)
    assert root == tpoly(F2, [4, 1]) and k == 1
    assert gcd_t(root, root.derivative()) == PolyT.one(F2)


def test_root_locus_examples():
    rows = root_locus(params(2, F3), F3, 2)
    assert rows[0].divides and rows[0].n_roots_exact_degree == 3 and rows[0].all_simple
    assert not rows[1].divides and rows[1].n_roots_exact_degree == 0
    rows = root_locus(params(6, F2), F2, 3)
    assert rows[2].n_roots_exact_degree == 0 and rows[2].n_roots_in_field == 2
    assert all(r.consistent and r.all_simple for r in rows)
    with pytest.raises(ValueError):
        root_locus(params(2, F3), F3, 9)
    with pytest.raises(ValueError):
        root_locus(params(3, F3), F3, 1)


@pytest.mark.parametrize("F", [F2, F3])
@pytest.mark.parametrize("n", [1, 2, 3, 6, 8])
def test_root_locus_grid(F, n):
    p = params(n, F)
    if not p.divisible:
        return
    rows = root_locus(p, F, 4)
    assert all(r.consistent and r.all_simple for r in rows)


def test_ext_structure():
    d = ext_structure(2, F3)
    assert d["case"] == "free_plus_torsion" and d["rank"] == 1 and d["epsilon_computed"] == "t^3 + 2*t" and d["match"]
    d = ext_structure(3, F3)
    assert d["case"] == "free" and d["rank"] == 3
    d = ext_structure(-5, F3)
    assert d["case"] == "trivial" and d["rank"] == 0
    assert ext_structure(-4, F3)["class_module_rank"] == 1
    assert ext_structure(0, F3)["case"] == "trivial"
    d = ext_structure(21, F2)
    assert not d["match"] and d["epsilon_root_degrees"] == d["epsilon_computed"]
