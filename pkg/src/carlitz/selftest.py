"""Quick consistency checks on small cases, run by ``carlitz selftest``."""

from __future__ import annotations

from .classmod import gamma_matrix_oracle, pn_poly
from .ff import ff_make
from .motcoh import en_compute, epsilon_computed, epsilon_formula, gn_compute
from .polyring import BiPoly, PolyT, XPoly
from .tate import TwistParams
from .zeta import Z_direct, Z_goss


def _checks():
    F3 = ff_make(3)
    t = PolyT.monomial(F3, 1)
    one_2x = XPoly.from_list(F3, [PolyT.one(F3), PolyT.constant(F3, 2)])
    p2 = TwistParams.of(2, 3)
    yield "Z(x,-2) = 1 + 2x over F_3", Z_goss(2, F3) == one_2x
    yield "P_2(x) = 1 + 2x over F_3", pn_poly(p2, F3) == one_2x
    yield "g_2 = 2 theta + t over F_3", gn_compute(p2, F3) == BiPoly.theta(F3, 1, 2) + BiPoly.t(F3)
    yield "e_2 = t^3 + 2t over F_3", en_compute(p2, F3) == BiPoly.from_polyt(t**3 + t.scale(2))
    yield "eps_2 matches the closed form over F_3", epsilon_computed(p2, F3) == epsilon_formula(p2, F3)
    p4 = TwistParams.of(4, 3)
    yield "det(I - xN) = P_4 over F_3", gamma_matrix_oracle(p4, F3).char_det() == pn_poly(p4, F3)
    for p, s, top in ((2, 1, 8), (3, 1, 8), (2, 2, 6), (5, 1, 8)):
        F = ff_make(p, s)
        yield f"enumeration = recursion for q={F.q}, n<={top}", all(Z_direct(n, F) == Z_goss(n, F) for n in range(top + 1))
        yield f"P_n = Z(x,-n) for q={F.q}, n<=30", all(pn_poly(TwistParams.of(n, F.q, p), F) == Z_goss(n, F) for n in range(31))


def run_selftest(say=print) -> bool:
    ok = True
    for name, passed in _checks():
        say(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok = ok and passed
    return ok
