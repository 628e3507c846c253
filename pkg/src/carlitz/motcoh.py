"""Positive twists: the polynomials g_n, e_n and the torsion polynomial eps_n.

For (q-1) | n the polynomial part g_n of omega^n gives
e_n = (t - theta)^n g_n - g_n^(1), and eps_n is the largest F_q[t]-divisor of
e_n.  It is compared against the closed form (t^(q^ell) - t)^(p^c) and
against the lcm of the t^(q^r) - t over the r with (q^r - 1) | n.
"""

from __future__ import annotations

from dataclasses import dataclass

from .classmod import fitting_data
from .ff import FieldSpec, ext_field
from .polyring import BiPoly, PolyT, content_t, gcd_t
from .tate import TwistParams, decompose, ell_of, omega_pow, t_minus_theta_pow

__all__ = [
    "ell_of",
    "epsilon_formula",
    "epsilon_root_degrees",
    "gn_compute",
    "en_compute",
    "epsilon_computed",
    "squarefree_root",
    "RootLocusRow",
    "root_locus",
    "ext_structure",
]


def _require_divisible(params: TwistParams) -> None:
    if params.n < 1 or not params.divisible:
        raise ValueError(f"needs n >= 1 with (q-1) | n, got n={params.n}, q={params.q}")


def epsilon_formula(params: TwistParams, field: FieldSpec) -> PolyT:
    """(t^(q^ell) - t)^(p^c)."""
    _require_divisible(params)
    base = PolyT.monomial(field, field.q**params.ell) - PolyT.monomial(field, 1)
    return base ** (field.p**params.c)


def epsilon_root_degrees(params: TwistParams, field: FieldSpec) -> PolyT:
    """lcm over {r : (q^r - 1) | n} of (t^(q^r) - t), raised to p^c.

    This is the polynomial whose roots are the zeta of exact degree r with
    (q^r - 1) | n.  It agrees with :func:`epsilon_formula` exactly when ell
    itself belongs to that set of r.
    """
    _require_divisible(params)
    q = field.q
    acc = PolyT.one(field)
    r = 1
    while q**r - 1 <= params.n:
        if params.n % (q**r - 1) == 0:
            f = PolyT.monomial(field, q**r) - PolyT.monomial(field, 1)
            acc = (acc * f) // gcd_t(acc, f)
        r += 1
    return acc ** (field.p**params.c)


def gn_compute(params: TwistParams, field: FieldSpec) -> BiPoly:
    """The polynomial part of omega^n.

    Each factor of omega^n lowers the theta-degree by at least one per power
    of t, so the part of theta-degree >= 0 lives in t-degree <= m and the
    window (T, floor) = (m, 0) already determines it exactly.
    """
    _require_divisible(params)
    w = omega_pow(params, field, T=params.m, floor=0)
    g, _ = decompose(w)
    return g


def en_compute(params: TwistParams, field: FieldSpec, g: BiPoly | None = None) -> BiPoly:
    """e_n = (t - theta)^n g_n - g_n^(1)."""
    if g is None:
        g = gn_compute(params, field)
    return t_minus_theta_pow(field, params.n) * g - g.twist()


def epsilon_computed(params: TwistParams, field: FieldSpec, e: BiPoly | None = None) -> PolyT:
    """Monic generator of the largest F_q[t]-divisor of e_n."""
    if e is None:
        e = en_compute(params, field)
    return content_t(e)


def squarefree_root(f: PolyT) -> tuple[PolyT, int]:
    """(g, k) with f = g^(p^k) and g' != 0 (or g constant)."""
    k = 0
    while f.degree > 0 and not f.derivative():
        f = f.pth_root()
        k += 1
    return f, k


def _degree_over(ext: FieldSpec, a: int, s: int) -> int:
    """Smallest j >= 1 with a^(q^j) = a, where q = p^s."""
    j = 1
    while ext.frobenius(a, s * j) != a:
        j += 1
    return j


@dataclass
class RootLocusRow:
    r: int
    divides: bool
    n_exact_degree: int
    n_roots_exact_degree: int
    n_roots_in_field: int
    consistent: bool
    all_simple: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def root_locus(params: TwistParams, field: FieldSpec, r_max: int, budget: int = 4096, eps: PolyT | None = None) -> list[RootLocusRow]:
    """Zeros of eps_n over F_(q^r), r <= r_max, grouped by exact degree over F_q.

    A zeta of exact degree r should be a root exactly when (q^r - 1) | n.
    ``all_simple`` reports that the p^c-th root of eps_n is squarefree.
    """
    _require_divisible(params)
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    if field.q**r_max > budget:
        raise ValueError(f"F_(q^{r_max}) has more than {budget} elements")
    if eps is None:
        eps = epsilon_computed(params, field)
    root, _ = squarefree_root(eps)
    simple = root.degree <= 0 or gcd_t(root, root.derivative()).degree == 0
    rows = []
    for r in range(1, r_max + 1):
        ext, emb = ext_field(field, r)
        divides = params.n % (field.q**r - 1) == 0
        exact = roots_exact = roots_all = 0
        for z in ext.elements():
            is_root = eps.evaluate(z, emb) == 0
            roots_all += is_root
            if _degree_over(ext, z, field.s) == r:
                exact += 1
                roots_exact += is_root
        consistent = roots_exact == (exact if divides else 0)
        rows.append(RootLocusRow(r, divides, exact, roots_exact, roots_all, consistent, simple))
    return rows


def ext_structure(n: int, field: FieldSpec) -> dict:
    """Shape of the extension module for twist n, plus the class-module rank for negative n."""
    q = field.q
    out: dict = {"n": n, "q": q}
    if n <= 0:
        out.update(case="trivial", rank=0, epsilon_computed=None, epsilon_formula=None, match=None)
        if n < 0:
            rank, lam = fitting_data(TwistParams.of(-n, q, field.p), field)
            out.update(class_module_rank=rank, fitting_generator=str(lam))
        else:
            out.update(class_module_rank=0, fitting_generator="1")
        return out
    params = TwistParams.of(n, q, field.p)
    out["class_module_rank"] = 0
    if not params.divisible:
        out.update(case="free", rank=n, epsilon_computed=None, epsilon_formula=None, match=None)
        return out
    eps = epsilon_computed(params, field)
    formula = epsilon_formula(params, field)
    out.update(
        case="free_plus_torsion",
        rank=n - 1,
        epsilon_computed=str(eps),
        epsilon_formula=str(formula),
        match=eps == formula,
        epsilon_root_degrees=str(epsilon_root_degrees(params, field)),
    )
    return out
