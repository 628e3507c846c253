"""Class-module side for negative twists.

M_n is the h x h matrix (C(n, iq-j+delta) t^(iq-j+delta))_{i,j}.  It is the
matrix, on z-polynomials of degree < h, of the operator

    g  |->  Lambda((1 + t z)^n g),    Lambda(f) = sum_i [z^(iq+delta)] f * z^i.

Writing (1 + t z)^n = F_low(z) * G(z^q) with F_low = (1 + t z)^(n mod q), the
operator factors as (multiply by G(z)) o Lambda o (multiply by F_low), and
det(I - xBA) = det(I - xAB) moves the factor G to the other side, where it
becomes G(z) multiplying before Lambda.  Repeating over the base-q digits of n
shrinks the space at each step and ends with a tiny matrix with the same
det(I - xM).  :func:`pn_poly` uses this reduction by default and can also run
fraction-free elimination on M_n itself.
"""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field as dc_field

from .ff import FieldSpec, lucas_binom
from .polyring import BiPoly, PolyT, XPoly, expand_at_one
from .tate import (
    PrecisionError,
    TateSeries,
    TwistParams,
    decompose,
    nu,
    ts_invert,
)
from .zeta import Z_goss, zeta_star_neg


class PolyMatrix:
    """A square matrix with PolyT entries."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows):
        self.field = field
        self.rows = [list(r) for r in rows]
        if any(len(r) != len(self.rows) for r in self.rows):
            raise ValueError("PolyMatrix must be square")

    @property
    def size(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, PolyMatrix):
            return NotImplemented
        return self.field == other.field and self.rows == other.rows

    def __repr__(self):
        return f"PolyMatrix({self.size}x{self.size})"

    def __str__(self):
        if not self.rows:
            return "[]"
        return "\n".join("[" + ", ".join(str(e) for e in r) + "]" for r in self.rows)

    def char_det(self) -> XPoly:
        """det(I - x M) over F_q[t][x]."""
        F = self.field
        one = PolyT.one(F)
        A = [
            [
                (XPoly(F, {0: one}) if i == j else XPoly(F, {})) - XPoly(F, {1: e})
                for j, e in enumerate(row)
            ]
            for i, row in enumerate(self.rows)
        ]
        return bareiss_det(A, F)


def _xdiv_exact(a: XPoly, b: XPoly) -> XPoly:
    """a / b for b with constant term 1, when the division is exact."""
    if not a:
        return a
    F = a.field
    da, db = a.degree, b.degree
    bc = b.terms
    quot = {}
    for k in range(da - db + 1):
        acc = a.coeff(k)
        for j in range(1, min(k, db) + 1):
            if j in bc and (k - j) in quot:
                acc = acc - bc[j] * quot[k - j]
        if acc:
            quot[k] = acc
    out = XPoly(F, quot)
    if out * b != a:
        raise ArithmeticError("inexact division in fraction-free elimination")
    return out


def bareiss_det(A: list[list[XPoly]], F: FieldSpec) -> XPoly:
    """Fraction-free determinant with diagonal pivots.

    Valid for matrices I - xM: every pivot is a leading principal minor whose
    constant term in x is 1, so the exact divisions are x-adic.
    """
    n = len(A)
    if n == 0:
        return XPoly.one(F)
    A = [row[:] for row in A]
    prev = XPoly.one(F)
    for k in range(n - 1):
        pivot = A[k][k]
        if pivot.coeff(0) != PolyT.one(F):
            raise ValueError("pivot without unit constant term; matrix is not of the form I - xM")
        for i in range(k + 1, n):
            aik = A[i][k]
            for j in range(k + 1, n):
                v = pivot * A[i][j]
                if aik and A[k][j]:
                    v = v - aik * A[k][j]
                A[i][j] = _xdiv_exact(v, prev)
            A[i][k] = XPoly(F, {})
        prev = pivot
    return A[n - 1][n - 1]


def mn_matrix(params: TwistParams, field: FieldSpec) -> PolyMatrix:
    """M_n = (C(n, iq - j + delta) t^(iq - j + delta))_{0 <= i, j < h}."""
    q, p, n, h, d = field.q, field.p, params.n, params.h, params.delta
    rows = []
    for i in range(h):
        row = []
        for j in range(h):
            k = i * q - j + d
            b = lucas_binom(n, k, p) if 0 <= k <= n else 0
            row.append(PolyT.monomial(field, k, field.scalar(b)) if b else PolyT.zero(field))
        rows.append(row)
    return PolyMatrix(field, rows)


def _zmul(F: FieldSpec, a: list[PolyT], b: list[PolyT]) -> list[PolyT]:
    out = [PolyT.zero(F) for _ in range(len(a) + len(b) - 1)]
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = out[i + j] + x * y
    return out


def reduced_matrix(params: TwistParams, field: FieldSpec) -> PolyMatrix:
    """A small matrix with the same det(I - xM) as M_n (see module docstring)."""
    q, p, d = field.q, field.p, params.delta
    H = params.h
    low = [PolyT.one(field)]
    N = params.n
    k = 0

    def image_size(H):
        top = len(low) - 1 + H - 1 - d
        return top // q + 1 if top >= 0 else 0

    while H > 0:
        digit, N = N % q, N // q
        if digit:
            tk = q**k
            low = _zmul(field, low, [PolyT.monomial(field, tk * i, field.scalar(lucas_binom(digit, i, p))) for i in range(digit + 1)])
        Hn = image_size(H)
        if Hn + N > H:
            raise AssertionError(f"reduction overflow at digit {k} (n={params.n})")
        H = Hn
        k += 1
        if N == 0 and image_size(H) >= H:
            break
    zero = PolyT.zero(field)
    rows = [[low[i * q + d - j] if 0 <= i * q + d - j < len(low) else zero for j in range(H)] for i in range(H)]
    return PolyMatrix(field, rows)


def pn_poly(params: TwistParams, field: FieldSpec, method: str = "reduced") -> XPoly:
    """P_n(x) = det(I - x M_n); ``method`` is "reduced" or "direct"."""
    if method == "reduced":
        return reduced_matrix(params, field).char_det()
    if method == "direct":
        return mn_matrix(params, field).char_det()
    raise ValueError(f"unknown determinant method {method!r}")


def fitting_data(params: TwistParams, field: FieldSpec, P: XPoly | None = None) -> tuple[int, PolyT]:
    """(rank, lambda): vanishing order of P_n at x = 1 and the first nonzero coefficient there."""
    if P is None:
        P = pn_poly(params, field)
    return expand_at_one(P)


def _gamma_columns(params: TwistParams, field: FieldSpec, T: int, floor: int) -> list[list[PolyT]]:
    q, h, d = field.q, params.h, params.delta
    v = nu(params, field, T, floor)
    v_inv = ts_invert(v, floor)
    sign = field.neg(1) if d % 2 else 1
    cols = []
    for k in range(h):
        # beta(theta^k nu) = (theta^k - (-theta)^delta theta^(qk)) nu
        f = BiPoly.theta(field, k) - BiPoly.theta(field, d + q * k, sign)
        y = TateSeries.from_bipoly(f, T).mul(v, floor)
        _, small = decompose(y)
        B, _ = decompose(small.mul(v_inv, floor))
        if B.deg_theta >= h:
            raise PrecisionError(f"projection has theta-degree {B.deg_theta} >= h = {h}")
        coords = B.theta_coeffs()
        col = []
        for j in range(h):
            e = PolyT.one(field) if j == k else PolyT.zero(field)
            col.append(e - coords.get(j, PolyT.zero(field)))
        cols.append(col)
    return cols


def gamma_default_window(params: TwistParams, q: int) -> tuple[int, int]:
    """(T, floor) for the gamma matrix.

    Entries observed in practice have t-degree below q^(floor(log_q n) + 1),
    so T is one more than that power (never less than the generic default).
    The floor follows the generic rule -(q T + h).  Results are still
    validated by recomputation at a larger window.
    """
    T0, _ = params.default_window()
    power = 1
    while power <= params.n:
        power *= q
    T = max(T0, power + 1)
    return T, -(q * T + params.h)


def gamma_matrix_oracle(params: TwistParams, field: FieldSpec, T: int | None = None, floor: int | None = None) -> PolyMatrix:
    """Matrix of (id - gamma) in the basis theta^k nu_n, 0 <= k < h, from series arithmetic.

    Computed at (T, floor) and again at (T + q, floor - q h); the two results
    must agree or :class:`PrecisionError` is raised.
    """
    h = params.h
    if h < 1:
        raise ValueError("gamma_matrix_oracle needs h >= 1")
    q = field.q
    dT, dfloor = gamma_default_window(params, q)
    T = dT if T is None else T
    floor = dfloor if floor is None else floor
    first = _gamma_columns(params, field, T, floor)
    second = _gamma_columns(params, field, T + q, floor - q * h)
    if first != second:
        raise PrecisionError(f"gamma matrix unstable between windows (T={T}, floor={floor}) and enlarged")
    for col in first:
        for e in col:
            if e.degree >= T:
                raise PrecisionError("gamma matrix entries reach the t-precision")
    return PolyMatrix(field, [[first[j][i] for j in range(h)] for i in range(h)])


@dataclass
class Report:
    """Outcome of comparing P_n(x) with Z(x, -n) for one (q, n)."""

    p: int
    s: int
    q: int
    n: int
    h: int
    delta: int
    P_coeffs: list[str]
    Z_coeffs: list[str]
    equal: bool
    rank: int
    lambda_: str
    h_n: int
    zeta_star: str
    rank_consistent: bool
    timings_ms: dict = dc_field(default_factory=dict)

    def to_dict(self, timings: bool = True) -> dict:
        out = {("lambda" if k == "lambda_" else k): v for k, v in asdict(self).items()}
        if not timings:
            out.pop("timings_ms")
        return out


def _coeff_strings(P: XPoly) -> list[str]:
    return [str(c) for c in P.coeff_list()]


def check_conjecture(n: int, field: FieldSpec, method: str = "reduced") -> Report:
    """Compare P_n(x) with Z(x, -n) and collect the rank data of both sides."""
    params = TwistParams.of(n, field.q, field.p)
    t0 = time.perf_counter()
    P = pn_poly(params, field, method)
    t1 = time.perf_counter()
    Z = Z_goss(n, field)
    t2 = time.perf_counter()
    rank, lam = fitting_data(params, field, P)
    h_n, zstar, _ = zeta_star_neg(n, field)
    expected = 1 if (n >= 1 and params.divisible) else 0
    return Report(
        p=field.p,
        s=field.s,
        q=field.q,
        n=n,
        h=params.h,
        delta=params.delta,
        P_coeffs=_coeff_strings(P),
        Z_coeffs=_coeff_strings(Z),
        equal=P == Z,
        rank=rank,
        lambda_=str(lam),
        h_n=h_n,
        zeta_star=str(zstar),
        rank_consistent=rank == expected and h_n == rank,
        timings_ms={"pn": round((t1 - t0) * 1000, 3), "zeta": round((t2 - t1) * 1000, 3)},
    )
