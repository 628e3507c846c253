"""Power sums over monic polynomials and the zeta polynomial Z(x, -n).

Two independent routes to Z(x, -n) = sum_d S_d(n) x^d:

* :func:`Z_direct` enumerates every monic polynomial of each degree.  The
  enumeration is split in halves: a = a_hi + a_lo with a_lo of degree < k, so
  S_d(n) = sum_j C(n, j) H(n - j) L(j) where H and L are power sums over the
  two halves.  Each half is enumerated in full, vectorized with numpy.
* :func:`Z_goss` uses the recursion in n that expresses Z(x, -n) through the
  smaller twists i(q-1) + delta.
"""

from __future__ import annotations

import functools

import numpy as np

from .ff import FieldSpec, lucas_binom
from .polyring import PolyT, XPoly, expand_at_one
from .tate import LaurentTheta

# counted in coefficient multiplications (vectorized, roughly 10^9 per second)
DEFAULT_WORK_LIMIT = 10**9


class WorkLimitExceeded(RuntimeError):
    pass


# --- vectorized arithmetic in F_q[t] on F_p coordinates

@functools.lru_cache(maxsize=None)
def _mult_matrices(field: FieldSpec) -> np.ndarray:
    """mats[c] is the s x s matrix over F_p of multiplication by c on coordinates."""
    q, s, p = field.q, field.s, field.p
    mats = np.zeros((q, s, s), dtype=np.int64)
    for c in range(q):
        for b in range(s):
            mats[c, :, b] = field.coords(field.mul(c, p**b))
    return mats


def _coeff_codes(q: int, width: int) -> np.ndarray:
    """All q^width coefficient vectors, shape (q^width, width), low degree first."""
    idx = np.arange(q**width, dtype=np.int64)
    return np.stack([(idx // q**i) % q for i in range(width)], axis=1) if width else np.zeros((1, 0), np.int64)


def _half_power_sums(field: FieldSpec, polys: np.ndarray, n: int) -> list[PolyT]:
    """[sum_a a^e for e in 0..n] where the rows of ``polys`` are coefficient codes."""
    p, s = field.p, field.s
    count, width = polys.shape
    deg = width - 1
    mats = _mult_matrices(field)[polys]  # (count, width, s, s)
    pw = np.zeros((count, s, 1), dtype=np.int64)
    pw[:, 0, 0] = 1
    weights = p ** np.arange(s, dtype=np.int64)
    sums = []
    for e in range(n + 1):
        tot = pw.sum(axis=0) % p  # (s, L)
        codes = (weights[:, None] * tot).sum(axis=0)
        sums.append(PolyT(field, {i: int(c) for i, c in enumerate(codes) if c}))
        if e == n:
            break
        L = pw.shape[2]
        new = np.zeros((count, s, L + max(deg, 0)), dtype=np.int64)
        for i in range(width):
            new[:, :, i : i + L] += np.einsum("cab,cbl->cal", mats[:, i], pw)
        pw = new % p
    return sums


def _half_work(q: int, d: int, n: int) -> int:
    """Coefficient multiplications spent by :func:`power_sum` for degree d."""
    k = d // 2
    total = 0
    for count, deg in ((q ** (d - k), d - k), (q**k, k - 1)):
        if deg >= 0:
            total += count * sum((e * deg + 1) * (deg + 1) for e in range(n))
    return total


def power_sum(n: int, d: int, field: FieldSpec) -> PolyT:
    """S_d(n): the sum of a(t)^n over the q^d monic a of degree d, exactly."""
    if n < 0 or d < 0:
        raise ValueError("power_sum needs n >= 0 and d >= 0")
    if d == 0:
        return PolyT.one(field)
    q = field.q
    k = d // 2
    # a = t^k b + a_lo with b monic of degree d - k and deg a_lo < k
    free = _coeff_codes(q, d - k)
    b = np.concatenate([free, np.ones((free.shape[0], 1), np.int64)], axis=1)
    H = [f.shift(k * e) for e, f in enumerate(_half_power_sums(field, b, n))]
    if k:
        L = _half_power_sums(field, _coeff_codes(q, k), n)
    else:
        L = [PolyT.one(field)] + [PolyT.zero(field)] * n  # only a_lo = 0
    total = PolyT.zero(field)
    for j in range(n + 1):
        c = lucas_binom(n, j, field.p)
        if c and L[j] and H[n - j]:
            total = total + (H[n - j] * L[j]).scale(field.scalar(c))
    return total


def power_sum_naive(n: int, d: int, field: FieldSpec) -> PolyT:
    """S_d(n) by literal iteration over monic polynomials (slow reference)."""
    q = field.q
    total = PolyT.zero(field)
    for idx in range(q**d):
        coeffs = [(idx // q**i) % q for i in range(d)] + [1]
        total = total + PolyT.from_list(field, coeffs) ** n
    return total


def Z_direct(n: int, field: FieldSpec, work_limit: int = DEFAULT_WORK_LIMIT) -> XPoly:
    """Z(x, -n) from exhaustive power sums, summed until two consecutive S_d vanish past h."""
    if n < 0:
        raise ValueError("Z_direct needs n >= 0")
    q = field.q
    h = n // (q - 1)
    work = sum(_half_work(q, d, n) for d in range(1, h + 3))
    if work > work_limit:
        raise WorkLimitExceeded(f"enumeration for q={q}, n={n} needs ~{work} coefficient multiplications (limit {work_limit})")
    coeffs = {}
    d = 0
    zeros = 0
    while d <= h or zeros < 2:
        sd = power_sum(n, d, field)
        if sd:
            coeffs[d] = sd
            zeros = 0
        else:
            zeros += 1
        d += 1
        if d > h + 2:
            work += _half_work(q, d, n)
            if work > work_limit:
                raise WorkLimitExceeded(f"power sums did not vanish by degree {d - 1} within the work limit")
    return XPoly(field, coeffs)


@functools.lru_cache(maxsize=None)
def _goss(field: FieldSpec, n: int) -> XPoly:
    q, p = field.q, field.p
    h, delta = divmod(n, q - 1)
    acc = XPoly(field, {})
    for i in range(h):
        k = i * (q - 1) + delta
        b = lucas_binom(n, k, p)
        if b:
            acc = acc + _goss(field, k) * XPoly.constant(PolyT.monomial(field, k, field.scalar(b)))
    return XPoly.one(field) - acc.shift(1)


def Z_goss(n: int, field: FieldSpec) -> XPoly:
    """Z(x, -n) by the recursion Z(x,-n) = 1 - x sum_{i<h} C(n, i(q-1)+delta) t^(i(q-1)+delta) Z(x, -(i(q-1)+delta))."""
    if n < 0:
        raise ValueError("Z_goss needs n >= 0")
    # warm the cache bottom-up so deep chains never hit the recursion limit
    q = field.q
    delta = n % (q - 1)
    for k in range(delta, n, q - 1):
        _goss(field, k)
    return _goss(field, n)


def zeta_star_neg(n: int, field: FieldSpec) -> tuple[int, PolyT, PolyT]:
    """(h_n, zeta*(-n), zeta(-n)): vanishing order at x = 1, leading coefficient, and Z(1, -n)."""
    Z = Z_goss(n, field)
    h_n, lead = expand_at_one(Z)
    return h_n, lead, Z.at_one()


def zeta_pos(n: int, field: FieldSpec, floor: int) -> LaurentTheta:
    """zeta(n) = sum over monic a of a(theta)^(-n) in K_inf, down to theta^floor.

    Every monic a of degree d has |a^(-n)| = q^(-nd), so the degree-d block is
    below theta^floor as soon as -nd < floor.
    """
    if n < 1:
        raise ValueError("zeta_pos needs n >= 1")
    q = field.q
    total = LaurentTheta(field, {0: 1}, floor)
    d = 1
    while -n * d >= floor:
        for idx in range(q**d):
            coeffs = {i: (idx // q**i) % q for i in range(d)}
            coeffs[d] = 1
            a = LaurentTheta(field, coeffs)
            total = total + (a**n).inverse(floor)
        d += 1
    return total
