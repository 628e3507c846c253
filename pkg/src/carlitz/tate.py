"""Truncated elements of K_inf<t> with explicit precision.

K_inf = F_q((1/theta)).  A :class:`LaurentTheta` stores the theta-terms of an
element of K_inf that are known exactly: everything of theta-degree >= its
``floor`` is correct, everything below is unknown.  A :class:`TateSeries`
stores the coefficients of t^0 .. t^T, all sharing one floor.  An exact value
(a polynomial, or a series known to arbitrary depth) has floor ``-inf``.

Every operation derives the floor of its result from the floors and Gauss
norms of its inputs, so comparisons of truncated values are exact statements
about the window (t-degree <= T, theta-degree >= floor).

Coefficients always lie in F_q, so the q-power twist acts only on theta-degrees.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

from .ff import FieldSpec, lucas_binom
from .polyring import BiPoly

NEG_INF = -math.inf


class PrecisionError(ArithmeticError):
    """The requested output does not fit in the available precision window."""


class NotInvertibleError(ZeroDivisionError):
    """The series is not a unit (or fails the dominance test)."""


def _fmt_floor(floor) -> str:
    return "[exact]" if floor == NEG_INF else f"[floor=theta^{floor}]"


# --- dict helpers: {theta_degree: code}

def _ldeg(d: dict):
    return max(d) if d else NEG_INF


def _ladd(F: FieldSpec, a: dict, b: dict, floor) -> dict:
    out = {k: v for k, v in a.items() if k >= floor}
    for k, v in b.items():
        if k < floor:
            continue
        w = F.add(out.get(k, 0), v)
        if w:
            out[k] = w
        else:
            out.pop(k, None)
    return out


def _lmul(F: FieldSpec, a: dict, b: dict, floor) -> dict:
    if not a or not b:
        return {}
    if F.s == 1:
        p = F.p
        acc = defaultdict(int)
        for ea, ca in a.items():
            lim = floor - ea
            for eb, cb in b.items():
                if eb >= lim:
                    acc[ea + eb] += ca * cb
        return {e: v % p for e, v in acc.items() if v % p}
    add, mul = F.add, F.mul
    out = {}
    for ea, ca in a.items():
        lim = floor - ea
        for eb, cb in b.items():
            if eb >= lim:
                k = ea + eb
                out[k] = add(out.get(k, 0), mul(ca, cb))
    return {e: v for e, v in out.items() if v}


def _linv(F: FieldSpec, a: dict, floor) -> dict:
    """Inverse of a nonzero Laurent series, computed down to ``floor``."""
    d = max(a)
    c_inv = F.inv(a[d])
    out = {}
    # b_{-d-j} = -c^{-1} * sum_{i>=1} a_{d-i} b_{-d-j+i}
    low = sorted((k for k in a if k < d), reverse=True)
    j = 0
    while -d - j >= floor:
        if j == 0:
            out[-d] = c_inv
        else:
            acc = 0
            for k in low:
                i = d - k
                if i > j:
                    break
                b = out.get(-d - j + i)
                if b:
                    acc = F.add(acc, F.mul(a[k], b))
            if acc:
                out[-d - j] = F.neg(F.mul(c_inv, acc))
        j += 1
    return out


def _twist_floor(floor, q: int):
    if floor == NEG_INF:
        return floor
    # unknown terms sit at degrees <= floor - 1 and land on multiples of q
    return q * floor if floor <= 0 else q * (floor - 1) + 1


class LaurentTheta:
    """An element of K_inf known down to theta^floor."""

    __slots__ = ("field", "terms", "floor")

    def __init__(self, field: FieldSpec, terms=None, floor=NEG_INF):
        self.field = field
        self.floor = floor
        self.terms = {} if terms is None else {k: v for k, v in terms.items() if v and k >= floor}

    @classmethod
    def _raw(cls, field, terms, floor):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        obj.floor = floor
        return obj

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: int = 1) -> LaurentTheta:
        return cls._raw(field, {e: c} if c else {}, NEG_INF)

    @property
    def degree(self):
        """log_q of the absolute value (``-inf`` when nothing is known to be nonzero)."""
        return _ldeg(self.terms)

    def is_zero(self) -> bool:
        """True when every term above the floor vanishes."""
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, LaurentTheta):
            return NotImplemented
        return self.field == other.field and self.terms == other.terms and self.floor == other.floor

    def agrees_with(self, other: LaurentTheta) -> bool:
        """Equality on the common window."""
        floor = max(self.floor, other.floor)
        a = {k: v for k, v in self.terms.items() if k >= floor}
        b = {k: v for k, v in other.terms.items() if k >= floor}
        return a == b

    def truncate(self, floor) -> LaurentTheta:
        floor = max(floor, self.floor)
        return LaurentTheta._raw(self.field, {k: v for k, v in self.terms.items() if k >= floor}, floor)

    def __add__(self, other: LaurentTheta):
        floor = max(self.floor, other.floor)
        return LaurentTheta._raw(self.field, _ladd(self.field, self.terms, other.terms, floor), floor)

    def __neg__(self):
        F = self.field
        return LaurentTheta._raw(F, {k: F.neg(v) for k, v in self.terms.items()}, self.floor)

    def __sub__(self, other: LaurentTheta):
        return self + (-other)

    def mul(self, other: LaurentTheta, floor=NEG_INF) -> LaurentTheta:
        out_floor = max(self.floor + other.degree, other.floor + self.degree, floor)
        if self.floor == NEG_INF and other.floor == NEG_INF and floor == NEG_INF:
            out_floor = NEG_INF
        return LaurentTheta._raw(self.field, _lmul(self.field, self.terms, other.terms, out_floor), out_floor)

    def __mul__(self, other):
        return self.mul(other)

    def __pow__(self, e: int):
        result = LaurentTheta.monomial(self.field, 0)
        for _ in range(e):
            result = result * self
        return result

    def twist(self, k: int = 1) -> LaurentTheta:
        q = self.field.q
        floor = self.floor
        for _ in range(k):
            floor = _twist_floor(floor, q)
        qk = q**k
        return LaurentTheta._raw(self.field, {e * qk: c for e, c in self.terms.items()}, floor)

    def inverse(self, floor=None) -> LaurentTheta:
        """Inverse in K_inf.  For exact input ``floor`` says how deep to expand."""
        if not self.terms:
            if self.floor == NEG_INF:
                raise NotInvertibleError("inverse of zero")
            raise PrecisionError("leading term lies below the precision floor")
        d = self.degree
        out_floor = self.floor - 2 * d if self.floor != NEG_INF else NEG_INF
        if floor is not None:
            out_floor = max(out_floor, floor)
        if out_floor == NEG_INF:
            raise ValueError("an exact inverse needs an explicit floor")
        return LaurentTheta._raw(self.field, _linv(self.field, self.terms, out_floor), out_floor)

    def __repr__(self):
        return f"LaurentTheta({self})"

    def __str__(self):
        return f"{_fmt_laurent(self.field, self.terms)} {_fmt_floor(self.floor)}"


def _fmt_laurent(F: FieldSpec, terms: dict) -> str:
    if not terms:
        return "0"
    parts = []
    for e in sorted(terms, reverse=True):
        c = terms[e]
        mono = "" if e == 0 else ("theta" if e == 1 else f"theta^{e}")
        if not mono:
            parts.append(F.format(c))
        elif c == 1:
            parts.append(mono)
        else:
            text = F.format(c)
            parts.append(f"({text})*{mono}" if "+" in text else f"{text}*{mono}")
    return " + ".join(parts)


class TateSeries:
    """sum_{i<=T} a_i t^i with every a_i in K_inf known down to theta^floor."""

    __slots__ = ("field", "coeffs", "T", "floor")

    def __init__(self, field: FieldSpec, coeffs, T: int, floor=NEG_INF):
        self.field = field
        self.T = T
        self.floor = floor
        coeffs = list(coeffs)[: T + 1]
        coeffs += [{}] * (T + 1 - len(coeffs))
        self.coeffs = [{k: v for k, v in c.items() if v and k >= floor} for c in coeffs]

    @classmethod
    def _raw(cls, field, coeffs, T, floor):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        obj.T = T
        obj.floor = floor
        return obj

    @classmethod
    def zero(cls, field: FieldSpec, T: int) -> TateSeries:
        return cls._raw(field, [{} for _ in range(T + 1)], T, NEG_INF)

    @classmethod
    def one(cls, field: FieldSpec, T: int) -> TateSeries:
        s = cls.zero(field, T)
        s.coeffs[0] = {0: 1}
        return s

    @classmethod
    def from_bipoly(cls, f: BiPoly, T: int, floor=NEG_INF) -> TateSeries:
        coeffs = [{} for _ in range(T + 1)]
        for (j, i), c in f.terms.items():
            if i <= T and j >= floor:
                coeffs[i][j] = c
        return cls._raw(f.field, coeffs, T, floor)

    @classmethod
    def from_laurent(cls, a: LaurentTheta, T: int) -> TateSeries:
        coeffs = [dict(a.terms)] + [{} for _ in range(T)]
        return cls._raw(a.field, coeffs, T, a.floor)

    # --- inspection

    def coeff(self, i: int) -> LaurentTheta:
        return LaurentTheta._raw(self.field, dict(self.coeffs[i]), self.floor)

    @property
    def norm_degree(self):
        """log_q of the Gauss norm over the stored window."""
        return max((_ldeg(c) for c in self.coeffs), default=NEG_INF)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def agrees_with(self, other: TateSeries) -> bool:
        """Equality on the common window (t-degree <= min T, theta-degree >= max floor)."""
        return (self - other).is_zero()

    def truncate(self, T: int | None = None, floor=NEG_INF) -> TateSeries:
        T = self.T if T is None else min(T, self.T)
        floor = max(floor, self.floor)
        coeffs = [{k: v for k, v in c.items() if k >= floor} for c in self.coeffs[: T + 1]]
        return TateSeries._raw(self.field, coeffs, T, floor)

    # --- arithmetic

    def _coerce(self, other) -> TateSeries:
        if isinstance(other, TateSeries):
            if other.field != self.field:
                raise ValueError("series over different fields")
            return other
        if isinstance(other, BiPoly):
            return TateSeries.from_bipoly(other, self.T)
        if isinstance(other, LaurentTheta):
            return TateSeries.from_laurent(other, self.T)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        T = min(self.T, other.T)
        floor = max(self.floor, other.floor)
        F = self.field
        coeffs = [_ladd(F, self.coeffs[i], other.coeffs[i], floor) for i in range(T + 1)]
        return TateSeries._raw(F, coeffs, T, floor)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return TateSeries._raw(F, [{k: F.neg(v) for k, v in c.items()} for c in self.coeffs], self.T, self.floor)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def mul(self, other, floor=NEG_INF) -> TateSeries:
        """Product; ``floor`` optionally discards terms the caller does not need."""
        other = self._coerce(other)
        T = min(self.T, other.T)
        out_floor = max(self.floor + other.norm_degree, other.floor + self.norm_degree, floor)
        if self.floor == NEG_INF and other.floor == NEG_INF:
            out_floor = floor
        F = self.field
        coeffs = [{} for _ in range(T + 1)]
        for i, a in enumerate(self.coeffs[: T + 1]):
            if not a:
                continue
            for j, b in enumerate(other.coeffs[: T + 1 - i]):
                if b:
                    coeffs[i + j] = _ladd(F, coeffs[i + j], _lmul(F, a, b, out_floor), out_floor)
        return TateSeries._raw(F, coeffs, T, out_floor)

    def __mul__(self, other):
        if isinstance(other, (TateSeries, BiPoly, LaurentTheta)):
            return self.mul(other)
        return NotImplemented

    __rmul__ = __mul__

    def twist(self, k: int = 1) -> TateSeries:
        q = self.field.q
        floor = self.floor
        for _ in range(k):
            floor = _twist_floor(floor, q)
        qk = q**k
        coeffs = [{e * qk: c for e, c in d.items()} for d in self.coeffs]
        return TateSeries._raw(self.field, coeffs, self.T, floor)

    def __repr__(self):
        return f"TateSeries(T={self.T}, floor={self.floor})"

    def __str__(self):
        lines = [f"t^{i}: {_fmt_laurent(self.field, c)}" for i, c in enumerate(self.coeffs) if c]
        if not lines:
            lines = ["0"]
        lines.append(f"[T={self.T}] {_fmt_floor(self.floor)}")
        return "\n".join(lines)


def ts_twist(f: TateSeries) -> TateSeries:
    return f.twist()


@dataclass(frozen=True)
class TwistParams:
    """Constants attached to a twist n >= 0 over F_q.

    n = h(q-1) + delta.  When (q-1) | n: m = n/(q-1) = p^c * m0 with p not
    dividing m0, and ell is the lcm of the r >= 1 with (q^r - 1) | n.  Fields
    that are undefined for the given n are ``None``.
    """

    n: int
    q: int
    p: int
    h: int
    delta: int
    m: int | None
    c: int | None
    m0: int | None
    ell: int | None

    @classmethod
    def of(cls, n: int, q: int, p: int | None = None) -> TwistParams:
        if p is None:
            p = next(d for d in range(2, q + 1) if q % d == 0)
        if n < 0:
            raise ValueError(f"twist parameters need n >= 0, got {n}")
        h, delta = divmod(n, q - 1)
        m = c = m0 = None
        if delta == 0:
            m = h
            if m > 0:
                c, m0 = 0, m
                while m0 % p == 0:
                    m0 //= p
                    c += 1
        return cls(n, q, p, h, delta, m, c, m0, ell_of(n, q) if n > 0 and delta == 0 else None)

    @property
    def divisible(self) -> bool:
        return self.delta == 0

    def default_window(self) -> tuple[int, int]:
        """(T, floor) = (m + delta + 2, -(q*T + m)); h stands in for m when (q-1) does not divide n."""
        m = self.h
        T = m + self.delta + 2
        return T, -(self.q * T + m)


def ell_of(n: int, q: int) -> int:
    """lcm of the r >= 1 with (q^r - 1) | n.  Raises ValueError when no such r exists."""
    if n < 1:
        raise ValueError(f"ell is defined for n >= 1, got {n}")
    rs = []
    r = 1
    while q**r - 1 <= n:
        if n % (q**r - 1) == 0:
            rs.append(r)
        r += 1
    if not rs:
        raise ValueError(f"no r with q^r - 1 dividing n (q={q}, n={n})")
    return math.lcm(*rs)


def _neg_theta_power(F: FieldSpec, e: int) -> tuple[int, int]:
    """(-theta)^e as (coefficient, theta-degree)."""
    return (F.neg(1) if e % 2 else 1), e


def _product_series(F: FieldSpec, n: int, inverse: bool, prefix: int, T: int, floor: int) -> TateSeries:
    """(-theta)^prefix * prod_{i>=0} (1 - t/theta^(q^i))^(+-n), exact down to ``floor``."""
    q, p = F.q, F.p
    rel_floor = floor - prefix  # partial products only lose theta-degree
    acc = [{0: 1}] + [{} for _ in range(T)]
    i = 0
    while q**i <= -rel_floor:
        step = q**i
        factor = []
        for k in range(T + 1):
            if inverse:
                b = lucas_binom(n + k - 1, k, p) if k else 1
            else:
                b = lucas_binom(n, k, p)
                if k % 2 and b:
                    b = F.neg(b)
            factor.append({-k * step: b % p} if b % p else {})
        new = [{} for _ in range(T + 1)]
        for a_i, a in enumerate(acc):
            if not a:
                continue
            for f_i in range(T + 1 - a_i):
                if factor[f_i]:
                    new[a_i + f_i] = _ladd(F, new[a_i + f_i], _lmul(F, a, factor[f_i], rel_floor), rel_floor)
        acc = new
        i += 1
    sign, _ = _neg_theta_power(F, prefix)
    coeffs = [{e + prefix: F.mul(sign, c) for e, c in d.items()} for d in acc]
    return TateSeries._raw(F, coeffs, T, floor)


def omega_pow(params: TwistParams, field: FieldSpec, T: int | None = None, floor: int | None = None) -> TateSeries:
    """omega^n = (-theta)^m * prod_i (1 - t/theta^(q^i))^(-n), for (q-1) | n, n > 0."""
    if params.n <= 0 or not params.divisible:
        raise ValueError(f"omega^n needs n > 0 divisible by q-1 (n={params.n}, q={params.q})")
    dT, dfloor = params.default_window()
    T = dT if T is None else T
    floor = dfloor if floor is None else floor
    return _product_series(field, params.n, True, params.m, T, floor)


def nu(params: TwistParams, field: FieldSpec, T: int | None = None, floor: int | None = None) -> TateSeries:
    """nu_n = (-theta)^(-h) * prod_j (1 - t/theta^(q^j))^n."""
    if params.n < 0:
        raise ValueError("nu_n needs n >= 0")
    dT, dfloor = params.default_window()
    T = dT if T is None else T
    floor = dfloor if floor is None else floor
    return _product_series(field, params.n, False, -params.h, T, floor)


def ts_invert(f: TateSeries, floor=None) -> TateSeries:
    """Multiplicative inverse within the window.

    Requires the t^0 coefficient to be nonzero and to dominate the rest of
    the series in Gauss norm.  ``floor`` bounds the expansion for exact input.
    """
    F = f.field
    f0 = f.coeff(0)
    if f0.is_zero():
        if f.floor == NEG_INF:
            raise NotInvertibleError("constant term is zero")
        raise PrecisionError("constant term is not known above the floor")
    rest = TateSeries._raw(F, [{}] + [dict(c) for c in f.coeffs[1:]], f.T, f.floor)
    if rest.norm_degree >= f0.degree:
        raise NotInvertibleError("constant term does not dominate the series")
    if floor is None and f.floor == NEG_INF:
        raise ValueError("an exact series needs an explicit floor to invert")
    target = NEG_INF if floor is None else floor
    g0 = f0.inverse(None if floor is None else floor)
    g0s = TateSeries.from_laurent(g0, f.T)
    u = rest.mul(g0s, target)
    # g = g0 * sum_k (-u)^k; u has no t^0 term so the sum stops at t^T
    neg_u = -u
    total = TateSeries.one(F, f.T)
    power = TateSeries.one(F, f.T)
    for _ in range(f.T):
        power = power.mul(neg_u, target)
        if power.is_zero():
            break
        total = total + power
    return total.mul(g0s, target)


def decompose(f: TateSeries) -> tuple[BiPoly, TateSeries]:
    """Split f into its F[theta, t] part (theta-degree >= 0) and a part of Gauss norm < 1."""
    if f.floor > 0:
        raise PrecisionError(f"polynomial part not determined: floor {f.floor} > 0")
    poly = {}
    small = []
    for i, c in enumerate(f.coeffs):
        s = {}
        for e, v in c.items():
            if e >= 0:
                poly[(e, i)] = v
            else:
                s[e] = v
        small.append(s)
    return BiPoly._raw(f.field, poly), TateSeries._raw(f.field, small, f.T, f.floor)


def inv_t_minus_theta_pow(field: FieldSpec, n: int, T: int, floor) -> TateSeries:
    """(t - theta)^(-n) = (-theta)^(-n) * sum_k C(n+k-1, k) (t/theta)^k, down to ``floor``."""
    p = field.p
    sign = field.neg(1) if n % 2 else 1
    coeffs = []
    for k in range(T + 1):
        e = -n - k
        b = lucas_binom(n + k - 1, k, p) if k else 1
        coeffs.append({e: field.mul(sign, b % p)} if b % p and e >= floor else {})
    return TateSeries._raw(field, coeffs, T, floor)


def t_minus_theta_pow(field: FieldSpec, n: int) -> BiPoly:
    """(t - theta)^n as an exact polynomial."""
    p = field.p
    terms = {}
    for k in range(n + 1):
        b = lucas_binom(n, k, p)
        if b:
            # C(n, k) t^k (-theta)^(n-k)
            c = field.neg(b) if (n - k) % 2 else b
            terms[(n - k, k)] = c
    return BiPoly._raw(field, terms)


def solve_small(h: TateSeries, n: int, floor=None) -> TateSeries:
    """The solution s of s - (t - theta)^(-n) s^(1) = h, for ||h|| < 1.

    s = sum_i h^(i) / prod_{j<i} (t - theta^(q^j))^n, summed until the terms
    fall below ``floor`` (default: the floor of h).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if h.norm_degree >= 0:
        raise ValueError(f"solve_small needs ||h|| < 1, got norm q^{h.norm_degree}")
    target = h.floor if floor is None else max(floor, h.floor)
    if target == NEG_INF:
        raise ValueError("an exact right-hand side needs an explicit floor")
    F = h.field
    inv = inv_t_minus_theta_pow(F, n, h.T, target) if n else TateSeries.one(F, h.T)
    total = h.truncate(floor=target)
    term = total
    while True:
        term = term.twist().mul(inv, target)
        if term.norm_degree < target:
            break
        total = total + term
    return total.truncate(floor=max(total.floor, target))


def xi_series(e: BiPoly, n: int, T: int, floor: int) -> TateSeries:
    """xi_e = sum_{k>=0} e^(k) / prod_{j<=k} (t - theta^(q^j))^n, for deg_theta(e) < n."""
    if n <= 0:
        raise ValueError("xi_e needs n > 0")
    if e.deg_theta >= n:
        raise ValueError(f"xi_e needs deg_theta(e) < n, got {e.deg_theta} >= {n}")
    F = e.field
    if not e:
        return TateSeries.zero(F, T)
    inv = inv_t_minus_theta_pow(F, n, T, floor - max(e.deg_theta, 0))
    term = TateSeries.from_bipoly(e, T).mul(inv, floor)
    total = term
    while True:
        term = term.twist().mul(inv, floor)
        if term.norm_degree < floor:
            break
        total = total + term
    return total


def polylog(n: int, z: LaurentTheta, floor: int) -> LaurentTheta:
    """The n-th Carlitz polylogarithm sum_i z^(q^i) / prod_{j=1..i} (theta - theta^(q^j))^n.

    Defined for |z| < q^(qn/(q-1)); evaluated down to theta^floor.
    """
    if n < 1:
        raise ValueError("polylogarithm index must be >= 1")
    F = z.field
    q = F.q
    if z.is_zero():
        if z.floor == NEG_INF:
            return LaurentTheta._raw(F, {}, floor)
        raise PrecisionError("argument is not known above its floor")
    d = z.degree
    if d * (q - 1) >= q * n:
        raise ValueError(f"|z| = q^{d} is outside the radius q^({q}*{n}/{q - 1})")
    # inside the radius the term degrees q^i*d - n*(q + ... + q^i) strictly decrease
    total = z.truncate(floor)
    zq = z
    den = LaurentTheta.monomial(F, 0)
    i = 0
    while True:
        i += 1
        zq = zq.twist()
        den = den * LaurentTheta._raw(F, {1: 1, q**i: F.neg(1)}, NEG_INF) ** n
        if zq.degree - den.degree < floor:
            break
        term = zq.mul(den.inverse(floor - zq.degree), floor)
        total = total + term
    if total.floor > floor:
        raise PrecisionError("argument precision too coarse for the requested floor")
    return total
