"""Sparse polynomials over F_q: F_q[t], F_q[theta, t] and F_q[t][x].

All three types hold a dict from exponent(s) to raw field codes (see
:mod:`carlitz.ff`) and never store zero coefficients.  Values are treated as
immutable; every operation returns a fresh object.
"""

from __future__ import annotations

from collections import defaultdict

from .ff import Embedding, FieldSpec, GFElem


def _fmt_coeff(field: FieldSpec, c: int, mono: str) -> str:
    if not mono:
        return field.format(c)
    if c == 1:
        return mono
    text = field.format(c)
    if "+" in text:
        text = f"({text})"
    return f"{text}*{mono}"


def _mono(var: str, e: int) -> str:
    if e == 0:
        return ""
    return var if e == 1 else f"{var}^{e}"


class PolyT:
    """A polynomial in t over F_q.  ``degree`` of the zero polynomial is -1."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        if terms is None:
            self.terms = {}
        else:
            self.terms = {e: c for e, c in terms.items() if c}

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    @classmethod
    def from_list(cls, field: FieldSpec, coeffs) -> PolyT:
        """Build from low-to-high coefficients (ints are reduced mod p)."""
        terms = {}
        for e, c in enumerate(coeffs):
            c = c.value if isinstance(c, GFElem) else field.scalar(c) if field.s == 1 else c
            if c:
                terms[e] = c
        return cls._raw(field, terms)

    @classmethod
    def monomial(cls, field: FieldSpec, e: int, c: int = 1) -> PolyT:
        return cls._raw(field, {e: c} if c else {})

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> PolyT:
        return cls.monomial(field, 0, c)

    @classmethod
    def one(cls, field: FieldSpec) -> PolyT:
        return cls._raw(field, {0: 1})

    @classmethod
    def zero(cls, field: FieldSpec) -> PolyT:
        return cls._raw(field, {})

    # --- inspection

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def lc(self) -> int:
        return self.terms[self.degree] if self.terms else 0

    def coeff(self, e: int) -> int:
        return self.terms.get(e, 0)

    def to_list(self) -> list[int]:
        return [self.terms.get(e, 0) for e in range(self.degree + 1)]

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, PolyT):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, int):
            return self == PolyT.constant(self.field, self.field.scalar(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    # --- ring operations

    def _check(self, other) -> PolyT:
        if isinstance(other, PolyT):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, GFElem):
            return PolyT.constant(self.field, other.value)
        if isinstance(other, int):
            return PolyT.constant(self.field, self.field.scalar(other))
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = F.add(out.get(e, 0), c)
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return PolyT._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return PolyT._raw(F, {e: F.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return PolyT._raw(self.field, _mul_univariate(self.field, self.terms, other.terms))

    __rmul__ = __mul__

    def scale(self, c: int) -> PolyT:
        if not c:
            return PolyT.zero(self.field)
        F = self.field
        return PolyT._raw(F, {e: F.mul(v, c) for e, v in self.terms.items()})

    def shift(self, k: int) -> PolyT:
        """Multiply by t^k."""
        return PolyT._raw(self.field, {e + k: c for e, c in self.terms.items()})

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = PolyT.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __divmod__(self, other):
        other = self._check(other)
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        db = other.degree
        inv_lc = F.inv(other.lc())
        rem = dict(self.terms)
        quo = {}
        while rem:
            dr = max(rem)
            if dr < db:
                break
            c = F.mul(rem[dr], inv_lc)
            quo[dr - db] = c
            for e, v in other.terms.items():
                k = e + dr - db
                nv = F.sub(rem.get(k, 0), F.mul(c, v))
                if nv:
                    rem[k] = nv
                else:
                    rem.pop(k, None)
        return PolyT._raw(F, quo), PolyT._raw(F, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def monic(self) -> PolyT:
        if not self.terms:
            return self
        return self.scale(self.field.inv(self.lc()))

    def derivative(self) -> PolyT:
        F = self.field
        out = {}
        for e, c in self.terms.items():
            v = F.mul(F.scalar(e), c)
            if v:
                out[e - 1] = v
        return PolyT._raw(F, out)

    def frobenius(self, k: int = 1) -> PolyT:
        """Raise coefficients to the p^k-th power (t untouched)."""
        F = self.field
        return PolyT._raw(F, {e: F.frobenius(c, k) for e, c in self.terms.items()})

    def pth_root(self, k: int = 1) -> PolyT:
        """The unique g with g^(p^k) == self; raises if self is not a p^k-th power."""
        F = self.field
        pk = F.p**k
        out = {}
        for e, c in self.terms.items():
            if e % pk:
                raise ValueError("polynomial is not a p^k-th power")
            # the p-Frobenius has order s on F_q
            out[e // pk] = F.frobenius(c, (-k) % F.s)
        return PolyT._raw(F, out)

    def evaluate(self, zeta, embed: Embedding | None = None):
        """Evaluate at ``zeta`` (a GFElem or raw code), through ``embed`` when
        ``zeta`` lives in an extension.  Returns the same kind as ``zeta``."""
        wrap = isinstance(zeta, GFElem)
        z = zeta.value if wrap else zeta
        E = embed.ext if embed is not None else self.field
        acc = 0
        for e in range(self.degree, -1, -1):
            acc = E.mul(acc, z)
            c = self.terms.get(e, 0)
            if c:
                acc = E.add(acc, embed(c) if embed is not None else c)
        return GFElem(E, acc) if wrap else acc

    def __repr__(self):
        return f"PolyT({self})"

    def __str__(self):
        return self.format("t")

    def format(self, var: str = "t") -> str:
        if not self.terms:
            return "0"
        return " + ".join(_fmt_coeff(self.field, self.terms[e], _mono(var, e)) for e in sorted(self.terms, reverse=True))


def _mul_univariate(F: FieldSpec, a: dict, b: dict) -> dict:
    if not a or not b:
        return {}
    if F.s == 1:
        p = F.p
        acc = defaultdict(int)
        for ea, ca in a.items():
            for eb, cb in b.items():
                acc[ea + eb] += ca * cb
        return {e: v % p for e, v in acc.items() if v % p}
    out = {}
    add, mul = F.add, F.mul
    for ea, ca in a.items():
        for eb, cb in b.items():
            k = ea + eb
            out[k] = add(out.get(k, 0), mul(ca, cb))
    return {e: v for e, v in out.items() if v}


def gcd_t(a: PolyT, b: PolyT) -> PolyT:
    """Monic gcd in F_q[t]; gcd(0, 0) is rejected."""
    if not a and not b:
        raise ValueError("gcd(0, 0) is undefined")
    while b:
        a, b = b, a % b
    return a.monic()


class BiPoly:
    """A polynomial in theta and t over F_q; keys are (theta_degree, t_degree)."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        self.terms = {} if terms is None else {k: c for k, c in terms.items() if c}

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    @classmethod
    def theta(cls, field: FieldSpec, j: int = 1, c: int = 1) -> BiPoly:
        return cls._raw(field, {(j, 0): c} if c else {})

    @classmethod
    def t(cls, field: FieldSpec, i: int = 1, c: int = 1) -> BiPoly:
        return cls._raw(field, {(0, i): c} if c else {})

    @classmethod
    def constant(cls, field: FieldSpec, c: int) -> BiPoly:
        return cls._raw(field, {(0, 0): c} if c else {})

    @classmethod
    def from_polyt(cls, f: PolyT, theta_degree: int = 0) -> BiPoly:
        return cls._raw(f.field, {(theta_degree, e): c for e, c in f.terms.items()})

    @classmethod
    def from_theta_coeffs(cls, field: FieldSpec, coeffs: dict) -> BiPoly:
        """Build sum_j coeffs[j] * theta^j from PolyT coefficients."""
        out = {}
        for j, f in coeffs.items():
            for i, c in f.terms.items():
                out[(j, i)] = c
        return cls._raw(field, out)

    @property
    def deg_theta(self) -> int:
        return max((j for j, _ in self.terms), default=-1)

    @property
    def deg_t(self) -> int:
        return max((i for _, i in self.terms), default=-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.field == other.field and self.terms == other.terms
        if isinstance(other, PolyT):
            return self == BiPoly.from_polyt(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def _check(self, other) -> BiPoly:
        if isinstance(other, BiPoly):
            if other.field != self.field:
                raise ValueError("polynomials over different fields")
            return other
        if isinstance(other, PolyT):
            return BiPoly.from_polyt(other)
        if isinstance(other, GFElem):
            return BiPoly.constant(self.field, other.value)
        if isinstance(other, int):
            return BiPoly.constant(self.field, self.field.scalar(other))
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = F.add(out.get(k, 0), c)
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return BiPoly._raw(F, out)

    __radd__ = __add__

    def __neg__(self):
        F = self.field
        return BiPoly._raw(F, {k: F.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        F = self.field
        a, b = self.terms, other.terms
        if not a or not b:
            return BiPoly._raw(F, {})
        if F.s == 1:
            p = F.p
            acc = defaultdict(int)
            for (ja, ia), ca in a.items():
                for (jb, ib), cb in b.items():
                    acc[(ja + jb, ia + ib)] += ca * cb
            return BiPoly._raw(F, {k: v % p for k, v in acc.items() if v % p})
        out = {}
        add, mul = F.add, F.mul
        for (ja, ia), ca in a.items():
            for (jb, ib), cb in b.items():
                k = (ja + jb, ia + ib)
                out[k] = add(out.get(k, 0), mul(ca, cb))
        return BiPoly._raw(F, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a polynomial")
        result = BiPoly.constant(self.field, 1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def twist(self, k: int = 1) -> BiPoly:
        """Apply the q-power twist k times: c*theta^j*t^i -> c^(q^k)*theta^(j*q^k)*t^i."""
        F = self.field
        qk = F.q**k
        # c^(q^k) == c on F_q
        return BiPoly._raw(F, {(j * qk, i): c for (j, i), c in self.terms.items()})

    def theta_coeffs(self) -> dict[int, PolyT]:
        """View in F_q[t][theta]: theta-degree -> PolyT coefficient."""
        out: dict[int, dict] = defaultdict(dict)
        for (j, i), c in self.terms.items():
            out[j][i] = c
        return {j: PolyT._raw(self.field, d) for j, d in out.items()}

    def t_coeffs(self) -> dict[int, PolyT]:
        """View in F_q[theta][t]: t-degree -> polynomial in theta (as a PolyT)."""
        out: dict[int, dict] = defaultdict(dict)
        for (j, i), c in self.terms.items():
            out[i][j] = c
        return {i: PolyT._raw(self.field, d) for i, d in out.items()}

    def derivative_t(self) -> BiPoly:
        F = self.field
        out = {}
        for (j, i), c in self.terms.items():
            v = F.mul(F.scalar(i), c)
            if v:
                out[(j, i - 1)] = v
        return BiPoly._raw(F, out)

    def evaluate_t(self, zeta, embed: Embedding | None = None) -> PolyT:
        """Substitute t = zeta, leaving theta free: a polynomial in theta over
        the field of ``zeta`` (returned as a PolyT whose variable is theta)."""
        E = embed.ext if embed is not None else self.field
        z = zeta.value if isinstance(zeta, GFElem) else zeta
        out = {}
        for j, f in self.theta_coeffs().items():
            v = f.evaluate(z, embed)
            if v:
                out[j] = v
        return PolyT._raw(E, out)

    def as_polyt(self) -> PolyT:
        """The underlying PolyT when theta does not occur."""
        if any(j for j, _ in self.terms):
            raise ValueError("polynomial depends on theta")
        return PolyT._raw(self.field, {i: c for (_, i), c in self.terms.items()})

    def __repr__(self):
        return f"BiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for j, i in sorted(self.terms, reverse=True):
            mono = "*".join(m for m in (_mono("theta", j), _mono("t", i)) if m)
            parts.append(_fmt_coeff(self.field, self.terms[(j, i)], mono))
        return " + ".join(parts)


def twist(f: BiPoly, k: int = 1) -> BiPoly:
    return f.twist(k)


def content_t(f) -> PolyT:
    """Monic gcd of the theta-coefficients of f: the largest monic divisor of f in F_q[t]."""
    if isinstance(f, PolyT):
        f = BiPoly.from_polyt(f)
    if not f:
        raise ValueError("content of the zero polynomial")
    g = None
    for _, c in sorted(f.theta_coeffs().items()):
        g = c.monic() if g is None else gcd_t(g, c)
        if g.degree == 0:
            break
    return g


class XPoly:
    """A polynomial in x with coefficients in F_q[t]."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldSpec, terms=None):
        self.field = field
        self.terms = {} if terms is None else {k: c for k, c in terms.items() if c}

    @classmethod
    def _raw(cls, field, terms):
        obj = cls.__new__(cls)
        obj.field = field
        obj.terms = terms
        return obj

    @classmethod
    def constant(cls, c: PolyT) -> XPoly:
        return cls._raw(c.field, {0: c} if c else {})

    @classmethod
    def one(cls, field: FieldSpec) -> XPoly:
        return cls._raw(field, {0: PolyT.one(field)})

    @classmethod
    def from_list(cls, field: FieldSpec, coeffs) -> XPoly:
        return cls(field, dict(enumerate(coeffs)))

    @property
    def degree(self) -> int:
        return max(self.terms) if self.terms else -1

    def coeff(self, k: int) -> PolyT:
        return self.terms.get(k) or PolyT.zero(self.field)

    def coeff_list(self) -> list[PolyT]:
        return [self.coeff(k) for k in range(self.degree + 1)]

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, XPoly):
            return self.field == other.field and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.field, frozenset(self.terms.items())))

    def _check(self, other) -> XPoly:
        if isinstance(other, XPoly):
            return other
        if isinstance(other, PolyT):
            return XPoly.constant(other)
        if isinstance(other, int):
            return XPoly.constant(PolyT.constant(self.field, self.field.scalar(other)))
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out[k] + c if k in out else c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return XPoly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return XPoly._raw(self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out: dict[int, PolyT] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                k = ka + kb
                v = ca * cb
                out[k] = out[k] + v if k in out else v
        return XPoly._raw(self.field, {k: v for k, v in out.items() if v})

    __rmul__ = __mul__

    def shift(self, k: int = 1) -> XPoly:
        """Multiply by x^k."""
        return XPoly._raw(self.field, {e + k: c for e, c in self.terms.items()})

    def at_one(self) -> PolyT:
        acc = PolyT.zero(self.field)
        for c in self.terms.values():
            acc = acc + c
        return acc

    def __repr__(self):
        return f"XPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k in sorted(self.terms, reverse=True):
            c = self.terms[k]
            parts.append(f"({c})" if k == 0 else f"({c})*{_mono('x', k)}")
        return " + ".join(parts)


def expand_at_one(Z: XPoly) -> tuple[int, PolyT]:
    """Multiplicity h of x = 1 as a root of Z and the coefficient of (x-1)^h.

    Repeated synthetic division by (x - 1) over F_q[t].
    """
    if not Z:
        raise ValueError("expansion of the zero polynomial")
    coeffs = Z.coeff_list()
    h = 0
    while True:
        # Horner: quotient by (x - 1) and remainder Z(1)
        quotient = []
        acc = PolyT.zero(Z.field)
        for c in reversed(coeffs):
            acc = acc + c
            quotient.append(acc)
        rem = quotient.pop()
        if rem:
            return h, rem
        coeffs = list(reversed(quotient))
        h += 1
