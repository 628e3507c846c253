"""Finite fields F_q = F_{p^s} and their extensions.

Elements are stored as integer codes: the element sum(c_i * u^i), with u a
root of the field modulus and 0 <= c_i < p, has code sum(c_i * p^i).  All
polynomial types in this package keep raw codes in their coefficient maps;
:class:`GFElem` is the user-facing wrapper with operator overloading.

Multiplication goes through exp/log tables built from a primitive element.
Addition uses integer arithmetic for prime fields, XOR in characteristic 2,
and an addition table (or Zech logarithms for larger fields) otherwise.
"""

from __future__ import annotations

import functools
import itertools

# q^r <= this bound keeps every table a flat list of modest size
MAX_FIELD_SIZE = 1 << 20
_ADD_TABLE_LIMIT = 729


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# --- dense coefficient-list arithmetic over F_p, used only while building tables

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_polymod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        _trim(a)
    return a


def _fp_polymulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _fp_polymod([c % p for c in out], m, p)


def _is_irreducible(m: list[int], p: int) -> bool:
    """Brute-force irreducibility test: no monic factor of degree <= deg/2."""
    deg = len(m) - 1
    if deg == 1:
        return True
    if m[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _fp_polymod(m, list(low) + [1], p):
                return False
    return True


def canonical_modulus(p: int, s: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree s over F_p.

    Coefficients are listed (and compared) from the constant term upwards.
    For s = 1 the modulus is x.
    """
    if s == 1:
        return (0, 1)
    for low in itertools.product(range(p), repeat=s):
        m = list(low) + [1]
        if _is_irreducible(m, p):
            return tuple(m)
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FieldSpec:
    """The finite field F_{p^s} presented as F_p[u]/(modulus)."""

    __slots__ = ("p", "s", "q", "modulus", "_exp", "_log", "_add", "_zech", "_neg")

    def __init__(self, p: int, s: int, modulus: tuple[int, ...]):
        self.p = p
        self.s = s
        self.q = p**s
        self.modulus = tuple(modulus)
        self._build_tables()

    def _code(self, coeffs: list[int]) -> int:
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c
        return v

    def _build_tables(self) -> None:
        p, q = self.p, self.q
        m = list(self.modulus)
        one = [1]
        # smallest primitive element in code order
        factors = _prime_factors(q - 1) if q > 2 else []
        gen = None
        for code in range(1, q):
            g = self.coords(code)
            g = _trim(list(g))
            ok = True
            for r in factors:
                if self._raw_pow(g, (q - 1) // r, m) == one:
                    ok = False
                    break
            if ok:
                gen = g
                break
        assert gen is not None
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        cur = [1]
        for k in range(q - 1):
            c = self._code(cur + [0] * (self.s - len(cur)))
            exp[k] = c
            exp[k + q - 1] = c
            log[c] = k
            cur = _fp_polymulmod(cur, gen, m, p) if self.s > 1 else [cur[0] * gen[0] % p]
        self._exp = exp
        self._log = log
        self._neg = [self._code([(-c) % p for c in self.coords(a)]) for a in range(q)]
        self._add = None
        self._zech = None
        if self.s > 1 and p != 2:
            if q <= _ADD_TABLE_LIMIT:
                self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
            else:
                # log(1 + g^k), or -1 when 1 + g^k == 0
                zech = [0] * (q - 1)
                for k in range(q - 1):
                    s_ = self._add_digits(1, exp[k])
                    zech[k] = log[s_] if s_ else -1
                self._zech = zech

    def _raw_pow(self, g: list[int], e: int, m: list[int]) -> list[int]:
        p = self.p
        result = [1]
        base = g
        while e:
            if e & 1:
                result = _fp_polymulmod(result, base, m, p) if self.s > 1 else [result[0] * base[0] % p]
            base = _fp_polymulmod(base, base, m, p) if self.s > 1 else [base[0] * base[0] % p]
            e >>= 1
        return result

    def _add_digits(self, a: int, b: int) -> int:
        p = self.p
        out, scale = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * scale
            a //= p
            b //= p
            scale *= p
        return out

    # --- identity

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.s, self.modulus) == (
            other.p,
            other.s,
            other.modulus,
        )

    def __hash__(self):
        return hash((self.p, self.s, self.modulus))

    def __repr__(self):
        return f"FieldSpec(p={self.p}, s={self.s}, modulus={self.modulus})"

    def __reduce__(self):
        return (ff_make, (self.p, self.s))

    # --- raw arithmetic on integer codes

    def coords(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.s):
            out.append(a % p)
            a //= p
        return tuple(out)

    def from_coords(self, coords) -> int:
        coords = list(coords)
        if len(coords) != self.s or any(not 0 <= c < self.p for c in coords):
            raise ValueError(f"bad coordinates {coords} for {self!r}")
        return self._code(coords)

    def add(self, a: int, b: int) -> int:
        if self.s == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add is not None:
            return self._add[a][b]
        if not a:
            return b
        if not b:
            return a
        la, lb = self._log[a], self._log[b]
        z = self._zech[(lb - la) % (self.q - 1)]
        if z < 0:
            return 0
        return self._exp[(la + z) % (self.q - 1)]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if not a or not b:
            return 0
        if self.s == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if not a:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.s == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if not a:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def frobenius(self, a: int, k: int = 1) -> int:
        """a^(p^k)."""
        return self.pow(a, self.p**k)

    def scalar(self, n: int) -> int:
        """The image of the integer n in F_p, as a code."""
        return n % self.p

    def elements(self) -> range:
        return range(self.q)

    def format(self, a: int) -> str:
        if self.s == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self.coords(a)))):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "u" if i == 1 else f"u^{i}"
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return "+".join(terms) if terms else "0"

    def parse(self, text: str) -> int:
        """Inverse of :meth:`format` (accepts `u+1`, `2*u^2+1`, `2`)."""
        text = text.replace(" ", "")
        coords = [0] * self.s
        for term in text.split("+"):
            if not term:
                continue
            if "u" not in term:
                coords[0] = (coords[0] + int(term)) % self.p
                continue
            c, _, mono = term.rpartition("*") if "*" in term else ("1", "", term)
            e = int(mono.split("^")[1]) if "^" in mono else 1
            if e >= self.s:
                raise ValueError(f"power u^{e} out of range for {self!r}")
            coords[e] = (coords[e] + int(c)) % self.p
        return self._code(coords)

    # --- convenience

    def __call__(self, value) -> GFElem:
        if isinstance(value, GFElem):
            if value.field != self:
                raise ValueError("element belongs to a different field")
            return value
        if isinstance(value, str):
            return GFElem(self, self.parse(value))
        if isinstance(value, int):
            return GFElem(self, value % self.p)
        raise TypeError(f"cannot convert {value!r} into {self!r}")

    def primitive(self) -> GFElem:
        """The smallest (in code order) generator of the multiplicative group."""
        return GFElem(self, self._exp[1] if self.q > 2 else 1)

    def gen(self) -> GFElem:
        """The class of u (for prime fields, the element 0, since the modulus is x)."""
        return GFElem(self, self.p if self.s > 1 else 0)


class GFElem:
    """An element of a :class:`FieldSpec`."""

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        self.field = field
        self.value = value

    @property
    def coords(self) -> tuple[int, ...]:
        return self.field.coords(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, GFElem):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def __add__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return GFElem(self.field, self.field.add(self.value, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return GFElem(self.field, self.field.sub(self.value, b))

    def __rsub__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return GFElem(self.field, self.field.sub(b, self.value))

    def __neg__(self):
        return GFElem(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return GFElem(self.field, self.field.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._coerce(other)
        if b is NotImplemented:
            return b
        return GFElem(self.field, self.field.div(self.value, b))

    def __pow__(self, e: int):
        return GFElem(self.field, self.field.pow(self.value, e))

    def inverse(self) -> GFElem:
        return GFElem(self.field, self.field.inv(self.value))

    def frobenius(self, k: int = 1) -> GFElem:
        return GFElem(self.field, self.field.frobenius(self.value, k))

    def __eq__(self, other):
        if isinstance(other, GFElem):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.p and self.value < self.field.p
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"GFElem({self.field.format(self.value)!r}, q={self.field.q})"

    def __str__(self):
        return self.field.format(self.value)


@functools.lru_cache(maxsize=None)
def ff_make(p: int, s: int = 1) -> FieldSpec:
    """The field F_{p^s} with its canonical modulus."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not isinstance(s, int) or s < 1:
        raise ValueError(f"extension degree must be >= 1, got {s}")
    if p**s > MAX_FIELD_SIZE:
        raise ValueError(f"field of size {p}^{s} exceeds the supported bound {MAX_FIELD_SIZE}")
    return FieldSpec(p, s, canonical_modulus(p, s))


class Embedding:
    """The ring homomorphism F_q -> F_{q^r} produced by :func:`ext_field`.

    Accepts either a :class:`GFElem` of the base field or a raw code.
    """

    __slots__ = ("base", "ext", "table")

    def __init__(self, base: FieldSpec, ext: FieldSpec, table: list[int]):
        self.base = base
        self.ext = ext
        self.table = table

    def __call__(self, x):
        if isinstance(x, GFElem):
            if x.field != self.base:
                raise ValueError("element is not in the base field")
            return GFElem(self.ext, self.table[x.value])
        return self.table[x]


def ext_field(base: FieldSpec, r: int) -> tuple[FieldSpec, Embedding]:
    """Realise F_{q^r} as F_{p^(s*r)} together with an embedding of ``base``.

    The base generator is sent to the smallest root (in enumeration order) of
    the base modulus inside the extension.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError(f"extension degree must be >= 1, got {r}")
    ext = ff_make(base.p, base.s * r)
    if base.s == 1:
        return ext, Embedding(base, ext, list(range(base.p)))
    root = None
    for z in ext.elements():
        acc = 0
        for c in reversed(base.modulus):
            acc = ext.add(ext.mul(acc, z), c)
        if acc == 0:
            root = z
            break
    assert root is not None
    table = []
    for a in base.elements():
        img = 0
        for c in reversed(base.coords(a)):
            img = ext.add(ext.mul(img, root), c)
        table.append(img)
    return ext, Embedding(base, ext, table)


def enumerate_field(field: FieldSpec) -> list[GFElem]:
    """All q elements, ordered by integer code (lexicographic on coordinates
    read from the highest power of u down)."""
    return [GFElem(field, a) for a in field.elements()]


def lucas_binom(n: int, k: int, p: int) -> int:
    """C(n, k) mod p via base-p digits; zero outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return 0
    out = 1
    while n or k:
        ni, ki = n % p, k % p
        if ki > ni:
            return 0
        out = out * _small_binom(ni, ki) % p
        n //= p
        k //= p
    return out


@functools.lru_cache(maxsize=4096)
def _small_binom(n: int, k: int) -> int:
    r = 1
    for i in range(k):
        r = r * (n - i) // (i + 1)
    return r
