from __future__ import annotations

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from carlitz.ff import (
    GFElem,
    canonical_modulus,
    enumerate_field,
    ext_field,
    ff_make,
    is_prime,
    lucas_binom,
)

FIELDS = [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2), (2, 3), (2, 4)]


def _has_root_or_factor(mod, p):
    """Brute-force reducibility test: look for a monic factor of degree <= deg/2."""
    deg = len(mod) - 1
    for d in range(1, deg // 2 + 1):
        for lower in itertools.product(range(p), repeat=d):
            fac = list(lower) + [1]
            # long division of mod by fac over F_p
            rem = list(mod)
            for i in range(deg - d, -1, -1):
                c = rem[i + d]
                if c:
                    for j, f in enumerate(fac):
                        rem[i + j] = (rem[i + j] - c * f) % p
            if not any(rem[:d]):
                return True
    return False


@pytest.mark.parametrize("p,s", [(2, 2), (3, 2), (2, 3), (2, 4), (5, 2)])
def test_canonical_modulus_is_smallest_irreducible(p, s):
    mod = canonical_modulus(p, s)
    assert len(mod) == s + 1 and mod[-1] == 1
    assert not _has_root_or_factor(mod, p)
    # every monic polynomial before it (low coefficient first) is reducible
    for lower in itertools.product(range(p), repeat=s):
        cand = tuple(lower) + (1,)
        if cand == mod:
            break
        assert _has_root_or_factor(cand, p)


def test_frozen_moduli():
    assert canonical_modulus(2, 2) == (1, 1, 1)
    assert canonical_modulus(3, 2) == (1, 0, 1)
    assert canonical_modulus(2, 3) == (1, 0, 1, 1)


def test_make_rejects_bad_input():
    with pytest.raises(ValueError):
        ff_make(4)
    with pytest.raises(ValueError):
        ff_make(3, 0)


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@st.composite
def field_and_elems(draw, k=3):
    p, s = draw(st.sampled_from(FIELDS))
    F = ff_make(p, s)
    return F, [GFElem(F, draw(st.integers(0, F.q - 1))) for _ in range(k)]


@given(field_and_elems())
def test_field_axioms(data):
    F, (a, b, c) = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F(0)
    assert a + (-a) == F(0)
    if a:
        assert a * a.inverse() == F(1)
        assert (b / a) * a == b


@given(field_and_elems(1))
def test_frobenius_is_p_power(data):
    F, (a,) = data
    assert a.frobenius() == a**F.p
    assert a.frobenius(F.s) == a
    assert a ** (F.q - 1) == (F(1) if a else F(0))


@pytest.mark.parametrize("p,s", FIELDS)
def test_multiplicative_group_is_cyclic(p, s):
    F = ff_make(p, s)
    g = F.primitive()
    seen = {(g**k).value for k in range(F.q - 1)}
    assert seen == set(range(1, F.q))


def test_integers_map_to_prime_subfield():
    F = ff_make(3, 2)
    assert F(4).value == 1 and F(-1).value == 2
    assert F.gen().value == 3


def test_format_parse_roundtrip():
    F = ff_make(3, 2)
    for a in F.elements():
        assert F.parse(F.format(a)) == a
    F4 = ff_make(2, 2)
    assert [F4.format(a) for a in F4.elements()] == ["0", "1", "u", "u+1"]


def test_enumerate_field():
    F = ff_make(2, 2)
    assert [e.value for e in enumerate_field(F)] == [0, 1, 2, 3]
    assert all(isinstance(e, GFElem) for e in enumerate_field(F))


@pytest.mark.parametrize("p,s,r", [(2, 1, 3), (2, 2, 2), (3, 1, 2), (3, 2, 2), (5, 1, 2)])
def test_extension_embedding_is_homomorphism(p, s, r):
    F = ff_make(p, s)
    E, emb = ext_field(F, r)
    assert E.q == F.q**r
    for a, b in itertools.product(F.elements(), repeat=2):
        assert emb(F.add(a, b)) == E.add(emb(a), emb(b))
        assert emb(F.mul(a, b)) == E.mul(emb(a), emb(b))
    # the image is exactly the fixed field of the q-power map
    fixed = {z for z in E.elements() if E.frobenius(z, s) == z}
    assert fixed == {emb(a) for a in F.elements()}


def test_extension_frozen_table():
    _, emb = ext_field(ff_make(2, 2), 2)
    assert emb.table == [0, 1, 10, 11]


@given(st.integers(0, 300), st.integers(-5, 300), st.sampled_from([2, 3, 5, 7]))
def test_lucas_matches_exact_binomial(n, k, p):
    expect = math.comb(n, k) % p if 0 <= k <= n else 0
    assert lucas_binom(n, k, p) == expect


def test_lucas_examples():
    assert lucas_binom(4, 2, 3) == 0
    assert lucas_binom(4, 3, 3) == 1
    assert lucas_binom(10, 3, 3) == 0


@settings(max_examples=30)
@given(st.sampled_from(FIELDS))
def test_field_pickles(ps):
    import pickle

    F = ff_make(*ps)
    G = pickle.loads(pickle.dumps(F))
    assert G == F and hash(G) == hash(F)
