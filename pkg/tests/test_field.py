import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffqe.field import (
    FieldError,
    enumerate_elements,
    ff_add,
    ff_inv,
    ff_mul,
    ff_neg,
    ff_pow,
    field_of_order,
    is_irreducible,
    make_field,
)

PRIME_POWERS = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32, 49, 64, 81]


def _naive_irreducible(coeffs, p):
    # independent check: no monic factor of degree 1..r//2, by trial multiplication
    r = len(coeffs) - 1

    def mul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
        return out

    target = [c % p for c in coeffs]
    for d in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            f = list(low) + [1]
            for low2 in itertools.product(range(p), repeat=r - d):
                if mul(f, list(low2) + [1]) == target:
                    return False
    return True


def test_prime_field_elements(F3):
    assert [str(a) for a in enumerate_elements(F3)] == ["0", "1", "2"]


def test_f4_default_modulus(F4):
    assert F4.render_modulus() == "w^2+w+1"
    # it is the only monic irreducible quadratic over F_2
    quads = [(a, b, 1) for a in range(2) for b in range(2)]
    assert [m for m in quads if _naive_irreducible(m, 2)] == [(1, 1, 1)]


def test_non_prime_characteristic_rejected():
    with pytest.raises(FieldError):
        make_field(4)


def test_reducible_modulus_rejected():
    with pytest.raises(FieldError):
        make_field(2, 2, (1, 0, 1))  # w^2+1 = (w+1)^2 over F_2


def test_arithmetic_examples(F3, F4):
    assert ff_mul(F3(2), F3(2)) == F3(1)
    w = F4("w")
    assert ff_mul(w, w) == F4("w+1")
    assert ff_add(F4("w+1"), F4("w+1")) == F4(0)
    assert ff_neg(F3(1)) == F3(2)


def test_inverse_examples(F3, F4):
    assert ff_inv(F3(2)) == F3(2)
    assert ff_inv(F4("w")) == F4("w+1")
    for q in (2, 5, 9):
        F = field_of_order(q)
        assert ff_inv(F(1)) == F(1)


def test_inverse_of_zero(F3):
    with pytest.raises(ZeroDivisionError):
        ff_inv(F3(0))


def test_mismatched_fields(F3, F4):
    with pytest.raises(FieldError):
        ff_add(F3(1), F4(1))


def test_enumeration_examples(F2, F4):
    assert [str(a) for a in enumerate_elements(F2)] == ["0", "1"]
    assert [str(a) for a in enumerate_elements(F4)] == ["0", "1", "w", "w+1"]
    assert len(enumerate_elements(make_field(5))) == 5


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_enumeration_distinct_and_starts_with_0_1(q):
    els = enumerate_elements(field_of_order(q))
    assert len(els) == q == len(set(els))
    assert els[0] == field_of_order(q)(0) and els[1] == field_of_order(q)(1)


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_fermat(q):
    F = field_of_order(q)
    for a in enumerate_elements(F):
        assert ff_pow(a, q) == a


@pytest.mark.parametrize("q", PRIME_POWERS)
def test_inverse_property(q):
    F = field_of_order(q)
    for a in enumerate_elements(F)[1:]:
        assert ff_mul(a, ff_inv(a)) == F(1)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    els = enumerate_elements(F)
    zero, one = F(0), F(1)
    for a in els:
        assert a + zero == a and a * one == a and a + (-a) == zero
        for b in els:
            assert a + b == b + a and a * b == b * a
            for c in els:
                assert (a + b) + c == a + (b + c)
                assert (a * b) * c == a * (b * c)
                assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p,r", [(2, 3), (3, 2), (2, 4), (5, 2), (3, 3)])
def test_default_modulus_is_smallest_irreducible(p, r):
    F = make_field(p, r)
    assert is_irreducible(F.modulus, p) and _naive_irreducible(F.modulus, p)
    # every monic candidate before it (high coefficients first) is reducible
    for low in itertools.product(range(p), repeat=r):
        cand = tuple(reversed(low)) + (1,)
        key = tuple(reversed(cand))
        if key < tuple(reversed(F.modulus)):
            assert not _naive_irreducible(cand, p)


@pytest.mark.parametrize("q", [2, 3, 4, 8, 9, 25])
def test_render_parse_roundtrip(q):
    F = field_of_order(q)
    for a in enumerate_elements(F):
        assert F.parse_element(str(a)) == a


@given(st.sampled_from([4, 8, 9, 16, 27]), st.data())
def test_distributivity_random(q, data):
    F = field_of_order(q)
    a, b, c = (F.element(data.draw(st.integers(0, q - 1))) for _ in range(3))
    assert ff_mul(a, ff_add(b, c)) == ff_add(ff_mul(a, b), ff_mul(a, c))


def test_op_tables_agree(F4):
    add, mul = F4.op_tables
    for a in range(4):
        for b in range(4):
            assert add[a][b] == F4.add(a, b) and mul[a][b] == F4.mul(a, b)
