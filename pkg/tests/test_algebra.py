import pytest
from hypothesis import given, strategies as st

from rileyslice.algebra import (
    F,
    IDENTITY,
    PHI,
    IntPolynomial,
    LaurentPolynomial,
    SymbolicMatrix2,
    f_power,
    gamma_of,
    matrix_inverse,
    matrix_mul,
    poly_compose,
    poly_iterate,
    to_z_polynomial,
)

small_ints = st.lists(st.integers(-20, 20), max_size=6)


def P(*c):
    return IntPolynomial(tuple(c))


def test_zero_and_degree():
    assert P(0, 0).is_zero
    assert P(1, 2, 0, 0).coeffs == (1, 2)
    assert P(3, 0, 5).degree == 2
    assert P(3, 0, 5).leading == 5
    with pytest.raises(ValueError):
        P().degree


def test_arithmetic_small():
    p = P(1, 1)  # 1 + z
    assert p * p == P(1, 2, 1)
    assert p - p == P()
    assert -p == P(-1, -1)
    assert P(0, 1, -2, 1).derivative() == P(1, -4, 3)
    assert P(0, 1, -2, 1)(2) == 2
    assert str(P(0, 1, -2, 1)) == "z - 2*z^2 + z^3"


def test_compose_and_iterate():
    sq = IntPolynomial.monomial(2)
    assert poly_compose(P(1, 1), sq) == P(1, 0, 1)
    assert poly_compose(sq, P(1, 1)) == P(1, 2, 1)
    assert poly_iterate(sq, 3) == IntPolynomial.monomial(8)
    assert poly_iterate(P(0, 1, -2, 1), 0) == P(0, 1)
    assert poly_iterate(P(0, 1, -2, 1), 4).degree == 81


@given(small_ints, small_ints, st.integers(-5, 5))
def test_ring_laws_pointwise(a, b, x):
    p, q = IntPolynomial(tuple(a)), IntPolynomial(tuple(b))
    assert (p + q)(x) == p(x) + q(x)
    assert (p * q)(x) == p(x) * q(x)
    assert poly_compose(p, q)(x) == p(q(x))


@given(small_ints)
def test_json_round_trip(a):
    p = IntPolynomial(tuple(a))
    obj = p.to_json()
    assert all(isinstance(c, str) for c in obj["coeffs"])
    assert IntPolynomial.from_json(obj) == p


def test_json_keeps_big_integers():
    p = P(0, 3**80)
    assert IntPolynomial.from_json(p.to_json()).coeffs[1] == 3**80


def test_laurent_basic():
    s = LaurentPolynomial.mono(1)
    inv = LaurentPolynomial.mono(-1)
    assert s * inv == LaurentPolynomial.const(1)
    assert (s + inv)(2.0) == pytest.approx(2.5)
    L = LaurentPolynomial.mono(-2, 3) + LaurentPolynomial.mono(4, 0)
    assert L == LaurentPolynomial.mono(-2, 3)
    assert LaurentPolynomial.from_json(L.to_json()) == L


def test_symbolic_matrices():
    assert F.det() == LaurentPolynomial.const(1)
    assert PHI.det() == LaurentPolynomial.const(1)
    assert PHI.trace().is_zero
    assert matrix_mul(f_power(3), f_power(-3)) == IDENTITY
    assert matrix_mul(PHI, matrix_inverse(PHI)) == IDENTITY
    with pytest.raises(ValueError):
        matrix_inverse(SymbolicMatrix2.from_ints([[2, 0], [0, 1]]))


def test_gamma_of_phi_is_z():
    assert to_z_polynomial(gamma_of(PHI)) == P(0, 1)
    assert gamma_of(F).is_zero


def test_to_z_polynomial_rejects_odd_powers():
    with pytest.raises(ValueError):
        to_z_polynomial(LaurentPolynomial.mono(1))
    with pytest.raises(ValueError):
        to_z_polynomial(LaurentPolynomial.mono(-2))
