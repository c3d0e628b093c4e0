"""Scalar layer: frozen oracles and algebraic property tests."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qfock.scalars import (
    CY_I, CY_ONE, Cyclo8, SFrac, Scalar, ScalarSeries, V, Q,
    minus_one_pow, q_binomial, q_factorial, q_integer, taylor_quotient,
)


def qp(x):
    return Scalar.q_power(Fraction(x))


# ---------------------------------------------------------------------------
# Cyclo8
# ---------------------------------------------------------------------------

def test_zeta_powers():
    z = Cyclo8(0, 1, 0, 0)
    assert z * z == CY_I
    assert (z * z) * (z * z) == Cyclo8(-1)
    z8 = CY_ONE
    for _ in range(8):
        z8 = z8 * z
    assert z8 == CY_ONE


def test_cyclo_inverse_oracle():
    # (1 + zeta)^-1, checked by multiplying back.
    a = Cyclo8(1, 1, 0, 0)
    assert a * a.inverse() == CY_ONE
    assert CY_I.inverse() == Cyclo8(0, 0, -1, 0)


cyclo_elems = st.builds(
    Cyclo8,
    *[st.fractions(min_value=-5, max_value=5, max_denominator=6)] * 4,
)


@given(cyclo_elems, cyclo_elems, cyclo_elems)
def test_cyclo_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)


@given(cyclo_elems)
def test_cyclo_inverse_roundtrip(a):
    if a:
        assert a * a.inverse() == CY_ONE


# ---------------------------------------------------------------------------
# Scalar (Laurent ring)
# ---------------------------------------------------------------------------

def test_quarter_grid():
    u = qp(Fraction(1, 4))
    assert u * u == V
    assert V * V == Q
    with pytest.raises(ValueError):
        Scalar.q_power(Fraction(1, 8))


def test_divexact_oracle():
    # (q^2 - q^-2) / (q - q^-1) = q + q^-1, by long division.
    num = qp(2) - qp(-2)
    den = qp(1) - qp(-1)
    assert num.divexact(den) == qp(1) + qp(-1)
    with pytest.raises(ValueError):
        (qp(1) + Scalar.one()).divexact(den)


def small_scalars():
    monos = st.tuples(
        st.integers(min_value=-6, max_value=6),
        st.integers(min_value=-3, max_value=3),
        st.sampled_from([0, 1, 2, 3]),
    )
    def build(ms):
        out = Scalar.zero()
        for e, c, zp in ms:
            out = out + Scalar({e: Cyclo8(*[c if i == zp else 0 for i in range(4)])})
        return out
    return st.lists(monos, max_size=4).map(build)


@given(small_scalars(), small_scalars(), small_scalars())
def test_scalar_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * (b * c) == (a * b) * c
    assert a + b == b + a


@given(small_scalars(), small_scalars())
def test_divmod_multiply_back(a, b):
    if a and b:
        quo, rem = a.divmod_poly(b)
        assert a.shift(-a.min_exp()) == quo * b.shift(-b.min_exp()) + rem


# ---------------------------------------------------------------------------
# SFrac
# ---------------------------------------------------------------------------

def test_sfrac_canonical_form():
    # (q^2 - 1)/(q - 1) reduces to the Laurent polynomial q + 1.
    f = SFrac(qp(2) - Scalar.one(), qp(1) - Scalar.one())
    assert f == SFrac.of_scalar(qp(1) + Scalar.one())
    # A genuine fraction keeps den lowest-exponent 0, leading coeff 1.
    g = SFrac(Scalar.one(), qp(1) - qp(-1))
    assert g.den.min_exp() == 0
    assert g.den.leading()[1] == CY_ONE


@given(small_scalars(), small_scalars(), small_scalars())
def test_sfrac_field_axioms(a, b, c):
    if not c:
        c = Scalar.one()
    fa, fb = SFrac(a, c), SFrac(b, c)
    assert fa + fb == SFrac(a + b, c)
    if b:
        prod = SFrac(a, c) / SFrac(b, c)
        assert prod == SFrac(a, b)


def test_sfrac_cross_equality():
    # Equality by cross-multiplication is implied by canonical forms.
    lhs = SFrac(qp(1) + qp(-1), qp(1) - qp(-1))
    rhs = SFrac((qp(1) + qp(-1)) * (qp(2) - Scalar.one()),
                (qp(1) - qp(-1)) * (qp(2) - Scalar.one()))
    assert lhs == rhs


# ---------------------------------------------------------------------------
# q-combinatorics, frozen against independent oracles
# ---------------------------------------------------------------------------

def test_q_integer_frozen():
    # [3]_q = q^2 + 1 + q^-2
    assert q_integer(3, Q) == qp(2) + Scalar.one() + qp(-2)
    assert q_integer(0, Q) == Scalar.zero()
    assert q_integer(-3, Q) == -q_integer(3, Q)
    # base q^(1/2): [2]_(q^(1/2)) = q^(1/2) + q^(-1/2)
    assert q_integer(2, V) == qp(Fraction(1, 2)) + qp(Fraction(-1, 2))


def test_q_integer_division_oracle():
    # Independent oracle: literal (z^k - z^-k)/(z - z^-1) by long division.
    for k in range(1, 7):
        for z in (Q, V, Q * Q):
            zinv = z.inverse_if_unit()
            num = z ** k - zinv ** k
            den = z - zinv
            assert q_integer(k, z) == num.divexact(den)


def test_q_binomial_frozen():
    # [2 choose 1]_q = q + q^-1
    assert q_binomial(2, 1, Q) == qp(1) + qp(-1)
    # At base zeta^2 * q (the twisted base used by one Serre family):
    zq = Scalar.of(CY_I, Fraction(1))
    assert q_binomial(2, 1, zq) == Scalar.of(CY_I, 1) + Scalar.of(CY_I.inverse(), -1)


def test_q_binomial_pascal_oracle():
    # Independent recurrence oracle: [n k] = z^k [n-1 k] + z^(k-n) [n-1 k-1].
    for z in (Q, V):
        zi = z.inverse_if_unit()
        for n in range(1, 7):
            for k in range(0, n + 1):
                lhs = q_binomial(n, k, z)
                rhs = (z ** k) * q_binomial(n - 1, k, z) + \
                    (zi ** (n - k)) * q_binomial(n - 1, k - 1, z)
                assert lhs == rhs


def test_q_factorial():
    assert q_factorial(3, Q) == q_integer(1, Q) * q_integer(2, Q) * q_integer(3, Q)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

def test_taylor_quotient_multiply_back():
    # 1/(1 - q x): coefficients q^k.
    s = taylor_quotient([Scalar.one()], [Scalar.one(), -qp(1)], 5)
    assert s.coeffs == [qp(k) for k in range(6)]
    # Multiply-back oracle on a denser example.
    num = [Scalar.one(), qp(1), qp(-1)]
    den = [qp(2), Scalar.one() + qp(1)]
    s = taylor_quotient(num, den, 8)
    back = [Scalar.zero()] * 9
    for i, c in enumerate(s.coeffs):
        for j, d in enumerate(den):
            if i + j <= 8:
                back[i + j] = back[i + j] + c * d
    for k in range(9):
        expect = num[k] if k < len(num) else Scalar.zero()
        assert back[k] == expect


def test_series_direction_guard():
    a = ScalarSeries([Scalar.one()], at_zero=True)
    b = ScalarSeries([Scalar.one()], at_zero=False)
    with pytest.raises(ValueError):
        a * b


def test_minus_one_pow_branch():
    assert minus_one_pow(Fraction(1, 2)) == Scalar.of(CY_I)
    assert minus_one_pow(1) == Scalar.of(-1)
    assert minus_one_pow(Fraction(-1, 2)) == Scalar.of(CY_I.inverse())
    assert minus_one_pow(-3) == Scalar.of(-1)
