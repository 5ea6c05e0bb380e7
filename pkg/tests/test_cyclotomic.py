import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from infhecke.cyclotomic import (
    BadPrime,
    CyclotomicNumber,
    PrimeResidue,
    admissible_primes,
    embed,
    euler_phi,
    reduce_mod_p,
    root_of_unity_mod_p,
)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def cyclo(draw, n=None):
    n = n or draw(st.sampled_from([1, 2, 3, 4, 5, 6, 8, 12]))
    coeffs = draw(st.lists(small_q, min_size=euler_phi(n), max_size=euler_phi(n)))
    return CyclotomicNumber(n, coeffs)


def z(n, k=1):
    return CyclotomicNumber.zeta(n, k)


def test_zeta3_sum():
    assert z(3) + z(3, 2) == -1


def test_zeta4_square():
    assert z(4) * z(4) == -1


def test_inverse_one_plus_zeta5():
    x = (1 + z(5)).inverse()
    assert x * (1 + z(5)) == 1


def test_embed_examples():
    assert embed(CyclotomicNumber.from_rational(2, -1), 4) == z(4, 2)
    assert embed(z(3), 6) == z(6, 2)


def test_embed_rejects_bad_conductor():
    with pytest.raises(ValueError):
        embed(z(3), 4)


def test_reduce_zeta3_mod_7():
    v = reduce_mod_p(z(3), 7, PrimeResidue(7, 2))
    assert v.value == 2 and pow(2, 3, 7) == 1


def test_reduce_rational():
    assert reduce_mod_p(Fraction(3, 2), 11, PrimeResidue(11, 1)).value == 7


def test_sqrt5_mod_11():
    # sqrt5 = 1 + 2(z + z^4) in Q(z5); 11 = 1 mod 5
    s5 = 1 + 2 * (z(5) + z(5, 4))
    assert s5 * s5 == 5
    root = root_of_unity_mod_p(5, 11)
    v = reduce_mod_p(s5, 11, root)
    assert (v * v).value == 5
    assert v.value in (4, 7)
    # 4 + sqrt5 has norm 11, so it dies exactly when sqrt5 -> -4 = 7
    pi_val = reduce_mod_p(4 + s5, 11, root).value
    assert (pi_val == 0) == (v.value == 7)


def test_bad_prime():
    with pytest.raises(BadPrime):
        root_of_unity_mod_p(3, 11)
    with pytest.raises(BadPrime):
        reduce_mod_p(Fraction(1, 11), 11, PrimeResidue(11, 1))


def test_admissible_primes():
    it = admissible_primes(4)
    assert [next(it) for _ in range(3)] == [13, 17, 29]


@given(cyclo())
def test_self_difference_is_zero(a):
    assert (a - a).is_zero()


@given(st.data())
def test_field_axioms_against_complex(data):
    n = data.draw(st.sampled_from([3, 4, 5, 8, 12]))
    a, b = data.draw(cyclo(n)), data.draw(cyclo(n))
    assert cmath.isclose((a * b).to_complex(), a.to_complex() * b.to_complex(), abs_tol=1e-9)
    assert cmath.isclose((a + b).to_complex(), a.to_complex() + b.to_complex(), abs_tol=1e-9)
    if not b.is_zero():
        assert (a / b) * b == a


@settings(max_examples=100)
@given(st.data())
def test_embed_is_homomorphism(data):
    n = data.draw(st.sampled_from([2, 3, 4, 6]))
    m = n * data.draw(st.sampled_from([1, 2, 3]))
    a, b = data.draw(cyclo(n)), data.draw(cyclo(n))
    assert embed(a + b, m) == embed(a, m) + embed(b, m)
    assert embed(a * b, m) == embed(a, m) * embed(b, m)


@given(st.data())
def test_reduce_is_homomorphism(data):
    n = data.draw(st.sampled_from([3, 4, 5, 6]))
    p = next(q for q in admissible_primes(n, 11) if q > 7)
    root = root_of_unity_mod_p(n, p)
    a, b = data.draw(cyclo(n)), data.draw(cyclo(n))
    ra, rb = reduce_mod_p(a, p, root), reduce_mod_p(b, p, root)
    assert reduce_mod_p(a + b, p, root) == ra + rb
    assert reduce_mod_p(a * b, p, root) == ra * rb


@given(cyclo())
def test_conjugate_matches_complex(a):
    assert cmath.isclose(a.conjugate().to_complex(), a.to_complex().conjugate(), abs_tol=1e-9)
