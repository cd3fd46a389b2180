import random
from fractions import Fraction

import mpmath as mp
import pytest

from chowreg import ChowregError, CyclotomicNumber, cyclo_arith, embed, promote_pair, workprec
from chowreg.field import cyclotomic_polynomial, euler_phi

ORDERS = [1, 2, 3, 4, 5, 8, 12]


def random_element(rng, order):
    phi = euler_phi(order)
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(phi)]
    return CyclotomicNumber(order, coeffs)


def test_i_squared():
    i = CyclotomicNumber.zeta(4)
    assert cyclo_arith(i, i, "mul") == -1


def test_identity_multiplication():
    rng = random.Random(7)
    for _ in range(30):
        order = rng.choice(ORDERS)
        x = random_element(rng, order)
        assert cyclo_arith(CyclotomicNumber.one(order), x, "mul") == x


def test_golden_ratio_minimal_polynomial():
    # x = zeta5 + zeta5^4 satisfies x^2 + x - 1 = 0
    z = CyclotomicNumber.zeta(5)
    x = z + z ** 4
    assert (x * x + x - CyclotomicNumber.one(5)).is_zero()


def test_mismatched_orders_rejected():
    a = CyclotomicNumber.zeta(4)
    b = CyclotomicNumber.zeta(3)
    with pytest.raises(ChowregError):
        cyclo_arith(a, b, "add")
    pa, pb = promote_pair(a, b)
    assert pa.order == pb.order == 12
    assert pa == CyclotomicNumber.zeta(12) ** 3
    assert pb == CyclotomicNumber.zeta(12) ** 4


def test_division_by_zero_rejected():
    a = CyclotomicNumber.one(5)
    with pytest.raises(ZeroDivisionError):
        cyclo_arith(a, CyclotomicNumber.zero(5), "div")


def test_inverse_random():
    rng = random.Random(11)
    for _ in range(40):
        order = rng.choice(ORDERS)
        x = random_element(rng, order)
        if x.is_zero():
            continue
        assert (x * x.inverse()).is_one()


def test_field_axioms_random_triples():
    rng = random.Random(13)
    for _ in range(60):
        order = rng.choice(ORDERS)
        a, b, c = (random_element(rng, order) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_conjugate_is_complex_conjugate():
    with workprec(128):
        z = CyclotomicNumber.zeta(5) + 3 * CyclotomicNumber.zeta(5) ** 2
        v = embed(z, 128).value
        w = embed(z.conjugate(), 128).value
        assert abs(v.conjugate() - w) < 1e-30


def test_embed_i_exact():
    with workprec(128):
        ball = embed(CyclotomicNumber.zeta(4), 128)
        assert ball.value == mp.mpc(0, 1)
        assert ball.radius == 0.0


def test_embed_rational_exact():
    with workprec(128):
        ball = embed(CyclotomicNumber.from_rational(Fraction(7, 2)), 128)
        assert ball.value == mp.mpf("3.5")
        assert ball.radius == 0.0


def test_embed_golden_ratio():
    with workprec(256):
        z = CyclotomicNumber.zeta(5)
        ball = embed(z + z ** 4, 256)
        expected = (mp.sqrt(5) - 1) / 2
        assert abs(ball.value - expected) <= ball.radius + mp.mpf(2) ** -250
        assert str(mp.nstr(ball.value.real, 11)).startswith("0.6180339887")


@pytest.mark.parametrize("order", ORDERS)
def test_cyclotomic_polynomial_vanishes_at_embedded_root(order):
    with workprec(192):
        z = embed(CyclotomicNumber.zeta(order), 192)
        acc = mp.mpc(0)
        for c in reversed(cyclotomic_polynomial(order)):
            acc = acc * z.value + c
        assert abs(acc) < mp.mpf(2) ** -150


def test_embedding_is_ring_homomorphism():
    rng = random.Random(17)
    with workprec(192):
        for _ in range(200):
            order = rng.choice(ORDERS)
            a = random_element(rng, order)
            b = random_element(rng, order)
            lhs = embed(a * b, 192)
            ra, rb = embed(a, 192), embed(b, 192)
            rhs = ra * rb
            assert abs(lhs.value - rhs.value) <= lhs.radius + rhs.radius + 1e-40


def test_cyclotomic_polynomial_degrees():
    for order in ORDERS:
        assert len(cyclotomic_polynomial(order)) == euler_phi(order) + 1
