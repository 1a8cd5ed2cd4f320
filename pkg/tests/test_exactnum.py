import random
from fractions import Fraction

import pytest

from toricheight.exactnum import (
    LogLinearNumber,
    Place,
    approximate,
    as_loglinear,
    certified_sign,
    log_abs,
    padic_order,
    relevant_places,
)

LL = LogLinearNumber
log2 = LL.log_prime(2)
log3 = LL.log_prime(3)


def rand_rational(rng, max_abs=30, max_den=12):
    num = rng.randint(-max_abs, max_abs)
    while num == 0:
        num = rng.randint(-max_abs, max_abs)
    return Fraction(num, rng.randint(1, max_den))


class TestPadicOrder:
    def test_examples(self):
        assert padic_order(4, 2) == 2
        assert padic_order(Fraction(1, 2), 2) == -1
        assert padic_order(Fraction(1, 3), 2) == 0

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            padic_order(0, 2)

    def test_nonprime_rejected(self):
        with pytest.raises(ValueError):
            padic_order(3, 4)


class TestLogAbs:
    def test_examples(self):
        assert log_abs(4, Place.infinite()) == 2 * log2
        assert log_abs(Fraction(1, 2), Place.finite(2)) == log2
        assert log_abs(Fraction(1, 3), Place.finite(2)) == LL()

    def test_sign_discarded(self):
        assert log_abs(-4, Place.infinite()) == 2 * log2

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            log_abs(0, Place.infinite())

    def test_multiplicative(self):
        rng = random.Random(7)
        for _ in range(50):
            q, r = rand_rational(rng), rand_rational(rng)
            for v in relevant_places([q, r]):
                assert log_abs(q * r, v) == log_abs(q, v) + log_abs(r, v)


class TestRelevantPlaces:
    def test_cubic_coefficients(self):
        places = relevant_places([1, 4, Fraction(1, 3), Fraction(1, 2)])
        assert [str(v) for v in places] == ["inf", "2", "3"]

    def test_units(self):
        assert [str(v) for v in relevant_places([1, 1])] == ["inf"]

    def test_factorization(self):
        assert [str(v) for v in relevant_places([6, Fraction(1, 5)])] == ["inf", "2", "3", "5"]

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            relevant_places([1, 0])

    def test_product_formula(self):
        rng = random.Random(11)
        for _ in range(200):
            q = rand_rational(rng)
            total = LL()
            for v in relevant_places([q]):
                total = total + log_abs(q, v)
            assert total == LL()


class TestCertifiedSign:
    def test_examples(self):
        assert certified_sign(LL()) == 0
        assert certified_sign(3 * log2 - log3) == 1
        assert certified_sign(1 - log3) == -1

    def test_close_call(self):
        # log(9) - 2 log(3) is exactly zero only coefficient-wise; a nearby
        # nonzero combination must still resolve
        x = 16 * log2 - 11 - LL.from_rational(Fraction(9035, 100000))
        # 16 log 2 = 11.0903548...
        assert certified_sign(x) == 1

    def test_matches_float(self):
        rng = random.Random(3)
        for _ in range(200):
            x = LL.from_rational(rand_rational(rng)) + rand_rational(rng) * log2
            x = x + rand_rational(rng) * log3
            text, err = approximate(x, 64)
            val = float(text)
            if abs(val) > err:
                assert certified_sign(x) == (1 if val > 0 else -1)


class TestApproximate:
    def test_height_value(self):
        text, err = approximate(7 * log2 + 3 * log3, 64)
        assert text.startswith("8.14786")
        assert err <= 2.0**-60

    def test_zero(self):
        assert approximate(LL(), 64) == ("0", 0.0)

    def test_log2(self):
        text, _ = approximate(log2, 64)
        assert text.startswith("0.693147")

    def test_bits_floor(self):
        with pytest.raises(ValueError):
            approximate(log2, 8)

    def test_additivity_within_bounds(self):
        rng = random.Random(5)
        for _ in range(50):
            a = rand_rational(rng) * log2 + rand_rational(rng)
            b = rand_rational(rng) * log3 + rand_rational(rng)
            ta, ea = approximate(a, 64)
            tb, eb = approximate(b, 64)
            ts, es = approximate(a + b, 64)
            # the bounds certify the strings; reading them as float64 costs
            # up to one ulp each
            slop = 1e-13 * max(1.0, abs(float(ts)))
            assert abs(float(ts) - float(ta) - float(tb)) <= ea + eb + es + slop


class TestLogLinearNumber:
    def test_canonical_printing(self):
        assert str(LL()) == "0"
        assert str(7 * log2 + 3 * log3) == "7*log(2) + 3*log(3)"
        assert str(LL.from_rational(Fraction(1, 2)) - 3 * log2) == "1/2 - 3*log(2)"
        assert str(-2 * log3) == "-2*log(3)"

    def test_equality_is_coefficientwise(self):
        assert 2 * log2 + log3 == log3 + 2 * log2
        assert 2 * log2 != 2 * log3
        assert LL.from_rational(3) == 3
        assert hash(LL.from_rational(3)) == hash(Fraction(3))

    def test_scalar_arithmetic(self):
        x = 3 * log2 - Fraction(1, 2)
        assert x / 3 == log2 - Fraction(1, 6)
        assert -x == Fraction(1, 2) - 3 * log2
        assert x * 0 == LL()

    def test_irrational_product_rejected(self):
        with pytest.raises(TypeError):
            log2 * log3
        with pytest.raises(TypeError):
            log2 / log3

    def test_rational_product_allowed(self):
        assert log2 * LL.from_rational(2) == 2 * log2

    def test_ordering(self):
        assert log3 > log2
        assert log2 < 1
        assert 3 * log2 > 2

    def test_coefficient_map(self):
        m = (7 * log2 + 3 * log3 + Fraction(1, 4)).coefficient_map()
        assert m == {"constant": Fraction(1, 4), "2": Fraction(7), "3": Fraction(3)}

    def test_abs(self):
        assert abs(log2 - log3) == log3 - log2


class TestPlace:
    def test_validation(self):
        with pytest.raises(ValueError):
            Place.finite(6)

    def test_ordering(self):
        places = [Place.finite(5), Place.infinite(), Place.finite(2)]
        assert [str(v) for v in sorted(places, key=Place.sort_key)] == ["inf", "2", "5"]

    def test_as_loglinear(self):
        assert as_loglinear(Fraction(2, 3)) == LL.from_rational(Fraction(2, 3))
        assert as_loglinear(log2) is log2
