import math
from fractions import Fraction

import pytest
from sympy import primerange

from pgap.census import counts_at_stages
from pgap.estimates import (
    EULER_GAMMA,
    Estimate,
    constants,
    expected_below_square,
    expected_in_interval,
    hl_difference_estimate,
    hl_ktuple_estimate,
    hl_quadruplet_estimate,
    mean_gap,
    mean_gap_asymptotic,
    refined_expected,
    round_half_up,
    singular_product,
    twin_closed_form,
)
from pgap.gapcycle import primorial
from pgap.primes import prime_index
from reference_tables import C2_DIGITS, C4_DIGITS


def truncated(x, digits):
    return f"{math.floor(x * 10**digits) / 10**digits:.{digits}f}"


def test_round_half_up():
    assert [round_half_up(x) for x in (0.5, 1.5, 2.5, -2.5, 7.857, Fraction(17, 2))] == [1, 2, 3, -2, 8, 9]


def test_mean_gap():
    assert mean_gap(3) == Fraction(30, 8) == 3.75
    assert mean_gap(4) == Fraction(210, 48)
    assert float(mean_gap(9)) == pytest.approx(223092870 / 36495360)
    assert float(mean_gap(9)) == pytest.approx(6.1129, abs=1e-4)
    # Mertens: ratio to e^gamma ln p tends to 1
    assert abs(float(mean_gap(1000)) / mean_gap_asymptotic(1000) - 1) < 0.01


def test_expected_in_interval():
    e = expected_in_interval("2", 4, (11, 121))
    assert e.exact == Fraction(15, 48) * 110 / Fraction(210, 48)
    assert e.value == pytest.approx(7.857, abs=1e-3)
    assert expected_in_interval("2", 1, (5, 5)).exact == 0
    assert expected_in_interval("2,4,2", 3, (7, 49)).value == pytest.approx(1.4)


def test_j_correction_changes_denominator():
    a = expected_in_interval("2,4,2", 4, (11, 121))
    b = expected_in_interval("2,4,2", 4, (11, 121), j_correction=True)
    assert b.exact / a.exact == Fraction(48, 46)


def test_expected_below_square_examples():
    assert expected_below_square("2", 4).exact == Fraction(15 * 110, 210)
    assert expected_below_square("2", 4).rounded == 8
    assert expected_below_square("2", 5).value == pytest.approx(135 * 156 / 2310)
    assert expected_below_square("2", 5).rounded == 9
    assert expected_below_square("2,4,2", prime_index(101) - 1).rounded == 9


@pytest.mark.parametrize("s", ["2", "6", "2,4,2", "2,10,2"])
@pytest.mark.parametrize("k", [4, 9, 30])
def test_exact_mu_identity(s, k):
    n = counts_at_stages(s, [k])[k]
    e = expected_below_square(s, k)
    nxt = int(list(primerange(2, 10**5))[k])
    assert e.exact * primorial(k) == n * (nxt * nxt - nxt)


def test_constants_digits():
    c = constants()
    assert c.Q == 10**6
    assert truncated(c.c2, 7) == C2_DIGITS
    assert truncated(c.c4, 5) == C4_DIGITS
    assert 0 < 1 - c.c2_tail < 1e-6
    assert 0 < 1 - c.c4_tail < 1e-5


def test_constants_against_plain_products():
    c2 = math.prod(1 - 1 / (q - 1) ** 2 for q in primerange(3, 10**5))
    c4 = math.prod(q**3 * (q - 4) / (q - 1) ** 4 for q in primerange(5, 10**5))
    c = constants()
    # the tails between 1e5 and 1e6 move c2 by about 1e-6 and c4 by 6e-6
    assert c.c2 == pytest.approx(c2, rel=2e-6)
    assert c.c4 == pytest.approx(c4, rel=1e-5)


def test_twin_closed_form():
    k = prime_index(101) - 1
    assert twin_closed_form(k) == pytest.approx(201, abs=1)
    assert twin_closed_form(2) > 0
    ratio = [twin_closed_form(k) / expected_below_square("2", k).value for k in (10, 100, 500, 1000, 1700)]
    assert all(abs(b - 1) < abs(a - 1) for a, b in zip(ratio, ratio[1:]))
    assert abs(ratio[-1] - 1) < 2e-3


def test_hl_difference_examples():
    assert round_half_up(hl_difference_estimate(2, 101)) == 152
    assert hl_difference_estimate(2, 101) == pytest.approx(151.8, abs=0.1)
    assert round_half_up(hl_difference_estimate(2, 199)) == 457
    assert round_half_up(hl_difference_estimate(2, 11)) == 4
    with pytest.raises(ValueError):
        hl_difference_estimate(3, 11)


def test_hl_difference_factor():
    # d = 6: factor (3-1)/(3-2) = 2; d = 30: 2 * 4/3
    assert hl_difference_estimate(6, 101) / hl_difference_estimate(2, 101) == pytest.approx(2)
    assert hl_difference_estimate(30, 101) / hl_difference_estimate(2, 101) == pytest.approx(8 / 3)


def test_hl_quadruplet_examples():
    assert round_half_up(hl_quadruplet_estimate(101)) == 5
    assert round_half_up(hl_quadruplet_estimate(199)) == 12
    assert round_half_up(hl_quadruplet_estimate(11)) == 0


def test_ktuple_telescopes():
    for p in (101, 1009):
        e = hl_ktuple_estimate((0, 2), p)
        assert e.admissible
        assert e.value == pytest.approx(hl_difference_estimate(2, p), rel=1e-5)
        q = hl_ktuple_estimate((0, 2, 6, 8), p)
        assert q.value == pytest.approx(hl_quadruplet_estimate(p), rel=1e-5)
        assert q.truncation_bound < 1e-4


def test_ktuple_inadmissible():
    e = hl_ktuple_estimate((0, 2, 4), 101)
    assert e.value == 0.0 and not e.admissible
    assert hl_ktuple_estimate((0, 1), 101).value == 0.0
    with pytest.raises(ValueError):
        hl_ktuple_estimate((2, 4), 101)


def test_singular_product_zero_when_covered():
    assert singular_product((0, 2, 4))[0] == 0.0
    assert singular_product((0, 2, 6, 8))[0] > 0


def test_refined_expected():
    base = expected_below_square("2", 4).value
    ref = refined_expected("2", 4).value
    assert base < ref < base * 1.05
    assert math.isfinite(refined_expected("2", 2).value)
    for s in ("2", "6", "2,4,2", "2,10,2"):
        for k in (9, 10, 12):
            a, b = refined_expected(s, k).value, expected_below_square(s, k).value
            assert abs(a - b) / b < 1e-3


def test_estimate_forms():
    e = Estimate(Fraction(5, 2))
    assert e.value == 2.5 and e.rounded == 3 and float(e) == 2.5


def test_euler_gamma():
    assert EULER_GAMMA == pytest.approx(0.5772156649015329)
