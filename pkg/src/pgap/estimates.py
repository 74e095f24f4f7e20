"""
Expected counts of constellations among primes in ``[p, p^2]``.

Two families of estimates are compared with actual counts:

* sieve estimates, which spread the ``N_{p_k}(s)`` copies of ``s`` in
  ``G(p_k)`` uniformly over ``[1, Pi_k]`` and sample the window
  ``[p_{k+1}, p_{k+1}^2]``;
* Hardy-Littlewood estimates, a singular-series constant times
  ``F(p^2) - F(p)`` with ``F(x) = x / ln(x)^(m+1)`` for ``m`` extra primes.

Exact quantities (``mu``, the sieve estimate) are kept as
:class:`fractions.Fraction`; displayed values are rounded half-up.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from pgap.constellation import ConstellationLike, as_constellation
from pgap.gapcycle import middle_pattern, primorial, totient_primorial
from pgap.primes import first_primes, primes_up_to

__all__ = [
    "EULER_GAMMA",
    "DEFAULT_Q",
    "Constants",
    "Estimate",
    "KTupleEstimate",
    "constants",
    "round_half_up",
    "singular_product",
    "mean_gap",
    "mean_gap_asymptotic",
    "expected_in_interval",
    "expected_below_square",
    "twin_closed_form",
    "hl_difference_estimate",
    "hl_quadruplet_estimate",
    "hl_ktuple_estimate",
    "refined_expected",
]

log = logging.getLogger(__name__)

EULER_GAMMA = 0.57721566490153286061
DEFAULT_Q = 10**6


def round_half_up(x) -> int:
    """Nearest integer, ties away from zero toward +inf (``2.5 -> 3``, ``-2.5 -> -2``)."""
    return math.floor(Fraction(x) + Fraction(1, 2))


@dataclass(frozen=True)
class Constants:
    euler_gamma: float
    c2: float
    c4: float
    Q: int
    c2_tail: float
    c4_tail: float


def _tail_log_estimate(coef: float, Q: int) -> float:
    # sum over primes q > Q of coef / q^2  ~  coef * int_Q^inf dx / (x^2 ln x)
    from scipy.integrate import quad

    val, _ = quad(lambda x: 1.0 / (x * x * math.log(x)), Q, np.inf)
    return coef * val


@lru_cache(maxsize=4)
def constants(Q: int = DEFAULT_Q) -> Constants:
    """Twin-prime and quadruplet constants as products over primes ``<= Q``.

    ``c2_tail`` / ``c4_tail`` estimate the factor contributed by the
    primes above ``Q`` (the truncated values omit it).
    """
    q = primes_up_to(Q).astype(np.float64)
    q3 = q[q >= 3]
    q5 = q[q >= 5]
    c2 = math.exp(float(np.sum(np.log1p(-1.0 / (q3 - 1.0) ** 2))))
    c4 = math.exp(float(np.sum(3 * np.log(q5) + np.log(q5 - 4) - 4 * np.log(q5 - 1))))
    c2_tail = math.exp(-_tail_log_estimate(1.0, Q))
    c4_tail = math.exp(-_tail_log_estimate(6.0, Q))
    log.info("c2=%.12f (tail factor %.3e), c4=%.12f (tail factor %.3e), Q=%d",
             c2, c2_tail - 1, c4, c4_tail - 1, Q)
    return Constants(EULER_GAMMA, c2, c4, Q, c2_tail, c4_tail)


def _residue_classes(offsets: Sequence[int], q: int) -> int:
    return len({b % q for b in offsets})


def singular_product(offsets: Sequence[int], Q: int = DEFAULT_Q) -> tuple[float, float]:
    """``prod_{3 <= q <= Q} (q/(q-1))^m (1 - phi_q/q)`` for ``m = len(offsets)``.

    ``phi_q`` counts the distinct residues of ``offsets`` mod ``q``.
    Returns ``(value, tail_bound)`` where ``tail_bound`` bounds the
    relative change from primes above ``Q``.  The value is exactly 0 when
    some ``q`` has every residue covered.
    """
    m = len(offsets)
    spread = max(offsets) - min(offsets)
    qs = primes_up_to(Q)[1:]
    small = qs[qs <= max(spread, m)]
    large = qs[qs > max(spread, m)].astype(np.float64)
    logsum = 0.0
    for q in small.tolist():
        phi = _residue_classes(offsets, q)
        if phi >= q:
            return 0.0, 0.0
        logsum += m * math.log(q / (q - 1)) + math.log1p(-phi / q)
    # above the spread all offsets are distinct mod q
    logsum += float(np.sum(m * np.log(large / (large - 1.0)) + np.log1p(-m / large)))
    tail = math.expm1(m * m / Q)
    return math.exp(logsum), tail


def mean_gap(k: int) -> Fraction:
    """``mu = Pi_k / Phi_k``, the mean gap of ``G(p_k)``."""
    if k < 1:
        raise ValueError(f"stage must be >= 1, got {k}")
    return Fraction(primorial(k), totient_primorial(k))


def mean_gap_asymptotic(k: int) -> float:
    """``e^gamma ln p_k``; the limit of :func:`mean_gap` relative to it is 1."""
    return math.exp(EULER_GAMMA) * math.log(first_primes(k)[-1])


@dataclass(frozen=True)
class Estimate:
    """An estimate kept exactly (``exact``) with its float and rounded forms."""

    exact: Fraction

    @property
    def value(self) -> float:
        return float(self.exact)

    @property
    def rounded(self) -> int:
        return round_half_up(self.exact)

    def __float__(self) -> float:
        return self.value


def _count(s, k, count):
    if count is not None:
        return count
    from pgap.census import counts_at_stages

    return counts_at_stages(s, [k])[k]


def expected_in_interval(s: ConstellationLike, k: int, interval: tuple[int, int],
                         count: int | None = None, *, j_correction: bool = False) -> Estimate:
    """``N/Phi_k * |I|/mu``: copies of ``s`` expected in ``interval`` if spread uniformly.

    ``count`` is ``N_{p_k}(s)``; computed from the census when omitted.
    With ``j_correction`` the denominator is ``Phi_k - j + 1``.
    """
    s = as_constellation(s)
    lo, hi = interval
    width = max(0, hi - lo)
    n = _count(s, k, count)
    phi = totient_primorial(k)
    denom = phi - len(s) + 1 if j_correction else phi
    return Estimate(Fraction(n, denom) * width / mean_gap(k))


def expected_below_square(s: ConstellationLike, k: int, count: int | None = None) -> Estimate:
    """``N_{p_k}(s) (p_{k+1}^2 - p_{k+1}) / Pi_k``, the estimate for ``[p_{k+1}, p_{k+1}^2]``."""
    s = as_constellation(s)
    n = _count(s, k, count)
    nxt = first_primes(k + 1)[-1]
    return Estimate(Fraction(n * (nxt * nxt - nxt), primorial(k)))


def twin_closed_form(k: int, consts: Constants | None = None) -> float:
    """``2 e^{-2 gamma} c2 (p_{k+1}^2 - p_{k+1}) / ln^2 p_k``."""
    consts = consts or constants()
    ps = first_primes(k + 1)
    p, nxt = ps[-2], ps[-1]
    return 2 * math.exp(-2 * EULER_GAMMA) * consts.c2 * (nxt * nxt - nxt) / math.log(p) ** 2


def _window(p: int, power: int) -> float:
    def F(x):
        return x / math.log(x) ** power

    return F(p * p) - F(p)


def hl_difference_estimate(d: int, p: int, consts: Constants | None = None) -> float:
    """Prime pairs ``(q, q + d)`` with ``q`` in ``[p, p^2]``: ``2 c2 prod_{q|d} (q-1)/(q-2) (F(p^2) - F(p))``."""
    if d < 2 or d % 2:
        raise ValueError(f"d must be even and >= 2, got {d}")
    consts = consts or constants()
    factor = 1.0
    for q in first_primes(max(2, d))[1:]:
        if q > d:
            break
        if d % q == 0:
            factor *= (q - 1) / (q - 2)
    return 2 * consts.c2 * factor * _window(p, 2)


def hl_quadruplet_estimate(p: int, consts: Constants | None = None) -> float:
    """``(27/2) c4 (G(p^2) - G(p))`` with ``G(x) = x / ln^4 x``."""
    consts = consts or constants()
    return 13.5 * consts.c4 * _window(p, 4)


@dataclass(frozen=True)
class KTupleEstimate:
    value: float
    admissible: bool
    singular: float
    truncation_bound: float


def hl_ktuple_estimate(b: Sequence[int], p: int, Q: int = DEFAULT_Q) -> KTupleEstimate:
    """General k-tuple estimate for offsets ``b = (0, b_1, ..., b_k)``.

    ``2^k prod_{3<=q<=Q} (q/(q-1))^{k+1} (1 - phi_q(b)/q) (H(p^2) - H(p))``
    with ``H(x) = x / ln^{k+1} x``.  Inadmissible tuples return exactly 0.
    """
    b = tuple(int(x) for x in b)
    if len(b) < 2 or b[0] != 0 or any(y <= x for x, y in zip(b, b[1:])):
        raise ValueError(f"offsets must start at 0 and ascend strictly: {b}")
    k = len(b) - 1
    # mod 2: the offsets are even or the tuple is blocked
    if _residue_classes(b, 2) >= 2:
        return KTupleEstimate(0.0, False, 0.0, 0.0)
    sing, tail = singular_product(b, Q)
    if sing == 0.0:
        return KTupleEstimate(0.0, False, 0.0, 0.0)
    return KTupleEstimate(2**k * sing * _window(p, k + 1), True, sing, tail)


def refined_expected(s: ConstellationLike, k: int, count: int | None = None) -> Estimate:
    """Sieve estimate over the half cycle ``[p_k, Pi_k/2 - 2^{j+1}]``.

    By symmetry half of the copies of ``s`` lie in the first half of the
    cycle.  Before halving, the numerator drops the copies that are known
    not to be spread uniformly: the unpaired final 2 (for ``s == [2]``)
    and copies lying inside the middle constellation.
    """
    s = as_constellation(s)
    n = _count(s, k, count)
    span = primorial(k)
    p = first_primes(k)[-1]
    nxt = first_primes(k + 1)[-1]
    if k >= 2:
        j, middle = middle_pattern(nxt)
        mid = sum(
            1 for i in range(len(middle) - len(s) + 1) if tuple(middle[i : i + len(s)]) == s.gaps
        )
        top = 2 ** (j + 1)
    else:
        mid, top = 0, 0
    final = 1 if s.gaps == (2,) else 0
    numer = Fraction(max(n - final - mid, 0), 2)
    denom = Fraction(span, 2) - top - p
    if denom <= 0:
        denom = Fraction(span)
        numer = Fraction(n)
    return Estimate(numer * (nxt * nxt - nxt) / denom)

