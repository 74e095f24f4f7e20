"""
Consecutive primes and their gaps over an interval.

A segmented, odd-only sieve of Eratosthenes produces the primes in
``[a, b]``; :class:`PrimeGapStream` carries them together with a few
primes beyond ``b`` so that constellations starting near the top of the
interval can still be closed.  Constellations among primes are counted
with the start-anchored convention: an occurrence belongs to ``[lo, hi]``
when its first prime does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from pgap.constellation import Constellation, as_constellation

__all__ = [
    "SIEVE_CEILING",
    "SEGMENT_ODDS",
    "SieveCeilingError",
    "PrimeGapStream",
    "primes_up_to",
    "first_primes",
    "nth_prime",
    "prime_index",
    "segmented_primes",
    "count_prime_constellations",
    "prime_gaps_in_cycle_window",
]

SIEVE_CEILING = 2**31
SEGMENT_ODDS = 2**20


class SieveCeilingError(ValueError):
    """Requested interval reaches past the configured sieve ceiling."""


def primes_up_to(n: int) -> np.ndarray:
    """Return all primes ``<= n`` as an int64 array (plain sieve)."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for q in range(3, math.isqrt(n) + 1, 2):
        if flags[q]:
            flags[q * q :: 2 * q] = False
    return np.flatnonzero(flags).astype(np.int64)


@lru_cache(maxsize=8)
def _prime_table(count: int) -> tuple[int, ...]:
    # p_n < n (ln n + ln ln n) for n >= 6
    bound = 15
    if count >= 6:
        bound = int(count * (math.log(count) + math.log(math.log(count)))) + 1
    table = primes_up_to(bound)
    return tuple(int(q) for q in table[:count])


def first_primes(count: int) -> tuple[int, ...]:
    """The first ``count`` primes, ``(2, 3, 5, ...)``."""
    if count <= 0:
        return ()
    # round the request up so nearby calls share one table
    size = max(64, 1 << (count - 1).bit_length())
    return _prime_table(size)[:count]


def nth_prime(k: int) -> int:
    """``p_k`` with 1-based indexing: ``nth_prime(1) == 2``."""
    if k < 1:
        raise ValueError(f"prime index must be >= 1, got {k}")
    return first_primes(k)[-1]


def prime_index(p: int) -> int:
    """Inverse of :func:`nth_prime`; raises if ``p`` is not prime."""
    bound = max(64, p)
    table = primes_up_to(bound)
    pos = int(np.searchsorted(table, p))
    if pos >= table.size or table[pos] != p:
        raise ValueError(f"{p} is not prime")
    return pos + 1


@dataclass(frozen=True)
class PrimeGapStream:
    """Consecutive primes in ``[lo, hi]`` plus ``beyond``, the next few primes.

    ``gaps[i] = all_primes[i + 1] - all_primes[i]`` where ``all_primes`` is
    ``primes`` followed by ``beyond``.
    """

    lo: int
    hi: int
    primes: np.ndarray
    beyond: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))

    @property
    def all_primes(self) -> np.ndarray:
        if self.beyond.size == 0:
            return self.primes
        return np.concatenate((self.primes, self.beyond))

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(self.all_primes)

    def __len__(self) -> int:
        return int(self.primes.size)

    def starts(self, s: Constellation | str | tuple, lo: int | None = None,
               hi: int | None = None) -> np.ndarray:
        """Primes in ``[lo, hi]`` that start an occurrence of ``s``.

        Raises ``ValueError`` if the stream does not carry enough primes
        past ``hi`` to decide the occurrences near the top.
        """
        s = as_constellation(s)
        lo = self.lo if lo is None else lo
        hi = self.hi if hi is None else hi
        if lo < self.lo or hi > self.hi:
            raise ValueError(f"[{lo}, {hi}] is not inside the stream [{self.lo}, {self.hi}]")
        allp = self.all_primes
        i0 = int(np.searchsorted(allp, lo, side="left"))
        i1 = int(np.searchsorted(allp, hi, side="right"))
        j = len(s)
        if i1 + j > allp.size:
            raise ValueError(f"stream carries too few primes past {hi} to close {s}")
        if i1 <= i0:
            return np.zeros(0, dtype=np.int64)
        window = np.diff(allp[i0 : i1 + j])
        n = i1 - i0
        mask = np.ones(n, dtype=bool)
        for t, g in enumerate(s.gaps):
            mask &= window[t : t + n] == g
        return allp[i0:i1][mask]

    def count(self, s: Constellation | str | tuple, lo: int | None = None,
              hi: int | None = None) -> int:
        return int(self.starts(s, lo, hi).size)


def _sieve_segment(low: int, high: int, base: np.ndarray) -> np.ndarray:
    """Odd primes in ``[low, high)``; ``low`` odd, base holds odd primes <= sqrt(high)."""
    n = (high - low + 1) // 2
    mask = np.ones(n, dtype=bool)
    for q in base:
        q = int(q)
        q2 = q * q
        if q2 >= high:
            break
        start = max(q2, -(-low // q) * q)
        if start % 2 == 0:
            start += q
        if start >= high:
            continue
        mask[(start - low) // 2 :: q] = False
    vals = low + 2 * np.flatnonzero(mask).astype(np.int64)
    return vals[vals < high]


def segmented_primes(a: int, b: int, tail: int = 0, *, ceiling: int = SIEVE_CEILING,
                     segment_odds: int = SEGMENT_ODDS) -> PrimeGapStream:
    """Primes in ``[a, b]`` by a segmented odd-only sieve.

    Parameters
    ----------
    a, b : int
        Closed interval, ``2 <= a <= b <= ceiling``.
    tail : int
        Number of primes beyond ``b`` to carry along (used to close
        constellations that start near ``b``).
    ceiling : int
        Largest integer the sieve is allowed to touch.
    segment_odds : int
        Odd numbers per segment.

    Returns
    -------
    PrimeGapStream
    """
    if a < 2 or b < a:
        raise ValueError(f"need 2 <= a <= b, got a={a}, b={b}")
    if b > ceiling:
        raise SieveCeilingError(f"b={b} exceeds the sieve ceiling {ceiling}")

    chunks: list[np.ndarray] = []
    extra: list[int] = []
    if a <= 2 <= b:
        chunks.append(np.array([2], dtype=np.int64))

    # sieve to b, then keep extending past b until `tail` primes are found
    target = b
    if tail:
        target = b + max(64, 4 * tail * max(1, int(math.log(b + 2)) ** 2))
    while True:
        if target > ceiling:
            raise SieveCeilingError(f"closing {tail} primes past {b} exceeds ceiling {ceiling}")
        base = primes_up_to(math.isqrt(target) + 1)[1:]
        low = max(3, a)
        if low % 2 == 0:
            low += 1
        span = 2 * segment_odds
        found: list[np.ndarray] = []
        while low <= target:
            high = min(low + span, target + 1)
            found.append(_sieve_segment(low, high, base))
            low = high if high % 2 else high + 1
        odd = np.concatenate(found) if found else np.zeros(0, dtype=np.int64)
        inside = odd[odd <= b]
        outside = odd[odd > b]
        if outside.size >= tail or not tail:
            chunks.append(inside)
            extra = outside[:tail].tolist()
            break
        target = b + 2 * (target - b)

    primes = np.concatenate(chunks) if chunks else np.zeros(0, dtype=np.int64)
    return PrimeGapStream(a, b, primes.astype(np.int64), np.array(extra, dtype=np.int64))


def count_prime_constellations(s: Constellation | str | tuple, p: int,
                               stream: PrimeGapStream | None = None, *,
                               ceiling: int = SIEVE_CEILING) -> int:
    """Count consecutive-prime occurrences of ``s`` whose first prime lies in ``[p, p*p]``.

    ``stream`` may be a precomputed stream covering ``[p, p*p]``; otherwise
    one is sieved.
    """
    s = as_constellation(s)
    hi = p * p
    if hi > ceiling:
        raise SieveCeilingError(f"p^2={hi} exceeds the sieve ceiling {ceiling}")
    if stream is None:
        stream = segmented_primes(p, hi, tail=len(s), ceiling=ceiling)
    return stream.count(s, p, hi)


def prime_gaps_in_cycle_window(k: int, cycle=None) -> PrimeGapStream:
    """Primes read straight off the cycle of gaps ``G(p_k)``.

    Every element ``1 + partial_sum`` of the cycle (repeated periodically)
    in ``[p_{k+1}, p_{k+1}^2)`` is prime; the returned stream holds
    exactly those values.
    """
    from pgap.gapcycle import build_cycle_to

    if cycle is None:
        cycle = build_cycle_to(k)
    nxt = cycle.next_prime
    one = cycle.values()[:-1].astype(np.int64)
    # small stages: p_{k+1}^2 can exceed one period, so repeat the cycle
    periods = -(-(nxt * nxt) // cycle.span)
    vals = (one[None, :] + cycle.span * np.arange(periods, dtype=np.int64)[:, None]).ravel()
    window = vals[(vals >= nxt) & (vals < nxt * nxt)]
    return PrimeGapStream(nxt, nxt * nxt - 1, window.astype(np.int64))
