"""
Empirical diagnostics on the cycles of gaps.

* how the occurrences of a constellation spread over one cycle
  (histogram plus chi-square against uniform; descriptive only);
* offset tuples <-> constellations and admissibility of tuples;
* witnesses for three questions on consecutive prime gaps (unbounded
  ratio ``g_n / g_{n+1}``, failure of eventual oscillation, arbitrarily
  long increasing runs);
* long runs of composites read off large gaps.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import stats

from pgap.census import count_occurrences, cyclic_occurrences, find_first_stage
from pgap.constellation import Constellation, ConstellationLike, as_constellation
from pgap.gapcycle import GapCycle, build_cycle_to, middle_constellation
from pgap.primes import first_primes

__all__ = [
    "UniformityReport",
    "Admissibility",
    "OscillationResult",
    "NoOccurrenceError",
    "occurrence_positions",
    "uniformity_histogram",
    "window_counts",
    "tuple_to_constellation",
    "admissible",
    "ktuple_occurs",
    "spike_witness",
    "spike_sequence",
    "superlinear_witness",
    "oscillation_counterexample",
    "composite_run_locator",
]

OSCILLATION_CANDIDATE = Constellation((2, 4, 6, 8, 2))


class NoOccurrenceError(ValueError):
    """The constellation does not occur in the requested cycle."""


def occurrence_positions(cycle: GapCycle, s: ConstellationLike) -> np.ndarray:
    """Left endpoints ``1 + Sigma_k(i-1)`` of every occurrence of ``s``."""
    idx = cyclic_occurrences(cycle, s)
    return cycle.values()[idx - 1]


@dataclass(frozen=True)
class UniformityReport:
    constellation: Constellation
    k: int
    bins: int
    counts: np.ndarray
    expected: float
    statistic: float
    pvalue: float
    dof: int
    window_observed: int
    window_expected: float
    degenerate: bool = False

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def to_csv(self) -> str:
        lines = ["bin_index,count,expected"]
        lines += [f"{i},{int(c)},{self.expected:.6f}" for i, c in enumerate(self.counts)]
        return "\n".join(lines) + "\n"

    def summary(self) -> str:
        lines = [
            f"constellation: {self.constellation}",
            f"stage: {self.k}",
            f"occurrences: {self.total}",
            f"bins: {self.bins}",
            f"statistic: {self.statistic:.6f}",
            f"dof: {self.dof}",
            f"pvalue: {self.pvalue:.6g}",
            f"window_observed: {self.window_observed}",
            f"window_expected: {self.window_expected:.6f}",
        ]
        if self.degenerate:
            lines.append("degenerate: true")
        return "\n".join(lines) + "\n"


def window_counts(cycle: GapCycle, s: ConstellationLike) -> tuple[int, float]:
    """Occurrences starting in ``[p_{k+1}, p_{k+1}^2]`` against ``N (p^2 - p) / Pi_k``."""
    pos = occurrence_positions(cycle, s)
    nxt = cycle.next_prime
    observed = int(np.count_nonzero((pos >= nxt) & (pos <= nxt * nxt)))
    expected = pos.size * (nxt * nxt - nxt) / cycle.span
    return observed, expected


def uniformity_histogram(s: ConstellationLike, k: int, bins: int = 16,
                         cycle: GapCycle | None = None) -> UniformityReport:
    """Bin the start positions of ``s`` in ``G(p_k)`` into equal slices of ``[1, Pi_k]``.

    The chi-square statistic is reported, never judged: a single
    occurrence yields a report flagged ``degenerate``.
    """
    s = as_constellation(s)
    if bins < 2:
        raise ValueError(f"need at least 2 bins, got {bins}")
    cycle = cycle if cycle is not None else build_cycle_to(k)
    pos = occurrence_positions(cycle, s)
    if pos.size == 0:
        raise NoOccurrenceError(f"{s} does not occur in G(p_{k})")
    which = ((pos - 1) * bins) // cycle.span
    counts = np.bincount(which, minlength=bins)
    expected = pos.size / bins
    degenerate = pos.size < 2
    if degenerate:
        stat, pval = float("nan"), float("nan")
    else:
        stat, pval = stats.chisquare(counts)
    obs, exp = window_counts(cycle, s)
    return UniformityReport(s, k, bins, counts, expected, float(stat), float(pval),
                            bins - 1, obs, exp, degenerate)


def tuple_to_constellation(b: Sequence[int]) -> Constellation:
    """Consecutive differences of an ascending offset tuple."""
    return Constellation.from_offsets(tuple(b))


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    blocking_prime: int | None = None

    def __bool__(self) -> bool:
        return self.admissible


def admissible(b: Sequence[int]) -> Admissibility:
    """Whether the offsets miss some residue class modulo every prime.

    Only primes ``q <= len(b) + 1`` can be fully covered, so only those are
    checked.  The smallest covered modulus is reported as blocking.
    """
    b = tuple(int(x) for x in b)
    if any(y <= x for x, y in zip(b, b[1:])):
        raise ValueError(f"offsets must ascend strictly: {b}")
    for q in first_primes(len(b) + 1):
        if q > len(b) + 1:
            break
        if len({x % q for x in b}) == q:
            return Admissibility(False, q)
    return Admissibility(True)


def ktuple_occurs(b: Sequence[int], k_max: int = 9) -> int | None:
    """Stage ``k <= k_max`` with ``2 p_k > b_last - b_first`` at which the tuple's
    constellation occurs in ``G(p_k)``, or ``None``."""
    s = tuple_to_constellation(b)
    first = find_first_stage(s, k_max)
    if first is None:
        return None
    ps = first_primes(k_max)
    for k in range(first, k_max + 1):
        if 2 * ps[k - 1] > s.gap_sum and count_occurrences(build_cycle_to(k), s):
            return k
    return None


def spike_witness(k: int, cycle: GapCycle | None = None) -> tuple[int, int]:
    """Largest ``g`` with ``[g, 2]`` in ``G(p_k)`` and the 1-based index of its first occurrence."""
    cycle = cycle if cycle is not None else build_cycle_to(k)
    gaps = cycle.gaps
    follow = np.roll(gaps, -1)
    cand = np.flatnonzero(follow == 2)
    if cand.size == 0:
        raise NoOccurrenceError(f"no gap followed by 2 in G(p_{k})")
    g = int(gaps[cand].max())
    idx = int(cand[gaps[cand] == g][0]) + 1
    return g, idx


def spike_sequence(k_from: int, k_to: int) -> list[int]:
    return [spike_witness(k)[0] for k in range(k_from, k_to + 1)]


def _increasing_runs(gaps: np.ndarray, m: int) -> np.ndarray:
    """0-based cyclic starts of strictly increasing runs of ``m`` gaps."""
    n = gaps.size
    ext = np.concatenate((gaps, gaps[: m - 1])).astype(np.int32)
    ok = np.ones(n, dtype=bool)
    for t in range(m - 1):
        ok &= ext[t : t + n] < ext[t + 1 : t + 1 + n]
    return np.flatnonzero(ok)


def superlinear_witness(k: int, m: int, cycle: GapCycle | None = None) -> tuple[Constellation, int]:
    """A strictly increasing run of ``m`` gaps in ``G(p_k)`` and its 1-based index.

    When ``2^(m+1) <= p_{k+1}`` the right half ``2, 4, ..., 2^j`` of the
    middle constellation is long enough and supplies the run (its last
    ``m`` gaps).  Otherwise the cycle is scanned and the run with the
    largest final gap is returned, earliest first.
    """
    if m < 1:
        raise ValueError(f"run length must be >= 1, got {m}")
    cycle = cycle if cycle is not None else build_cycle_to(k)
    j, middle = middle_constellation(cycle)
    right = middle[j + 1 :]
    if cycle.k >= 2 and m >= 2 and 2 ** (m + 1) <= cycle.next_prime:
        s = Constellation(right[-m:])
    else:
        starts = _increasing_runs(cycle.gaps, m)
        if starts.size == 0:
            raise ValueError(f"no increasing run of {m} gaps in G(p_{k})")
        n = cycle.length
        last = cycle.gaps[(starts + m - 1) % n]
        best = starts[last == last.max()][0]
        s = Constellation(tuple(int(cycle.gaps[(best + t) % n]) for t in range(m)))
    idx = cyclic_occurrences(cycle, s)
    if idx.size == 0:
        raise AssertionError(f"{s} expected in G(p_{k}) but not found")
    return s, int(idx[0])


@dataclass(frozen=True)
class OscillationResult:
    candidate: Constellation
    candidate_found: bool
    candidate_admissibility: Admissibility
    witness: Constellation
    stage: int
    index: int


def oscillation_counterexample(k_max: int = 9) -> OscillationResult:
    """Search for a gap pattern that rules out eventual up/down oscillation.

    The candidate ``2,4,6,8,2`` is looked up first; its offsets
    ``(0,2,6,12,20,22)`` cover every residue mod 3, so it never appears.
    The fallback is the first monotone triple ``a < b < c`` or
    ``a > b > c`` of consecutive gaps at the smallest stage.
    """
    cand = OSCILLATION_CANDIDATE
    adm = admissible(cand.offsets())
    found = find_first_stage(cand, k_max) is not None
    for k in range(2, k_max + 1):
        cycle = build_cycle_to(k)
        g = cycle.gaps.astype(np.int32)
        n = g.size
        a, b, c = g, np.roll(g, -1), np.roll(g, -2)
        mono = np.flatnonzero(((a < b) & (b < c)) | ((a > b) & (b > c)))
        if mono.size:
            i = int(mono[0])
            w = Constellation((int(a[i]), int(b[i]), int(c[i])))
            return OscillationResult(cand, found, adm, w, k, i + 1)
    raise AssertionError(f"no monotone triple up to stage {k_max}")


def composite_run_locator(k: int, threshold: int | None = None,
                          cycle: GapCycle | None = None) -> list[tuple[int, int]]:
    """Runs of consecutive composites behind gaps ``>= threshold`` in ``G(p_k)``.

    ``threshold`` defaults to ``2 p_{k-1}``.  Each gap ``g`` between cycle
    elements ``a`` and ``a + g`` yields the run ``a+1, ..., a+g-1`` of
    ``g - 1`` composites, reported as ``(a + 1, g - 1)``.  The first gap
    is taken one period later (``Pi_k + 2, ...``) so the run holds no
    sieving primes.
    """
    cycle = cycle if cycle is not None else build_cycle_to(k)
    if threshold is None:
        threshold = 2 * first_primes(max(k - 1, 1))[-1]
    big = np.flatnonzero(cycle.gaps >= threshold)
    if big.size == 0:
        return []
    vals = cycle.values()
    out = []
    for i in big.tolist():
        start = int(vals[i]) + 1
        if i == 0:
            start += cycle.span
        out.append((start, int(cycle.gaps[i]) - 1))
    return sorted(out)
