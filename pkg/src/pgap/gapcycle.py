"""
Cycles of gaps between consecutive residues coprime to a primorial.

``G(p_k)`` lists the differences between consecutive integers in
``[1, Pi_k + 1]`` that are coprime to ``Pi_k = 2 * 3 * ... * p_k``.  One
cycle has ``Phi_k = prod(p_i - 1)`` gaps summing to ``Pi_k``.

The next cycle is derived from the current one without any division
tests: concatenate ``p_{k+1}`` copies, then close (add together) adjacent
gaps at the positions reached by cumulative spans ``p_{k+1} * g_{k,n}``,
starting right after the first gap.  :func:`oracle_cycle` builds the same
object by brute-force coprimality and serves as the independent check.

Gaps are stored as contiguous ``uint16``; the build asserts every gap fits.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

import numpy as np

from pgap.primes import first_primes

__all__ = [
    "GapCycle",
    "MemoryBudgetError",
    "StageCeilingError",
    "DEFAULT_MAX_STAGE",
    "HARD_MAX_STAGE",
    "DEFAULT_MEM_BUDGET",
    "base_cycle",
    "next_prime",
    "closure_positions",
    "build_next_cycle",
    "build_cycle_to",
    "oracle_cycle",
    "middle_constellation",
    "middle_pattern",
    "validate_structure",
    "primorial",
    "totient_primorial",
]

log = logging.getLogger(__name__)

DEFAULT_MAX_STAGE = 9
HARD_MAX_STAGE = 12
DEFAULT_MEM_BUDGET = 1 << 30
ORACLE_MAX_STAGE = 9


class MemoryBudgetError(MemoryError):
    """Building the requested cycle would exceed the memory budget."""


class StageCeilingError(ValueError):
    """Requested stage is above the configured stage ceiling."""


def primorial(k: int) -> int:
    return math.prod(first_primes(k))


def totient_primorial(k: int) -> int:
    return math.prod(q - 1 for q in first_primes(k))


@dataclass(frozen=True, eq=False)
class GapCycle:
    """The cycle of gaps ``G(p_k)``.

    Attributes
    ----------
    k : int
        Number of primes sieved (1-based stage index).
    p : int
        Sieving prime ``p_k``.
    gaps : np.ndarray
        ``Phi_k`` gaps as a read-only ``uint16`` array.
    span : int
        ``Pi_k``, the sum of the gaps.
    length : int
        ``Phi_k``.
    """

    k: int
    p: int
    gaps: np.ndarray
    span: int
    length: int

    def __post_init__(self):
        gaps = np.ascontiguousarray(self.gaps, dtype=np.uint16)
        gaps.setflags(write=False)
        object.__setattr__(self, "gaps", gaps)

    @property
    def next_prime(self) -> int:
        return int(self.gaps[0]) + 1

    def partial_sums(self) -> np.ndarray:
        """``Sigma_k(j)`` for ``j = 1..Phi_k`` (int64)."""
        return np.cumsum(self.gaps, dtype=np.int64)

    def values(self) -> np.ndarray:
        """The ``Phi_k + 1`` coprime residues ``1, 1 + Sigma_k(1), ..., Pi_k + 1``."""
        out = np.empty(self.length + 1, dtype=np.int64)
        out[0] = 1
        np.cumsum(self.gaps, dtype=np.int64, out=out[1:])
        out[1:] += 1
        return out

    @property
    def max_gap(self) -> int:
        return int(self.gaps.max())

    def __len__(self) -> int:
        return self.length

    def __eq__(self, other) -> bool:
        if not isinstance(other, GapCycle):
            return NotImplemented
        return (self.k, self.p, self.span, self.length) == (
            other.k, other.p, other.span, other.length
        ) and np.array_equal(self.gaps, other.gaps)

    def __hash__(self) -> int:
        return hash((self.k, self.span, self.gaps.tobytes()))

    def __repr__(self) -> str:
        head = ",".join(str(int(g)) for g in self.gaps[:12])
        more = ",..." if self.length > 12 else ""
        return f"GapCycle(k={self.k}, p={self.p}, length={self.length}, span={self.span}, gaps=[{head}{more}])"


def base_cycle() -> GapCycle:
    """``G(2) = [2]``: the residue 1 mod 2, one gap of 2."""
    return GapCycle(1, 2, np.array([2], dtype=np.uint16), 2, 1)


def next_prime(cycle: GapCycle) -> int:
    """``p_{k+1} = g_{k,1} + 1``."""
    return cycle.next_prime


def closure_positions(cycle: GapCycle, limit: int | None = None) -> np.ndarray:
    """Positions in the ``p_{k+1}``-fold concatenation where gaps get closed.

    Entry ``n`` is the 0-based index of the gap whose right end is the
    ``n``-th multiple of ``p_{k+1}`` to strike; that gap is added to its
    right neighbour.  The first entry is 0 (the value ``p_{k+1}`` itself),
    and consecutive struck values differ by ``p_{k+1} * g_{k,n}``.  There
    are exactly ``Phi_k`` entries; the struck value ``p_{k+1}(Pi_k + 1)``
    wraps onto the first and is not repeated.  ``limit`` keeps only the
    first entries.
    """
    p = cycle.next_prime
    span = cycle.span
    phi = cycle.length
    n = phi if limit is None else min(limit, phi)
    # struck values p, p + p*g_1, p + p*(g_1 + g_2), ...
    spans = np.empty(n, dtype=np.int64)
    spans[0] = 0
    np.cumsum(cycle.gaps[: n - 1], dtype=np.int64, out=spans[1:])
    struck = p * (spans + 1)
    copy = (struck - 2) // span
    local = struck - copy * span
    ends = cycle.values()[1:]
    idx = np.searchsorted(ends, local)
    if np.any(idx >= phi) or np.any(ends[np.minimum(idx, phi - 1)] != local):
        raise AssertionError("struck value does not land on a cycle element")
    return copy * phi + idx


def _bytes_for_next(cycle: GapCycle) -> int:
    p = cycle.next_prime
    out = (p - 1) * cycle.length * 2
    work = cycle.length * 8 * 5
    return out + work


def build_next_cycle(cycle: GapCycle, *, mem_budget: int = DEFAULT_MEM_BUDGET,
                     check_closures: bool = False) -> GapCycle:
    """Derive ``G(p_{k+1})`` from ``G(p_k)``.

    The concatenation of ``p_{k+1}`` copies is walked copy by copy, so the
    working set stays ``O(Phi_k)`` apart from the output itself.

    Parameters
    ----------
    cycle : GapCycle
        A valid ``G(p_k)``.
    mem_budget : int
        Upper bound in bytes for the output plus working arrays.
    check_closures : bool
        Verify that every source gap is closed in exactly one copy.

    Raises
    ------
    MemoryBudgetError
        If the estimated footprint exceeds ``mem_budget``.
    """
    need = _bytes_for_next(cycle)
    if need > mem_budget:
        raise MemoryBudgetError(
            f"G(p_{cycle.k + 1}) needs about {need / 2**20:.0f} MiB, budget is {mem_budget / 2**20:.0f} MiB"
        )
    p = cycle.next_prime
    phi = cycle.length
    span = cycle.span
    new_len = (p - 1) * phi
    pos = closure_positions(cycle)
    if pos.size != phi:
        raise AssertionError(f"expected {phi} closures, got {pos.size}")
    if check_closures:
        src = np.bincount(pos % phi, minlength=phi)
        if not np.all(src == 1):
            raise AssertionError("some source gap is not closed exactly once")

    order = np.argsort(pos, kind="stable")
    pos_sorted = pos[order]
    bounds = np.searchsorted(pos_sorted, np.arange(p + 1, dtype=np.int64) * phi)
    ends = cycle.values()[1:]

    out = np.empty(new_len, dtype=np.uint16)
    filled = 0
    prev = 1
    for c in range(p):
        keep = np.ones(phi, dtype=bool)
        keep[pos_sorted[bounds[c] : bounds[c + 1]] - c * phi] = False
        vals = ends[keep] + c * span
        if vals.size == 0:
            continue
        d = np.diff(vals, prepend=prev)
        if d.max() >= 1 << 16:
            raise OverflowError(f"gap {int(d.max())} does not fit in 16 bits")
        out[filled : filled + d.size] = d
        filled += d.size
        prev = int(vals[-1])
    if filled != new_len:
        raise AssertionError(f"built {filled} gaps, expected {new_len}")
    return GapCycle(cycle.k + 1, p, out, span * p, new_len)


@lru_cache(maxsize=4)
def _memo_cycle(k: int) -> GapCycle:
    if k == 1:
        return base_cycle()
    return build_next_cycle(_memo_cycle(k - 1), mem_budget=1 << 62)


def _cache_path(cache_dir: Path, k: int) -> Path:
    return Path(cache_dir) / f"gapcycle.{k}.pgc"


def build_cycle_to(k_target: int, cache_dir: str | Path | None = None, *,
                   max_stage: int = DEFAULT_MAX_STAGE,
                   mem_budget: int = DEFAULT_MEM_BUDGET) -> GapCycle:
    """Return ``G(p_{k_target})``.

    Without ``cache_dir`` the result comes from a small in-process memo.
    With ``cache_dir`` the deepest cached stage ``<= k_target`` is loaded,
    the recursion resumes from there, and every newly built stage is
    written as ``gapcycle.{k}.pgc``.  Existing cache files are never
    overwritten.  A corrupt file raises
    :class:`pgap.cache.CacheCorruptError`.
    """
    from pgap import cache

    if k_target < 1:
        raise ValueError(f"stage must be >= 1, got {k_target}")
    if k_target > min(max_stage, HARD_MAX_STAGE):
        raise StageCeilingError(
            f"stage {k_target} is above the ceiling {min(max_stage, HARD_MAX_STAGE)}"
        )
    if cache_dir is None:
        if k_target <= DEFAULT_MAX_STAGE:
            return _memo_cycle(k_target)
        cycle = _memo_cycle(DEFAULT_MAX_STAGE)
        while cycle.k < k_target:
            cycle = build_next_cycle(cycle, mem_budget=mem_budget)
        return cycle

    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    cycle = None
    for k in range(k_target, 0, -1):
        path = _cache_path(cache_dir, k)
        if path.exists():
            cycle = cache.load_cycle(path)
            log.debug("loaded stage %d from %s", k, path)
            break
    if cycle is None:
        cycle = base_cycle()
        cache.save_cycle(cycle, _cache_path(cache_dir, 1))
    while cycle.k < k_target:
        cycle = build_next_cycle(cycle, mem_budget=mem_budget)
        path = _cache_path(cache_dir, cycle.k)
        if not path.exists():
            cache.save_cycle(cycle, path)
    return cycle


def oracle_cycle(k: int, *, max_stage: int = ORACLE_MAX_STAGE, chunk: int = 1 << 24) -> GapCycle:
    """Build ``G(p_k)`` by testing every integer in ``[1, Pi_k + 1]`` against the first ``k`` primes."""
    if k < 1:
        raise ValueError(f"stage must be >= 1, got {k}")
    if k > max_stage:
        raise StageCeilingError(f"oracle stage {k} is above its budget {max_stage}")
    ps = first_primes(k)
    span = math.prod(ps)
    top = span + 1
    kept = []
    for lo in range(1, top + 1, chunk):
        n = np.arange(lo, min(lo + chunk, top + 1), dtype=np.int64)
        mask = np.ones(n.size, dtype=bool)
        for q in ps:
            mask &= n % q != 0
        kept.append(n[mask])
    vals = np.concatenate(kept)
    gaps = np.diff(vals)
    return GapCycle(k, ps[-1], gaps.astype(np.uint16), span, int(gaps.size))


def middle_constellation(cycle: GapCycle) -> tuple[int, tuple[int, ...]]:
    """Expected middle of the cycle, ``2^j, ..., 4, 2, 4, 2, 4, ..., 2^j``.

    ``j`` is the smallest integer with ``2^(j+1) > p_{k+1}``.  Returns
    ``(j, gaps)``.
    """
    return middle_pattern(cycle.next_prime)


def middle_pattern(nxt: int) -> tuple[int, tuple[int, ...]]:
    """Middle constellation for the cycle whose next prime is ``nxt``."""
    j = 1
    while 2 ** (j + 1) <= nxt:
        j += 1
    down = tuple(2**i for i in range(j, 0, -1))
    return j, down[:-1] + (2, 4, 2) + down[:-1][::-1]


def _cyclic_take(gaps: np.ndarray, start: int, n: int) -> np.ndarray:
    return gaps[(start + np.arange(n)) % gaps.size]


def _equal_runs(gaps: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Maximal cyclic runs of equal gaps as arrays ``(gap, run_length)``."""
    n = gaps.size
    if n == 0:
        return np.zeros(0, dtype=gaps.dtype), np.zeros(0, dtype=np.int64)
    if np.all(gaps == gaps[0]):
        return gaps[:1].copy(), np.array([n])
    change = np.flatnonzero(gaps != np.roll(gaps, 1))
    lengths = np.diff(np.append(change, change[0] + n))
    return gaps[change], lengths


def validate_structure(cycle: GapCycle) -> list[str]:
    """Check the structural facts every ``G(p_k)`` must satisfy.

    Returns a list of violated invariants; an empty list means the cycle
    passed.  The middle-constellation, equal-run, and two-copies checks
    apply from ``k >= 2`` (``k >= 3`` for the copies).
    """
    from sympy import isprime, nextprime

    problems = []
    gaps = cycle.gaps
    k = cycle.k
    ps = first_primes(k + 1)

    if cycle.p != ps[-2]:
        problems.append(f"sieving prime: p={cycle.p}, expected p_{k}={ps[-2]}")
    if gaps.size != cycle.length or cycle.length != totient_primorial(k):
        problems.append(f"length: {gaps.size} gaps, expected Phi_{k}={totient_primorial(k)}")
    total = int(gaps.sum(dtype=np.int64))
    if total != cycle.span or cycle.span != primorial(k):
        problems.append(f"sum: gaps add to {total}, expected Pi_{k}={primorial(k)}")
    if gaps.size == 0:
        return problems
    if int(gaps[0]) + 1 != nextprime(cycle.p) or not isprime(int(gaps[0]) + 1):
        problems.append(f"first gap: {int(gaps[0])} + 1 is not the prime after {cycle.p}")
    if int(gaps[-1]) != 2:
        problems.append(f"trailing gap: last gap is {int(gaps[-1])}, expected 2")
    if k >= 2 and np.any(gaps % 2):
        problems.append("parity: odd gap present")
    body = gaps[:-1]
    if not np.array_equal(body, body[::-1]):
        problems.append("symmetry: g_j != g_(Phi-j) for some j")

    if k >= 2:
        values, lengths = _equal_runs(gaps)
        # a run of one gap only asks for evenness, checked above
        long = lengths >= 2
        pairs = np.unique(np.stack((values[long].astype(np.int64), lengths[long])), axis=1)
        for g, run in pairs.T.tolist():
            m = run - 1
            bad = [q for q in first_primes(m + 2) if q <= m + 2 and g % q]
            if bad:
                problems.append(f"equal run: {run} gaps of {g} but {g} is not divisible by {bad}")
                break

        j, middle = middle_constellation(cycle)
        # the gap of 4 across Pi/2 ends at the value Pi/2 + 2
        ends = cycle.values()[1:]
        centre = cycle.span // 2 + 2
        hit = int(np.searchsorted(ends, centre))
        if hit >= ends.size or ends[hit] != centre:
            problems.append(f"middle: {centre} is not a cycle element")
        else:
            got = _cyclic_take(gaps, hit - j, len(middle))
            if tuple(int(g) for g in got) != middle:
                problems.append(f"middle: found {tuple(int(g) for g in got)}, expected {middle} (j={j})")

        # first two struck values are p and p^2 when building the next stage
        nxt = cycle.next_prime
        phi = cycle.length
        try:
            pos = closure_positions(cycle, limit=2)
        except AssertionError as e:
            problems.append(f"first closure: {e}")
            pos = None
        struck = [] if pos is None else [(int(q) // phi) * cycle.span + int(ends[int(q) % phi]) for q in pos]
        if pos is None:
            pass
        elif len(struck) == 2 and struck != [nxt, nxt * nxt]:
            problems.append(f"first closure: strikes {struck}, expected [{nxt}, {nxt * nxt}]")
        elif len(struck) == 1 and struck != [nxt]:
            problems.append(f"first closure: strikes {struck}, expected [{nxt}]")

    if k >= 3:
        twice = 2 * ps[k - 2]
        n = int(np.count_nonzero(gaps == twice))
        if n < 2:
            problems.append(f"two copies: {n} gaps equal to 2*p_{k - 1}={twice}, expected >= 2")
    return problems
