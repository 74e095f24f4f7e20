"""
Exact counts of constellations in the cycles of gaps.

``N_p(s)`` is the number of cyclic start indices in ``G(p)`` where the
gaps read ``s``.  Occurrences may overlap and may wrap past the end of
the cycle.  Once the gap sum of every member of the predecessor closure
is below ``2 p_{k+1}``, the counts obey

    N_{p_{k+1}}(s) = (p_{k+1} - (j + 1)) N_{p_k}(s) + sum N_{p_k}(t),

the sum running over the constellations ``t`` that turn into ``s`` after
one gap closure.  :func:`project_counts` seeds the closure by direct scan
and runs the recurrence forward in exact integers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from pgap.constellation import Constellation, ConstellationLike, as_constellation
from pgap.gapcycle import DEFAULT_MAX_STAGE, GapCycle, build_cycle_to
from pgap.primes import first_primes

__all__ = [
    "Constellation",
    "CensusLedger",
    "ClosureBoundError",
    "RecurrenceValidityError",
    "Validity",
    "MAX_CLOSURE_SUM",
    "cyclic_occurrences",
    "count_occurrences",
    "predecessors",
    "predecessor_closure",
    "recurrence_validity",
    "seed_stage",
    "recurrence_step",
    "project_counts",
    "iter_projected_counts",
    "counts_at_stages",
    "find_first_stage",
]

MAX_CLOSURE_SUM = 60
MAX_CLOSURE_MEMBERS = 1 << 20


class ClosureBoundError(ValueError):
    """Gap sum (or closure size) is over the configured bound."""


class RecurrenceValidityError(ValueError):
    """The counting recurrence does not hold at the requested stage."""


def cyclic_occurrences(cycle: GapCycle, s: ConstellationLike) -> np.ndarray:
    """1-based start indices ``i`` with ``g_i, ..., g_{i+j-1} == s`` (indices mod ``Phi``)."""
    s = as_constellation(s)
    gaps = cycle.gaps
    n = gaps.size
    j = len(s)
    if j - 1 <= n:
        ext = np.concatenate((gaps, gaps[: j - 1]))
    else:
        ext = gaps[np.arange(n + j - 1) % n]
    mask = ext[:n] == s.gaps[0]
    for t in range(1, j):
        if not mask.any():
            break
        mask &= ext[t : t + n] == s.gaps[t]
    return np.flatnonzero(mask) + 1


def count_occurrences(cycle: GapCycle, s: ConstellationLike) -> int:
    return int(cyclic_occurrences(cycle, s).size)


def predecessors(s: ConstellationLike) -> frozenset[Constellation]:
    """Constellations that become ``s`` after closing one pair of adjacent gaps."""
    s = as_constellation(s)
    out = set()
    g = s.gaps
    for i, a in enumerate(g):
        for b in range(2, a - 1, 2):
            out.add(Constellation(g[:i] + (b, a - b) + g[i + 1 :]))
    return frozenset(out)


def predecessor_closure(s: ConstellationLike, max_sum: int = MAX_CLOSURE_SUM) -> frozenset[Constellation]:
    """Smallest set containing ``s`` and closed under :func:`predecessors`."""
    s = as_constellation(s)
    if s.gap_sum > max_sum:
        raise ClosureBoundError(f"gap sum {s.gap_sum} of {s} exceeds the bound {max_sum}")
    # every gap a splits into compositions of a/2
    size = 1 << (s.gap_sum // 2 - len(s))
    if size > MAX_CLOSURE_MEMBERS:
        raise ClosureBoundError(f"closure of {s} has {size} members, over {MAX_CLOSURE_MEMBERS}")
    seen = {s}
    todo = [s]
    while todo:
        for t in predecessors(todo.pop()):
            if t not in seen:
                seen.add(t)
                todo.append(t)
    return frozenset(seen)


@dataclass(frozen=True)
class Validity:
    valid: bool
    reasons: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def recurrence_validity(s: ConstellationLike, k: int, closure=None) -> Validity:
    """Whether the step ``p_k -> p_{k+1}`` is exact for ``s`` and its closure.

    Every member must have gap sum below ``2 p_{k+1}`` and fewer than
    ``p_{k+1} - 1`` gaps.
    """
    s = as_constellation(s)
    if k < 1:
        raise ValueError(f"stage must be >= 1, got {k}")
    nxt = first_primes(k + 1)[-1]
    members = closure if closure is not None else predecessor_closure(s)
    reasons = []
    if s.gap_sum >= 2 * nxt:
        reasons.append(f"gap sum {s.gap_sum} of {s} is not < 2*p_{k + 1} = {2 * nxt}")
    for m in sorted(members, key=lambda t: (len(t), t.gaps)):
        if len(m) >= nxt - 1:
            reasons.append(f"{m} has {len(m)} gaps, not < p_{k + 1} - 1 = {nxt - 1}")
            break
    return Validity(not reasons, tuple(reasons))


def seed_stage(s: ConstellationLike, closure=None) -> int:
    """Smallest stage from which the recurrence is exact for ``s``'s closure."""
    s = as_constellation(s)
    closure = closure if closure is not None else predecessor_closure(s)
    k = 1
    while not recurrence_validity(s, k, closure):
        k += 1
    return k


@dataclass
class CensusLedger:
    """Exact counts ``N_p(t)`` for every ``t`` in the closure of ``target``.

    ``counts`` maps stage prime ``p`` to ``{member: N_p(member)}``.
    ``base_stage`` is the stage index that was seeded by direct scan.
    """

    target: Constellation
    closure: tuple[Constellation, ...]
    base_stage: int
    counts: dict[int, dict[Constellation, int]] = field(default_factory=dict)

    @property
    def stages(self) -> list[int]:
        return sorted(self.counts)

    @property
    def last_stage(self) -> int:
        """Stage index ``k`` of the most recent row."""
        return self.base_stage + len(self.counts) - 1

    def count(self, p: int, s: ConstellationLike | None = None) -> int:
        s = self.target if s is None else as_constellation(s)
        return self.counts[p][s]

    def column(self, s: ConstellationLike | None = None) -> dict[int, int]:
        s = self.target if s is None else as_constellation(s)
        return {p: row[s] for p, row in sorted(self.counts.items())}


def _step_counts(row: dict[Constellation, int], preds: dict[Constellation, tuple], nxt: int) -> dict:
    return {
        m: (nxt - (len(m) + 1)) * n + sum(row[t] for t in preds[m])
        for m, n in row.items()
    }


def _predecessor_map(closure) -> dict[Constellation, tuple[Constellation, ...]]:
    return {m: tuple(sorted(predecessors(m))) for m in closure}


def recurrence_step(ledger: CensusLedger, k: int) -> CensusLedger:
    """Extend ``ledger`` from stage ``p_k`` to ``p_{k+1}``.

    Raises
    ------
    RecurrenceValidityError
        If the recurrence is not exact at stage ``k``.
    """
    ps = first_primes(k + 1)
    p, nxt = ps[-2], ps[-1]
    if p not in ledger.counts:
        raise KeyError(f"ledger has no counts at p_{k} = {p}")
    v = recurrence_validity(ledger.target, k, ledger.closure)
    if not v:
        raise RecurrenceValidityError("; ".join(v.reasons))
    row = _step_counts(ledger.counts[p], _predecessor_map(ledger.closure), nxt)
    counts = dict(ledger.counts)
    counts[nxt] = row
    return CensusLedger(ledger.target, ledger.closure, ledger.base_stage, counts)


def _seed(s: Constellation, k_seed: int | None, closure) -> tuple[int, dict[Constellation, int]]:
    if k_seed is None:
        k_seed = seed_stage(s, closure)
    if k_seed > DEFAULT_MAX_STAGE:
        raise ValueError(f"seed stage {k_seed} needs a cycle above the stage ceiling")
    cycle = build_cycle_to(k_seed)
    return k_seed, {m: count_occurrences(cycle, m) for m in closure}


def iter_projected_counts(s: ConstellationLike, k_seed: int | None = None,
                          k_target: int | None = None) -> Iterator[tuple[int, dict[Constellation, int]]]:
    """Yield ``(k, {member: N_{p_k}(member)})`` from the seed stage onward.

    Only the current row is kept in memory, which matters for thousands
    of stages with counts of thousands of digits.
    """
    s = as_constellation(s)
    closure = predecessor_closure(s)
    k, row = _seed(s, k_seed, closure)
    preds = _predecessor_map(closure)
    yield k, row
    checked = False
    while k_target is None or k < k_target:
        # validity is monotone in k: once it holds it keeps holding
        if not checked:
            v = recurrence_validity(s, k, closure)
            if not v:
                raise RecurrenceValidityError("; ".join(v.reasons))
            checked = True
        nxt = first_primes(k + 1)[-1]
        row = _step_counts(row, preds, nxt)
        k += 1
        yield k, row


def project_counts(s: ConstellationLike, k_seed: int | None = None, k_target: int = 6) -> CensusLedger:
    """Seed the closure of ``s`` by scanning ``G(p_{k_seed})``, then recur to ``k_target``.

    ``k_seed`` defaults to the smallest stage at which the recurrence is
    exact for the whole closure.
    """
    s = as_constellation(s)
    closure = predecessor_closure(s)
    if k_seed is None:
        k_seed = seed_stage(s, closure)
    if k_target < k_seed:
        raise ValueError(f"target stage {k_target} precedes seed stage {k_seed}")
    ledger = CensusLedger(s, tuple(sorted(closure)), k_seed)
    for k, row in iter_projected_counts(s, k_seed, k_target):
        ledger.counts[first_primes(k)[-1]] = row
    return ledger


def counts_at_stages(s: ConstellationLike, stages) -> dict[int, int]:
    """``{k: N_{p_k}(s)}`` for the requested stage indices.

    Stages below the seed stage are scanned directly; the rest come from
    the recurrence.
    """
    s = as_constellation(s)
    wanted = sorted(set(stages))
    out: dict[int, int] = {}
    if not wanted:
        return out
    k0 = seed_stage(s)
    for k in wanted:
        if k < k0:
            out[k] = count_occurrences(build_cycle_to(k), s)
    later = [k for k in wanted if k >= k0]
    if later:
        todo = set(later)
        for k, row in iter_projected_counts(s, k0, later[-1]):
            if k in todo:
                out[k] = row[s]
    return out


def find_first_stage(s: ConstellationLike, k_max: int = DEFAULT_MAX_STAGE) -> int | None:
    """Smallest ``k <= k_max`` with ``N_{p_k}(s) > 0``, or ``None``.

    Stages whose cycle has fewer gaps than ``s`` are skipped: there ``s``
    could only match by wrapping onto itself.
    """
    s = as_constellation(s)
    for k in range(1, k_max + 1):
        cycle = build_cycle_to(k)
        if len(s) <= cycle.length and count_occurrences(cycle, s):
            return k
    return None
