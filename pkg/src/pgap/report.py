"""
Comparison tables: actual counts among primes against the estimates.

Each row pairs, for a window ``[p, p^2]`` with ``p = p_{k+1}``,

* ``C``, the start-anchored count of the constellation among consecutive primes;
* ``E``, the sieve estimate from the count in ``G(p_k)``;
* ``HL``, a Hardy-Littlewood estimate where one applies.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from pgap.census import counts_at_stages
from pgap.constellation import Constellation, ConstellationLike, as_constellation
from pgap.estimates import (
    DEFAULT_Q,
    Estimate,
    constants,
    expected_below_square,
    hl_difference_estimate,
    hl_ktuple_estimate,
    hl_quadruplet_estimate,
    round_half_up,
)
from pgap.primes import SIEVE_CEILING, PrimeGapStream, SieveCeilingError, prime_index, segmented_primes

__all__ = [
    "DEFAULT_ROWS",
    "TWIN_TABLE",
    "QUADRUPLET_TABLE",
    "REPORT_COLUMNS",
    "COUNT_COLUMNS",
    "EstimateRow",
    "hl_estimate",
    "build_rows",
    "rows_to_csv",
    "rows_to_markdown",
    "counts_to_csv",
]

DEFAULT_ROWS = (11, 13, 101, 199, 499, 1009, 1999, 2503, 4999, 10007, 12503, 14939)
TWIN_TABLE = ("2", "6", "8")
QUADRUPLET_TABLE = ("2,4,2", "2,10,2", "2,10,2,10,2")

REPORT_COLUMNS = ("p", "constellation", "C_actual", "E_sieve", "HL", "relerr_E", "relerr_HL")
COUNT_COLUMNS = ("p", "constellation", "C", "interval_lo", "interval_hi")

_QUADRUPLET = Constellation((2, 4, 2))


@dataclass(frozen=True)
class EstimateRow:
    p: int
    constellation: Constellation
    C: int
    E: Estimate
    HL: float | None

    @property
    def interval(self) -> tuple[int, int]:
        return self.p, self.p * self.p

    @property
    def relerr_E(self) -> float | None:
        return None if self.C == 0 else (self.E.value - self.C) / self.C

    @property
    def relerr_HL(self) -> float | None:
        if self.HL is None or self.C == 0:
            return None
        return (self.HL - self.C) / self.C


def hl_estimate(s: ConstellationLike, p: int, Q: int = DEFAULT_Q) -> float | None:
    """Hardy-Littlewood estimate for ``s`` in ``[p, p^2]``, or ``None``.

    The tuple estimates count prime tuples, not consecutive primes.  The
    two agree when every gap is 2 or 4 (a prime inside a gap of 4 would
    give three primes ``q, q+2, q+4``, impossible past 3), so only those
    constellations get a value.
    """
    s = as_constellation(s)
    consts = constants(Q)
    if s.gaps == (2,):
        return hl_difference_estimate(2, p, consts)
    if s == _QUADRUPLET:
        return hl_quadruplet_estimate(p, consts)
    if set(s.gaps) <= {2, 4}:
        est = hl_ktuple_estimate(s.offsets(), p, Q)
        return est.value
    return None


def build_rows(constellations: Iterable[ConstellationLike], rows: Sequence[int] = DEFAULT_ROWS,
               *, stream: PrimeGapStream | None = None, ceiling: int = SIEVE_CEILING,
               Q: int = DEFAULT_Q) -> list[EstimateRow]:
    """One :class:`EstimateRow` per (row prime, constellation).

    A single sieve to ``max(rows)^2`` serves every row.  Row ``p`` must be
    prime; its estimate comes from the stage just below, ``p = p_{k+1}``.
    """
    cons = [as_constellation(s) for s in constellations]
    rows = sorted(set(int(p) for p in rows))
    if not cons or not rows:
        return []
    ks = [prime_index(p) - 1 for p in rows]
    if min(ks) < 1:
        raise ValueError("row primes must be at least 3")
    top = rows[-1] ** 2
    if top > ceiling:
        raise SieveCeilingError(f"{rows[-1]}^2 = {top} exceeds the sieve ceiling {ceiling}")
    if stream is None:
        tail = max(len(s) for s in cons)
        stream = segmented_primes(rows[0], top, tail=tail, ceiling=ceiling)
    out = []
    for s in cons:
        counts = counts_at_stages(s, ks)
        for p, k in zip(rows, ks):
            C = stream.count(s, p, p * p)
            E = expected_below_square(s, k, counts[k])
            out.append(EstimateRow(p, s, C, E, hl_estimate(s, p, Q)))
    return out


def _fmt_rel(x: float | None) -> str:
    return "" if x is None else f"{x:.6f}"


def rows_to_csv(rows: Iterable[EstimateRow]) -> str:
    """Report CSV; ``E_sieve`` and ``HL`` are rounded half-up, blanks mean n/a."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for r in rows:
        hl = "" if r.HL is None else round_half_up(r.HL)
        w.writerow([r.p, str(r.constellation), r.C, r.E.rounded, hl,
                    _fmt_rel(r.relerr_E), _fmt_rel(r.relerr_HL)])
    return buf.getvalue()


def rows_to_markdown(rows: Iterable[EstimateRow]) -> str:
    """Side-by-side table: one line per row prime, ``C | E | HL`` per constellation."""
    rows = list(rows)
    cons: list[Constellation] = []
    for r in rows:
        if r.constellation not in cons:
            cons.append(r.constellation)
    has_hl = {s: any(r.HL is not None for r in rows if r.constellation == s) for s in cons}
    head = ["p"]
    for s in cons:
        head += [f"C({s})", f"E({s})"] + ([f"HL({s})"] if has_hl[s] else [])
    by_p: dict[int, dict[Constellation, EstimateRow]] = {}
    for r in rows:
        by_p.setdefault(r.p, {})[r.constellation] = r
    lines = ["| " + " | ".join(head) + " |", "|" + "---:|" * len(head)]
    for p in sorted(by_p):
        cells = [str(p)]
        for s in cons:
            r = by_p[p].get(s)
            if r is None:
                cells += [""] * (2 + has_hl[s])
                continue
            cells += [str(r.C), str(r.E.rounded)]
            if has_hl[s]:
                cells.append("" if r.HL is None else str(round_half_up(r.HL)))
        lines.append("| " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def counts_to_csv(rows: Iterable[EstimateRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COUNT_COLUMNS)
    for r in rows:
        lo, hi = r.interval
        w.writerow([r.p, str(r.constellation), r.C, lo, hi])
    return buf.getvalue()
