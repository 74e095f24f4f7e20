"""
Command-line front end.

    pgap cycle build|verify|info --k K
    pgap census --s 2,10,2 --to-p 17 [--scan | --recurrence]
    pgap report [--s S ...] [--rows P,P,...] [--counts]
    pgap analysis uniformity|erdos-turan|admissible|composite-runs ...

Settings come from, in increasing priority: built-in defaults, a config
file of ``key = value`` lines (``--config``), the ``PGAP_CACHE_DIR``
environment variable (cache directory only), and command-line flags.
Exit status is 0 on success, 1 when an invariant or precondition fails,
2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, fields, replace
from pathlib import Path

from pgap import analysis, census, estimates, gapcycle, report
from pgap.cache import CacheCorruptError
from pgap.constellation import Constellation
from pgap.primes import SIEVE_CEILING, SieveCeilingError, first_primes, prime_index

log = logging.getLogger("pgap")

ENV_CACHE_DIR = "PGAP_CACHE_DIR"
# verify runs the oracle by default up to here; --oracle forces it
ORACLE_DEFAULT_STAGE = 8


class InvariantError(Exception):
    """A checked invariant or precondition failed; the message names it."""


@dataclass(frozen=True)
class RunConfig:
    cache_dir: Path | None = None
    mem_budget: int = gapcycle.DEFAULT_MEM_BUDGET
    max_stage: int = gapcycle.DEFAULT_MAX_STAGE
    sieve_ceiling: int = SIEVE_CEILING
    rounding: str = "half-up"
    Q: int = estimates.DEFAULT_Q
    format: str = "csv"

    def check(self) -> "RunConfig":
        if self.mem_budget <= 0:
            raise InvariantError(f"config: mem_budget must be positive, got {self.mem_budget}")
        if not 1 <= self.max_stage <= gapcycle.HARD_MAX_STAGE:
            raise InvariantError(
                f"config: max_stage must lie in [1, {gapcycle.HARD_MAX_STAGE}], got {self.max_stage}")
        if not 4 <= self.sieve_ceiling <= SIEVE_CEILING:
            raise InvariantError(
                f"config: sieve_ceiling must lie in [4, {SIEVE_CEILING}], got {self.sieve_ceiling}")
        if self.Q < 3:
            raise InvariantError(f"config: Q must be >= 3, got {self.Q}")
        if self.rounding != "half-up":
            raise InvariantError(f"config: only rounding = half-up is supported, got {self.rounding}")
        if self.format not in ("csv", "markdown"):
            raise InvariantError(f"config: format must be csv or markdown, got {self.format}")
        return self


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, value: str):
    if key == "cache_dir":
        return Path(value).expanduser()
    if key in ("mem_budget", "max_stage", "sieve_ceiling", "Q"):
        return int(value.replace("_", ""))
    return value


def read_config_file(path: str | Path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvariantError(f"config {path}:{n}: expected key = value, got {raw!r}")
        key, value = (t.strip() for t in line.split("=", 1))
        if key not in _CONFIG_TYPES:
            raise InvariantError(f"config {path}:{n}: unknown key {key!r}")
        try:
            out[key] = _coerce(key, value)
        except ValueError:
            raise InvariantError(f"config {path}:{n}: bad value for {key}: {value!r}") from None
    return out


def resolve_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(read_config_file(args.config))
    if environ.get(ENV_CACHE_DIR):
        values["cache_dir"] = Path(environ[ENV_CACHE_DIR])
    for key in ("cache_dir", "mem_budget", "max_stage", "format"):
        v = getattr(args, key, None)
        if v is not None:
            values[key] = _coerce(key, str(v)) if key == "cache_dir" else v
    return replace(RunConfig(), **values).check()


def _constellation(text: str) -> Constellation:
    try:
        return Constellation.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _stage_for_prime(p: int) -> int:
    """Index ``k`` of the largest prime ``p_k <= p``."""
    k = 1
    while first_primes(k + 1)[-1] <= p:
        k += 1
    return k


def _cycle(cfg: RunConfig, k: int) -> gapcycle.GapCycle:
    return gapcycle.build_cycle_to(k, cfg.cache_dir, max_stage=cfg.max_stage, mem_budget=cfg.mem_budget)


# ---- cycle -----------------------------------------------------------------

def cmd_cycle(args, cfg: RunConfig, out) -> int:
    if args.action == "build":
        if cfg.cache_dir is None:
            raise InvariantError(f"cycle build: no cache directory (use --cache-dir or {ENV_CACHE_DIR})")
        cycle = _cycle(cfg, args.k)
        path = Path(cfg.cache_dir) / f"gapcycle.{cycle.k}.pgc"
        print(f"wrote {path} ({cycle.length} gaps)", file=out)
        return 0
    cycle = _cycle(cfg, args.k)
    if args.action == "info":
        print(f"k: {cycle.k}", file=out)
        print(f"p_k: {cycle.p}", file=out)
        print(f"Phi: {cycle.length}", file=out)
        print(f"Pi: {cycle.span}", file=out)
        print(f"max_gap: {cycle.max_gap}", file=out)
        return 0
    problems = gapcycle.validate_structure(cycle)
    if args.oracle or cycle.k <= ORACLE_DEFAULT_STAGE:
        if cycle != gapcycle.oracle_cycle(cycle.k):
            problems.append("oracle equivalence: recursive build differs from coprime enumeration")
    if problems:
        raise InvariantError("; ".join(problems))
    print(f"G(p_{cycle.k}) ok: {cycle.length} gaps, span {cycle.span}", file=out)
    return 0


# ---- census ----------------------------------------------------------------

def _census_scan(s, stages, cfg):
    return {k: census.count_occurrences(_cycle(cfg, k), s) for k in stages}


def _census_recurrence(s, stages):
    k0 = census.seed_stage(s)
    if stages[-1] < k0:
        return {}
    got = {}
    for k, row in census.iter_projected_counts(s, k0, stages[-1]):
        got[k] = row[s]
    return {k: got[k] for k in stages if k in got}


def cmd_census(args, cfg: RunConfig, out) -> int:
    s = args.s
    k_to = _stage_for_prime(args.to_p)
    k_from = max(2, _stage_for_prime(args.from_p))
    stages = list(range(k_from, k_to + 1))
    if not stages:
        raise InvariantError(f"census: no stages between p={args.from_p} and p={args.to_p}")
    scan = rec = None
    if args.method in ("scan", "both"):
        scan = _census_scan(s, [k for k in stages if k <= cfg.max_stage], cfg)
    if args.method in ("recurrence", "both"):
        rec = _census_recurrence(s, stages)
        if args.method == "recurrence" and not rec:
            raise InvariantError(
                f"recurrence validity: {s} needs stage >= {census.seed_stage(s)} to seed the recurrence")
    mismatch = []
    print("p,constellation,N,method", file=out)
    for k in stages:
        p = first_primes(k)[-1]
        a = scan.get(k) if scan is not None else None
        b = rec.get(k) if rec is not None else None
        if a is not None and b is not None and a != b:
            mismatch.append(f"p={p}: scan {a} != recurrence {b}")
        if a is not None and b is not None:
            n, how = a, "both"
        elif a is not None:
            n, how = a, "scan"
        elif b is not None:
            n, how = b, "recurrence"
        else:
            continue
        print(f'{p},"{s}",{n},{how}', file=out)
    if mismatch:
        raise InvariantError("recurrence/scan agreement: " + "; ".join(mismatch))
    return 0


# ---- report ----------------------------------------------------------------

def cmd_report(args, cfg: RunConfig, out) -> int:
    cons = args.s or [Constellation.parse(t) for t in report.TWIN_TABLE + report.QUADRUPLET_TABLE]
    rows = args.rows or list(report.DEFAULT_ROWS)
    for p in rows:
        if p < 3 or first_primes(prime_index(p))[-1] != p:
            raise InvariantError(f"report: row {p} is not a prime >= 3")
    built = report.build_rows(cons, rows, ceiling=cfg.sieve_ceiling, Q=cfg.Q)
    if args.counts:
        out.write(report.counts_to_csv(built))
    elif cfg.format == "markdown":
        out.write(report.rows_to_markdown(built))
    else:
        out.write(report.rows_to_csv(built))
    return 0


# ---- analysis --------------------------------------------------------------

def cmd_analysis(args, cfg: RunConfig, out) -> int:
    what = args.what
    if what == "uniformity":
        rep = analysis.uniformity_histogram(args.s, args.k, args.bins, cycle=_cycle(cfg, args.k))
        out.write(rep.to_csv())
        out.write("\n")
        out.write(rep.summary())
        return 0
    if what == "admissible":
        res = analysis.admissible(args.tuple)
        if res:
            print("admissible", file=out)
        else:
            print(f"inadmissible, blocking prime {res.blocking_prime}", file=out)
        return 0
    if what == "composite-runs":
        runs = analysis.composite_run_locator(args.k, args.threshold, cycle=_cycle(cfg, args.k))
        print("start,length", file=out)
        for start, n in runs:
            print(f"{start},{n}", file=out)
        return 0
    # erdos-turan
    q = args.question
    if q == "spikes":
        print("k,p_k,g,index", file=out)
        prev = 0
        for k in range(args.from_k, args.to_k + 1):
            g, idx = analysis.spike_witness(k, _cycle(cfg, k))
            print(f"{k},{first_primes(k)[-1]},{g},{idx}", file=out)
            if g <= prev:
                raise InvariantError(f"spike growth: g={g} at k={k} does not exceed {prev}")
            prev = g
        return 0
    if q == "superlinear":
        s, idx = analysis.superlinear_witness(args.k, args.m, _cycle(cfg, args.k))
        print(f'k={args.k} run="{s}" index={idx}', file=out)
        return 0
    res = analysis.oscillation_counterexample(args.to_k)
    state = "found" if res.candidate_found else "absent"
    adm = res.candidate_admissibility
    verdict = "admissible" if adm else f"inadmissible (blocking prime {adm.blocking_prime})"
    print(f'candidate "{res.candidate}": {state}, {verdict}', file=out)
    print(f'witness "{res.witness}" at k={res.stage} index={res.index}', file=out)
    return 0


# ---- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a nested subparser from resetting flags given earlier
    common = argparse.ArgumentParser(add_help=False, allow_abbrev=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--config", help="file of key = value settings")
    common.add_argument("--cache-dir", dest="cache_dir", help=f"cycle cache directory (default ${ENV_CACHE_DIR})")
    common.add_argument("--mem-budget", dest="mem_budget", type=int, help="bytes allowed for one cycle build")
    common.add_argument("--max-stage", dest="max_stage", type=int, help="largest stage index to build")
    common.add_argument("--format", choices=("csv", "markdown"))
    common.add_argument("-v", "--verbose", action="store_true")

    ap = argparse.ArgumentParser(prog="pgap", allow_abbrev=False, description=__doc__.split("\n\n")[0].strip())
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", parents=[common], allow_abbrev=False, help="build, verify or describe G(p_k)")
    p.add_argument("action", choices=("build", "verify", "info"))
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--oracle", action="store_true", help="force the coprime-enumeration cross-check")
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("census", parents=[common], allow_abbrev=False, help="counts N_p(s) per stage")
    p.add_argument("--s", type=_constellation, required=True)
    p.add_argument("--to-p", dest="to_p", type=int, required=True)
    p.add_argument("--from-p", dest="from_p", type=int, default=5)
    m = p.add_mutually_exclusive_group()
    m.add_argument("--scan", dest="method", action="store_const", const="scan")
    m.add_argument("--recurrence", dest="method", action="store_const", const="recurrence")
    p.set_defaults(func=cmd_census, method="both")

    p = sub.add_parser("report", parents=[common], allow_abbrev=False, help="actual counts against estimates")
    p.add_argument("--s", type=_constellation, action="append")
    p.add_argument("--rows", type=_int_list, help="comma-separated row primes")
    p.add_argument("--counts", action="store_true", help="emit only the counts CSV")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("analysis", parents=[common], allow_abbrev=False, help="diagnostics and witnesses")
    asub = p.add_subparsers(dest="what", required=True)
    a = asub.add_parser("uniformity", parents=[common], allow_abbrev=False)
    a.add_argument("--s", type=_constellation, required=True)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--bins", type=int, default=16)
    a = asub.add_parser("erdos-turan", parents=[common], allow_abbrev=False)
    a.add_argument("--question", choices=("spikes", "superlinear", "oscillation"), required=True)
    a.add_argument("--from-k", dest="from_k", type=int, default=3)
    a.add_argument("--to-k", dest="to_k", type=int, default=8)
    a.add_argument("--k", type=int, default=4)
    a.add_argument("--m", type=int, default=3)
    a = asub.add_parser("admissible", parents=[common], allow_abbrev=False)
    a.add_argument("--tuple", type=_int_list, required=True)
    a = asub.add_parser("composite-runs", parents=[common], allow_abbrev=False)
    a.add_argument("--k", type=int, required=True)
    a.add_argument("--threshold", type=int)
    p.set_defaults(func=cmd_analysis)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg, out)
    except InvariantError as e:
        print(f"pgap: invariant violated: {e}", file=sys.stderr)
    except CacheCorruptError as e:
        print(f"pgap: cache integrity: {e}", file=sys.stderr)
    except (gapcycle.StageCeilingError, gapcycle.MemoryBudgetError) as e:
        print(f"pgap: stage budget: {e}", file=sys.stderr)
    except SieveCeilingError as e:
        print(f"pgap: sieve ceiling: {e}", file=sys.stderr)
    except census.RecurrenceValidityError as e:
        print(f"pgap: recurrence validity: {e}", file=sys.stderr)
    except census.ClosureBoundError as e:
        print(f"pgap: closure bound: {e}", file=sys.stderr)
    except analysis.NoOccurrenceError as e:
        print(f"pgap: occurrence required: {e}", file=sys.stderr)
    except ValueError as e:
        print(f"pgap: precondition: {e}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
