# Spread of constellations over a period, admissibility, and a few
# witnesses about consecutive prime gaps.

from pgap.analysis import (
    admissible,
    composite_run_locator,
    oscillation_counterexample,
    spike_sequence,
    superlinear_witness,
    uniformity_histogram,
)
from pgap.constellation import Constellation

# %% occurrences of 2 and 2,4,2 over one period, 16 bins (descriptive only)
for s in ("2", "2,4,2"):
    for k in range(6, 10):
        rep = uniformity_histogram(s, k, bins=16)
        print(f"{s:>6} k={k} N={rep.total:>9} chi2={rep.statistic:10.2f} p={rep.pvalue:.3f}"
              f"  in [p,p^2]: {rep.window_observed} vs {rep.window_expected:.1f}")

# %% an offset tuple can only hold primes infinitely often if it misses a class mod every q
for b in [(0, 2, 6, 8), (0, 2, 4), Constellation((2, 4, 6, 8, 2)).offsets()]:
    a = admissible(b)
    print(b, "admissible" if a else f"blocked by {a.blocking_prime}")

# %% largest gap followed by a 2, stage by stage
print("spikes:", spike_sequence(3, 9))

# %% increasing runs of gaps: from the middle of the cycle when it is long enough
for k, m in [(4, 2), (4, 3), (9, 3), (9, 4)]:
    print(k, m, superlinear_witness(k, m))

# %% 2,4,6,8,2 never shows up; any three monotone gaps break strict oscillation
print(oscillation_counterexample(9))

# %% big gaps in G(p_k) mark runs of composites
print(composite_run_locator(4))
print(composite_run_locator(8)[:4])
