# Exact counts of constellations in G(p), by scan and by recurrence.
#
# Once every split of a constellation s sums to less than 2 p_{k+1},
#     N_{p_{k+1}}(s) = (p_{k+1} - (j+1)) N_{p_k}(s) + sum over predecessors,
# so a handful of scanned counts seed exact counts for every larger prime.

import math

from pgap.census import count_occurrences, counts_at_stages, iter_projected_counts, predecessor_closure, project_counts, seed_stage
from pgap.gapcycle import build_cycle_to
from pgap.primes import first_primes

columns = ["2", "2,4", "6", "2,4,2", "2,6", "8", "2,10,2"]

# %% the table for p = 5 .. 17, scanned
print("p  " + "".join(f"{s:>9}" for s in columns))
for k in range(3, 8):
    c = build_cycle_to(k)
    print(f"{c.p:<3}" + "".join(f"{count_occurrences(c, s):>9}" for s in columns))

# %% the same numbers from the recurrence
for s in columns:
    print(f"{s:>7}: seed stage k={seed_stage(s)}, closure {sorted(map(str, predecessor_closure(s)))}")
print({s: counts_at_stages(s, range(3, 8)) for s in ("2", "2,10,2")})

# %% drivers: 2,10,2 is fed by 2,4,6,2 and 2,6,4,2
led = project_counts("2,10,2", 4, 8)
for p in led.stages:
    row = led.counts[p]
    print(p, {str(m): n for m, n in row.items() if n})

# %% far out: counts have thousands of digits but stay exact
for k, row in iter_projected_counts("2,10,2,10,2", None, 1749):
    pass
n = max(row.values())
digits = int(n.bit_length() * math.log10(2)) + 1
print(f"p={first_primes(k)[-1]}: largest closure count has about {digits} digits")

# %% 2 and 4 stay level; 6 leads; 8 gains slowly through its drivers
for k in (5, 20, 100, 400):
    n = {s: counts_at_stages(s, [k])[k] for s in ("2", "4", "6", "8")}
    print(first_primes(k)[-1], n["2"] == n["4"], f"N(8)/N(6) = {n['8'] / n['6']:.4f}")
