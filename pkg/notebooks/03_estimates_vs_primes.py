# Counts among actual primes in [p, p^2] against two estimates.
#
# E spreads the N_{p_k}(s) copies in G(p_k) uniformly over the period and
# samples the window [p_{k+1}, p_{k+1}^2].  HL is the Hardy-Littlewood
# prediction with the twin or quadruplet constant.

from pgap.estimates import constants, expected_below_square, refined_expected, twin_closed_form
from pgap.report import QUADRUPLET_TABLE, TWIN_TABLE, build_rows, rows_to_markdown

# %% constants from products over primes up to 10^6
c = constants()
print(f"c2 = {c.c2:.10f}  c4 = {c.c4:.10f}  (tail factors {c.c2_tail:.2e}, {c.c4_tail:.2e})")

# %% both tables in one sieve pass to 14939^2 (about ten seconds)
rows = build_rows(TWIN_TABLE + QUADRUPLET_TABLE)
print(rows_to_markdown([r for r in rows if str(r.constellation) in TWIN_TABLE]))
print(rows_to_markdown([r for r in rows if str(r.constellation) in QUADRUPLET_TABLE]))

# %% E for twins approaches the closed form 2 e^{-2 gamma} c2 (p^2 - p) / ln^2 p
for k in (10, 100, 1000, 1700):
    print(k, twin_closed_form(k) / expected_below_square("2", k).value)

# %% trimming the sample space by symmetry barely moves E once k is moderate
for k in (4, 6, 9, 12):
    a, b = refined_expected("2", k).value, expected_below_square("2", k).value
    print(k, round(a, 4), round(b, 4), f"{(a - b) / b:+.2e}")
