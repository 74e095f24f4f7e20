# Cycles of gaps under Eratosthenes sieve.
#
# G(p_k) lists the gaps between consecutive integers coprime to the
# primorial Pi_k = 2*3*...*p_k, over one period.  Each stage comes from
# the one before: concatenate p_{k+1} copies and close one gap at every
# multiple of p_{k+1}.

import numpy as np

from pgap.gapcycle import build_cycle_to, build_next_cycle, closure_positions, middle_constellation, oracle_cycle, validate_structure

# %% the first few cycles
for k in range(1, 5):
    c = build_cycle_to(k)
    print(f"G({c.p}):", c.gaps.tolist())

# %% one step by hand: G(5) -> G(7)
g5 = build_cycle_to(3)
pos = closure_positions(g5)
print("gaps closed in the 7-fold concatenation:", pos.tolist())
print("first struck values:", [7, 7 * 7])
g7 = build_next_cycle(g5)
print("G(7) has", g7.length, "gaps summing to", g7.span)

# %% the recursion agrees with plain coprime enumeration
for k in range(1, 8):
    assert build_cycle_to(k) == oracle_cycle(k)
print("recursion == enumeration for k = 1..7")

# %% structure: symmetry, the trailing 2, and the middle of the cycle
for k in range(2, 9):
    c = build_cycle_to(k)
    j, mid = middle_constellation(c)
    print(f"k={k} p={c.p:2d} Phi={c.length:>9,d} max gap={c.max_gap:3d} middle={mid}",
          "ok" if not validate_structure(c) else "BROKEN")

# %% largest gaps grow with the stage; every cycle has at least two of 2*p_{k-1}
for k in range(3, 10):
    c = build_cycle_to(k)
    prev = build_cycle_to(k - 1).p
    print(f"k={k}: gaps equal to {2 * prev}: {int(np.count_nonzero(c.gaps == 2 * prev))}")
