import math

import numpy as np
import pytest

from pgap.gapcycle import (
    GapCycle,
    MemoryBudgetError,
    StageCeilingError,
    base_cycle,
    build_cycle_to,
    build_next_cycle,
    closure_positions,
    middle_constellation,
    next_prime,
    oracle_cycle,
    primorial,
    totient_primorial,
    validate_structure,
)
from reference_tables import G5, G7


def coprime_gaps(k):
    """Independent oracle: gcd test on every integer of one period."""
    ps = [2, 3, 5, 7, 11, 13][:k]
    span = math.prod(ps)
    vals = [n for n in range(1, span + 2) if math.gcd(n, span) == 1]
    return tuple(b - a for a, b in zip(vals, vals[1:]))


def make(gaps, k, p):
    g = np.array(gaps, dtype=np.uint16)
    return GapCycle(k, p, g, int(g.sum()), g.size)


@pytest.mark.parametrize("gaps,k,p,expected", [((4, 2), 2, 3, 5), (G5, 3, 5, 7), ((2,), 1, 2, 3)])
def test_next_prime(gaps, k, p, expected):
    assert next_prime(make(gaps, k, p)) == expected


def test_base_cycle():
    c = base_cycle()
    assert (c.k, c.p, c.span, c.length) == (1, 2, 2, 1)
    assert tuple(c.gaps) == (2,)


def test_build_next_small():
    g3 = build_next_cycle(base_cycle())
    assert tuple(g3.gaps) == (4, 2)
    g5 = build_next_cycle(g3)
    assert tuple(g5.gaps) == G5
    g7 = build_next_cycle(g5)
    assert tuple(g7.gaps) == G7


@pytest.mark.parametrize("k", range(1, 7))
def test_build_matches_gcd_oracle(k):
    assert tuple(build_cycle_to(k).gaps.tolist()) == coprime_gaps(k)


@pytest.mark.parametrize("k", range(1, 8))
def test_oracle_cycle_matches_gcd(k):
    if k <= 6:
        assert tuple(oracle_cycle(k).gaps.tolist()) == coprime_gaps(k)
    assert oracle_cycle(k) == build_cycle_to(k)


def test_oracle_examples():
    assert tuple(oracle_cycle(2).gaps) == (4, 2)
    assert tuple(oracle_cycle(3).gaps) == G5
    assert tuple(oracle_cycle(4).gaps) == G7


def test_build_cycle_to_examples():
    c = build_cycle_to(3)
    assert (c.length, c.span) == (8, 30)
    c = build_cycle_to(1)
    assert (tuple(c.gaps), c.span, c.length) == ((2,), 2, 1)


def test_stage_nine_sizes():
    ps = [2, 3, 5, 7, 11, 13, 17, 19, 23]
    c = build_cycle_to(9)
    assert c.length == math.prod(p - 1 for p in ps) == 36_495_360
    assert c.span == math.prod(ps) == 223_092_870
    assert int(c.gaps.sum(dtype=np.int64)) == c.span


def test_primorial_and_totient():
    assert [primorial(k) for k in range(1, 6)] == [2, 6, 30, 210, 2310]
    assert [totient_primorial(k) for k in range(1, 6)] == [1, 2, 8, 48, 480]


def test_closures_one_per_source_gap():
    for k in range(2, 7):
        c = build_cycle_to(k)
        pos = closure_positions(c)
        assert pos.size == c.length
        nxt = c.next_prime
        # struck values are nxt times the cycle values, one per source gap
        struck = nxt * c.values()[:-1].astype(object)
        assert len(set(struck.tolist())) == c.length
        assert struck[1] == nxt * nxt


def test_first_closure_strikes_square():
    c = build_cycle_to(4)
    nxt = build_next_cycle(c)
    vals = set(nxt.values().tolist())
    assert 11 not in vals and 121 not in vals and 13 in vals


def test_memory_budget():
    with pytest.raises(MemoryBudgetError):
        build_next_cycle(build_cycle_to(5), mem_budget=100)


def test_stage_ceiling():
    with pytest.raises(StageCeilingError):
        build_cycle_to(10)
    with pytest.raises(StageCeilingError):
        oracle_cycle(10)


def test_cycle_is_read_only():
    c = build_cycle_to(3)
    with pytest.raises(ValueError):
        c.gaps[0] = 0


def test_determinism():
    a = build_next_cycle(build_cycle_to(6))
    b = build_next_cycle(build_cycle_to(6))
    assert a == b and a.gaps.tobytes() == b.gaps.tobytes()


@pytest.mark.parametrize("k", range(1, 9))
def test_validate_structure_clean(k):
    assert validate_structure(build_cycle_to(k)) == []


def test_validate_flags_trailing_gap():
    bad = list(G5)
    bad[-1] = 4
    report = validate_structure(make(bad, 3, 5))
    assert any("trailing" in r for r in report)


def test_validate_flags_symmetry():
    bad = list(G7)
    bad[4], bad[5] = bad[5], bad[4]
    report = validate_structure(make(bad, 4, 7))
    assert any("symmetr" in r for r in report)


def test_middle_of_g7():
    j, mid = middle_constellation(build_cycle_to(4))
    assert j == 3
    assert mid == (8, 4, 2, 4, 2, 4, 8)
    g = build_cycle_to(4).gaps.tolist()
    centre = len(g) // 2
    assert tuple(g[centre - 4 : centre + 3]) == mid


def test_two_gaps_of_twice_previous_prime():
    g = build_cycle_to(4).gaps
    assert int(np.count_nonzero(g == 10)) >= 2
