from math import isqrt

import pytest

import oracles
from mersenne_doubling import (
    CapacityError,
    candidate_count,
    iter_candidates,
    period_capped,
    period_of,
    run_census,
    sqrt_of_mersenne,
)
from mersenne_doubling.census import (
    REASON_MULTIPLE,
    REASON_NO_WITNESS,
    REASON_PROPER_DIVISOR,
    REASON_SELF_WITNESS,
)


def test_sqrt_of_mersenne_examples():
    assert sqrt_of_mersenne(31) == 46340
    assert sqrt_of_mersenne(3) == 2
    assert sqrt_of_mersenne(61) == 1518500249


def test_sqrt_of_mersenne_is_exact():
    for n0 in (3, 5, 7, 13, 31, 61, 89, 127):
        root = sqrt_of_mersenne(n0)
        m = (1 << n0) - 1
        assert root * root <= m < (root + 1) * (root + 1)
    assert sqrt_of_mersenne(127) < 2**64


def test_sqrt_of_mersenne_validation():
    with pytest.raises(CapacityError):
        sqrt_of_mersenne(131)
    with pytest.raises(CapacityError):
        sqrt_of_mersenne(128)
    with pytest.raises(ValueError):
        sqrt_of_mersenne(9)
    with pytest.raises(ValueError):
        sqrt_of_mersenne(2)


def test_candidates_small():
    assert list(iter_candidates(7)) == [7, 9]
    assert candidate_count(7) == 2


def test_candidates_structure():
    qs = list(iter_candidates(31))
    assert len(qs) == candidate_count(31) == 11584
    assert qs == sorted(qs)
    assert all(q % 8 in (1, 7) for q in qs)
    assert all(7 <= q <= 46340 for q in qs)
    assert qs[0] == 7 and qs[-1] == 46337


def test_census_n0_7():
    census = run_census(7)
    assert census.sqrt_bound == 11
    assert census.counts == {3: 1, 4: 0, 5: 0, 6: 1, 7: 0}
    assert census.verdicts == {3: True, 5: True, 7: True}
    assert census.reasons == {
        3: REASON_SELF_WITNESS,
        5: REASON_NO_WITNESS,
        7: REASON_NO_WITNESS,
    }


def test_census_n0_31_counts():
    census = run_census(31)
    expected = {3: 1, 5: 1, 7: 1, 11: 3, 13: 1, 17: 0, 19: 0, 23: 1, 29: 3, 31: 0}
    assert {j: census.counts[j] for j in expected} == expected


def test_census_n0_31_verdicts():
    census = run_census(31)
    assert census.verdicts == {
        3: True, 5: True, 7: True, 11: False, 13: True,
        17: True, 19: True, 23: False, 29: False, 31: True,
    }
    assert census.reasons[23] == REASON_PROPER_DIVISOR
    assert census.reasons[11] == REASON_MULTIPLE
    assert census.reasons[17] == REASON_NO_WITNESS
    assert census.reasons[13] == REASON_SELF_WITNESS


def test_census_counts_match_capped_periods():
    # The vector tally must agree with scalar capped-period calls.
    for n0 in (7, 13, 17):
        census = run_census(n0)
        expected = {j: 0 for j in range(3, n0 + 1)}
        for q in iter_candidates(n0):
            result = period_capped(q, n0)
            if result is not None and result.period >= 3:
                expected[result.period] += 1
        assert census.counts == expected


def test_census_self_witness_invariant():
    census = run_census(31)
    for j in census.verdicts:
        if (1 << j) - 1 <= census.sqrt_bound:
            assert census.counts[j] >= 1
            assert period_of((1 << j) - 1).period == j


def test_census_filter_loses_no_divisor():
    # Tallying over all odd q (not only +-1 mod 8) must not change any verdict.
    n0 = 31
    census = run_census(n0)
    bound = census.sqrt_bound
    unfiltered = {j: 0 for j in range(3, n0 + 1)}
    for q in range(3, bound + 1, 2):
        result = period_capped(q, n0)
        if result is not None and result.period >= 3:
            unfiltered[result.period] += 1
    for j, verdict in census.verdicts.items():
        vj = unfiltered[j]
        self_in = (1 << j) - 1 <= bound
        assert verdict == (vj == 0 or (vj == 1 and self_in))
        assert vj == census.counts[j]  # prime j: every divisor is +-1 mod 8


def test_census_workers_deterministic():
    solo = run_census(31, workers=1)
    duo = run_census(31, workers=2, chunk=1000)
    assert solo == duo


def test_census_multiple_witnesses_mean_composite():
    census = run_census(31)
    for j, count in census.counts.items():
        if count >= 2 and j in census.verdicts:
            assert census.verdicts[j] is False


def test_census_validation():
    with pytest.raises(ValueError):
        run_census(9)
    with pytest.raises(CapacityError):
        run_census(131)
