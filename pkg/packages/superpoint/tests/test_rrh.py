from __future__ import annotations

import itertools

import numpy as np
import pytest
from scipy import stats

from superpoint.exceptions import InvalidParamsError
from superpoint.hashing import MASK32
from superpoint.rrh import (
    DEFAULT_PRIME,
    RRHParams,
    consistent_tuples,
    digest,
    digest_array,
    mangle,
    mangle_array,
    require_valid,
    restore_ip,
    restore_lbs,
    unmangle,
    validate_params,
    window_geometry,
)


def params(c: int, r: int, s: int, u: int, seed: int = 1) -> RRHParams:
    return RRHParams.from_seed(c=c, r=r, s=s, u=u, seed=seed)


def test_paper_configuration_is_valid() -> None:
    assert validate_params(params(14, 4, 6, 4)) == []
    assert validate_params(params(14, 4, 6, 3)) == []


def test_desk_configuration_needs_stride_seven() -> None:
    assert validate_params(params(10, 4, 7, 2)) == []

    violations = validate_params(params(10, 4, 6, 2))
    assert len(violations) == 1
    assert violations[0].startswith("completeness:")


def test_missing_overlap_fails_redundancy() -> None:
    violations = validate_params(params(10, 3, 10, 2))
    assert any(v.startswith("redundancy:") for v in violations)


@pytest.mark.parametrize(
    "bad",
    [
        RRHParams(c=10, r=4, s=7, u=2, a=4, a_inv=1),
        RRHParams(c=10, r=4, s=7, u=2, a=3, a_inv=3),
        RRHParams(c=10, r=4, s=11, u=2, a=1, a_inv=1),
        RRHParams(c=31, r=2, s=1, u=2, a=1, a_inv=1),
        RRHParams(c=10, r=4, s=7, u=32, a=1, a_inv=1),
    ],
)
def test_invalid_parameters_are_reported(bad: RRHParams) -> None:
    assert validate_params(bad)
    with pytest.raises(InvalidParamsError) as info:
        require_valid(bad)
    assert info.value.violations


def test_wrapping_window_geometry() -> None:
    geo = window_geometry(12, 4, 6, 3)

    assert geo.lbits == 29
    assert geo.offsets == (0, 6, 12, 18)
    assert {row for row, _ in geo.coverage[0]} == {0, 3}
    assert (3, 11) in geo.coverage[0]
    assert all(geo.coverage)
    assert geo.duplicate_positions == frozenset({0} | set(range(6, 24)))


def test_mangle_worked_example() -> None:
    p = RRHParams.from_seed(c=12, r=4, s=6, u=3, seed=1, multiplier=3)

    assert p.a_inv == 2863311531
    assert mangle(5, p) == 15
    assert unmangle(15, p) == 5

    identity = RRHParams(c=12, r=4, s=6, u=3, a=1, a_inv=1)
    assert mangle(0xC0A80001, identity) == 0xC0A80001
    assert unmangle(0xC0A80001, identity) == 0xC0A80001


def test_unmangle_round_trip_on_a_16_bit_subspace(desk_params: RRHParams) -> None:
    low = np.arange(1 << 16, dtype=np.uint64)
    for ips in (low, low << np.uint64(16), low << np.uint64(8)):
        back = [unmangle(int(h), desk_params) for h in mangle_array(ips, desk_params)]
        assert back == ips.tolist()


def test_frame_is_the_low_bits_of_the_mangled_address() -> None:
    p = RRHParams(c=14, r=4, s=6, u=4, a=1, a_inv=1)
    assert digest(0x1234567B, p).frame == 0xB


def test_mangle_round_trip_small(desk_params: RRHParams, rng: np.random.Generator) -> None:
    for ip in rng.integers(0, 1 << 32, size=10_000):
        ip = int(ip)
        assert unmangle(mangle(ip, desk_params), desk_params) == ip
    assert unmangle(mangle(0, desk_params), desk_params) == 0
    assert unmangle(mangle(MASK32, desk_params), desk_params) == MASK32


def test_mangle_is_bijective_on_a_million_addresses(desk_params: RRHParams) -> None:
    rng = np.random.default_rng(2)
    ips = rng.integers(0, 1 << 32, size=1_000_000, dtype=np.uint64)

    mangled = mangle_array(ips, desk_params)
    with np.errstate(over="ignore"):
        back = (mangled * np.uint64(desk_params.a_inv)) & np.uint64(MASK32)

    np.testing.assert_array_equal(back, ips)
    assert np.unique(mangled).size == np.unique(ips).size


def test_digest_array_matches_digest(desk_params: RRHParams, rng: np.random.Generator) -> None:
    ips = rng.integers(0, 1 << 32, size=2000, dtype=np.uint64)
    frames, columns = digest_array(ips, desk_params)

    for i, ip in enumerate(ips):
        d = digest(int(ip), desk_params)
        assert d.frame == frames[i]
        assert d.columns == tuple(int(x) for x in columns[:, i])


def test_digest_ranges(desk_params: RRHParams, rng: np.random.Generator) -> None:
    for ip in rng.integers(0, 1 << 32, size=500):
        d = digest(int(ip), desk_params)
        assert 0 <= d.frame < desk_params.frames
        assert len(d.columns) == desk_params.r
        assert all(0 <= x < desk_params.columns for x in d.columns)


def test_restore_round_trip(desk_params: RRHParams, rng: np.random.Generator) -> None:
    for ip in rng.integers(0, 1 << 32, size=20_000):
        ip = int(ip)
        d = digest(ip, desk_params)
        lbs = restore_lbs(d.columns, desk_params)
        assert lbs is not None
        assert restore_ip(lbs, d.frame, desk_params) == ip


@pytest.mark.slow
def test_restore_round_trip_on_a_million_addresses() -> None:
    p = params(14, 4, 6, 4, seed=9)
    rng = np.random.default_rng(9)
    ips = rng.integers(0, 1 << 32, size=1_000_000, dtype=np.uint64)
    frames, columns = digest_array(ips, p)

    failures = 0
    for i in range(ips.size):
        lbs = restore_lbs(columns[:, i].tolist(), p)
        if lbs is None or restore_ip(lbs, int(frames[i]), p) != int(ips[i]):
            failures += 1

    assert failures == 0


def test_mixed_columns_restore_to_a_consistent_host(desk_params: RRHParams, rng: np.random.Generator) -> None:
    rejected = 0
    for _ in range(2000):
        a, b = (digest(int(ip), desk_params) for ip in rng.integers(0, 1 << 32, size=2))
        mixed = a.columns[:2] + b.columns[2:]

        lbs = restore_lbs(mixed, desk_params)
        if lbs is None:
            rejected += 1
            continue
        assert digest(restore_ip(lbs, a.frame, desk_params), desk_params).columns == mixed

    # 4 duplicate bits tie rows 0-1 to rows 2-3; a foreign pair passes 1 time in 16.
    assert rejected > 1800


def test_zero_is_a_fixed_point(desk_params: RRHParams) -> None:
    assert restore_ip(0, 0, desk_params) == 0
    assert mangle(0, desk_params) == 0


def test_flipped_duplicate_bit_is_inconsistent(rng: np.random.Generator) -> None:
    p = params(12, 4, 6, 3)
    geo = p.geometry

    for ip in rng.integers(0, 1 << 32, size=40):
        columns = list(digest(int(ip), p).columns)
        lbs = restore_lbs(columns, p)

        for pos, cover in enumerate(geo.coverage):
            for row, j in cover:
                mutated = columns.copy()
                mutated[row] ^= 1 << j
                if pos in geo.duplicate_positions:
                    assert restore_lbs(mutated, p) is None
                else:
                    assert restore_lbs(mutated, p) == lbs ^ (1 << pos)


def test_column_marginals_are_uniform(desk_params: RRHParams) -> None:
    rng = np.random.default_rng(21)
    ips = rng.integers(0, 1 << 32, size=400_000, dtype=np.uint64)
    frames, columns = digest_array(ips, desk_params)

    for row in range(desk_params.r):
        counts = np.bincount(columns[row], minlength=desk_params.columns)
        _, p_value = stats.chisquare(counts)
        assert p_value > 0.001

    _, p_value = stats.chisquare(np.bincount(frames, minlength=desk_params.frames))
    assert p_value > 0.001


def test_consistent_tuples_match_cartesian_product(desk_params: RRHParams, rng: np.random.Generator) -> None:
    hosts = [digest(int(ip), desk_params) for ip in rng.integers(0, 1 << 32, size=6)]
    per_row = [{h.columns[row] for h in hosts} for row in range(desk_params.r)]

    expected = {
        lbs
        for combo in itertools.product(*per_row)
        if (lbs := restore_lbs(combo, desk_params)) is not None
    }
    found = consistent_tuples(per_row, desk_params)

    assert set(found) == expected
    assert len(found) == len(set(found))
    for h in hosts:
        assert restore_lbs(h.columns, desk_params) in expected


def test_consistent_tuples_with_an_empty_row(desk_params: RRHParams) -> None:
    assert consistent_tuples([{1}, set(), {2}, {3}], desk_params) == []


def test_prime_mode_with_identity_multiplier(rng: np.random.Generator) -> None:
    p = RRHParams.from_seed(c=10, r=4, s=7, u=2, seed=1, mode="prime", multiplier=1)

    assert p.prime == DEFAULT_PRIME
    assert validate_params(p) == []
    for ip in rng.integers(0, 1 << 32, size=1000):
        ip = int(ip)
        assert mangle(ip, p) <= MASK32
        assert unmangle(mangle(ip, p), p) == ip


def test_prime_mode_rejects_escaping_residues() -> None:
    p = RRHParams.from_seed(c=10, r=4, s=7, u=2, seed=1, mode="prime", multiplier=3)
    violations = validate_params(p)

    assert violations
    assert "exceed 32 bits" in violations[0]


@pytest.mark.parametrize("prime", [MASK32, (1 << 32) + (1 << 21) + 1])
def test_prime_mode_rejects_bad_modulus(prime: int) -> None:
    p = RRHParams(c=10, r=4, s=7, u=2, a=1, a_inv=1, mode="prime", prime=prime)
    assert validate_params(p)


def test_avalanche_on_high_bits(desk_params: RRHParams, rng: np.random.Generator) -> None:
    """
    Flipping one of the low input bits flips each high output bit about half the time.
    """
    ips = rng.integers(0, 1 << 32, size=20_000, dtype=np.uint64)
    base = mangle_array(ips, desk_params)

    for bit in range(8):
        diff = base ^ mangle_array(ips ^ np.uint64(1 << bit), desk_params)
        rates = [float(np.mean((diff >> np.uint64(j)) & np.uint64(1))) for j in range(16, 32)]
        assert 0.3 <= np.mean(rates) <= 0.7
