"""Tests for the portable counter-based generator."""

import numpy as np
import pytest

from jointsparse.rng import PortableRng, REFERENCE_SEED_42

_MASK = (1 << 64) - 1


def _splitmix64(seed, n):
    """Reference SplitMix64 in pure Python integers (no numpy)."""
    out = []
    state = seed & _MASK
    for _ in range(n):
        state = (state + 0x9E3779B97F4A7C15) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out.append(z ^ (z >> 31))
    return out


def test_raw_matches_pure_python_splitmix64():
    for seed in (0, 1, 42, 2**63, _MASK):
        got = [int(x) for x in PortableRng(seed).raw(8)]
        assert got == _splitmix64(seed, 8)


def test_frozen_reference_vector_seed_42():
    got = tuple(int(x) for x in PortableRng(42).raw(3))
    assert got == REFERENCE_SEED_42


def test_seed_wraps_modulo_2_64():
    a = PortableRng(5).raw(4)
    b = PortableRng(2**64 + 5).raw(4)
    c = PortableRng(5 - 2**64).raw(4)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(a, c)


def test_counter_continuation():
    # drawing in chunks must walk the same stream as one big draw
    rng = PortableRng(7)
    chunks = np.concatenate([rng.raw(2), rng.raw(0), rng.raw(3)])
    np.testing.assert_array_equal(chunks, PortableRng(7).raw(5))


def test_raw_rejects_negative_count():
    with pytest.raises(ValueError):
        PortableRng(0).raw(-1)


def test_uniform_top_53_bits():
    rng = PortableRng(11)
    raw = rng.raw(100)
    u = PortableRng(11).uniform(100)
    np.testing.assert_array_equal(u, (raw >> np.uint64(11)).astype(float) * 2.0**-53)
    assert np.all(u >= 0.0) and np.all(u < 1.0)
    # every value is an integer multiple of 2**-53
    np.testing.assert_array_equal(u * 2.0**53, np.rint(u * 2.0**53))


def test_normal_construction_and_parity():
    """Box-Muller, cosine block then sine block, truncated to n."""
    raw = PortableRng(3).raw(6)
    u1 = ((raw[:3] >> np.uint64(11)) + np.uint64(1)).astype(float) * 2.0**-53
    u2 = (raw[3:] >> np.uint64(11)).astype(float) * 2.0**-53
    r = np.sqrt(-2.0 * np.log(u1))
    want = np.concatenate([r * np.cos(2 * np.pi * u2), r * np.sin(2 * np.pi * u2)])

    np.testing.assert_array_equal(PortableRng(3).normal(6), want)
    np.testing.assert_array_equal(PortableRng(3).normal(5), want[:5])

    # odd n still burns a full pair block
    rng = PortableRng(3)
    rng.normal(5)
    np.testing.assert_array_equal(rng.raw(1), PortableRng(3).raw(7)[6:])


def test_normal_moments():
    x = PortableRng(123).normal(200_000)
    assert abs(x.mean()) < 0.01
    assert abs(x.var() - 1.0) < 0.02
    assert np.all(np.isfinite(x))


def test_normal_empty_and_negative():
    assert PortableRng(0).normal(0).shape == (0,)
    with pytest.raises(ValueError):
        PortableRng(0).normal(-2)


def test_below_range_and_coverage():
    rng = PortableRng(9)
    draws = [rng.below(3) for _ in range(300)]
    assert set(draws) == {0, 1, 2}
    assert rng.below(1) == 0
    with pytest.raises(ValueError):
        rng.below(0)


def test_choice_distinct_and_bounds():
    rng = PortableRng(17)
    idx = rng.choice(50, 12)
    assert idx.shape == (12,)
    assert len(set(idx.tolist())) == 12
    assert np.all((idx >= 0) & (idx < 50))

    perm = PortableRng(17).choice(6, 6)
    assert sorted(perm.tolist()) == list(range(6))
    assert PortableRng(17).choice(4, 0).shape == (0,)
    with pytest.raises(ValueError):
        PortableRng(17).choice(3, 4)


def test_signs_values_and_consumption():
    rng = PortableRng(21)
    s = rng.signs(64)
    assert set(np.unique(s).tolist()) <= {-1.0, 1.0}
    # one raw output per sign
    np.testing.assert_array_equal(rng.raw(1), PortableRng(21).raw(65)[64:])


def test_streams_with_different_seeds_differ():
    assert not np.array_equal(PortableRng(1).raw(4), PortableRng(2).raw(4))
