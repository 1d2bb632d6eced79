import numpy as np
import pytest

from sparsekit.rng import CounterRng, stream_seed

# frozen first draws of the Gaussian stream for seed stream_seed(12345);
# pins RNG stability across platforms and releases
GOLDEN_NORMALS = [
    0.817608111827072,
    -0.0773591226776824,
    0.12857134166910011,
    1.2291292188669967,
]


def test_gaussian_golden_values():
    rng = CounterRng(stream_seed(12345))
    np.testing.assert_allclose(rng.normal(4), GOLDEN_NORMALS, rtol=0, atol=0)


def test_streams_are_reproducible_and_positional():
    a = CounterRng(42)
    b = CounterRng(42)
    np.testing.assert_array_equal(a.raw(10), b.raw(10))
    # consuming in chunks matches one big draw
    c = CounterRng(42)
    chunks = np.concatenate([c.raw(6), c.raw(9)])
    np.testing.assert_array_equal(chunks, CounterRng(42).raw(15))


def test_stream_seed_distinguishes_tokens():
    assert stream_seed(1, "a") != stream_seed(1, "b")
    assert stream_seed(1, 2) != stream_seed(2, 1)
    assert stream_seed("ab") != stream_seed("a", "b")
    with pytest.raises(TypeError):
        stream_seed(1.5)


def test_uniform_range_and_moments():
    u = CounterRng(7).uniform(200_000)
    assert np.all(u > 0) and np.all(u < 1)
    assert abs(u.mean() - 0.5) < 0.005
    assert abs(u.var() - 1 / 12) < 0.002


def test_normal_moments():
    z = CounterRng(8).normal(200_000)
    assert abs(z.mean()) < 0.01
    assert abs(z.std() - 1.0) < 0.01


def test_signs_balanced():
    s = CounterRng(9).signs(100_000)
    assert set(np.unique(s)) == {-1.0, 1.0}
    assert abs(s.mean()) < 0.02


def test_permutation_is_a_permutation():
    for n in (1, 2, 17, 100):
        p = CounterRng(10).permutation(n)
        assert sorted(p) == list(range(n))


def test_subset_sorted_and_uniformish():
    counts = np.zeros(6)
    for t in range(3000):
        sub = CounterRng(stream_seed(11, t)).subset(6, 2)
        assert list(sub) == sorted(sub)
        counts[sub] += 1
    # each element appears in a 2-of-6 subset with probability 1/3
    assert np.all(np.abs(counts / 3000 - 1 / 3) < 0.05)
