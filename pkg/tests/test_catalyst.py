import numpy as np
import pytest

from localclone.characterization import CatalystSpec, catalyst_no_go_check
from localclone.characterization.catalyst import peel, product_multiset


def sq(*xs):
    return tuple(np.sqrt(xs))


def test_equal_alphas():
    v = catalyst_no_go_check(CatalystSpec(sq(0.8, 0.2), sq(0.2, 0.8), sq(0.5, 0.5)))
    assert v.multisets_equal and v.alphas_equal and v.peeling_forces_equal
    assert v.consistent


def test_example_multisets_differ():
    v = catalyst_no_go_check(CatalystSpec(sq(0.6, 0.4), sq(0.5, 0.5), sq(0.7, 0.3)))
    # products written out by hand, descending
    np.testing.assert_allclose(v.products1, np.sqrt([0.42, 0.28, 0.18, 0.12]), atol=1e-15)
    np.testing.assert_allclose(v.products2, np.sqrt([0.35, 0.35, 0.15, 0.15]), atol=1e-15)
    assert not v.multisets_equal and not v.alphas_equal
    assert v.consistent


def test_unequal_lengths():
    v = catalyst_no_go_check(CatalystSpec(sq(0.5, 0.5), sq(1 / 3, 1 / 3, 1 / 3), sq(0.5, 0.5)))
    assert not v.multisets_equal and not v.alphas_equal


def test_product_multiset_sorted():
    p = product_multiset([0.6, 0.8], [0.8, 0.6])
    np.testing.assert_allclose(p, [0.64, 0.48, 0.48, 0.36])


def test_peeling_recovers_alpha(rng):
    for _ in range(200):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
        alpha = rng.uniform(0.05, 1, n)
        beta = rng.uniform(0.05, 1, m)
        alpha /= np.linalg.norm(alpha)
        beta /= np.linalg.norm(beta)
        got = peel(product_multiset(alpha, beta), beta)
        np.testing.assert_allclose(got, np.sort(alpha), atol=1e-12)


def test_peeling_rejects_non_factoring():
    assert peel([0.5, 0.4, 0.3], [0.6, 0.8]) is None
    assert peel([0.9, 0.1, 0.1, 0.1], [0.6, 0.8]) is None


def test_sweep_no_enhancement(rng):
    hits = 0
    for i in range(300):
        d = int(rng.integers(2, 5))
        beta = rng.uniform(0.05, 1, int(rng.integers(1, 5)))
        a1 = rng.uniform(0.05, 1, d)
        # half the samples permute a1, so equality does occur
        a2 = rng.permutation(a1) if i % 2 else rng.uniform(0.05, 1, d)
        spec = CatalystSpec(
            tuple(a1 / np.linalg.norm(a1)),
            tuple(a2 / np.linalg.norm(a2)),
            tuple(beta / np.linalg.norm(beta)),
        )
        v = catalyst_no_go_check(spec)
        assert v.multisets_equal == v.alphas_equal
        assert v.consistent
        hits += v.multisets_equal
    assert 100 < hits < 200


def test_validation():
    with pytest.raises(ValueError):
        CatalystSpec((1.0, 0.0), (1.0,), (1.0,))
    with pytest.raises(ValueError):
        CatalystSpec((0.6, 0.6), (1.0,), (1.0,))
    with pytest.raises(ValueError):
        CatalystSpec((), (1.0,), (1.0,))
    with pytest.raises(ValueError):
        CatalystSpec((-0.6, 0.8), (1.0,), (1.0,))
