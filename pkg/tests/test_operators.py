import numpy as np
import pytest

from localclone import operators as ops
from localclone.qudit import Operator, apply_local, inner_product, schmidt


def test_shift_examples():
    np.testing.assert_array_equal(ops.shift_operator(2, 1).matrix, [[0, 1], [1, 0]])
    np.testing.assert_array_equal(ops.shift_operator(3, 0).matrix, np.eye(3))
    p = ops.shift_operator(3, 1).matrix
    for j in range(3):
        assert p[(j + 1) % 3, j] == 1
    assert ops.shift_operator(3, -1).matrix.tolist() == ops.shift_operator(3, 2).matrix.tolist()


@pytest.mark.parametrize("d", range(2, 9))
def test_shift_group_law(d):
    for i in range(d):
        for j in range(d):
            prod = ops.shift_operator(d, i).matrix @ ops.shift_operator(d, j).matrix
            np.testing.assert_array_equal(prod, ops.shift_operator(d, (i + j) % d).matrix)


def test_clock_examples():
    np.testing.assert_array_equal(ops.clock_operator(2, 1).matrix, np.diag([1, -1]))
    for d in range(2, 6):
        np.testing.assert_allclose(ops.clock_operator(d, 0).matrix, np.eye(d))
    np.testing.assert_array_equal(ops.clock_operator(4, 2).matrix, np.diag([1, -1, 1, -1]))
    w = np.exp(2j * np.pi / 5)
    np.testing.assert_allclose(np.diag(ops.clock_operator(5, 3).matrix), w ** (3 * np.arange(5)))


def test_fourier():
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    np.testing.assert_allclose(ops.fourier_operator(2).matrix, h, atol=1e-15)
    for d in range(2, 9):
        f = ops.fourier_operator(d).matrix
        assert np.abs(f.conj().T @ f - np.eye(d)).max() <= 1e-12


def test_mes():
    np.testing.assert_allclose(ops.mes_state(2).amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))
    ghz = ops.mes_state(3, 3).amplitudes
    expected = np.zeros(27)
    expected[[0, 13, 26]] = 1 / np.sqrt(3)
    np.testing.assert_allclose(ghz, expected)
    for d in range(2, 5):
        for parties in (2, 3):
            s = ops.mes_state(d, parties)
            for p in range(parties):
                np.testing.assert_allclose(schmidt(s, [p]).coefficients[:d], [d**-0.5] * d)


@pytest.mark.parametrize("d", range(2, 9))
def test_mes_invariance(d):
    phi = ops.mes_state(d)
    for j in range(d):
        pj = ops.shift_operator(d, j).kron(ops.shift_operator(d, j))
        np.testing.assert_allclose(apply_local(pj, phi, [0, 1]).amplitudes, phi.amplitudes, atol=1e-15)
        for i in range(d):
            phi_i = ops.shifted_mes(d, [i])
            moved = apply_local(pj, phi_i, [0, 1])
            np.testing.assert_allclose(moved.amplitudes, phi_i.amplitudes, atol=1e-15)


class TestFamily:
    def test_bipartite_member(self):
        a, b = 0.6, 0.8
        f = ops.CloneFamily.full(2, (a, b))
        np.testing.assert_allclose(f.state((1,)).amplitudes, [0, a, b, 0])
        np.testing.assert_allclose(f.state((0,)).amplitudes, [a, 0, 0, b])

    def test_tripartite_member(self):
        a, b = 0.6, 0.8
        f = ops.CloneFamily.full(2, (a, b), parties=3)
        want = np.zeros(8)
        want[0b010], want[0b101] = a, b
        np.testing.assert_allclose(f.state((1, 0)).amplitudes, want)
        assert len(f.members) == 4

    def test_validation(self):
        with pytest.raises(ValueError):
            ops.CloneFamily(2, (1.0, 0.0), ((0,),))
        with pytest.raises(ValueError):
            ops.CloneFamily(2, (0.6, 0.6), ((0,),))
        with pytest.raises(ValueError):
            ops.CloneFamily(2, (0.6, 0.8), ((0,), (0,)))
        with pytest.raises(ValueError):
            ops.CloneFamily(2, (0.6, 0.8), ((2,),))
        f = ops.CloneFamily.full(2, (0.6, 0.8))
        with pytest.raises(ValueError):
            ops.family_state(f, (0, 1))

    def test_degenerate_alpha_allowed(self):
        ops.CloneFamily.full(4, (0.5, 0.5, 0.5, 0.5))

    def test_orthogonality_and_equal_entanglement(self, rng):
        for d in range(2, 6):
            for parties in (2, 3):
                alpha = ops.random_alpha(d, rng)
                states = ops.CloneFamily.full(d, alpha, parties).states()
                for i, s in enumerate(states):
                    np.testing.assert_allclose(
                        schmidt(s, [0]).coefficients[:d], np.sort(alpha)[::-1], atol=1e-10
                    )
                    for t in states[:i]:
                        assert abs(inner_product(s, t)) <= 1e-12

    def test_inner_product_oracle(self, rng):
        # sum_j alpha_j^2 <j|P_i|j> vanishes for i != 0
        d = 4
        alpha = ops.random_alpha(d, rng)
        f = ops.CloneFamily.full(d, alpha)
        for i in range(1, d):
            p = ops.shift_operator(d, i).matrix
            oracle = sum(alpha[j] ** 2 * p[j, j] for j in range(d))
            assert oracle == 0
            assert abs(inner_product(f.state((0,)), f.state((i,)))) <= 1e-15


class TestCloningUnitary:
    def test_cnot(self):
        cnot = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]
        np.testing.assert_array_equal(ops.cloning_unitary(2).matrix, cnot)

    def test_structure(self):
        for d in range(2, 6):
            u = ops.cloning_unitary(d).matrix
            assert np.abs(u.conj().T @ u - np.eye(d * d)).max() <= 1e-12
            assert set(np.unique(u).tolist()) == {0, 1}
            assert np.all(u.sum(axis=0) == 1) and np.all(u.sum(axis=1) == 1)

    def test_action(self):
        u = ops.cloning_unitary(3).matrix
        # |2>|1> -> |2>|0>
        assert u[2 * 3 + 0, 2 * 3 + 1] == 1
        d = 4
        u = ops.cloning_unitary(d).matrix
        for m in range(d):
            block = u[m * d : (m + 1) * d, m * d : (m + 1) * d]
            np.testing.assert_array_equal(block, ops.shift_operator(d, m).matrix)


class TestMeasurement:
    def test_examples(self):
        a, b = 0.6, 0.8
        f = ops.CloneFamily.full(2, (a, b))
        np.testing.assert_allclose(ops.measurement_operator(f, 0).matrix, np.diag([a, b]))
        np.testing.assert_allclose(ops.measurement_operator(f, 1).matrix, np.diag([b, a]))

    def test_conjugation_rule(self, rng):
        d = 5
        f = ops.CloneFamily.full(d, ops.random_alpha(d, rng))
        m0 = ops.measurement_operator(f, 0).matrix
        for k in range(d):
            p = ops.shift_operator(d, k).matrix
            np.testing.assert_allclose(ops.measurement_operator(f, k).matrix, p @ m0 @ p.T)

    def test_completeness_d3(self):
        f = ops.CloneFamily.full(3, np.sqrt([0.5, 0.3, 0.2]))
        assert ops.povm_residual(ops.measurement_operators(f)) <= 1e-15

    def test_completeness_random(self, rng):
        for _ in range(20):
            d = int(rng.integers(2, 9))
            f = ops.CloneFamily.full(d, ops.random_alpha(d, rng))
            assert ops.povm_residual(ops.measurement_operators(f)) <= 1e-12

    def test_bad_outcome(self):
        f = ops.CloneFamily.full(2, (0.6, 0.8))
        with pytest.raises(ValueError):
            ops.measurement_operator(f, 2)
