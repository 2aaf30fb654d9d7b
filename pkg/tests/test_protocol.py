import itertools
from collections import defaultdict

import numpy as np
import pytest

from localclone import operators as ops
from localclone import protocol
from localclone.qudit import PureState, SizeCapError, fidelity, reduced_density, tensor


def sparse_protocol(d, alpha, member, k):
    """Oracle: the protocol on a dict {digits: amplitude}, written out by hand.

    Registers (u_0..u_{n-1}, r_0..r_{n-1}); this never touches the dense
    substrate.
    """
    n = len(member) + 1
    state = {}
    for j in range(d):
        u = (j,) + tuple((j + s) % d for s in member)
        for l in range(d):
            state[u + (l,) * n] = alpha[j] / np.sqrt(d)
    # every party: resource digit += unknown digit
    shifted = {}
    for digits, amp in state.items():
        u, r = digits[:n], digits[n:]
        shifted[u + tuple((r[p] + u[p]) % d for p in range(n))] = amp
    # Alice's measurement: multiply by alpha[(r_0 - k) mod d]
    measured = {dg: amp * alpha[(dg[n] - k) % d] for dg, amp in shifted.items()}
    prob = sum(abs(a) ** 2 for a in measured.values())
    corrected = defaultdict(complex)
    for digits, amp in measured.items():
        u, r = digits[:n], digits[n:]
        corrected[u + tuple((x - k) % d for x in r)] += amp
    vec = np.zeros(d ** (2 * n), dtype=complex)
    for digits, amp in corrected.items():
        vec[np.ravel_multi_index(digits, (d,) * (2 * n))] = amp
    return prob, vec / np.linalg.norm(vec)


SQ08 = (np.sqrt(0.8), np.sqrt(0.2))


class TestRunBranch:
    def test_bipartite_example(self):
        f = ops.CloneFamily.full(2, SQ08)
        b = protocol.run_branch(f, (1,), 0)
        assert abs(b.probability - 0.5) <= 1e-12
        assert b.fidelity >= 1 - 1e-12

    def test_mes_family(self):
        f = ops.CloneFamily.full(2, (2**-0.5, 2**-0.5))
        for m in f.members:
            for k in range(2):
                b = protocol.run_branch(f, m, k)
                assert abs(b.probability - 0.5) <= 1e-12
                assert b.fidelity >= 1 - 1e-12

    def test_qutrit_example(self):
        f = ops.CloneFamily.full(3, np.sqrt([0.5, 0.3, 0.2]))
        b = protocol.run_branch(f, (2,), 1)
        assert abs(b.probability - 1 / 3) <= 1e-12
        assert b.fidelity >= 1 - 1e-12

    @pytest.mark.parametrize("d,parties", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
    def test_matches_sparse_oracle(self, d, parties, rng):
        alpha = ops.random_alpha(d, rng)
        f = ops.CloneFamily.full(d, alpha, parties)
        for member in f.members:
            for k in range(d):
                prob, vec = sparse_protocol(d, alpha, member, k)
                b = protocol.run_branch(f, member, k)
                assert abs(b.probability - prob) <= 1e-12
                assert abs(abs(np.vdot(vec, b.post_state.amplitudes)) - 1) <= 1e-12

    def test_probability_from_reduced_density(self, rng):
        # branch outcome k has probability tr(M_k^dag M_k rho) with rho Alice's
        # resource marginal after the unitary layer, which is maximally mixed
        d = 4
        f = ops.CloneFamily.full(d, ops.random_alpha(d, rng))
        for member in f.members:
            mid = protocol.apply_unitary_layer(f, f.state(member))
            rho = reduced_density(mid, [2])
            np.testing.assert_allclose(rho, np.eye(d) / d, atol=1e-12)
            for k in range(d):
                m = ops.measurement_operator(f, k).matrix
                expect = np.trace(m.conj().T @ m @ rho).real
                assert abs(protocol.run_branch(f, member, k).probability - expect) <= 1e-12

    def test_errors(self):
        f = ops.CloneFamily(2, SQ08, ((0,),))
        with pytest.raises(ValueError):
            protocol.run_branch(f, (0,), 2)
        with pytest.raises(ValueError):
            protocol.run_branch(f, (1,), 0)
        with pytest.raises(ValueError):
            protocol.run_branch(f, (0, 0), 0)


def test_unitary_layer_factorizes(rng):
    for d in (2, 3, 4):
        for parties in (2, 3):
            f = ops.CloneFamily.full(d, ops.random_alpha(d, rng), parties)
            for member in f.members:
                mid = protocol.apply_unitary_layer(f, f.state(member))
                want = tensor(f.state(member), ops.shifted_mes(d, member))
                assert fidelity(mid, want) >= 1 - 1e-10


def test_post_state_depends_on_member(rng):
    d = 3
    f = ops.CloneFamily.full(d, ops.random_alpha(d, rng))
    posts = [protocol.run_branch(f, m, 0).post_state for m in f.members]
    for i in range(d):
        for j in range(i):
            assert fidelity(posts[i], posts[j]) <= 1e-12


class TestRunProtocol:
    @pytest.mark.parametrize("d", range(2, 6))
    def test_all_branches(self, d, rng):
        for _ in range(3):
            f = ops.CloneFamily.full(d, ops.random_alpha(d, rng))
            for member in f.members:
                report = protocol.run_protocol(f, member)
                assert len(report.branches) == d
                assert [b.k for b in report.branches] == list(range(d))
                np.testing.assert_allclose(protocol.branch_probabilities(report), 1 / d, atol=1e-10)
                assert abs(report.total_probability - 1) <= 1e-10
                assert report.min_fidelity >= 1 - 1e-9
                assert report.passed


class TestVerifyFamily:
    def test_qutrits(self, rng):
        f = ops.CloneFamily.full(3, ops.random_alpha(3, rng))
        assert protocol.verify_family(f).passed

    def test_tripartite_qubits(self):
        f = ops.CloneFamily.full(2, SQ08, parties=3)
        report = protocol.verify_family(f)
        assert len(report.reports) == 4
        assert report.passed

    def test_injected_phase_flip_fails(self):
        a, b = SQ08
        f = ops.CloneFamily.full(2, SQ08)
        flip = PureState((2, 2), [b, 0, 0, -a])
        report = protocol.verify_family(f, [("phase-flip", flip)])
        assert not report.passed
        injected = report.reports[-1]
        assert injected.member == "phase-flip"
        assert injected.min_fidelity < 1 - 1e-3

    def test_deterministic_order(self, rng):
        f = ops.CloneFamily(3, tuple(ops.random_alpha(3, rng)), ((2,), (0,), (1,)))
        report = protocol.verify_family(f)
        assert [r.member for r in report.reports] == [(0,), (1,), (2,)]

    def test_size_cap(self):
        f = ops.CloneFamily(5, tuple(np.full(5, 5**-0.5)), ((0, 0, 0),), parties=4)
        with pytest.raises(SizeCapError):
            protocol.verify_family(f)


class TestVerifyPovm:
    def test_pass(self):
        check = protocol.verify_povm(ops.CloneFamily.full(2, SQ08))
        assert check.passed and check.residual <= 1e-15

    def test_random_d5(self, rng):
        assert protocol.verify_povm(ops.CloneFamily.full(5, ops.random_alpha(5, rng))).passed

    def test_corrupted(self):
        f = ops.CloneFamily.full(2, SQ08)
        ms = ops.measurement_operators(f)
        bad = ms[1].matrix.copy()
        bad[0, 0] *= 2
        ms[1] = type(ms[1])(bad)
        check = protocol.verify_povm(f, ms)
        assert not check.passed
