import numpy as np
import pytest

from localclone.qudit import Operator, PureState, apply_local


def random_state(rng, dims):
    n = int(np.prod(dims))
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return PureState(tuple(dims), v / np.linalg.norm(v))


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def local_rotate(states, va, vb):
    """Apply va (x) vb to every two-qudit state."""
    a, b = Operator(va, unitary=True), Operator(vb, unitary=True)
    return [apply_local(b, apply_local(a, s, [0]), [1]) for s in states]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


A2 = 0.8
A, B = np.sqrt(A2), np.sqrt(1 - A2)


@pytest.fixture
def flip_pair():
    """a|00> + b|11> and b|00> - a|11> with a^2 = 0.8."""
    return [PureState((2, 2), [A, 0, 0, B]), PureState((2, 2), [B, 0, 0, -A])]


@pytest.fixture
def conforming_pair():
    return [PureState((2, 2), [A, 0, 0, B]), PureState((2, 2), [0, A, B, 0])]


@pytest.fixture
def exceptional_pair():
    s = 1 / np.sqrt(2)
    return [PureState((2, 2), [s, 0, 0, s]), PureState((2, 2), [s, 0, 0, -s])]
