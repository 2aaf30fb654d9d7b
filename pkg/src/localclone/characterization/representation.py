"""Alice's branch operator expressed through Bob's.

One branch of any perfect cloning protocol is a product M (x) N with
(M (x) N)(psi_0 (x) phi) proportional to psi_0 (x) psi_0. For invertible N
this pins M down; ``derive_m_from_n`` builds it.

Register order for a branch is (A1, B1, A2, B2): unknown-state qudits
first, resource qudits second. M acts on (A1, A2), N on (B1, B2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..operators import CloneFamily, mes_state
from ..qudit import Operator, PureState, apply_local, tensor

SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class NParametrization:
    """N = u_lambda diag(beta) u_eta and its partner N' = conj(u_lambda) diag(1/beta) conj(u_eta)."""

    beta: np.ndarray
    u_lambda: np.ndarray
    u_eta: np.ndarray

    @classmethod
    def from_matrix(cls, n: np.ndarray) -> "NParametrization":
        n = np.asarray(n, dtype=np.complex128)
        u, s, vh = np.linalg.svd(n)
        if s.min() <= SINGULAR_TOL:
            raise ValueError(f"N is singular (smallest singular value {s.min():.3e})")
        return cls(s, u, vh)

    @property
    def n(self) -> np.ndarray:
        return (self.u_lambda * self.beta) @ self.u_eta

    @property
    def n_prime(self) -> np.ndarray:
        return (self.u_lambda.conj() / self.beta) @ self.u_eta.conj()

    def identity_residual(self) -> float:
        """max |N' N^T - I|; zero is what makes the derived M clone psi_0."""
        return float(np.abs(self.n_prime @ self.n.T - np.eye(len(self.beta))).max())


def derive_m_from_n(family: CloneFamily, n: Operator | np.ndarray) -> Operator:
    """M = diag(alpha)^(x2) N' [diag(1/alpha) (x) 1], up to normalization."""
    if family.parties != 2:
        raise ValueError("the M-from-N representation is bipartite")
    mat = n.matrix if isinstance(n, Operator) else np.asarray(n, dtype=np.complex128)
    d = family.d
    if mat.shape != (d * d, d * d):
        raise ValueError(f"N must be {d * d}x{d * d}, got {mat.shape}")
    param = NParametrization.from_matrix(mat)
    alpha = np.diag(family.alpha)
    left = np.kron(alpha, alpha)
    right = np.kron(np.diag(1 / np.asarray(family.alpha)), np.eye(d))
    return Operator(left @ param.n_prime @ right)


def apply_branch(m: Operator, n: Operator, psi: PureState) -> PureState:
    """(M (x) N)(psi (x) phi) over (A1, B1, A2, B2), renormalized."""
    d = psi.dims[0]
    state = tensor(psi, mes_state(d, 2))
    state = apply_local(m, state, [0, 2])
    state = apply_local(n, state, [1, 3])
    return state.normalize()


def two_copies(psi: PureState) -> PureState:
    return tensor(psi, psi)
