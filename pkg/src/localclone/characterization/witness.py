"""Numerical search for a single-branch cloning operator.

For a candidate N (Bob) the matching M (Alice) is fixed by the requirement
that psi_0 be cloned, so the search runs over N alone and scores the worst
fidelity on the remaining states. A high score is a witness; a low score is
evidence, never proof, that no single branch clones the set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from ..qudit import MAX_DIMENSION, PureState, SizeCapError, amplitude_matrix, schmidt
from .clonability import STRUCTURE_TOL

SINGULAR_FLOOR = 1e-6
WITNESS_FIDELITY = 1 - 1e-6


@dataclass(frozen=True)
class RestartTrace:
    restart: int
    value: float
    evaluations: int


@dataclass(frozen=True)
class WitnessReport:
    best_min_fidelity: float
    best_restart: int
    # N in the Schmidt frame of the first state, acting on (B1, B2)
    best_n: np.ndarray = field(repr=False)
    trace: tuple[RestartTrace, ...]
    orthogonal: bool
    same_schmidt: bool
    alice_frame: np.ndarray = field(repr=False)
    bob_frame: np.ndarray = field(repr=False)

    @property
    def structural_failure(self) -> bool:
        return not (self.orthogonal and self.same_schmidt)

    @property
    def witness_found(self) -> bool:
        return self.best_min_fidelity >= WITNESS_FIDELITY


def floor_singular_values(n: np.ndarray, floor: float = SINGULAR_FLOOR):
    u, s, vh = np.linalg.svd(n)
    return u, np.maximum(s, floor), vh


class BranchObjective:
    """Worst cloning fidelity over states 1.. for a given N.

    ``mats`` are the states' amplitude matrices in the Schmidt frame of the
    first state, whose Schmidt coefficients are ``alpha``.
    """

    def __init__(self, alpha: np.ndarray, mats: Sequence[np.ndarray]):
        d = len(alpha)
        self.d = d
        self.left = np.kron(np.diag(alpha), np.diag(alpha))
        rescale = np.kron(np.diag(1 / alpha), np.eye(d))
        resource = np.eye(d) / np.sqrt(d)
        self.terms = []
        for c in mats:
            x = np.einsum("ab,cd->acbd", c, resource).reshape(d * d, d * d)
            t = np.einsum("ab,cd->acbd", c, c).reshape(d * d, d * d)
            self.terms.append((rescale @ x, t / np.linalg.norm(t)))

    def unpack(self, x: np.ndarray) -> np.ndarray:
        k = self.d**4
        return (x[:k] + 1j * x[k:]).reshape(self.d**2, self.d**2)

    def fidelities(self, n: np.ndarray) -> list[float]:
        u, s, vh = floor_singular_values(n)
        n = (u * s) @ vh
        # Alice's matrix with N' = conj(U) diag(1/s) conj(Vh)
        left = self.left @ (u.conj() / s) @ vh.conj()
        out = []
        for x, t in self.terms:
            # Alice-by-Bob amplitude matrix of (M (x) N)(psi (x) phi)
            y = left @ x @ n.T
            out.append(float(abs(np.vdot(t, y)) ** 2 / np.vdot(y, y).real))
        return out

    def __call__(self, x: np.ndarray) -> float:
        return -min(self.fidelities(self.unpack(x)))


def _frame(states: Sequence[PureState]):
    sd = schmidt(states[0], [0])
    alpha = sd.coefficients
    if alpha.min() <= SINGULAR_FLOOR:
        raise ValueError("the first state must have full Schmidt rank")
    left, right = sd.left_basis, sd.right_basis
    mats = [left.conj().T @ amplitude_matrix(s, [0]) @ right.conj() for s in states]
    return alpha, mats, left.conj().T, right.conj().T


def witness_search(
    states: Sequence[PureState],
    restarts: int = 8,
    iters: int = 20000,
    seed: int = 0,
    tol: float = STRUCTURE_TOL,
) -> WitnessReport:
    """Best worst-case single-branch fidelity found over ``restarts`` Powell runs.

    ``iters`` caps objective evaluations per restart. Restart ``r`` starts
    from a Gaussian matrix drawn from ``default_rng([seed, r])``, so any
    prefix of restarts reproduces exactly.
    """
    states = list(states)
    if len(states) < 2:
        raise ValueError("need at least two states")
    if restarts < 1 or iters < 1:
        raise ValueError("restarts and iters must be positive")
    dims = states[0].dims
    if len(dims) != 2 or dims[0] != dims[1] or any(s.dims != dims for s in states):
        raise ValueError("states must be two-qudit with equal local dimensions")
    d = dims[0]
    if d**4 > MAX_DIMENSION:
        raise SizeCapError(f"branch register of dimension {d**4} exceeds the cap")

    vecs = np.array([s.amplitudes for s in states])
    orthogonal = bool(np.abs(vecs.conj() @ vecs.T - np.eye(len(states))).max() <= tol)
    alpha, mats, alice_frame, bob_frame = _frame(states)
    same = all(
        np.abs(schmidt(s, [0]).coefficients - alpha).max() <= tol for s in states[1:]
    )

    objective = BranchObjective(alpha, mats[1:])
    trace = []
    best = (-np.inf, -1, None)
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        x0 = rng.normal(size=2 * d**4)
        res = minimize(
            objective,
            x0,
            method="Powell",
            options={"maxfev": iters, "xtol": 1e-12, "ftol": 1e-15},
        )
        value = -float(res.fun)
        trace.append(RestartTrace(r, value, int(res.nfev)))
        if value > best[0]:
            best = (value, r, res.x)
    u, s, vh = floor_singular_values(objective.unpack(best[2]))
    best_n = (u * s) @ vh
    return WitnessReport(
        best_min_fidelity=best[0],
        best_restart=best[1],
        best_n=best_n,
        trace=tuple(trace),
        orthogonal=orthogonal,
        same_schmidt=same,
        alice_frame=alice_frame,
        bob_frame=bob_frame,
    )
