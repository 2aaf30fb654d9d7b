from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..operators import clock_operator, fourier_operator, shift_operator

EQUIVALENCE_TOL = 1e-10


@dataclass(frozen=True)
class ClockShiftResult:
    d: int
    j: int
    passed: bool
    shift: int | None
    phase: float | None
    conjugation: str | None  # "F U F^dagger" or "F^dagger U F"
    deviation: float


def _match_shift(mat: np.ndarray) -> tuple[int, float, float]:
    """Closest e^{i theta} P_s to ``mat``; returns (s, theta, max deviation)."""
    d = mat.shape[0]
    s = int(np.argmax(np.abs(mat[:, 0])))
    theta = float(np.angle(mat[s, 0]))
    dev = np.abs(mat - np.exp(1j * theta) * shift_operator(d, s).matrix).max()
    if abs(theta) < 1e-13:
        theta = 0.0
    return s, theta, float(dev)


def clock_shift_equivalence(d: int, j: int, tol: float = EQUIVALENCE_TOL) -> ClockShiftResult:
    """Check that the Fourier transform conjugates the clock U_j onto a shift.

    Both conjugation directions are tried; the first that lands on a phase
    times a shift (within ``tol``) is reported.
    """
    f = fourier_operator(d).matrix
    u = clock_operator(d, j).matrix
    best_dev = np.inf
    for name, mat in (("F U F^dagger", f @ u @ f.conj().T), ("F^dagger U F", f.conj().T @ u @ f)):
        s, theta, dev = _match_shift(mat)
        best_dev = min(best_dev, dev)
        if dev <= tol:
            return ClockShiftResult(d, j, True, s, theta, name, dev)
    return ClockShiftResult(d, j, False, None, None, None, float(best_dev))
