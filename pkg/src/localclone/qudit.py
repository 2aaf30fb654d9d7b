"""Dense pure states and operators over a register of qudits.

Amplitudes are stored in row-major order over the subsystem labels, so
subsystem 0 is the most significant digit of the flat index. Every routine
here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12
RANK_TOL = 1e-9
MAX_DIMENSION = 65536


class SizeCapError(ValueError):
    """Raised when a register exceeds the dense-representation cap."""


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(x) for x in dims)
    if not dims:
        raise ValueError("a state needs at least one subsystem")
    if any(x < 2 for x in dims):
        raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
    total = int(np.prod(dims))
    if total > MAX_DIMENSION:
        raise SizeCapError(
            f"total Hilbert dimension {total} exceeds the cap of {MAX_DIMENSION}"
        )
    return dims


@dataclass(frozen=True)
class PureState:
    """Amplitude vector over subsystems of dimensions ``dims``.

    ``normalized=False`` marks an intermediate (for instance a state after a
    measurement operator) whose norm is deliberately not one.
    """

    dims: tuple[int, ...]
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        dims = _check_dims(self.dims)
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != int(np.prod(dims)):
            raise ValueError(
                f"{amps.size} amplitudes do not match dims {dims} "
                f"(expected {int(np.prod(dims))})"
            )
        if self.normalized and abs(np.vdot(amps, amps).real - 1.0) > NORM_TOL:
            raise ValueError(
                f"state labelled normalized has squared norm {np.vdot(amps, amps).real!r}"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis(cls, dims: Sequence[int], digits: Sequence[int]) -> "PureState":
        dims = _check_dims(dims)
        if len(digits) != len(dims):
            raise ValueError("one digit per subsystem is required")
        amps = np.zeros(int(np.prod(dims)), dtype=np.complex128)
        amps[np.ravel_multi_index(tuple(digits), dims)] = 1.0
        return cls(dims, amps)

    @classmethod
    def from_vector(cls, dims: Sequence[int], vector, normalize: bool = True) -> "PureState":
        """Build a state, rescaling ``vector`` to unit norm when ``normalize``."""
        vector = np.asarray(vector, dtype=np.complex128).ravel()
        if normalize:
            n = np.linalg.norm(vector)
            if n == 0:
                raise ValueError("cannot normalize the zero vector")
            return cls(tuple(dims), vector / n)
        return cls(tuple(dims), vector, normalized=False)

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def normalize(self) -> "PureState":
        return PureState.from_vector(self.dims, self.amplitudes)


@dataclass(frozen=True)
class Operator:
    """Dense matrix. ``unitary=True`` is checked on construction."""

    matrix: np.ndarray = field(repr=False)
    unitary: bool = False

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2:
            raise ValueError("operator matrix must be two-dimensional")
        if self.unitary:
            dev = np.abs(m.conj().T @ m - np.eye(m.shape[1])).max()
            if m.shape[0] != m.shape[1] or dev > UNITARY_TOL:
                raise ValueError(f"operator flagged unitary deviates by {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def rows(self) -> int:
        return self.matrix.shape[0]

    @property
    def cols(self) -> int:
        return self.matrix.shape[1]

    @property
    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, unitary=self.unitary)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix @ other.matrix, unitary=self.unitary and other.unitary)

    def kron(self, other: "Operator") -> "Operator":
        return Operator(np.kron(self.matrix, other.matrix), unitary=self.unitary and other.unitary)


def tensor(a: PureState, b: PureState) -> PureState:
    return PureState(
        a.dims + b.dims,
        np.kron(a.amplitudes, b.amplitudes),
        normalized=a.normalized and b.normalized,
    )


def tensor_all(states: Sequence[PureState]) -> PureState:
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def _check_targets(dims: tuple[int, ...], targets: Sequence[int]) -> list[int]:
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target index in {targets}")
    for t in targets:
        if not 0 <= t < len(dims):
            raise ValueError(f"target {t} out of range for {len(dims)} subsystems")
    return targets


def apply_local(op: Operator | np.ndarray, state: PureState, targets: Sequence[int]) -> PureState:
    """Apply ``op`` to the ordered ``targets``, identity elsewhere.

    The result is never renormalized and is flagged unnormalized unless the
    operator is a flagged unitary acting on a normalized state.
    """
    matrix = op.matrix if isinstance(op, Operator) else np.asarray(op, dtype=np.complex128)
    targets = _check_targets(state.dims, targets)
    sub = [state.dims[t] for t in targets]
    width = int(np.prod(sub))
    if matrix.shape != (width, width):
        raise ValueError(
            f"operator of shape {matrix.shape} does not act on subsystems "
            f"{targets} of dims {sub}"
        )
    n = len(state.dims)
    rest = [i for i in range(n) if i not in targets]
    psi = np.transpose(state.tensor(), targets + rest).reshape(width, -1)
    psi = (matrix @ psi).reshape(sub + [state.dims[i] for i in rest])
    psi = np.transpose(psi, np.argsort(targets + rest))
    keep_norm = isinstance(op, Operator) and op.unitary and state.normalized
    if keep_norm:
        # absorb rounding so the normalized flag stays truthful
        psi = psi / np.linalg.norm(psi)
    return PureState(state.dims, psi.ravel(), normalized=keep_norm)


def inner_product(a: PureState, b: PureState) -> complex:
    """<a|b>, conjugate-linear in ``a``."""
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    if not (a.normalized and b.normalized):
        raise ValueError("fidelity is defined for normalized states only")
    return float(min(1.0, abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2))


def align_phase(reference: PureState, state: PureState) -> np.ndarray:
    """Amplitudes of ``state`` rotated so its phase matches ``reference`` on
    the reference's largest-magnitude amplitude."""
    idx = int(np.argmax(np.abs(reference.amplitudes)))
    ref, val = reference.amplitudes[idx], state.amplitudes[idx]
    if abs(val) == 0:
        return np.array(state.amplitudes)
    return state.amplitudes * (ref / abs(ref)) / (val / abs(val))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Schmidt form sum_k c_k |l_k>|r_k> across ``cut``.

    ``left_basis[:, k]`` and ``right_basis[:, k]`` are the k-th Schmidt
    vectors of the subsystems in ``cut[0]`` and ``cut[1]``.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray
    cut: tuple[tuple[int, ...], tuple[int, ...]]
    left_dims: tuple[int, ...]
    right_dims: tuple[int, ...]

    def rank(self, tol: float = RANK_TOL) -> int:
        return int(np.count_nonzero(self.coefficients > tol))

    def reconstruct(self) -> np.ndarray:
        """Amplitude matrix (left x right) implied by the decomposition."""
        return (self.left_basis * self.coefficients) @ self.right_basis.T


def _normalize_cut(n: int, side: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    side = tuple(sorted(int(i) for i in side))
    if len(set(side)) != len(side) or any(not 0 <= i < n for i in side):
        raise ValueError(f"invalid cut {side} for {n} subsystems")
    other = tuple(i for i in range(n) if i not in side)
    if not side or not other:
        raise ValueError("a cut must leave subsystems on both sides")
    return side, other


def amplitude_matrix(state: PureState, side: Sequence[int]) -> np.ndarray:
    """Reshape amplitudes into a (side) x (complement) matrix."""
    left, right = _normalize_cut(state.num_subsystems, side)
    dl = int(np.prod([state.dims[i] for i in left]))
    return np.transpose(state.tensor(), left + right).reshape(dl, -1)


def schmidt(state: PureState, cut: Sequence[int]) -> SchmidtDecomposition:
    """Schmidt decomposition by SVD of the reshaped amplitude matrix.

    ``cut`` lists the subsystems on the left side; the right side is the
    complement. Coefficients come back sorted descending and padded with
    zeros up to the smaller side dimension.
    """
    left, right = _normalize_cut(state.num_subsystems, cut)
    mat = amplitude_matrix(state, left)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return SchmidtDecomposition(
        coefficients=s,
        left_basis=u,
        right_basis=vh.T,
        cut=(left, right),
        left_dims=tuple(state.dims[i] for i in left),
        right_dims=tuple(state.dims[i] for i in right),
    )


def reduced_density(state: PureState, keep: Sequence[int]) -> np.ndarray:
    """Partial trace onto ``keep`` (in ascending subsystem order)."""
    keep = tuple(sorted(int(i) for i in keep))
    if not keep:
        raise ValueError("keep set must be nonempty")
    n = state.num_subsystems
    if len(keep) == n:
        v = state.amplitudes
        return np.outer(v, v.conj())
    mat = amplitude_matrix(state, keep)
    return mat @ mat.conj().T
