"""Named operators and states of the cloning protocol.

Conventions: omega = exp(2 pi i / d); the shift P_i sends |j> to |j+i mod d>;
the cloning unitary is controlled on its first factor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .qudit import Operator, PureState

ALPHA_TOL = 1e-12


def omega(d: int) -> complex:
    return complex(np.exp(2j * np.pi / d))


def _check_d(d: int) -> int:
    d = int(d)
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    return d


def shift_operator(d: int, i: int) -> Operator:
    d = _check_d(d)
    m = np.zeros((d, d), dtype=np.complex128)
    for j in range(d):
        m[(j + i) % d, j] = 1.0
    return Operator(m, unitary=True)


def clock_operator(d: int, j: int) -> Operator:
    d = _check_d(d)
    phases = np.exp(2j * np.pi * ((j * np.arange(d)) % d) / d)
    # exact zeros at quarter turns
    phases.real[np.abs(phases.real) < 1e-15] = 0.0
    phases.imag[np.abs(phases.imag) < 1e-15] = 0.0
    return Operator(np.diag(phases), unitary=True)


def fourier_operator(d: int) -> Operator:
    """F[m, k] = omega^(m k) / sqrt(d)."""
    d = _check_d(d)
    mk = np.outer(np.arange(d), np.arange(d)) % d
    return Operator(np.exp(2j * np.pi * mk / d) / np.sqrt(d), unitary=True)


def mes_state(d: int, parties: int = 2) -> PureState:
    """(1/sqrt d) sum_l |l>^(x parties)."""
    d = _check_d(d)
    if parties < 2:
        raise ValueError("a shared resource needs at least two parties")
    dims = (d,) * parties
    amps = np.zeros(d**parties, dtype=np.complex128)
    for l in range(d):
        amps[np.ravel_multi_index((l,) * parties, dims)] = 1 / np.sqrt(d)
    return PureState(dims, amps)


def shifted_mes(d: int, member: Sequence[int]) -> PureState:
    """(1/sqrt d) sum_l |l> P_s1|l> P_s2|l> ... for shifts ``member``."""
    coeffs = np.full(d, 1 / np.sqrt(d))
    return _shift_structured(d, coeffs, member)


def _shift_structured(d: int, coeffs: np.ndarray, member: Sequence[int]) -> PureState:
    parties = len(member) + 1
    dims = (d,) * parties
    amps = np.zeros(d**parties, dtype=np.complex128)
    for k in range(d):
        digits = (k,) + tuple((k + s) % d for s in member)
        amps[np.ravel_multi_index(digits, dims)] = coeffs[k]
    return PureState(dims, amps)


def cloning_unitary(d: int) -> Operator:
    """sum_m |m><m| (x) P_m, acting on (unknown-state qudit, resource qudit)."""
    d = _check_d(d)
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for c in range(d):
        for t in range(d):
            m[c * d + (t + c) % d, c * d + t] = 1.0
    return Operator(m, unitary=True)


@dataclass(frozen=True)
class CloneFamily:
    """A shift-structured family of states sharing Schmidt coefficients ``alpha``.

    Each member lists one shift per party beyond the first; member ``(s1, s2)``
    of a three-party family is sum_k alpha_k |k> P_s1|k> P_s2|k>.
    """

    d: int
    alpha: tuple[float, ...]
    members: tuple[tuple[int, ...], ...]
    parties: int = 2

    def __post_init__(self):
        d = _check_d(self.d)
        if self.parties < 2:
            raise ValueError("a family needs at least two parties")
        alpha = tuple(float(a) for a in self.alpha)
        if len(alpha) != d:
            raise ValueError(f"need {d} Schmidt coefficients, got {len(alpha)}")
        if any(not a > 0 for a in alpha):
            raise ValueError("Schmidt coefficients must be strictly positive")
        if abs(sum(a * a for a in alpha) - 1.0) > ALPHA_TOL:
            raise ValueError("Schmidt coefficients must satisfy sum(alpha^2) = 1")
        members = tuple(tuple(int(s) for s in m) for m in self.members)
        for m in members:
            if len(m) != self.parties - 1:
                raise ValueError(f"member {m} needs {self.parties - 1} shift indices")
            if any(not 0 <= s < d for s in m):
                raise ValueError(f"member {m} has a shift outside [0, {d})")
        if len(set(members)) != len(members):
            raise ValueError("family members must be distinct")
        if len(members) > d ** (self.parties - 1):
            raise ValueError("family is larger than d^(parties-1)")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "members", members)

    @classmethod
    def full(cls, d: int, alpha: Sequence[float], parties: int = 2) -> "CloneFamily":
        """Family containing every shift assignment, in lexicographic order."""
        members = tuple(itertools.product(range(d), repeat=parties - 1))
        return cls(d, tuple(alpha), members, parties)

    def state(self, member: Sequence[int]) -> PureState:
        return family_state(self, member)

    def states(self) -> list[PureState]:
        return [family_state(self, m) for m in self.members]


def random_alpha(d: int, rng: np.random.Generator) -> np.ndarray:
    """Strictly positive Schmidt coefficients with unit sum of squares."""
    v = rng.uniform(0.05, 1.0, size=d)
    return v / np.linalg.norm(v)


def family_state(family: CloneFamily, member: Sequence[int]) -> PureState:
    member = tuple(int(s) for s in member)
    if len(member) != family.parties - 1:
        raise ValueError(
            f"member {member} has arity {len(member)}, family expects {family.parties - 1}"
        )
    if any(not 0 <= s < family.d for s in member):
        raise ValueError(f"member {member} has a shift outside [0, {family.d})")
    return _shift_structured(family.d, np.asarray(family.alpha), member)


def measurement_operator(family: CloneFamily, k: int) -> Operator:
    """M_k = P_k M_0 P_k^dagger with M_0 = diag(alpha)."""
    d = family.d
    if not 0 <= k < d:
        raise ValueError(f"outcome {k} outside [0, {d})")
    alpha = np.asarray(family.alpha)
    return Operator(np.diag(alpha[(np.arange(d) - k) % d]).astype(np.complex128))


def measurement_operators(family: CloneFamily) -> list[Operator]:
    return [measurement_operator(family, k) for k in range(family.d)]


def povm_residual(ops: Iterable[Operator]) -> float:
    """max |sum_k M_k^dagger M_k - I|."""
    ops = list(ops)
    total = sum(op.matrix.conj().T @ op.matrix for op in ops)
    return float(np.abs(total - np.eye(ops[0].cols)).max())
