"""Branch-by-branch simulation of the one-resource cloning protocol.

Register layout for an ``n``-party run: qudits ``0..n-1`` hold the unknown
state (party ``p`` owns qudit ``p``), qudits ``n..2n-1`` hold the shared
resource (party ``p`` owns qudit ``n + p``). Party 0 is the one who measures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import operators as ops
from .operators import CloneFamily
from .qudit import MAX_DIMENSION, PureState, SizeCapError, apply_local, fidelity, tensor

PERFECT_FIDELITY = 1 - 1e-9
PROBABILITY_TOL = 1e-10
POVM_TOL = 1e-12


@dataclass(frozen=True)
class BranchOutcome:
    k: int
    probability: float
    post_state: PureState = field(repr=False)
    fidelity: float


@dataclass(frozen=True)
class ProtocolReport:
    member: tuple[int, ...] | str
    branches: tuple[BranchOutcome, ...]

    @property
    def total_probability(self) -> float:
        return float(sum(b.probability for b in self.branches))

    @property
    def min_fidelity(self) -> float:
        return min(b.fidelity for b in self.branches)

    @property
    def passed(self) -> bool:
        return (
            self.min_fidelity >= PERFECT_FIDELITY
            and abs(self.total_probability - 1) <= PROBABILITY_TOL
        )


@dataclass(frozen=True)
class FamilyReport:
    family: CloneFamily
    povm_residual: float
    reports: tuple[ProtocolReport, ...]

    @property
    def passed(self) -> bool:
        return self.povm_residual <= POVM_TOL and all(r.passed for r in self.reports)


@dataclass(frozen=True)
class PovmCheck:
    residual: float
    passed: bool


def verify_povm(family: CloneFamily, measurements: Sequence | None = None) -> PovmCheck:
    """Completeness of Alice's measurement; ``measurements`` overrides the
    family's own operators (used to test corrupted sets)."""
    if measurements is None:
        measurements = ops.measurement_operators(family)
    residual = ops.povm_residual(measurements)
    return PovmCheck(residual, residual <= POVM_TOL)


def _check_size(family: CloneFamily) -> None:
    total = family.d ** (2 * family.parties)
    if total > MAX_DIMENSION:
        raise SizeCapError(
            f"protocol register of dimension {total} exceeds the cap of {MAX_DIMENSION}"
        )


def apply_unitary_layer(family: CloneFamily, psi: PureState) -> PureState:
    """psi (x) resource, followed by every party's cloning unitary."""
    n = family.parties
    if psi.dims != (family.d,) * n:
        raise ValueError(f"input dims {psi.dims} do not match the family")
    state = tensor(psi, ops.mes_state(family.d, n))
    u = ops.cloning_unitary(family.d)
    for p in range(n):
        state = apply_local(u, state, [p, n + p])
    return state


def simulate_branch(family: CloneFamily, psi: PureState, k: int) -> BranchOutcome:
    """Run outcome ``k`` of the protocol on an arbitrary input ``psi``.

    The fidelity is measured against psi (x) psi, whether or not psi is a
    member of the family.
    """
    d, n = family.d, family.parties
    if not 0 <= k < d:
        raise ValueError(f"outcome {k} outside [0, {d})")
    _check_size(family)
    state = apply_unitary_layer(family, psi)
    state = apply_local(ops.measurement_operator(family, k), state, [n])
    probability = state.norm() ** 2
    correction = ops.shift_operator(d, -k)
    for p in range(n):
        state = apply_local(correction, state, [n + p])
    post = state.normalize()
    return BranchOutcome(
        k=k,
        probability=float(probability),
        post_state=post,
        fidelity=fidelity(post, tensor(psi, psi)),
    )


def _member_in_family(family: CloneFamily, member: Sequence[int]) -> tuple[int, ...]:
    member = tuple(int(s) for s in member)
    if member not in family.members:
        raise ValueError(f"{member} is not a member of the family")
    return member


def run_branch(family: CloneFamily, member: Sequence[int], k: int) -> BranchOutcome:
    member = _member_in_family(family, member)
    return simulate_branch(family, ops.family_state(family, member), k)


def run_protocol(family: CloneFamily, member: Sequence[int]) -> ProtocolReport:
    member = _member_in_family(family, member)
    psi = ops.family_state(family, member)
    branches = tuple(simulate_branch(family, psi, k) for k in range(family.d))
    return ProtocolReport(member, branches)


def verify_family(
    family: CloneFamily, extra_states: Sequence[tuple[str, PureState]] = ()
) -> FamilyReport:
    """Run every member through every branch.

    ``extra_states`` are ``(label, state)`` pairs pushed through the same
    protocol. Any of them that is not clonable by it fails the verdict.
    """
    _check_size(family)
    reports = [run_protocol(family, m) for m in sorted(family.members)]
    for label, psi in extra_states:
        branches = tuple(simulate_branch(family, psi, k) for k in range(family.d))
        reports.append(ProtocolReport(label, branches))
    return FamilyReport(family, verify_povm(family).residual, tuple(reports))


def branch_probabilities(report: ProtocolReport) -> np.ndarray:
    return np.array([b.probability for b in report.branches])
