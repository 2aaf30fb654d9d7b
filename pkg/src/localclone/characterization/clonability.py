"""Deciding whether a set of bipartite states is clonable with one resource.

A set is clonable iff, after local unitaries, it is a shift family
sum_j alpha_j |j>|j+s_i>. The decision works in the Schmidt frame of the
first state: each state is rescaled into a unitary R_i (R_0 = I), and the
set is clonable iff all R_i are proportional to powers of one unitary h
whose orbit structure is compatible with diag(alpha^2). A constructed
frame is always confirmed by rebuilding every input state from it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from ..operators import CloneFamily, family_state
from ..qudit import RANK_TOL, Operator, PureState, amplitude_matrix, apply_local, fidelity, schmidt

STRUCTURE_TOL = 1e-8
RECONSTRUCTION_FIDELITY = 1 - 1e-9
CLUSTER_TOL = 1e-7


class Reason(str, Enum):
    OK = "ok"
    NOT_ORTHOGONAL = "not-orthogonal"
    ZERO_COEFFICIENT = "zero-coefficient"
    NOT_SAME_SCHMIDT = "not-same-schmidt"
    NOT_SHIFT_RELATED = "not-shift-related"


@dataclass(frozen=True)
class ClonabilityVerdict:
    clonable: bool
    reason: Reason
    detail: str = ""
    extracted_family: CloneFamily | None = None
    # V_A (x) V_B maps input state i onto extracted_family.members[i]
    basis_transforms: tuple[Operator, Operator] | None = field(default=None, repr=False)
    reconstruction_fidelities: tuple[float, ...] = ()

    @property
    def shifts(self) -> tuple[int, ...] | None:
        if self.extracted_family is None:
            return None
        return tuple(m[0] for m in self.extracted_family.members)


def _close_mod_phase(a: np.ndarray, b: np.ndarray, tol: float) -> complex | None:
    """Phase c with a ~ c b for unitaries a, b, or None."""
    ov = np.trace(b.conj().T @ a) / a.shape[0]
    if abs(ov) < 1 - tol:
        return None
    c = ov / abs(ov)
    if np.abs(a - c * b).max() > tol:
        return None
    return c


def _cyclic_generator(gens: list[np.ndarray], d: int, tol: float):
    """Close ``gens`` under multiplication modulo phase.

    Returns (g, powers) where the group is {g^n} up to phase, or None if the
    group is not cyclic or larger than d.
    """
    eye = np.eye(d, dtype=np.complex128)
    group = [eye]
    frontier = [eye]
    while frontier:
        nxt = []
        for w in frontier:
            for g in gens:
                cand = g @ w
                if all(_close_mod_phase(cand, x, tol) is None for x in group):
                    group.append(cand)
                    nxt.append(cand)
                    if len(group) > d:
                        return None
        frontier = nxt
    m = len(group)
    for g in group:
        powers = [eye]
        for _ in range(m - 1):
            powers.append(g @ powers[-1])
        if all(
            _close_mod_phase(powers[a], powers[b], tol) is None
            for a in range(m)
            for b in range(a)
        ):
            return g, powers
    return None


def _split(q: np.ndarray, herm: np.ndarray) -> list[np.ndarray]:
    """Split subspace ``q`` (orthonormal columns) into eigenspaces of ``herm``."""
    vals, vecs = np.linalg.eigh(q.conj().T @ herm @ q)
    groups, start = [], 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or vals[i] - vals[i - 1] > CLUSTER_TOL:
            groups.append(q @ vecs[:, start:i])
            start = i
    return groups


def _joint_eigenspaces(mats: list[np.ndarray], d: int) -> list[np.ndarray]:
    blocks = [np.eye(d, dtype=np.complex128)]
    for mat in mats:
        blocks = [piece for b in blocks for piece in _split(b, mat)]
    return blocks


def _range_basis(projector: np.ndarray) -> np.ndarray:
    vals, vecs = np.linalg.eigh((projector + projector.conj().T) / 2)
    return vecs[:, vals > 0.5]


def _cyclic_seeds(h: np.ndarray, m: int, l0: int, q: np.ndarray, tol: float):
    """Vectors v in span(q) whose images h^(l0 n) v are orthonormal."""
    k = q.conj().T @ np.linalg.matrix_power(h, l0) @ q
    mp = m // l0
    dim = q.shape[1]
    if dim % mp:
        return None
    powers = [np.eye(dim, dtype=np.complex128)]
    for _ in range(mp - 1):
        powers.append(k @ powers[-1])
    w = np.exp(2j * np.pi / mp)
    parts = []
    for c in range(mp):
        proj = sum(w ** (-c * n) * powers[n] for n in range(mp)) / mp
        basis = _range_basis(proj)
        if basis.shape[1] != dim // mp:
            return None
        parts.append(basis)
    seeds = sum(parts) / np.sqrt(mp)
    return [q @ seeds[:, a] for a in range(dim // mp)]


def _shift_frame(rs: list[np.ndarray], alpha: np.ndarray, tol: float):
    """Unitary frame putting every R_i onto a phase times P_{-s_i}.

    Works in the Schmidt frame, where Alice's reduced state is diag(alpha^2).
    Returns (frame, shifts) with frame rows the new basis vectors, or a
    string explaining the failure.
    """
    d = len(alpha)
    for a in range(len(rs)):
        for b in range(a):
            if np.abs(rs[a] @ rs[b] - rs[b] @ rs[a]).max() > tol:
                return "rescaled states do not commute"
    found = _cyclic_generator(rs[1:], d, tol)
    if found is None:
        return "rescaled states do not generate a cyclic group"
    g, powers = found
    m = len(powers)
    if d % m:
        return f"group order {m} does not divide {d}"
    exps = []
    for r in rs:
        e = next(n for n in range(m) if _close_mod_phase(r, powers[n], tol) is not None)
        exps.append(e)
    top = g @ powers[-1]
    c = _close_mod_phase(top, np.eye(d), tol)
    if c is None:
        return "generator power is not a phase"
    h = g * np.exp(-1j * np.angle(c) / m)
    t = d // m

    a_mat = np.diag(alpha**2).astype(np.complex128)
    hp = [np.linalg.matrix_power(h, n) for n in range(m)]
    conj = [hp[n] @ a_mat @ hp[n].conj().T for n in range(m)]
    if any(np.abs(x @ a_mat - a_mat @ x).max() > tol for x in conj):
        return "Schmidt structure is not preserved by the rescaled states"
    blocks = _joint_eigenspaces(conj, d)

    seeds = []
    done = [False] * len(blocks)
    for i, q in enumerate(blocks):
        if done[i]:
            continue
        l0 = None
        for n in range(1, m + 1):
            img = hp[n % m] @ q
            j = max(range(len(blocks)), key=lambda b: np.linalg.norm(blocks[b].conj().T @ img))
            if blocks[j].shape != q.shape or np.linalg.norm(img - blocks[j] @ (blocks[j].conj().T @ img)) > 1e-6:
                return "rescaled states do not permute the Schmidt blocks"
            if j == i:
                l0 = n
                break
            done[j] = True
        done[i] = True
        if m % l0:
            return "inconsistent block orbit"
        block_seeds = _cyclic_seeds(h, m, l0, q, tol)
        if block_seeds is None:
            return "rescaled states are not shifts within a Schmidt block"
        seeds.extend(block_seeds)
    if len(seeds) != t:
        return "orbit count does not match the group order"

    basis = np.zeros((d, d), dtype=np.complex128)
    hinv = h.conj().T
    for r, v in enumerate(seeds):
        vec = v
        for l in range(m):
            basis[:, r + t * l] = vec
            vec = hinv @ vec
    if np.abs(basis.conj().T @ basis - np.eye(d)).max() > 1e-6:
        return "constructed frame is not orthonormal"
    # re-orthonormalize to machine precision without moving the columns far
    u, _, vh = np.linalg.svd(basis)
    basis = u @ vh
    shifts = tuple((e * t) % d for e in exps)
    return basis.conj().T, shifts


def is_clonable_set(states: Sequence[PureState], tol: float = STRUCTURE_TOL) -> ClonabilityVerdict:
    """Decide whether ``states`` can be perfectly cloned by LOCC plus one
    maximally entangled pair of the same local dimension.

    Every state must be a normalized two-qudit state with equal local
    dimensions. The first state fixes the frame.
    """
    states = list(states)
    if len(states) < 2:
        raise ValueError("need at least two states")
    dims = states[0].dims
    if len(dims) != 2:
        raise ValueError("clonability is decided for bipartite states only")
    if any(s.dims != dims for s in states):
        raise ValueError("all states must share the same dims")
    if dims[0] != dims[1]:
        raise ValueError("local dimensions must be equal")
    d = dims[0]
    if len(states) > d:
        raise ValueError(f"at most {d} states can be cloned at local dimension {d}")

    vecs = np.array([s.amplitudes for s in states])
    gram = vecs.conj() @ vecs.T
    off = np.abs(gram - np.eye(len(states))).max()
    if off > tol:
        return ClonabilityVerdict(False, Reason.NOT_ORTHOGONAL, f"max overlap {off:.3e}")

    sd = schmidt(states[0], [0])
    alpha = sd.coefficients
    if alpha.min() <= max(tol, RANK_TOL):
        return ClonabilityVerdict(
            False, Reason.ZERO_COEFFICIENT, f"smallest Schmidt coefficient {alpha.min():.3e}"
        )
    for i, s in enumerate(states[1:], start=1):
        other = schmidt(s, [0]).coefficients
        gap = np.abs(other - alpha).max()
        if gap > tol:
            return ClonabilityVerdict(
                False,
                Reason.NOT_SAME_SCHMIDT,
                f"state {i} Schmidt coefficients differ by {gap:.3e}",
            )

    left, right = sd.left_basis, sd.right_basis
    rs = []
    for i, s in enumerate(states):
        c = left.conj().T @ amplitude_matrix(s, [0]) @ right.conj()
        r = c / alpha[:, None]
        if np.abs(r @ r.conj().T - np.eye(d)).max() > tol:
            return ClonabilityVerdict(
                False,
                Reason.NOT_SHIFT_RELATED,
                f"state {i} is not maximally entangled after rescaling",
            )
        rs.append(r)

    frame = _shift_frame(rs, alpha, tol)
    if isinstance(frame, str):
        return ClonabilityVerdict(False, Reason.NOT_SHIFT_RELATED, frame)
    v, shifts = frame
    new_alpha = np.sqrt(np.real(np.einsum("ij,j,ij->i", v.conj(), alpha**2, v)))
    new_alpha = new_alpha / np.linalg.norm(new_alpha)
    family = CloneFamily(d, tuple(new_alpha), tuple((s,) for s in shifts))
    va = Operator(v @ left.conj().T, unitary=True)
    vb = Operator(v.conj() @ right.conj().T, unitary=True)
    fids = []
    for s, member in zip(states, family.members):
        moved = apply_local(vb, apply_local(va, s, [0]), [1])
        fids.append(fidelity(moved, family_state(family, member)))
    if min(fids) < RECONSTRUCTION_FIDELITY:
        return ClonabilityVerdict(
            False, Reason.NOT_SHIFT_RELATED, f"frame reconstruction fidelity {min(fids):.3e}"
        )
    return ClonabilityVerdict(True, Reason.OK, "", family, (va, vb), tuple(fids))


@dataclass(frozen=True)
class ObstructionReport:
    d: int
    rank: int
    product_rank: int
    obstruction: bool
    majorization_allows: bool


def majorized_by(x: Sequence[float], y: Sequence[float], tol: float = 1e-12) -> bool:
    """True iff probability vector ``x`` is majorized by ``y``."""
    n = max(len(x), len(y))
    xs = np.sort(np.pad(np.asarray(x, float), (0, n - len(x))))[::-1]
    ys = np.sort(np.pad(np.asarray(y, float), (0, n - len(y))))[::-1]
    return bool(np.all(np.cumsum(xs) <= np.cumsum(ys) + tol))


def schmidt_rank_obstruction(alpha: Sequence[float], d: int) -> ObstructionReport:
    """Whether measure-then-prepare from one d-dimensional resource fails.

    Preparing psi (x) psi from the resource (x) |00> by LOCC requires the
    resource's Schmidt probabilities to be majorized by the target's, which
    fails exactly when psi (x) psi has Schmidt rank above d.
    """
    alpha = np.asarray(alpha, dtype=float)
    if len(alpha) != d:
        raise ValueError(f"need {d} coefficients, got {len(alpha)}")
    if abs(np.sum(alpha**2) - 1) > 1e-12 or np.any(alpha < 0):
        raise ValueError("coefficients must be nonnegative with unit sum of squares")
    psi = PureState((d, d), np.diag(alpha).astype(np.complex128).ravel())
    rank = schmidt(psi, [0]).rank()
    # psi (x) psi over (A1, B1, A2, B2); Alice holds A1 A2
    doubled = np.kron(psi.amplitudes, psi.amplitudes)
    pair = PureState((d, d, d, d), doubled)
    coeffs = schmidt(pair, [0, 2]).coefficients
    product_rank = int(np.count_nonzero(coeffs > RANK_TOL))
    initial = np.zeros(d * d)
    initial[:d] = 1 / d
    allows = majorized_by(initial, coeffs**2)
    return ObstructionReport(d, rank, product_rank, product_rank > d, allows)


def unit_relabeling(recovered: Sequence[int], original: Sequence[int], d: int) -> int | None:
    """A unit u mod d with recovered_i = u (original_i - original_0), if any."""
    for u in range(1, d):
        if math.gcd(u, d) != 1:
            continue
        if all((u * (o - original[0]) - r) % d == 0 for r, o in zip(recovered, original)):
            return u
    return None
