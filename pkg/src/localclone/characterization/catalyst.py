"""Catalysed cloning: whether a returned ancilla widens the clonable set.

A catalyst with Schmidt coefficients beta turns the equal-entanglement
requirement into equality of the product multisets {a1_i b_j} and
{a2_i b_j}. The peeling routine recovers each alpha list from its products
by repeatedly taking the smallest product, which must be min(alpha) min(beta).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

MULTISET_TOL = 1e-9


def _coeffs(name: str, values: Sequence[float]) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError(f"{name} must be a nonempty list")
    if np.any(arr <= 0):
        raise ValueError(f"{name} entries must be strictly positive")
    if abs(np.sum(arr**2) - 1) > 1e-12:
        raise ValueError(f"{name} must satisfy sum of squares = 1")
    return arr


@dataclass(frozen=True)
class CatalystSpec:
    alpha1: tuple[float, ...]
    alpha2: tuple[float, ...]
    beta: tuple[float, ...]

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta"):
            object.__setattr__(self, name, tuple(_coeffs(name, getattr(self, name))))


@dataclass(frozen=True)
class CatalystVerdict:
    products1: tuple[float, ...]
    products2: tuple[float, ...]
    multisets_equal: bool
    alphas_equal: bool
    peeled1: tuple[float, ...] | None
    peeled2: tuple[float, ...] | None
    peeling_forces_equal: bool

    @property
    def consistent(self) -> bool:
        """Catalysis adds nothing: equal products exactly when equal alphas."""
        return self.multisets_equal == self.alphas_equal and (
            not self.multisets_equal or self.peeling_forces_equal
        )


def _sorted_equal(x: Sequence[float], y: Sequence[float], tol: float) -> bool:
    if len(x) != len(y):
        return False
    return bool(np.all(np.abs(np.sort(x)[::-1] - np.sort(y)[::-1]) <= tol))


def product_multiset(alpha: Sequence[float], beta: Sequence[float]) -> np.ndarray:
    return np.sort(np.outer(alpha, beta).ravel())[::-1]


def peel(products: Sequence[float], beta: Sequence[float], tol: float = MULTISET_TOL):
    """Recover alpha (ascending) from the multiset {alpha_i beta_j}.

    Returns None when the multiset does not factor over ``beta``.
    """
    pool = sorted(float(p) for p in products)
    beta = sorted(float(b) for b in beta)
    if len(pool) % len(beta):
        return None
    recovered = []
    while pool:
        a = pool[0] / beta[0]
        for b in beta:
            target = a * b
            idx = min(range(len(pool)), key=lambda i: abs(pool[i] - target))
            if abs(pool[idx] - target) > tol:
                return None
            pool.pop(idx)
        recovered.append(a)
    return tuple(recovered)


def catalyst_no_go_check(spec: CatalystSpec, tol: float = MULTISET_TOL) -> CatalystVerdict:
    p1 = product_multiset(spec.alpha1, spec.beta)
    p2 = product_multiset(spec.alpha2, spec.beta)
    multisets_equal = _sorted_equal(p1, p2, tol)
    alphas_equal = _sorted_equal(spec.alpha1, spec.alpha2, tol)
    peeled1 = peel(p1, spec.beta, tol)
    peeled2 = peel(p2, spec.beta, tol)
    forced = (
        peeled1 is not None
        and peeled2 is not None
        and _sorted_equal(peeled1, peeled2, tol)
    )
    return CatalystVerdict(
        products1=tuple(p1),
        products2=tuple(p2),
        multisets_equal=multisets_equal,
        alphas_equal=alphas_equal,
        peeled1=peeled1,
        peeled2=peeled2,
        peeling_forces_equal=forced,
    )
