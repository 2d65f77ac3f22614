"""Recursive construction of mutually anticommuting Hermitian involutions.

A family of n generators lives on dimension 2^floor(n/2) and satisfies
G_j G_k + G_k G_j = 2 delta_jk I. The construction starts from the scalar 1,
and each round maps every generator g to g (x) sigma_z and appends
I (x) sigma_x and I (x) sigma_y, adding two generators per round. Even
counts are obtained by building one generator more and truncating.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix import DEFAULT_TOL, Tolerance, identity, max_abs

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "CliffordFamily",
    "RelationViolation",
    "CliffordReport",
    "build_clifford",
    "check_clifford",
    "weighted_sum_square_check",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class CliffordFamily:
    """Ordered generators of an anticommuting family on a common dimension."""

    n: int
    dim: int
    gammas: tuple[np.ndarray, ...]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def build_clifford(n: int) -> CliffordFamily:
    """Build ``n`` anticommuting Hermitian involutions on dimension 2^floor(n/2).

    Deterministic: repeated calls return entrywise-identical generators. For
    even ``n`` the family is the first ``n`` generators of the (n+1)-family,
    which lives on the same dimension.
    """
    if n < 1:
        raise ValueError(f"need at least one generator, got n={n}")
    gammas = [np.ones((1, 1), dtype=np.complex128)]
    # n // 2 rounds produce 2*(n//2)+1 generators: enough for odd n, and for
    # even n exactly the (n+1)-family to truncate.
    for _ in range(n // 2):
        eye = identity(gammas[0].shape[0])
        gammas = [np.kron(g, SIGMA_Z) for g in gammas]
        gammas.append(np.kron(eye, SIGMA_X))
        gammas.append(np.kron(eye, SIGMA_Y))
    gammas = gammas[:n]
    return CliffordFamily(
        n=n,
        dim=gammas[0].shape[0],
        gammas=tuple(_freeze(g) for g in gammas),
    )


@dataclass(frozen=True)
class RelationViolation:
    relation: str
    indices: tuple[int, ...]
    residual: float


@dataclass(frozen=True)
class CliffordReport:
    """Outcome of checking a family against the defining relations."""

    passed: bool
    max_residual: float
    relations_checked: int
    violations: tuple[RelationViolation, ...]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "max_residual": self.max_residual,
            "relations_checked": self.relations_checked,
            "violations": [
                {"relation": v.relation, "indices": list(v.indices), "residual": v.residual}
                for v in self.violations
            ],
        }


def check_clifford(fam: CliffordFamily, tol: Tolerance = DEFAULT_TOL) -> CliffordReport:
    """Verify Hermiticity, squares = I, pairwise anticommutation, and tracelessness.

    Tracelessness only applies for n >= 2; a single generator is exempt.
    Failures become report entries rather than exceptions.
    """
    eye = identity(fam.dim)
    violations: list[RelationViolation] = []
    max_residual = 0.0
    checked = 0

    def record(relation: str, indices: tuple[int, ...], residual: float) -> None:
        nonlocal max_residual, checked
        checked += 1
        max_residual = max(max_residual, residual)
        if residual > tol.eq_tol:
            violations.append(RelationViolation(relation, indices, residual))

    for k, g in enumerate(fam.gammas, start=1):
        record("hermitian", (k,), max_abs(g - g.conj().T))
        record("square_identity", (k,), max_abs(g @ g - eye))
        if fam.n >= 2:
            record("traceless", (k,), abs(complex(np.trace(g))))
    for j in range(fam.n):
        for k in range(j + 1, fam.n):
            gj, gk = fam.gammas[j], fam.gammas[k]
            record("anticommute", (j + 1, k + 1), max_abs(gj @ gk + gk @ gj))

    return CliffordReport(
        passed=not violations,
        max_residual=max_residual,
        relations_checked=checked,
        violations=tuple(violations),
    )


def weighted_sum_square_check(fam: CliffordFamily, x, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff (sum_k x_k G_k)^2 equals (sum_k x_k^2) I within eq_tol."""
    weights = np.asarray(x, dtype=np.float64)
    if weights.ndim != 1 or weights.shape[0] != fam.n:
        raise ValueError(f"expected {fam.n} weights, got shape {weights.shape}")
    total = sum(w * g for w, g in zip(weights, fam.gammas))
    expected = float(np.dot(weights, weights)) * identity(fam.dim)
    return max_abs(total @ total - expected) <= tol.eq_tol
