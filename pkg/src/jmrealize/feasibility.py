"""Numerical joint-measurability oracle via Dykstra's alternating projections.

Deciding whether POVMs M_1..M_N admit a joint POVM is a convex feasibility
problem over one variable G(x) per product outcome x: every G(x) must be
positive semidefinite, and for each component i the partial sums over the
other outcome indices must reproduce M_i. The PSD requirement is a product
of cones (projected by clipping negative eigenvalues elementwise) and each
component's marginal requirement is an affine subspace (projected by
spreading the deficit uniformly over the group of variables it constrains).
Dykstra's correction terms make the cycle converge to the projection onto
the intersection when one exists, and stall detectably when it is empty.

A ``feasible`` verdict is rigorous up to the residual tolerance and always
carries a witness; ``presumed_infeasible`` is a plateau heuristic with no
guarantee and is labeled as such wherever it is emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .matrix import DEFAULT_TOL, Tolerance, identity
from .povm import JointPovm, Povm, marginalize, povm_residuals

__all__ = [
    "FEASIBLE",
    "PRESUMED_INFEASIBLE",
    "ITERATION_LIMIT",
    "PLATEAU_TOL",
    "PLATEAU_WINDOW",
    "FeasibilityReport",
    "decide_joint_measurability",
    "verify_witness",
]

FEASIBLE = "feasible"
PRESUMED_INFEASIBLE = "presumed_infeasible"
ITERATION_LIMIT = "iteration_limit"

# Plateau rule: relative residual change below PLATEAU_TOL across a
# PLATEAU_WINDOW-cycle window, while the residual still exceeds feas_tol.
PLATEAU_TOL = 1e-9
PLATEAU_WINDOW = 200


@dataclass(frozen=True)
class FeasibilityReport:
    """Verdict of the oracle plus the data needed to audit it."""

    status: str
    residual: float
    iterations: int
    witness: JointPovm | None
    residual_history: tuple[float, ...]

    @property
    def heuristic(self) -> bool:
        """True when the verdict carries no rigorous guarantee."""
        return self.status != FEASIBLE

    def to_json(self) -> dict:
        from .povm import joint_povm_to_json

        return {
            "status": self.status,
            "heuristic": self.heuristic,
            "residual": self.residual,
            "iterations": self.iterations,
            "residual_history_length": len(self.residual_history),
            "witness": None if self.witness is None else joint_povm_to_json(self.witness),
        }


def _project_psd(flat: np.ndarray) -> np.ndarray:
    """Clip negative eigenvalues of each (Hermitized) matrix in the stack."""
    out = np.empty_like(flat)
    for i, m in enumerate(flat):
        h = (m + m.conj().T) / 2
        w, v = np.linalg.eigh(h)
        out[i] = (v * np.clip(w, 0.0, None)) @ v.conj().T
    return out


def _psd_violation(flat: np.ndarray) -> float:
    """Max over elements of the Frobenius distance to the PSD cone."""
    worst = 0.0
    for m in flat:
        w = np.linalg.eigvalsh((m + m.conj().T) / 2)
        worst = max(worst, float(math.sqrt(np.sum(np.clip(w, None, 0.0) ** 2))))
    return worst


def decide_joint_measurability(
    povms: Sequence[Povm],
    tol: Tolerance = DEFAULT_TOL,
    max_iter: int = 20000,
) -> FeasibilityReport:
    """Decide whether ``povms`` admit a joint POVM.

    Returns ``feasible`` with a witness once every constraint holds within
    feas_tol (Frobenius norm per constraint), ``presumed_infeasible`` when
    the residual plateaus above feas_tol, and ``iteration_limit`` otherwise.
    Deterministic: the PSD cone and the component constraints are cycled in
    a fixed order from a fixed uniform start.
    """
    if not povms:
        raise ValueError("need at least one POVM")
    dim = povms[0].dim
    for p in povms:
        if p.dim != dim:
            raise ValueError(f"dimension mismatch: {p.dim} vs {dim}")

    n = len(povms)
    counts = tuple(len(p.outcomes) for p in povms)
    total = math.prod(counts)
    shape = counts + (dim, dim)
    # Hermitian parts guard against drift in user-supplied elements.
    targets = [
        np.stack([(np.asarray(m) + np.asarray(m).conj().T) / 2 for m in p.elements])
        for p in povms
    ]

    def marginal(x: np.ndarray, i: int) -> np.ndarray:
        axes = tuple(a for a in range(n) if a != i)
        return x.sum(axis=axes) if axes else x

    def project_marginal(x: np.ndarray, i: int) -> np.ndarray:
        deficit = (targets[i] - marginal(x, i)) / (total // counts[i])
        broadcast = [1] * n + [dim, dim]
        broadcast[i] = counts[i]
        return x + deficit.reshape(broadcast)

    def residual_of(x: np.ndarray) -> float:
        worst = _psd_violation(x.reshape(total, dim, dim))
        for i in range(n):
            diffs = marginal(x, i) - targets[i]
            for d in diffs:
                worst = max(worst, float(np.linalg.norm(d)))
        return worst

    x = np.broadcast_to(identity(dim) / total, shape).copy()
    corrections = [np.zeros(shape, dtype=np.complex128) for _ in range(n + 1)]
    history: list[float] = []

    def report(status: str, iterations: int) -> FeasibilityReport:
        witness = None
        if status == FEASIBLE:
            witness = JointPovm(
                dim=dim,
                outcome_sets=tuple(tuple(p.outcomes) for p in povms),
                elements=tuple(np.array(m) for m in x.reshape(total, dim, dim)),
            )
        return FeasibilityReport(
            status=status,
            residual=history[-1] if history else float("inf"),
            iterations=iterations,
            witness=witness,
            residual_history=tuple(history),
        )

    for iteration in range(1, max_iter + 1):
        for m in range(n + 1):
            z = x + corrections[m]
            if m == 0:
                y = _project_psd(z.reshape(total, dim, dim)).reshape(shape)
            else:
                y = project_marginal(z, m - 1)
            corrections[m] = z - y
            x = y
        res = residual_of(x)
        history.append(res)
        if res <= tol.feas_tol:
            return report(FEASIBLE, iteration)
        if iteration > PLATEAU_WINDOW:
            old = history[-1 - PLATEAU_WINDOW]
            if old > 0 and abs(old - res) / old < PLATEAU_TOL:
                return report(PRESUMED_INFEASIBLE, iteration)
    return report(ITERATION_LIMIT, max_iter)


def verify_witness(
    povms: Sequence[Povm], witness: JointPovm, tol: Tolerance = DEFAULT_TOL
) -> bool:
    """Check that ``witness`` is a POVM whose marginals reproduce ``povms``.

    Positivity and each marginal are checked within feas_tol; summation to
    identity is implied by the first component's marginals and is therefore
    allowed the correspondingly scaled slack.
    """
    if povms and witness.dim != povms[0].dim:
        raise ValueError(f"dimension mismatch: witness {witness.dim} vs {povms[0].dim}")
    if len(witness.outcome_sets) != len(povms):
        raise ValueError(
            f"witness has {len(witness.outcome_sets)} components, expected {len(povms)}"
        )
    for s, p in zip(witness.outcome_sets, povms):
        if tuple(s) != tuple(p.outcomes):
            raise ValueError(f"outcome sets differ: {s} vs {p.outcomes}")

    r = povm_residuals(witness.as_povm())
    sum_slack = tol.feas_tol * max(1, len(povms[0].outcomes) if povms else 1)
    if r.hermiticity > tol.feas_tol or r.psd > tol.feas_tol or r.completeness > sum_slack:
        return False
    for i, p in enumerate(povms, start=1):
        marg = marginalize(witness, i)
        for target, got in zip(p.elements, marg.elements):
            if float(np.linalg.norm(got - np.asarray(target))) > tol.feas_tol:
                return False
    return True
