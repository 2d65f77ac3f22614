"""POVMs, noisy anticommuting-generator observables, and their joint POVMs.

The binary observables built here have elements (I +/- eta*G)/2 for a
generator G and purity eta in [0, 1]. N of them admit a joint POVM exactly
when eta <= 1/sqrt(N); the explicit joint has elements
2^-N (I + eta * sum_k x_k G_k) over sign vectors x. The purity window
(1/sqrt(N), 1/sqrt(N-1)] makes every N-1 of them compatible while all N
together are not, which is what the realization pipeline exploits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .clifford import CliffordFamily
from .matrix import (
    DEFAULT_TOL,
    Tolerance,
    as_operator,
    identity,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    zero_matrix,
)

__all__ = [
    "Povm",
    "PovmResiduals",
    "NoisyCliffordObservable",
    "JointPovm",
    "povm_residuals",
    "validate_povm",
    "make_noisy_observable",
    "trivial_povm",
    "make_joint_povm",
    "marginalize",
    "recover_purity",
    "clifford_compatibility_threshold",
    "specker_eta",
    "povm_to_json",
    "povm_from_json",
    "joint_povm_to_json",
    "joint_povm_from_json",
]


@dataclass(frozen=True)
class Povm:
    """Outcome-labeled family of operators on a common dimension.

    Construction checks shapes only; use :func:`validate_povm` for the
    positivity and completeness invariants so that deliberately broken
    instances can still be represented (e.g. tampered witnesses in tests).
    """

    dim: int
    outcomes: tuple
    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError(f"dimension must be positive, got {self.dim}")
        if len(self.outcomes) != len(self.elements):
            raise ValueError("one element per outcome required")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("outcome labels must be distinct")
        for m in self.elements:
            if as_operator(m).shape[0] != self.dim:
                raise ValueError("element dimension differs from POVM dimension")

    def element(self, outcome) -> np.ndarray:
        return self.elements[self.outcomes.index(outcome)]


@dataclass(frozen=True)
class PovmResiduals:
    hermiticity: float
    psd: float
    completeness: float


def povm_residuals(p: Povm) -> PovmResiduals:
    """Largest violations of Hermiticity, positivity, and summation to identity."""
    herm = 0.0
    psd = 0.0
    for m in p.elements:
        herm = max(herm, max_abs(m - m.conj().T))
        eigenvalues = np.linalg.eigvalsh((m + m.conj().T) / 2)
        psd = max(psd, max(0.0, -float(eigenvalues[0])))
    total = sum(p.elements)
    completeness = max_abs(total - identity(p.dim))
    return PovmResiduals(hermiticity=herm, psd=psd, completeness=completeness)


def validate_povm(p: Povm, tol: Tolerance = DEFAULT_TOL) -> bool:
    r = povm_residuals(p)
    return r.hermiticity <= tol.eq_tol and r.psd <= tol.psd_tol and r.completeness <= tol.eq_tol


@dataclass(frozen=True)
class NoisyCliffordObservable:
    """Binary observable (I +/- eta*G)/2 built from generator number ``gamma_index``."""

    eta: float
    gamma_index: int
    povm: Povm


@dataclass(frozen=True)
class JointPovm:
    """POVM over a product outcome set, elements in row-major product order."""

    dim: int
    outcome_sets: tuple[tuple, ...]
    elements: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        expected = math.prod(len(s) for s in self.outcome_sets) if self.outcome_sets else 1
        if len(self.elements) != expected:
            raise ValueError(
                f"expected {expected} elements for the product outcome set, "
                f"got {len(self.elements)}"
            )
        for m in self.elements:
            if as_operator(m).shape[0] != self.dim:
                raise ValueError("element dimension differs from POVM dimension")

    def outcomes(self) -> list[tuple]:
        return list(product(*self.outcome_sets))

    def as_povm(self) -> Povm:
        return Povm(dim=self.dim, outcomes=tuple(self.outcomes()), elements=self.elements)


def make_noisy_observable(fam: CliffordFamily, k: int, eta: float) -> NoisyCliffordObservable:
    """Binary POVM with elements (I +/- eta*G_k)/2; generators are numbered from 1."""
    if not 1 <= k <= fam.n:
        raise ValueError(f"generator index {k} outside 1..{fam.n}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"purity must lie in [0, 1], got {eta}")
    gamma = fam.gammas[k - 1]
    eye = identity(fam.dim)
    povm = Povm(
        dim=fam.dim,
        outcomes=(1, -1),
        elements=((eye + eta * gamma) / 2, (eye - eta * gamma) / 2),
    )
    return NoisyCliffordObservable(eta=eta, gamma_index=k, povm=povm)


def trivial_povm(dim: int) -> Povm:
    """Binary POVM whose -1 outcome is deterministic: elements (0, I)."""
    return Povm(dim=dim, outcomes=(1, -1), elements=(zero_matrix(dim), identity(dim)))


def clifford_compatibility_threshold(n: int) -> float:
    """Largest purity at which n of the noisy observables stay jointly measurable."""
    if n < 1:
        raise ValueError(f"need at least one observable, got n={n}")
    return 1.0 / math.sqrt(n)


def specker_eta(n: int) -> float:
    """Purity 1/sqrt(n-1): any n-1 of n observables compatible, all n together not."""
    if n < 2:
        raise ValueError(f"the purity window needs n >= 2, got n={n}")
    return 1.0 / math.sqrt(n - 1)


def make_joint_povm(
    fam: CliffordFamily,
    indices: Sequence[int],
    eta: float,
    tol: Tolerance = DEFAULT_TOL,
) -> JointPovm:
    """Joint POVM 2^-N (I + eta * x.G) over sign vectors x for the chosen generators.

    Requires eta <= 1/sqrt(N) (with eq_tol slack so the exact boundary passes);
    beyond that the elements would stop being positive.
    """
    indices = list(indices)
    n = len(indices)
    if n < 1:
        raise ValueError("need at least one generator index")
    if len(set(indices)) != n:
        raise ValueError(f"generator indices must be distinct, got {indices}")
    for k in indices:
        if not 1 <= k <= fam.n:
            raise ValueError(f"generator index {k} outside 1..{fam.n}")
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"purity must lie in [0, 1], got {eta}")
    bound = clifford_compatibility_threshold(n)
    if eta > bound + tol.eq_tol:
        raise ValueError(
            f"purity {eta} exceeds the joint-measurability bound 1/sqrt({n}) = {bound:.12f}"
        )
    eye = identity(fam.dim)
    gammas = [fam.gammas[k - 1] for k in indices]
    elements = []
    for signs in product((1, -1), repeat=n):
        weighted = sum(s * g for s, g in zip(signs, gammas))
        elements.append((eye + eta * weighted) / 2**n)
    return JointPovm(
        dim=fam.dim,
        outcome_sets=tuple(((1, -1),) * n),
        elements=tuple(elements),
    )


def marginalize(joint: JointPovm, i: int) -> Povm:
    """POVM of component ``i`` (numbered from 1), summing out all other outcomes."""
    n = len(joint.outcome_sets)
    if not 1 <= i <= n:
        raise ValueError(f"component index {i} outside 1..{n}")
    counts = tuple(len(s) for s in joint.outcome_sets)
    stacked = np.stack(joint.elements).reshape(counts + (joint.dim, joint.dim))
    axes = tuple(a for a in range(n) if a != i - 1)
    summed = stacked.sum(axis=axes) if axes else stacked
    return Povm(
        dim=joint.dim,
        outcomes=tuple(joint.outcome_sets[i - 1]),
        elements=tuple(summed[j] for j in range(counts[i - 1])),
    )


def recover_purity(
    observables: Sequence[NoisyCliffordObservable], fam: CliffordFamily
) -> float:
    """Read the common purity back off the observables.

    Averages Tr(x * G_k * E_k(x)) over observables and outcomes; tracelessness
    of the generators makes this the construction purity exactly. Only defined
    for observables of the noisy-generator form.
    """
    if not observables:
        raise ValueError("need at least one observable")
    total = 0.0
    for obs in observables:
        gamma = fam.gammas[obs.gamma_index - 1]
        for outcome, element in zip(obs.povm.outcomes, obs.povm.elements):
            total += float(np.trace(outcome * gamma @ element).real)
    return total / (len(observables) * fam.dim)


def povm_to_json(p: Povm) -> dict:
    outcomes = [list(o) if isinstance(o, tuple) else o for o in p.outcomes]
    return {
        "dim": p.dim,
        "outcomes": outcomes,
        "elements": [matrix_to_json(m) for m in p.elements],
    }


def povm_from_json(doc) -> Povm:
    if not isinstance(doc, dict):
        raise ValueError("POVM document must be a JSON object")
    for key in ("dim", "outcomes", "elements"):
        if key not in doc:
            raise ValueError(f"POVM document missing field {key!r}")
    outcomes = tuple(tuple(o) if isinstance(o, list) else o for o in doc["outcomes"])
    elements = tuple(matrix_from_json(m) for m in doc["elements"])
    return Povm(dim=doc["dim"], outcomes=outcomes, elements=elements)


def joint_povm_to_json(j: JointPovm) -> dict:
    return {
        "dim": j.dim,
        "outcome_sets": [list(s) for s in j.outcome_sets],
        "elements": [matrix_to_json(m) for m in j.elements],
    }


def joint_povm_from_json(doc) -> JointPovm:
    if not isinstance(doc, dict):
        raise ValueError("joint POVM document must be a JSON object")
    for key in ("dim", "outcome_sets", "elements"):
        if key not in doc:
            raise ValueError(f"joint POVM document missing field {key!r}")
    return JointPovm(
        dim=doc["dim"],
        outcome_sets=tuple(tuple(s) for s in doc["outcome_sets"]),
        elements=tuple(matrix_from_json(m) for m in doc["elements"]),
    )
