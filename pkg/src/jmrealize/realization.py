"""Synthesis of POVMs realizing a prescribed joint-measurability hypergraph.

The pipeline has three steps: enumerate the minimal incompatible sets of the
hypergraph; realize each one on its own block by handing its vertices noisy
anticommuting-generator observables at purity 1/sqrt(N-1) (inside the window
that makes every proper subset compatible but the whole set not), with every
other vertex getting the trivial POVM on that block; and stack the blocks in
a direct sum, so each vertex's final POVM is the blockwise direct sum of its
per-block POVMs. Compatibility of every edge then holds block by block, and
every non-edge contains some minimal incompatible set whose block purity
exceeds the joint-measurability threshold, certifying incompatibility.

Verification is analytic and constructive: explicit blockwise joint witnesses
for the edges, and the purity-vs-threshold margin for the non-edges. The
numerical oracle is only an optional cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .clifford import build_clifford
from .feasibility import (
    FEASIBLE,
    PRESUMED_INFEASIBLE,
    decide_joint_measurability,
    verify_witness,
)
from .hypergraph import (
    JmHypergraph,
    canonical_edge,
    facets,
    hypergraph_to_json,
    minimal_incompatible_sets,
    parse_hypergraph,
)
from .matrix import (
    DEFAULT_TOL,
    Tolerance,
    direct_sum,
    identity,
    matrix_from_json,
    matrix_to_json,
    max_abs,
    zero_matrix,
)
from .povm import (
    JointPovm,
    Povm,
    clifford_compatibility_threshold,
    make_noisy_observable,
    marginalize,
    povm_from_json,
    povm_residuals,
    povm_to_json,
    specker_eta,
    trivial_povm,
)

__all__ = [
    "ETA_POLICIES",
    "RealizationBlock",
    "Realization",
    "CheckResult",
    "VerificationReport",
    "realize",
    "blockwise_joint_witness",
    "verify_realization",
    "realization_to_json",
    "realization_from_json",
]

# Margin by which a block's purity must clear the threshold for its
# incompatibility certificate to count.
CERTIFICATE_MARGIN = 1e-6

ETA_POLICIES = ("specker", "midpoint")


def _block_eta(n: int, policy: str) -> float:
    if policy == "specker":
        return specker_eta(n)
    if policy == "midpoint":
        return (clifford_compatibility_threshold(n) + specker_eta(n)) / 2
    raise ValueError(f"unknown eta policy {policy!r}; choose from {ETA_POLICIES}")


@dataclass(frozen=True)
class RealizationBlock:
    """One direct-sum block, realizing a single minimal incompatible set.

    ``members`` is empty only for the trivial dimension-1 block emitted when
    the hypergraph has no incompatibility to encode. ``gammas`` records the
    generator assigned to each member, ``povms`` the per-vertex binary POVM
    on this block (trivial for vertices outside ``members``).
    """

    members: tuple[str, ...]
    dim: int
    eta: float
    gammas: dict[str, np.ndarray]
    povms: dict[str, Povm]


@dataclass(frozen=True)
class Realization:
    """Per-vertex POVMs on the direct-sum space, with block provenance."""

    hypergraph: JmHypergraph
    blocks: tuple[RealizationBlock, ...]
    total_dim: int
    assembled: dict[str, Povm]
    eta_policy: str = "specker"


def _assemble(vertices, blocks) -> dict[str, Povm]:
    assembled = {}
    for v in vertices:
        elements = tuple(
            direct_sum([b.povms[v].element(outcome) for b in blocks])
            for outcome in (1, -1)
        )
        assembled[v] = Povm(
            dim=sum(b.dim for b in blocks), outcomes=(1, -1), elements=elements
        )
    return assembled


def realize(
    h: JmHypergraph,
    eta_policy: str = "specker",
    max_set_size: int | None = None,
) -> Realization:
    """Construct POVMs whose joint-measurability relations are exactly ``h``.

    One block per minimal incompatible set, generators assigned to the set's
    vertices in canonical vertex order. When the hypergraph has no minimal
    incompatible sets, a single dimension-1 block with trivial POVMs is
    emitted. Deterministic: identical inputs give entrywise-identical output.
    """
    sets = minimal_incompatible_sets(h, max_set_size=max_set_size)
    blocks: list[RealizationBlock] = []
    if not sets:
        blocks.append(
            RealizationBlock(
                members=(),
                dim=1,
                eta=0.0,
                gammas={},
                povms={v: trivial_povm(1) for v in h.vertices},
            )
        )
    for members in sets:
        n = len(members)
        fam = build_clifford(n)
        eta = _block_eta(n, eta_policy)
        gammas = {v: fam.gammas[g] for g, v in enumerate(members)}
        povms = {
            v: make_noisy_observable(fam, g + 1, eta).povm for g, v in enumerate(members)
        }
        for v in h.vertices:
            if v not in povms:
                povms[v] = trivial_povm(fam.dim)
        blocks.append(
            RealizationBlock(members=members, dim=fam.dim, eta=eta, gammas=gammas, povms=povms)
        )
    total_dim = sum(b.dim for b in blocks)
    return Realization(
        hypergraph=h,
        blocks=tuple(blocks),
        total_dim=total_dim,
        assembled=_assemble(h.vertices, blocks),
        eta_policy=eta_policy,
    )


def _block_witness_element(block: RealizationBlock, assignment: dict[str, int]) -> np.ndarray:
    """This block's contribution to the joint element for one outcome assignment.

    Vertices of the edge inside the block's set contribute through the joint
    construction at the block's purity; vertices outside it carry the trivial
    POVM, which forces the whole weight onto their -1 outcome.
    """
    inside = [v for v in assignment if v in block.gammas]
    if any(assignment[v] == 1 for v in assignment if v not in block.gammas):
        return zero_matrix(block.dim)
    eye = identity(block.dim)
    if not inside:
        return eye
    weighted = sum(assignment[v] * block.gammas[v] for v in inside)
    return (eye + block.eta * weighted) / 2 ** len(inside)


def blockwise_joint_witness(r: Realization, edge) -> JointPovm:
    """Explicit joint POVM on the full space marginalizing to the edge's POVMs.

    Valid for every edge: within each block, the edge meets the block's
    minimal set in a proper subset, so the block purity is at or below the
    joint-measurability threshold for that subset.
    """
    index = r.hypergraph.vertex_index()
    edge = canonical_edge(index, edge)
    if edge not in r.hypergraph.edges:
        raise ValueError(f"{list(edge)} is not an edge of the hypergraph")
    elements = []
    for signs in product((1, -1), repeat=len(edge)):
        assignment = dict(zip(edge, signs))
        elements.append(
            direct_sum([_block_witness_element(b, assignment) for b in r.blocks])
        )
    return JointPovm(
        dim=r.total_dim,
        outcome_sets=tuple(((1, -1),) * len(edge)),
        elements=tuple(elements),
    )


@dataclass(frozen=True)
class CheckResult:
    check: str
    target: str
    passed: bool
    residual: float
    detail: str = ""
    heuristic: bool = False


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        """All rigorous checks passed; heuristic oracle cross-checks are advisory."""
        return all(c.passed for c in self.checks if not c.heuristic)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": [
                {
                    "check": c.check,
                    "target": c.target,
                    "passed": c.passed,
                    "residual": c.residual,
                    "detail": c.detail,
                    "heuristic": c.heuristic,
                }
                for c in self.checks
            ],
        }


def _witness_residual(povms, witness) -> float:
    """Worst constraint violation of a would-be witness, for reporting."""
    r = povm_residuals(witness.as_povm())
    worst = max(r.hermiticity, r.psd)
    for i, p in enumerate(povms, start=1):
        marg = marginalize(witness, i)
        for target, got in zip(p.elements, marg.elements):
            worst = max(worst, float(np.linalg.norm(got - np.asarray(target))))
    return worst


def verify_realization(
    r: Realization,
    tol: Tolerance = DEFAULT_TOL,
    cross_check_oracle: bool = False,
    max_iter: int = 20000,
    oracle_max_outcomes: int = 16,
) -> VerificationReport:
    """Check the realization against its hypergraph; failures become report entries.

    Rigorous checks: every assembled POVM is valid and consistent with its
    blocks; every maximal edge gets an explicit joint witness that verifies;
    every minimal incompatible set's block purity clears the incompatibility
    threshold (and stays inside the compatibility window for its proper
    subsets). With ``cross_check_oracle`` the numerical oracle additionally
    re-derives the verdicts on small cases; those entries are flagged
    heuristic and do not affect the overall pass/fail.
    """
    checks: list[CheckResult] = []
    stacked = _assemble(r.hypergraph.vertices, r.blocks)

    for v in r.hypergraph.vertices:
        res = povm_residuals(r.assembled[v])
        worst = max(res.hermiticity, res.psd, res.completeness)
        checks.append(
            CheckResult(
                check="povm-valid",
                target=v,
                passed=res.hermiticity <= tol.eq_tol
                and res.psd <= tol.psd_tol
                and res.completeness <= tol.eq_tol,
                residual=worst,
            )
        )
        if stacked[v].dim == r.assembled[v].dim:
            drift = max(
                max_abs(a - b) for a, b in zip(stacked[v].elements, r.assembled[v].elements)
            )
        else:
            drift = float("inf")
        checks.append(
            CheckResult(
                check="assembly",
                target=v,
                passed=drift <= tol.eq_tol,
                residual=drift,
                detail="assembled POVM equals the direct sum of its block POVMs",
            )
        )

    for edge in facets(r.hypergraph):
        target = "{" + ",".join(edge) + "}"
        try:
            witness = blockwise_joint_witness(r, edge)
        except ValueError as exc:
            checks.append(
                CheckResult("edge-witness", target, False, float("inf"), detail=str(exc))
            )
            continue
        povms = [r.assembled[v] for v in edge]
        residual = _witness_residual(povms, witness)
        checks.append(
            CheckResult(
                check="edge-witness",
                target=target,
                passed=verify_witness(povms, witness, tol),
                residual=residual,
            )
        )

    for block in r.blocks:
        if not block.members:
            continue
        n = len(block.members)
        threshold = clifford_compatibility_threshold(n)
        window_top = specker_eta(n)
        target = "{" + ",".join(block.members) + "}"
        margin = block.eta - threshold
        checks.append(
            CheckResult(
                check="incompatibility-cert",
                target=target,
                passed=margin >= CERTIFICATE_MARGIN
                and block.eta <= window_top + tol.eq_tol,
                residual=margin,
                detail=f"purity {block.eta:.12f} vs threshold {threshold:.12f}",
            )
        )

    if cross_check_oracle:
        checks.extend(_oracle_cross_checks(r, tol, max_iter, oracle_max_outcomes))

    checks.sort(key=lambda c: (c.check, c.target))
    return VerificationReport(checks=tuple(checks))


def _oracle_cross_checks(r, tol, max_iter, max_outcomes) -> list[CheckResult]:
    results = []
    small_facets = [e for e in facets(r.hypergraph) if 2 <= len(e) and 2 ** len(e) <= max_outcomes]
    for edge in small_facets:
        povms = [r.assembled[v] for v in edge]
        report = decide_joint_measurability(povms, tol, max_iter)
        ok = report.status == FEASIBLE and verify_witness(povms, report.witness, tol)
        results.append(
            CheckResult(
                check="oracle-edge",
                target="{" + ",".join(edge) + "}",
                passed=ok,
                residual=report.residual,
                detail=f"oracle status {report.status} (heuristic cross-check)",
                heuristic=True,
            )
        )
    for block in r.blocks:
        if not block.members or 2 ** len(block.members) > max_outcomes:
            continue
        povms = [r.assembled[v] for v in block.members]
        report = decide_joint_measurability(povms, tol, max_iter)
        results.append(
            CheckResult(
                check="oracle-incompatible",
                target="{" + ",".join(block.members) + "}",
                passed=report.status == PRESUMED_INFEASIBLE,
                residual=report.residual,
                detail=f"oracle status {report.status} (heuristic cross-check)",
                heuristic=True,
            )
        )
    return results


def realization_to_json(r: Realization) -> dict:
    return {
        "hypergraph": hypergraph_to_json(r.hypergraph),
        "eta_policy": r.eta_policy,
        "total_dim": r.total_dim,
        "blocks": [
            {
                "members": list(b.members),
                "dim": b.dim,
                "eta": b.eta,
                "gammas": {v: matrix_to_json(g) for v, g in b.gammas.items()},
                "povms": {v: povm_to_json(p) for v, p in b.povms.items()},
            }
            for b in r.blocks
        ],
        "povms": {v: povm_to_json(p) for v, p in r.assembled.items()},
    }


def realization_from_json(doc) -> Realization:
    if not isinstance(doc, dict):
        raise ValueError("realization document must be a JSON object")
    for key in ("hypergraph", "total_dim", "blocks", "povms"):
        if key not in doc:
            raise ValueError(f"realization document missing field {key!r}")
    h = parse_hypergraph(doc["hypergraph"])
    blocks = []
    for b in doc["blocks"]:
        block = RealizationBlock(
            members=tuple(b["members"]),
            dim=int(b["dim"]),
            eta=float(b["eta"]),
            gammas={v: matrix_from_json(g) for v, g in b["gammas"].items()},
            povms={v: povm_from_json(p) for v, p in b["povms"].items()},
        )
        for v, p in block.povms.items():
            if p.dim != block.dim:
                raise ValueError(f"block POVM for {v!r} has dim {p.dim}, expected {block.dim}")
        blocks.append(block)
    assembled = {v: povm_from_json(p) for v, p in doc["povms"].items()}
    total_dim = int(doc["total_dim"])
    if sum(b.dim for b in blocks) != total_dim:
        raise ValueError("total_dim does not match the sum of block dimensions")
    for v, p in assembled.items():
        if p.dim != total_dim:
            raise ValueError(f"POVM for {v!r} has dim {p.dim}, expected {total_dim}")
    return Realization(
        hypergraph=h,
        blocks=tuple(blocks),
        total_dim=total_dim,
        assembled=assembled,
        eta_policy=doc.get("eta_policy", "specker"),
    )
