import json
from itertools import combinations, product

import numpy as np
import pytest

from jmrealize.clifford import build_clifford
from jmrealize.matrix import DEFAULT_TOL, identity, max_abs, zero_matrix
from jmrealize.povm import (
    JointPovm,
    Povm,
    clifford_compatibility_threshold,
    joint_povm_from_json,
    joint_povm_to_json,
    make_joint_povm,
    make_noisy_observable,
    marginalize,
    povm_from_json,
    povm_residuals,
    povm_to_json,
    recover_purity,
    specker_eta,
    trivial_povm,
    validate_povm,
)


def test_noisy_observable_matches_formula():
    fam = build_clifford(3)
    eta = 1 / np.sqrt(2)
    obs = make_noisy_observable(fam, 1, eta)
    plus, minus = obs.povm.elements
    assert max_abs(plus - (identity(2) + eta * fam.gammas[0]) / 2) == 0.0
    assert max_abs(minus - (identity(2) - eta * fam.gammas[0]) / 2) == 0.0
    assert validate_povm(obs.povm)


def test_noisy_observable_extremes():
    fam = build_clifford(3)
    zero_noise = make_noisy_observable(fam, 2, 0.0)
    assert all(max_abs(m - identity(2) / 2) == 0.0 for m in zero_noise.povm.elements)
    sharp = make_noisy_observable(fam, 1, 1.0)
    assert np.array_equal(sharp.povm.elements[0], np.diag([1.0, 0.0]).astype(complex))
    assert np.array_equal(sharp.povm.elements[1], np.diag([0.0, 1.0]).astype(complex))


def test_noisy_observable_input_errors():
    fam = build_clifford(3)
    with pytest.raises(ValueError):
        make_noisy_observable(fam, 1, -0.1)
    with pytest.raises(ValueError):
        make_noisy_observable(fam, 1, 1.1)
    with pytest.raises(ValueError):
        make_noisy_observable(fam, 4, 0.5)
    with pytest.raises(ValueError):
        make_noisy_observable(fam, 0, 0.5)


def test_trivial_povm_shape():
    p = trivial_povm(2)
    assert p.outcomes == (1, -1)
    assert np.array_equal(p.elements[0], zero_matrix(2))
    assert np.array_equal(p.elements[1], identity(2))
    assert validate_povm(p)
    assert validate_povm(trivial_povm(1))


def test_trivial_povm_compatible_with_anything():
    # Deterministic extension: G(x, -1) = M(x), G(x, +1) = 0 marginalizes to
    # both the original POVM and the trivial one.
    fam = build_clifford(3)
    m = make_noisy_observable(fam, 1, 0.9).povm
    elements = []
    for x in (0, 1):
        for t in (1, -1):
            elements.append(m.elements[x] if t == -1 else zero_matrix(2))
    joint = JointPovm(dim=2, outcome_sets=((1, -1), (1, -1)), elements=tuple(elements))
    first = marginalize(joint, 1)
    second = marginalize(joint, 2)
    assert all(max_abs(a - b) == 0.0 for a, b in zip(first.elements, m.elements))
    assert all(max_abs(a - b) == 0.0 for a, b in zip(second.elements, trivial_povm(2).elements))


def test_joint_povm_boundary_pair():
    fam = build_clifford(3)
    eta = 1 / np.sqrt(2)
    joint = make_joint_povm(fam, [1, 2], eta)
    assert len(joint.elements) == 4
    for signs, element in zip(product((1, -1), repeat=2), joint.elements):
        expected = (identity(2) + eta * (signs[0] * fam.gammas[0] + signs[1] * fam.gammas[1])) / 4
        assert max_abs(element - expected) <= 1e-15
        values = np.linalg.eigvalsh(element)
        assert values[0] >= -DEFAULT_TOL.psd_tol
        assert abs(values[0]) <= 1e-12  # boundary purity: smallest eigenvalue is 0
    assert validate_povm(joint.as_povm())


def test_joint_povm_single_component_reduces_to_binary():
    fam = build_clifford(3)
    joint = make_joint_povm(fam, [2], 0.83)
    obs = make_noisy_observable(fam, 2, 0.83)
    assert all(max_abs(a - b) == 0.0 for a, b in zip(joint.elements, obs.povm.elements))


def test_joint_povm_rejects_purity_above_bound():
    fam = build_clifford(3)
    with pytest.raises(ValueError, match="bound"):
        make_joint_povm(fam, [1, 2, 3], 0.6)
    # the exact boundary passes despite rounding
    make_joint_povm(fam, [1, 2, 3], 1 / np.sqrt(3))


def test_joint_povm_rejects_bad_indices():
    fam = build_clifford(3)
    with pytest.raises(ValueError, match="distinct"):
        make_joint_povm(fam, [1, 1], 0.5)
    with pytest.raises(ValueError):
        make_joint_povm(fam, [], 0.5)
    with pytest.raises(ValueError):
        make_joint_povm(fam, [5], 0.5)


def test_marginals_reproduce_observables():
    fam = build_clifford(3)
    eta = 1 / np.sqrt(3)
    joint = make_joint_povm(fam, [1, 2, 3], eta)
    assert len(joint.elements) == 8
    for i in (1, 2, 3):
        marginal = marginalize(joint, i)
        obs = make_noisy_observable(fam, i, eta)
        for a, b in zip(marginal.elements, obs.povm.elements):
            assert max_abs(a - b) <= DEFAULT_TOL.eq_tol


@pytest.mark.parametrize("n", range(2, 7))
def test_marginal_exactness_all_components(n):
    fam = build_clifford(n)
    eta = clifford_compatibility_threshold(n)
    joint = make_joint_povm(fam, list(range(1, n + 1)), eta)
    for i in range(1, n + 1):
        marginal = marginalize(joint, i)
        obs = make_noisy_observable(fam, i, eta)
        for a, b in zip(marginal.elements, obs.povm.elements):
            assert max_abs(a - b) <= DEFAULT_TOL.eq_tol


def test_marginalize_uniform_joint():
    uniform = JointPovm(
        dim=2,
        outcome_sets=((1, -1), (1, -1), (1, -1)),
        elements=tuple(identity(2) / 8 for _ in range(8)),
    )
    for i in (1, 2, 3):
        marginal = marginalize(uniform, i)
        assert all(max_abs(m - identity(2) / 2) == 0.0 for m in marginal.elements)


def test_marginalize_index_out_of_range():
    fam = build_clifford(3)
    joint = make_joint_povm(fam, [1, 2], 0.5)
    with pytest.raises(ValueError):
        marginalize(joint, 0)
    with pytest.raises(ValueError):
        marginalize(joint, 3)


@pytest.mark.parametrize("n", [2, 3, 5])
@pytest.mark.parametrize("eta", [round(0.1 * k, 1) for k in range(0, 11)])
def test_purity_round_trip(n, eta):
    fam = build_clifford(n)
    observables = [make_noisy_observable(fam, k, eta) for k in range(1, n + 1)]
    assert recover_purity(observables, fam) == pytest.approx(eta, abs=DEFAULT_TOL.eq_tol)


def test_purity_of_sharp_pair():
    fam = build_clifford(2)
    observables = [make_noisy_observable(fam, k, 1.0) for k in (1, 2)]
    # At full purity Tr(G E+/-) = +/- dim/2, so the average recovers exactly 1.
    for obs in observables:
        gamma = fam.gammas[obs.gamma_index - 1]
        assert np.trace(gamma @ obs.povm.elements[0]).real == pytest.approx(1.0)
        assert np.trace(gamma @ obs.povm.elements[1]).real == pytest.approx(-1.0)
    assert recover_purity(observables, fam) == pytest.approx(1.0, abs=DEFAULT_TOL.eq_tol)


def test_purity_requires_observables():
    with pytest.raises(ValueError):
        recover_purity([], build_clifford(2))


def test_compatibility_threshold_values():
    # The two reference doubles disagree at the last ULP about how 1/sqrt(n)
    # was rounded, so equality is asserted to within one ULP.
    assert clifford_compatibility_threshold(1) == 1.0
    assert clifford_compatibility_threshold(2) == pytest.approx(0.7071067811865476, abs=2e-16)
    assert clifford_compatibility_threshold(3) == pytest.approx(0.5773502691896258, abs=2e-16)
    with pytest.raises(ValueError):
        clifford_compatibility_threshold(0)


def test_specker_eta_values():
    assert specker_eta(2) == 1.0
    assert specker_eta(3) == clifford_compatibility_threshold(2)
    assert specker_eta(4) == clifford_compatibility_threshold(3)
    assert specker_eta(3) == pytest.approx(1 / np.sqrt(2), abs=2e-16)
    with pytest.raises(ValueError):
        specker_eta(1)


@pytest.mark.parametrize("n", range(2, 7))
def test_purity_window_is_nonempty(n):
    assert clifford_compatibility_threshold(n) < specker_eta(n)
    assert specker_eta(n) <= 1.0


@pytest.mark.parametrize("n", range(2, 7))
def test_threshold_sharpness(n):
    fam = build_clifford(n)
    boundary = clifford_compatibility_threshold(n)
    joint = make_joint_povm(fam, list(range(1, n + 1)), boundary)
    worst = min(np.linalg.eigvalsh(m)[0] for m in joint.elements)
    assert worst >= -DEFAULT_TOL.psd_tol
    # Just beyond the bound the construction stops being positive; build the
    # element directly to bypass the precondition.
    eta = boundary + 0.01
    total = sum(fam.gammas[k] for k in range(n))
    element = (identity(fam.dim) + eta * total) / 2**n
    assert np.linalg.eigvalsh(element)[0] < -DEFAULT_TOL.psd_tol
    assert np.linalg.eigvalsh(element)[0] == pytest.approx(
        (1 - eta * np.sqrt(n)) / 2**n, abs=1e-12
    )


@pytest.mark.parametrize("n", [3, 4, 5])
def test_subset_compatibility_independent_of_omitted_index(n):
    # Any n-1 of the n observables at purity 1/sqrt(n-1) share a joint POVM.
    fam = build_clifford(n)
    eta = specker_eta(n)
    for kept in combinations(range(1, n + 1), n - 1):
        joint = make_joint_povm(fam, list(kept), eta)
        for position, k in enumerate(kept, start=1):
            marginal = marginalize(joint, position)
            obs = make_noisy_observable(fam, k, eta)
            for a, b in zip(marginal.elements, obs.povm.elements):
                assert max_abs(a - b) <= DEFAULT_TOL.eq_tol


def test_povm_structural_validation():
    with pytest.raises(ValueError):
        Povm(dim=2, outcomes=(1, -1), elements=(identity(2),))
    with pytest.raises(ValueError):
        Povm(dim=2, outcomes=(1, 1), elements=(identity(2), identity(2)))
    with pytest.raises(ValueError):
        Povm(dim=3, outcomes=(1, -1), elements=(identity(2), identity(2)))
    with pytest.raises(ValueError):
        Povm(dim=0, outcomes=(), elements=())


def test_validate_povm_flags_violations():
    good = trivial_povm(2)
    assert validate_povm(good)
    not_complete = Povm(dim=2, outcomes=(1, -1), elements=(identity(2), identity(2)))
    assert not validate_povm(not_complete)
    negative = Povm(dim=2, outcomes=(1, -1), elements=(-identity(2), 2 * identity(2)))
    assert not validate_povm(negative)
    residuals = povm_residuals(negative)
    assert residuals.psd == pytest.approx(1.0)


def test_povm_json_round_trip():
    fam = build_clifford(3)
    p = make_noisy_observable(fam, 3, 0.4).povm
    again = povm_from_json(json.loads(json.dumps(povm_to_json(p))))
    assert again.outcomes == p.outcomes
    assert all(np.array_equal(a, b) for a, b in zip(again.elements, p.elements))


def test_joint_povm_json_round_trip():
    fam = build_clifford(3)
    joint = make_joint_povm(fam, [1, 2], 0.5)
    again = joint_povm_from_json(json.loads(json.dumps(joint_povm_to_json(joint))))
    assert again.outcome_sets == joint.outcome_sets
    assert all(np.array_equal(a, b) for a, b in zip(again.elements, joint.elements))


def test_povm_json_rejects_malformed():
    with pytest.raises(ValueError):
        povm_from_json({"dim": 2, "outcomes": [1, -1]})
    with pytest.raises(ValueError):
        joint_povm_from_json({"dim": 2, "outcome_sets": [[1, -1]]})
