import math

import numpy as np
import pytest

from qentropy.majorization import (
    DoublyStochasticError,
    ProbabilityVector,
    TransitionMatrix,
    check_doubly_stochastic,
    diagonal_entropy,
    entropy_change,
    evolve_distribution,
    random_decreasing,
    random_unistochastic,
    von_neumann_entropy,
)


def delta_vector(dim, at):
    w = np.zeros(dim)
    w[at] = 1.0
    return ProbabilityVector(w)


class TestProbabilityVector:
    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            ProbabilityVector([0.5, -0.1, 0.6])

    def test_rejects_large_drift(self):
        with pytest.raises(ValueError):
            ProbabilityVector([0.5, 0.5 + 1e-9])

    def test_renormalizes_small_drift(self):
        p = ProbabilityVector([0.5, 0.5 + 5e-13])
        assert p.weights.sum() == pytest.approx(1.0, abs=1e-15)

    def test_decreasing_flag(self):
        assert ProbabilityVector([0.5, 0.3, 0.2]).is_decreasing
        assert ProbabilityVector([0.4, 0.3, 0.3]).is_decreasing  # ties allowed
        assert not ProbabilityVector([0.3, 0.5, 0.2]).is_decreasing

    def test_weights_are_immutable(self):
        p = ProbabilityVector([0.7, 0.3])
        with pytest.raises(ValueError):
            p.weights[0] = 0.0


class TestDiagonalEntropy:
    def test_ground_state(self):
        assert diagonal_entropy(delta_vector(1, 0)) == pytest.approx(
            math.log(0.5), abs=1e-15
        )

    def test_single_level_five(self):
        assert diagonal_entropy(delta_vector(8, 5)) == pytest.approx(
            math.log(5.5), abs=1e-15
        )

    def test_two_term(self):
        p = ProbabilityVector([0.5, 0.5])
        expected = 0.5 * (math.log(0.5) + math.log(1.5))  # -0.143841...
        assert diagonal_entropy(p) == pytest.approx(expected, abs=1e-15)
        assert expected == pytest.approx(-0.143841, abs=1e-6)


class TestVonNeumann:
    def test_pure_state(self):
        assert von_neumann_entropy(delta_vector(6, 3)) == 0.0

    def test_uniform(self):
        p = ProbabilityVector(np.full(4, 0.25))
        assert von_neumann_entropy(p) == pytest.approx(math.log(4.0), abs=1e-14)

    def test_two_level(self):
        p = ProbabilityVector([0.7, 0.3])
        assert von_neumann_entropy(p) == pytest.approx(0.6108643020548935, abs=1e-12)


class TestEvolve:
    def test_identity_is_adiabatic(self):
        p = ProbabilityVector([0.6, 0.25, 0.15])
        d = check_doubly_stochastic(np.eye(3), 1e-12)
        assert np.allclose(evolve_distribution(p, d).weights, p.weights, atol=0)

    def test_complete_mixing(self):
        p = ProbabilityVector([0.7, 0.3])
        d = check_doubly_stochastic([[0.5, 0.5], [0.5, 0.5]], 1e-12)
        assert np.allclose(evolve_distribution(p, d).weights, [0.5, 0.5], atol=1e-15)

    def test_permutation(self):
        p = ProbabilityVector([0.7, 0.3])
        swap = check_doubly_stochastic([[0.0, 1.0], [1.0, 0.0]], 1e-12)
        evolved = evolve_distribution(p, swap)
        assert np.allclose(evolved.weights, [0.3, 0.7], atol=0)
        assert not evolved.is_decreasing  # re-evaluated, not inherited

    def test_dimension_mismatch(self):
        p = ProbabilityVector([0.7, 0.3])
        d = check_doubly_stochastic(np.eye(3), 1e-12)
        with pytest.raises(ValueError):
            evolve_distribution(p, d)

    def test_inputs_not_mutated(self):
        p = ProbabilityVector([0.7, 0.3])
        d = random_unistochastic(2, 5)
        before = p.weights.copy()
        evolve_distribution(p, d)
        assert np.array_equal(p.weights, before)


class TestEntropyChange:
    def test_no_change(self):
        p = ProbabilityVector([0.6, 0.4])
        report = entropy_change(p, p)
        assert report.delta_direct == 0.0
        assert report.delta_by_parts == pytest.approx(0.0, abs=1e-16)
        assert report.min_cumulative_gap == 0.0

    def test_mixing_two_levels(self):
        report = entropy_change(
            ProbabilityVector([0.7, 0.3]), ProbabilityVector([0.5, 0.5])
        )
        assert report.delta_direct == pytest.approx(0.21972245773362195, abs=1e-13)

    def test_swap_doubles_by_linearity(self):
        report = entropy_change(
            ProbabilityVector([0.7, 0.3]), ProbabilityVector([0.3, 0.7])
        )
        assert report.delta_direct == pytest.approx(0.4394449154672439, abs=1e-13)

    def test_report_consistency(self):
        p = ProbabilityVector([0.5, 0.2, 0.2, 0.1])
        q = ProbabilityVector([0.1, 0.2, 0.3, 0.4])
        report = entropy_change(p, q)
        assert report.s_final - report.s_initial == pytest.approx(
            report.delta_direct, abs=1e-12
        )
        assert report.delta_direct == pytest.approx(report.delta_by_parts, abs=1e-10)

    def test_byparts_identity_random_unordered(self):
        # pure algebra: no ordering or stochasticity needed
        rng = np.random.default_rng(11)
        for _ in range(300):
            dim = int(rng.integers(2, 65))
            p = ProbabilityVector(rng.dirichlet(np.ones(dim)))
            q = ProbabilityVector(rng.dirichlet(np.ones(dim)))
            report = entropy_change(p, q)
            assert abs(report.delta_direct - report.delta_by_parts) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            entropy_change(
                ProbabilityVector([0.7, 0.3]), ProbabilityVector([1.0, 0.0, 0.0])
            )


class TestCheckDoublyStochastic:
    def test_identity_accepted(self):
        m = check_doubly_stochastic(np.eye(5), 1e-15)
        assert isinstance(m, TransitionMatrix)
        assert m.dim == 5

    def test_column_violation_rejected(self):
        with pytest.raises(DoublyStochasticError) as info:
            check_doubly_stochastic([[0.9, 0.1], [0.2, 0.8]], 1e-9)
        assert info.value.axis == "column"
        assert info.value.deviation == pytest.approx(0.1, abs=1e-12)

    def test_mixing_accepted_tight(self):
        check_doubly_stochastic([[0.5, 0.5], [0.5, 0.5]], 1e-12)

    def test_negative_entry_rejected(self):
        with pytest.raises(DoublyStochasticError) as info:
            check_doubly_stochastic([[1.1, -0.1], [-0.1, 1.1]], 1e-6)
        assert info.value.axis == "entry"

    def test_non_square_rejected(self):
        with pytest.raises(ValueError):
            check_doubly_stochastic(np.ones((2, 3)) / 3.0, 1e-9)


class TestRandomUnistochastic:
    def test_dim_one(self):
        m = random_unistochastic(1, 3)
        assert np.array_equal(m.entries, [[1.0]])

    def test_passes_check_at_tight_tolerance(self):
        m = random_unistochastic(8, 42)
        check_doubly_stochastic(m.entries, 1e-10)

    def test_deterministic(self):
        a = random_unistochastic(6, 123)
        b = random_unistochastic(6, 123)
        assert np.array_equal(a.entries, b.entries)

    def test_rejects_bad_dim(self):
        with pytest.raises(ValueError):
            random_unistochastic(0, 1)


class TestTheorem:
    """Entropy increase for decreasing populations (the core theorem)."""

    def test_positivity_over_random_pairs(self):
        rng = np.random.default_rng(2024)
        for trial in range(300):
            dim = int(rng.integers(2, 33))
            p = random_decreasing(dim, rng)
            d = random_unistochastic(dim, int(rng.integers(0, 2**63)))
            report = entropy_change(p, evolve_distribution(p, d))
            assert report.delta_direct >= -1e-12
            assert report.min_cumulative_gap >= -1e-12

    def test_permutation_cases(self):
        p = ProbabilityVector([0.5, 0.3, 0.2])
        identity = check_doubly_stochastic(np.eye(3), 1e-15)
        assert entropy_change(p, evolve_distribution(p, identity)).delta_direct == 0.0

        swap_12 = check_doubly_stochastic(
            [[1, 0, 0], [0, 0, 1], [0, 1, 0]], 1e-15
        )
        moved = entropy_change(p, evolve_distribution(p, swap_12))
        assert moved.delta_direct == pytest.approx(
            0.1 * (math.log(2.5) - math.log(1.5)), abs=1e-14
        )
        assert moved.delta_direct > 0.0

        # permuting tied weights keeps the same multiset: equality case
        tied = ProbabilityVector([0.4, 0.3, 0.3])
        gained = entropy_change(tied, evolve_distribution(tied, swap_12))
        assert gained.delta_direct == pytest.approx(0.0, abs=1e-15)

    def test_von_neumann_contrast(self):
        # the spectrum entropy depends on the populations alone and is
        # untouched by unitary evolution; the level-counting entropy moves
        rng = np.random.default_rng(5)
        p = random_decreasing(10, rng)
        d = random_unistochastic(10, 77)
        evolved = evolve_distribution(p, d)
        assert abs(diagonal_entropy(evolved) - diagonal_entropy(p)) > 1e-6
        assert von_neumann_entropy(p) == von_neumann_entropy(p)
