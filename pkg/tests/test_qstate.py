"""Core numerics: states, partial trace, entropies, purification, RNG."""
from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_state, pure_state
from eur.errors import NumericError, ValidationError
from eur.qstate import (
    DensityMatrix,
    ProbabilityVector,
    RandomStateRecipe,
    SystemDims,
    conditional_entropy,
    mutual_information,
    partial_trace,
    purify,
    random_density_state,
    shannon_entropy,
    state_from_json,
    state_to_json,
    tensor,
    von_neumann_entropy,
)

NO_DEADLINE = settings(deadline=None, max_examples=25)


def ptrace_index_sum(mat: np.ndarray, dims: list[int], keep: list[int]) -> np.ndarray:
    """Reference partial trace by explicit index summation.

    Independent of the production implementation: walks every kept/traced
    multi-index pair and sums matrix entries directly.
    """
    keep = sorted(keep)
    traced = [i for i in range(len(dims)) if i not in keep]
    kept_dims = [dims[i] for i in keep]
    traced_dims = [dims[i] for i in traced]
    size = int(np.prod(kept_dims))
    out = np.zeros((size, size), dtype=complex)
    kept_ranges = [range(d) for d in kept_dims]
    traced_ranges = [range(d) for d in traced_dims]
    for row_kept in itertools.product(*kept_ranges):
        for col_kept in itertools.product(*kept_ranges):
            acc = 0.0 + 0.0j
            for shared in itertools.product(*traced_ranges):
                row_full = [0] * len(dims)
                col_full = [0] * len(dims)
                for pos, v in zip(keep, row_kept):
                    row_full[pos] = v
                for pos, v in zip(keep, col_kept):
                    col_full[pos] = v
                for pos, v in zip(traced, shared):
                    row_full[pos] = v
                    col_full[pos] = v
                r = int(np.ravel_multi_index(row_full, dims))
                c = int(np.ravel_multi_index(col_full, dims))
                acc += mat[r, c]
            ri = int(np.ravel_multi_index(row_kept, kept_dims)) if keep else 0
            ci = int(np.ravel_multi_index(col_kept, kept_dims)) if keep else 0
            out[ri, ci] = acc
    return out


class TestPartialTrace:
    @pytest.mark.parametrize("dims,keep", [
        ((2, 3, 2), ("A",)),
        ((2, 3, 2), ("B",)),
        ((2, 3, 2), ("A", "C")),
        ((3, 3), ("B",)),
        ((2, 2, 2), ("A", "B")),
        ((3, 2, 3), ("B", "C")),
    ])
    def test_matches_index_sum_oracle(self, dims, keep):
        labels = ("A", "B", "C")[: len(dims)]
        rho = make_state(11, labels, dims)
        got = partial_trace(rho, keep)
        positions = [labels.index(lb) for lb in keep]
        want = ptrace_index_sum(rho.matrix, list(dims), positions)
        assert np.abs(got.matrix - want).max() < 1e-12

    def test_keep_order_is_original_subsystem_order(self):
        rho = make_state(3, ("A", "B", "C"), (2, 3, 2))
        out = partial_trace(rho, ("C", "A"))
        assert out.dims.labels == ("A", "C")
        assert out.dims.dims == (2, 2)

    def test_tensor_factor_recovery(self):
        a = make_state(5, ("A",), (2,))
        b = make_state(6, ("B",), (3,))
        joint = tensor(a, b)
        assert np.abs(partial_trace(joint, "A").matrix - a.matrix).max() < 1e-12
        assert np.abs(partial_trace(joint, "B").matrix - b.matrix).max() < 1e-12

    def test_trace_preserved(self):
        rho = make_state(7, ("A", "B"), (3, 3))
        red = partial_trace(rho, "B")
        assert abs(np.trace(red.matrix) - 1.0) < 1e-12

    def test_unknown_label_rejected(self):
        rho = make_state(8, ("A", "B"), (2, 2))
        with pytest.raises(ValidationError):
            partial_trace(rho, "Z")

    def test_empty_keep_rejected(self):
        rho = make_state(8, ("A", "B"), (2, 2))
        with pytest.raises(ValidationError):
            partial_trace(rho, ())


class TestEntropies:
    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_range(self, dim):
        for seed in range(8):
            rho = make_state((100, seed), ("A",), (dim,))
            s = von_neumann_entropy(rho)
            assert -1e-12 <= s <= math.log2(dim) + 1e-12

    def test_pure_state_zero(self):
        rho = pure_state([1, 1j, -1], ("A",), (3,))
        assert von_neumann_entropy(rho) < 1e-9

    def test_maximally_mixed(self):
        rho = DensityMatrix(SystemDims(("A",), (3,)), np.eye(3) / 3)
        assert abs(von_neumann_entropy(rho) - math.log2(3)) < 1e-12

    def test_shannon_anchors(self):
        assert abs(shannon_entropy([0.25] * 4) - 2.0) < 1e-12
        assert shannon_entropy([1.0, 0.0, 0.0]) == 0.0

    @given(st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=1,
                    max_size=9))
    @NO_DEADLINE
    def test_shannon_range_property(self, weights):
        p = np.array(weights) / sum(weights)
        h = shannon_entropy(p)
        assert -1e-12 <= h <= math.log2(len(p)) + 1e-9

    def test_conditional_entropy_product_state(self):
        a = make_state(21, ("A",), (3,))
        b = make_state(22, ("B",), (3,))
        joint = tensor(a, b)
        assert abs(conditional_entropy(joint, "A", "B")
                   - von_neumann_entropy(a)) < 1e-9

    def test_conditional_entropy_empty_given_is_marginal(self):
        rho = make_state(23, ("A", "B"), (2, 3))
        want = von_neumann_entropy(partial_trace(rho, "A"))
        assert abs(conditional_entropy(rho, "A", ()) - want) < 1e-12

    def test_conditional_entropy_negative_for_entangled_pure(self):
        psi = np.zeros(4)
        psi[0] = psi[3] = 1 / math.sqrt(2)
        rho = pure_state(psi, ("A", "B"), (2, 2))
        assert conditional_entropy(rho, "A", "B") < -0.999

    def test_mutual_information_product_zero(self):
        joint = tensor(make_state(31, ("A",), (2,)), make_state(32, ("B",), (3,)))
        assert abs(mutual_information(joint, "A", "B")) < 1e-9

    def test_mutual_information_symmetric_nonnegative(self):
        for seed in range(6):
            rho = make_state((40, seed), ("A", "B"), (2, 3))
            iab = mutual_information(rho, "A", "B")
            iba = mutual_information(rho, "B", "A")
            assert abs(iab - iba) < 1e-10
            assert iab > -1e-9

    def test_strong_subadditivity(self):
        for seed in range(10):
            rho = make_state((50, seed), ("A", "B", "C"), (2, 2, 2))
            s_abc = von_neumann_entropy(rho)
            s_b = von_neumann_entropy(partial_trace(rho, "B"))
            s_ab = von_neumann_entropy(partial_trace(rho, ("A", "B")))
            s_bc = von_neumann_entropy(partial_trace(rho, ("B", "C")))
            assert s_abc + s_b <= s_ab + s_bc + 1e-9


class TestPurification:
    @pytest.mark.parametrize("dims", [(2,), (3,), (2, 2), (3, 3)])
    def test_round_trip(self, dims):
        labels = ("A", "B")[: len(dims)]
        rho = make_state((60,) + dims, labels, dims)
        pur = purify(rho)
        back = partial_trace(pur, labels)
        assert np.abs(back.matrix - rho.matrix).max() < 1e-9

    def test_purification_is_pure(self):
        rho = make_state(61, ("A", "B"), (2, 3))
        pur = purify(rho)
        purity = float(np.real(np.trace(pur.matrix @ pur.matrix)))
        assert abs(purity - 1.0) < 1e-9

    def test_env_label_and_dims(self):
        rho = make_state(62, ("A",), (3,))
        pur = purify(rho, env_label="R")
        assert pur.dims.labels == ("A", "R")
        assert pur.dims.dims[1] >= 1

    def test_pure_input_gets_trivial_env(self):
        rho = pure_state([1, 0, 0], ("A",), (3,))
        pur = purify(rho)
        assert pur.dims.dims[1] == 1

    def test_env_label_clash_rejected(self):
        rho = make_state(63, ("A", "E"), (2, 2))
        with pytest.raises(ValidationError):
            purify(rho)


class TestRandomStates:
    def test_determinism(self):
        recipe = RandomStateRecipe(seed=(9, 4, 0), dims=SystemDims(("A", "B"), (3, 3)))
        first = random_density_state(recipe)
        second = random_density_state(recipe)
        assert first.matrix.tobytes() == second.matrix.tobytes()

    def test_distinct_seeds_differ(self):
        dims = SystemDims(("A",), (3,))
        one = random_density_state(RandomStateRecipe(seed=1, dims=dims))
        two = random_density_state(RandomStateRecipe(seed=2, dims=dims))
        assert np.abs(one.matrix - two.matrix).max() > 1e-6

    def test_mixed_spectrum(self):
        rho = make_state(70, ("A",), (3,))
        vals = np.linalg.eigvalsh(rho.matrix)
        assert vals.min() > -1e-12
        assert abs(vals.sum() - 1.0) < 1e-12

    @given(st.integers(min_value=0, max_value=10**9))
    @NO_DEADLINE
    def test_always_valid_state(self, seed):
        rho = make_state(seed, ("A",), (3,))
        assert abs(np.trace(rho.matrix) - 1.0) < 1e-8
        assert np.abs(rho.matrix - rho.matrix.conj().T).max() < 1e-8


class TestValidation:
    def test_error_hierarchy(self):
        assert issubclass(ValidationError, ValueError)
        assert issubclass(NumericError, ArithmeticError)

    def test_non_hermitian_rejected(self):
        mat = np.array([[0.5, 0.5], [0.0, 0.5]])
        with pytest.raises(ValidationError, match="[Hh]ermit"):
            DensityMatrix(SystemDims(("A",), (2,)), mat)

    def test_wrong_trace_rejected(self):
        with pytest.raises(ValidationError, match="trace"):
            DensityMatrix(SystemDims(("A",), (2,)), np.eye(2))

    def test_negative_eigenvalue_rejected(self):
        mat = np.diag([1.5, -0.5])
        with pytest.raises((ValidationError, NumericError)):
            DensityMatrix(SystemDims(("A",), (2,)), mat)

    def test_non_square_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(SystemDims(("A",), (2,)), np.ones((2, 3)) / 6)

    def test_dimension_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            DensityMatrix(SystemDims(("A", "B"), (2, 2)), np.eye(3) / 3)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(ValidationError):
            SystemDims(("A", "A"), (2, 2))

    def test_nonpositive_dimension_rejected(self):
        with pytest.raises(ValidationError):
            SystemDims(("A",), (0,))

    def test_tensor_label_collision(self):
        a = make_state(80, ("A",), (2,))
        with pytest.raises(ValidationError, match="collision"):
            tensor(a, make_state(81, ("A",), (2,)))

    def test_probability_vector_checks(self):
        with pytest.raises(ValidationError):
            ProbabilityVector(np.array([0.7, 0.4]))
        with pytest.raises(ValidationError):
            ProbabilityVector(np.array([1.2, -0.2]))


class TestJson:
    def test_round_trip(self):
        rho = make_state(90, ("A", "B"), (2, 3))
        back = state_from_json(state_to_json(rho))
        assert back.dims.labels == rho.dims.labels
        assert back.dims.dims == rho.dims.dims
        assert np.abs(back.matrix - rho.matrix).max() < 1e-12

    def test_missing_field_names_path(self):
        with pytest.raises(ValidationError, match="labels"):
            state_from_json({"dims": [2], "matrix": [[[1.0, 0.0]]]})

    def test_bad_matrix_shape_rejected(self):
        obj = state_to_json(make_state(91, ("A",), (2,)))
        obj["matrix"] = obj["matrix"][0]
        with pytest.raises(ValidationError):
            state_from_json(obj)
