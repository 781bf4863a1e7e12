import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from sofpalm import (
    BudgetError,
    SparsityBudget,
    card,
    card_col,
    card_row,
    truncate_columns,
    truncate_entries,
    truncate_rows,
)

from oracles import best_entry_support_error, best_row_support_error

_small_matrices = arrays(
    dtype=np.float64,
    shape=st.tuples(st.integers(1, 4), st.integers(1, 4)),
    elements=st.floats(-10, 10, allow_nan=False, width=64),
)


class TestTruncateEntries:
    def test_keeps_two_largest(self):
        X = np.array([[3.0, -1.0], [0.5, 2.0]])
        np.testing.assert_array_equal(truncate_entries(X, 2),
                                      [[3.0, 0.0], [0.0, 2.0]])

    def test_already_sparse_unchanged(self):
        X = np.array([[0.0, 4.0], [0.0, 0.0]])
        np.testing.assert_array_equal(truncate_entries(X, 3), X)

    def test_full_budget_is_identity(self, rng):
        X = rng.standard_normal((3, 5))
        np.testing.assert_array_equal(truncate_entries(X, 15), X)

    def test_matches_enumeration_oracle(self, rng):
        X = rng.standard_normal((4, 4))
        out = truncate_entries(X, 5)
        achieved = np.linalg.norm(out - X, "fro") ** 2
        assert achieved == pytest.approx(best_entry_support_error(X, 5),
                                         abs=1e-12)

    def test_tie_break_prefers_smaller_linear_index(self):
        X = np.array([[1.0, -1.0], [1.0, 1.0]])
        out = truncate_entries(X, 2)
        np.testing.assert_array_equal(out, [[1.0, -1.0], [0.0, 0.0]])
        assert card(out) == 2

    def test_budget_out_of_range(self):
        X = np.ones((2, 2))
        with pytest.raises(BudgetError, match="budget out of range"):
            truncate_entries(X, 0)
        with pytest.raises(BudgetError, match="budget out of range"):
            truncate_entries(X, 5)

    @given(X=_small_matrices, s=st.integers(1, 16))
    @settings(max_examples=150, deadline=None)
    def test_budget_respected_and_idempotent(self, X, s):
        if s > X.size:
            return
        out = truncate_entries(X, s)
        assert card(out) <= s
        np.testing.assert_array_equal(truncate_entries(out, s), out)

    def test_nesting_of_supports(self, rng):
        # distinct magnitudes guarantee the nested-support property
        X = rng.permutation(np.arange(1.0, 13.0)).reshape(3, 4)
        for s in range(2, 12):
            small = truncate_entries(X, s - 1) != 0
            large = truncate_entries(X, s) != 0
            assert np.all(large[small])


class TestTruncateRows:
    def test_keeps_largest_row(self):
        Y = np.array([[1.0, 0.0], [3.0, 4.0]])
        np.testing.assert_array_equal(truncate_rows(Y, 1),
                                      [[0.0, 0.0], [3.0, 4.0]])

    def test_full_budget_identity(self, rng):
        Y = rng.standard_normal((4, 3))
        np.testing.assert_array_equal(truncate_rows(Y, 4), Y)

    def test_matches_row_enumeration_oracle(self, rng):
        Y = rng.standard_normal((5, 3))
        out = truncate_rows(Y, 2)
        achieved = np.linalg.norm(out - Y, "fro") ** 2
        assert achieved == pytest.approx(best_row_support_error(Y, 2),
                                         abs=1e-12)

    def test_generic_output_has_exact_row_count(self, rng):
        Y = rng.standard_normal((6, 4))
        assert card_row(truncate_rows(Y, 2)) == 2

    def test_budget_out_of_range(self):
        with pytest.raises(BudgetError):
            truncate_rows(np.ones((3, 2)), 4)

    @given(Y=_small_matrices, r=st.integers(1, 4))
    @settings(max_examples=100, deadline=None)
    def test_budget_and_idempotence(self, Y, r):
        if r > Y.shape[0]:
            return
        out = truncate_rows(Y, r)
        assert card_row(out) <= r
        np.testing.assert_array_equal(truncate_rows(out, r), out)


class TestTruncateColumns:
    def test_keeps_largest_column(self):
        Y = np.array([[1.0, 3.0], [0.0, 4.0]])
        np.testing.assert_array_equal(truncate_columns(Y, 1),
                                      [[0.0, 3.0], [0.0, 4.0]])

    def test_full_budget_identity(self, rng):
        Y = rng.standard_normal((3, 5))
        np.testing.assert_array_equal(truncate_columns(Y, 5), Y)

    def test_is_transposed_row_truncation(self, rng):
        Y = rng.standard_normal((3, 5))
        np.testing.assert_array_equal(truncate_columns(Y, 2),
                                      truncate_rows(Y.T, 2).T)


class TestCardinality:
    def test_zero_matrix(self):
        assert card(np.zeros((3, 3))) == 0
        assert card_row(np.zeros((3, 3))) == 0
        assert card_col(np.zeros((3, 3))) == 0

    def test_identity(self):
        assert card(np.eye(3)) == 3
        assert card_row(np.eye(3)) == 3
        assert card_col(np.eye(3)) == 3

    def test_counts_exact_zeros_only(self):
        X = np.array([[1e-300, 0.0], [0.0, 0.0]])
        assert card(X) == 1


class TestSparsityBudget:
    def test_string_mode_coerced(self):
        budget = SparsityBudget(s=3, r=2, mode="column")
        assert budget.mode.value == "column"

    def test_nonpositive_budget_rejected(self):
        with pytest.raises(BudgetError):
            SparsityBudget(s=0, r=1)
        with pytest.raises(BudgetError):
            SparsityBudget(s=1, r=0)
