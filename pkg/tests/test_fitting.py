import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mggp.errors import DegenerateTarget, IllConditioned
from mggp.fitting import design_matrix, least_squares, r_squared, rmse


def normal_equations(A, y):
    return np.linalg.solve(A.T @ A, A.T @ y)


def test_exact_line():
    A = design_matrix([np.array([0.0, 1.0, 2.0])])
    w = least_squares(A, np.array([1.0, 3.0, 5.0]))
    assert w.w0 == pytest.approx(1.0, abs=1e-10)
    assert w.w == pytest.approx([2.0], abs=1e-10)


def test_bias_only_gives_mean():
    y = np.array([0.3, 1.9, -4.0, 2.2])
    w = least_squares(design_matrix([], n=4), y)
    assert w.w0 == pytest.approx(y.mean(), rel=1e-14)
    assert w.w.size == 0


def test_duplicated_column_splits_weight():
    x = np.array([1.0, 2.0, 3.0, 4.0])
    A = design_matrix([x, x])
    y = 2 * x
    w = least_squares(A, y)
    oracle = np.linalg.pinv(A) @ y
    np.testing.assert_allclose(w.as_array(), oracle, atol=1e-12)
    np.testing.assert_allclose(w.w, [1.0, 1.0], atol=1e-12)
    assert w.w0 == pytest.approx(0.0, abs=1e-12)


def test_well_conditioned_systems_match_normal_equations():
    rng = np.random.default_rng(0)
    for _ in range(200):
        n = int(rng.integers(12, 51))
        T = int(rng.integers(0, 11))
        A = design_matrix(list(rng.normal(size=(T, n))), n=n)
        y = rng.normal(size=n)
        got = A @ least_squares(A, y).as_array()
        want = A @ normal_equations(A, y)
        assert np.max(np.abs(got - want)) <= 1e-8 * max(1.0, np.max(np.abs(want)))


def test_residual_local_optimality():
    rng = np.random.default_rng(1)
    for _ in range(50):
        n, T = 30, int(rng.integers(1, 6))
        A = design_matrix(list(rng.normal(size=(T, n))))
        y = rng.normal(size=n)
        coef = least_squares(A, y).as_array()
        base = np.sum((A @ coef - y) ** 2)
        for k in range(coef.size):
            for delta in (1e-3, -1e-3):
                c = coef.copy()
                c[k] += delta
                assert np.sum((A @ c - y) ** 2) >= base


def test_non_finite_design_is_ill_conditioned():
    A = design_matrix([np.array([1.0, np.inf, 3.0])])
    with pytest.raises(IllConditioned):
        least_squares(A, np.zeros(3))


def test_overflowing_columns_are_ill_conditioned():
    A = design_matrix([np.array([1e300, -1e300, 1e300])])
    with pytest.raises(IllConditioned):
        least_squares(A, np.ones(3))


def test_rmse_values():
    assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rmse([0.0, 0.0], [1.0, 1.0]) == 1.0
    assert rmse([0.0, 2.0], [1.0, 1.0]) == 1.0


def test_r_squared_values():
    y = np.array([1.0, 2.0, 4.0, 7.0])
    assert r_squared(y, y) == 1.0
    assert r_squared(y, np.full(4, y.mean())) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(DegenerateTarget):
        r_squared([3.0, 3.0], [1.0, 2.0])


@settings(max_examples=200)
@given(st.integers(2, 40), st.integers(0, 2**32 - 1))
def test_r2_rmse_consistency(n, seed):
    rng = np.random.default_rng(seed)
    y = rng.normal(size=n)
    yhat = rng.normal(size=n)
    ss_tot = np.sum((y - y.mean()) ** 2)
    assert r_squared(y, yhat) == pytest.approx(1 - rmse(y, yhat) ** 2 * n / ss_tot, abs=1e-12, rel=1e-12)
