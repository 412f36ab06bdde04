import numpy as np
import pytest

from mggp import dataio
from mggp.baselines import (
    BaselineKind,
    BaselineModel,
    baseline_report,
    build_design,
    fit_baseline,
    predict_baseline,
)
from mggp.dataio import Dataset


@pytest.mark.parametrize(
    "kind, cols",
    [
        (BaselineKind.LINEAR, 7),
        (BaselineKind.INTERACTIONS, 22),
        (BaselineKind.PURE_QUADRATIC, 13),
        (BaselineKind.QUADRATIC, 28),
    ],
)
def test_design_shapes(kind, cols, bundled):
    A = build_design(bundled, kind)
    assert A.shape == (bundled.n, cols)
    assert kind.term_count() == cols
    assert (A[:, 0] == 1).all()


def test_term_order():
    terms = BaselineKind.QUADRATIC.terms()
    assert terms[:7] == [(), (0,), (1,), (2,), (3,), (4,), (5,)]
    assert terms[7:22] == [(i, j) for i in range(6) for j in range(i + 1, 6)]
    assert terms[22:] == [(i, i) for i in range(6)]
    X = np.arange(1.0, 7.0)[None, :]
    A = build_design(Dataset(X), BaselineKind.QUADRATIC)
    assert A[0, 7] == 1 * 2 and A[0, 21] == 5 * 6 and A[0, 27] == 36


def test_linear_recovers_exact_coefficients(make_dataset):
    d = make_dataset(np.random.default_rng(0), fn=lambda X: 3 + 2 * X[:, 0] - X[:, 1])
    model, m = fit_baseline(d, BaselineKind.LINEAR)
    np.testing.assert_allclose(model.coefficients, [3, 2, -1, 0, 0, 0, 0], atol=1e-8)
    assert m.r2 >= 1 - 1e-12


def test_quadratic_fits_interaction_exactly(make_dataset):
    d = make_dataset(np.random.default_rng(1), fn=lambda X: 1 + X[:, 0] * X[:, 1])
    _, m = fit_baseline(d, BaselineKind.QUADRATIC)
    assert m.rmse <= 1e-8


def test_predict_trivial_models(bundled):
    zero = BaselineModel(BaselineKind.LINEAR, np.zeros(7), tuple(BaselineKind.LINEAR.terms()))
    assert (predict_baseline(zero, bundled) == 0).all()
    const = BaselineModel(BaselineKind.LINEAR, np.r_[0.42, np.zeros(6)], tuple(BaselineKind.LINEAR.terms()))
    assert (predict_baseline(const, bundled) == 0.42).all()


def test_predictions_match_fitted_values(bundled):
    for kind in BaselineKind:
        model, m = fit_baseline(bundled, kind)
        fitted = build_design(bundled, kind) @ model.coefficients
        np.testing.assert_allclose(predict_baseline(model, bundled), fitted, rtol=0, atol=1e-12)


def test_holdout_metrics(bundled_split):
    train, test = bundled_split
    model, m_train, m_test = fit_baseline(train, BaselineKind.QUADRATIC, holdout=test)
    assert m_test.rmse > 0 and m_train.rmse > 0


def test_nesting_on_many_datasets():
    for seed in range(20):
        rng = np.random.default_rng(seed)
        d = dataio.synth_generate(rng, 192, 0.01)
        r = {row["model"]: row["rmse"] for row in baseline_report(d)}
        assert r["Quadratic"] <= r["Interactions"] <= r["Linear"]
        assert r["Quadratic"] <= r["Pure quadratic"] <= r["Linear"]


def test_noise_floor_of_quadratic():
    rng = np.random.default_rng(3)
    X = rng.uniform(-2, 2, size=(2000, 6))
    sigma = 0.05
    y = 0.3 + X[:, 0] ** 2 - 0.5 * X[:, 1] * X[:, 2] + 0.2 * X[:, 5] + rng.normal(0, sigma, 2000)
    _, m = fit_baseline(Dataset(X, y), BaselineKind.QUADRATIC)
    assert 0.8 * sigma <= m.rmse <= 1.05 * sigma


def test_report_layout(bundled):
    rows = baseline_report(bundled)
    assert [r["model"] for r in rows] == ["Linear", "Interactions", "Pure quadratic", "Quadratic"]
    assert set(rows[0]) == {"model", "characteristics", "rmse", "r2"}
