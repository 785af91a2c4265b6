import numpy as np
import pytest

from sparsekaczmarz import (
    DualPair,
    StepMode,
    bregman_distance,
    conjugate_value,
    exact_step,
    inexact_step,
    objective_value,
    project_hyperplane,
    soft_threshold,
)
from sparsekaczmarz.errors import NumericalFailureError

from oracles import (
    bisection_exact_step,
    bregman_distance_alt,
    conjugate_sup_oracle,
    orthogonal_projection,
)


def random_unit_row(rng, n):
    a = rng.standard_normal(n)
    return a / np.linalg.norm(a)


# ---------------------------------------------------------------- threshold


def test_soft_threshold_basic():
    out = soft_threshold([2.5, -0.3, 1.0], 1.0)
    assert np.array_equal(out, [1.5, 0.0, 0.0])


def test_soft_threshold_identity_at_lam_zero():
    rng = np.random.default_rng(0)
    v = rng.standard_normal(50)
    assert np.array_equal(soft_threshold(v, 0.0), v)


def test_soft_threshold_boundary():
    assert np.array_equal(soft_threshold([-3.0, 3.0], 3.0), [0.0, 0.0])


def test_soft_threshold_sparsity_pattern():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(100)
    out = soft_threshold(v, 0.7)
    assert np.all(np.abs(v[out != 0.0]) > 0.7)


def test_soft_threshold_is_1_lipschitz():
    rng = np.random.default_rng(2)
    for _ in range(200):
        u = rng.standard_normal(8) * rng.uniform(0.1, 5.0)
        v = rng.standard_normal(8) * rng.uniform(0.1, 5.0)
        lam = rng.uniform(0.0, 3.0)
        lhs = np.linalg.norm(soft_threshold(u, lam) - soft_threshold(v, lam))
        assert lhs <= np.linalg.norm(u - v) + 1e-12


# ---------------------------------------------------------------- objective


def test_objective_zero():
    assert objective_value(np.zeros(4), 3.0) == 0.0


def test_objective_value():
    assert objective_value([1.0, -2.0], 1.0) == pytest.approx(5.5, abs=1e-15)


def test_objective_lam_zero_is_half_sq_norm():
    rng = np.random.default_rng(3)
    x = rng.standard_normal(10)
    assert objective_value(x, 0.0) == pytest.approx(0.5 * np.dot(x, x), rel=1e-15)


# ---------------------------------------------------------------- conjugate


def test_conjugate_at_zero():
    assert conjugate_value(np.zeros(3), 1.5) == 0.0


def test_conjugate_lam_zero_self_conjugate():
    rng = np.random.default_rng(4)
    x = rng.standard_normal(6)
    assert conjugate_value(x, 0.0) == pytest.approx(0.5 * np.dot(x, x), rel=1e-15)


def test_conjugate_scalar_example():
    # sup_z 3z - |z| - z^2/2 attained at z = 2, value 2
    assert conjugate_value([3.0], 1.0) == pytest.approx(2.0, abs=1e-12)
    assert conjugate_sup_oracle([3.0], 1.0) == pytest.approx(2.0, abs=1e-8)


def test_conjugate_matches_sup_oracle():
    rng = np.random.default_rng(5)
    for _ in range(60):
        n = int(rng.integers(1, 4))
        xstar = rng.standard_normal(n) * rng.uniform(0.2, 4.0)
        lam = rng.choice([0.0, 0.3, 1.0, 2.5])
        assert conjugate_value(xstar, lam) == pytest.approx(
            conjugate_sup_oracle(xstar, lam), abs=1e-8
        )


# ---------------------------------------------------------------- dual pair


def test_dual_pair_enforces_link():
    with pytest.raises(ValueError):
        DualPair(primal=np.array([2.0]), dual=np.array([2.0]), lam=1.0)


def test_dual_pair_from_dual():
    pair = DualPair.from_dual(np.array([2.0, -0.5]), 1.0)
    assert np.array_equal(pair.primal, [1.0, 0.0])


# ------------------------------------------------------------- distance


def test_bregman_distance_zero_at_self():
    pair = DualPair.from_dual(np.array([2.0, -3.0]), 1.0)
    assert bregman_distance(pair, pair.primal) == 0.0


def test_bregman_distance_euclidean_special_case():
    pair = DualPair.from_dual(np.array([1.0, 0.0]), 0.0)
    assert bregman_distance(pair, np.array([0.0, 1.0])) == pytest.approx(1.0, abs=1e-15)


def test_bregman_distance_worked_example():
    pair = DualPair.from_dual(np.array([2.0, 0.0]), 1.0)
    assert bregman_distance(pair, np.array([0.0, 3.0])) == pytest.approx(8.0, abs=1e-14)


def test_bregman_distance_matches_alt_formula():
    rng = np.random.default_rng(6)
    for _ in range(100):
        lam = rng.choice([0.0, 0.5, 1.0, 4.0])
        pair = DualPair.from_dual(rng.standard_normal(7) * 3.0, lam)
        y = rng.standard_normal(7) * 2.0
        assert bregman_distance(pair, y) == pytest.approx(
            bregman_distance_alt(pair, y), rel=1e-12, abs=1e-12
        )


def test_strong_convexity_sandwich():
    rng = np.random.default_rng(7)
    for _ in range(200):
        lam = rng.choice([0.0, 0.5, 2.0])
        px = DualPair.from_dual(rng.standard_normal(6) * 3.0, lam)
        py = DualPair.from_dual(rng.standard_normal(6) * 3.0, lam)
        d = bregman_distance(px, py.primal)
        gap = np.linalg.norm(px.primal - py.primal)
        lower = 0.5 * gap**2
        upper = np.linalg.norm(px.dual - py.dual) * gap
        assert lower <= d + 1e-10
        assert d <= upper + 1e-10


# ---------------------------------------------------------------- steps


def test_inexact_step_values():
    assert inexact_step([3.0, 4.0], [1.0, 0.0], 1.0) == 2.0
    assert inexact_step([0.5, 0.5], [0.6, 0.8], 0.7) == pytest.approx(0.0, abs=1e-15)
    assert inexact_step([1.0, 1.0], [0.6, 0.8], 0.0) == pytest.approx(1.4, abs=1e-15)


def test_exact_step_scalar_example():
    assert exact_step(np.array([0.0]), np.array([1.0]), 0.5, 1.0) == pytest.approx(
        -1.5, abs=1e-12
    )


def test_exact_step_zero_when_already_feasible():
    rng = np.random.default_rng(8)
    dual = rng.standard_normal(5)
    lam = 0.8
    a = random_unit_row(rng, 5)
    b = float(np.dot(a, soft_threshold(dual, lam)))
    assert exact_step(dual, a, b, lam) == pytest.approx(0.0, abs=1e-12)


def test_exact_step_equals_inexact_at_lam_zero():
    rng = np.random.default_rng(9)
    for _ in range(100):
        n = int(rng.integers(1, 10))
        dual = rng.standard_normal(n) * 2.0
        a = random_unit_row(rng, n)
        b = float(rng.standard_normal())
        t_exact = exact_step(dual, a, b, 0.0)
        t_inexact = inexact_step(dual, a, b)
        assert t_exact == pytest.approx(t_inexact, abs=1e-12)


def test_exact_step_matches_bisection_oracle():
    rng = np.random.default_rng(10)
    for _ in range(300):
        n = int(rng.integers(1, 21))
        dual = rng.standard_normal(n) * rng.uniform(0.3, 4.0)
        a = random_unit_row(rng, n)
        b = float(rng.standard_normal())
        lam = float(rng.choice([0.0, 0.1, 1.0, 5.0]))
        t = exact_step(dual, a, b, lam)
        t_ref = bisection_exact_step(dual, a, b, lam)
        assert t == pytest.approx(t_ref, abs=1e-8)
        # the root is a stationary point of the dual line search
        deriv = b - float(np.dot(a, soft_threshold(dual - t * a, lam)))
        assert abs(deriv) <= 1e-12 * (1.0 + abs(b))


def test_exact_step_rejects_zero_row():
    with pytest.raises(NumericalFailureError):
        exact_step(np.array([1.0, 2.0]), np.array([0.0, 0.0]), 1.0, 1.0)


# ------------------------------------------------------------- projection


def test_project_hyperplane_lam_zero_is_orthogonal_projection():
    rng = np.random.default_rng(11)
    for _ in range(50):
        n = int(rng.integers(2, 8))
        pair = DualPair.from_dual(rng.standard_normal(n), 0.0)
        a = random_unit_row(rng, n)
        b = float(rng.standard_normal())
        moved = project_hyperplane(pair, a, b, StepMode.INEXACT)
        expected = orthogonal_projection(pair.primal, a, b)
        assert np.max(np.abs(moved.primal - expected)) < 1e-12


def test_project_hyperplane_noop_when_on_hyperplane():
    rng = np.random.default_rng(12)
    pair = DualPair.from_dual(rng.standard_normal(6) * 2.0, 1.0)
    a = random_unit_row(rng, 6)
    b = float(np.dot(a, pair.primal))
    moved = project_hyperplane(pair, a, b, StepMode.EXACT)
    assert np.max(np.abs(moved.dual - pair.dual)) < 1e-12


def test_project_hyperplane_exact_feasibility_and_decrease():
    rng = np.random.default_rng(13)
    for _ in range(100):
        n = int(rng.integers(2, 10))
        lam = 1.0
        pair = DualPair.from_dual(rng.standard_normal(n) * 3.0, lam)
        a = random_unit_row(rng, n)
        # pick a feasible point first so the hyperplane is guaranteed nonempty
        y = rng.standard_normal(n)
        b = float(np.dot(a, y))
        moved = project_hyperplane(pair, a, b, StepMode.EXACT)
        assert abs(np.dot(a, moved.primal) - b) <= 1e-10
        drop = 0.5 * inexact_step(pair.primal, a, b) ** 2
        assert bregman_distance(moved, y) <= bregman_distance(pair, y) - drop + 1e-10


def test_project_hyperplane_inexact_decrease():
    rng = np.random.default_rng(14)
    for _ in range(100):
        n = int(rng.integers(2, 10))
        lam = float(rng.choice([0.0, 0.5, 1.0]))
        pair = DualPair.from_dual(rng.standard_normal(n) * 3.0, lam)
        a = random_unit_row(rng, n)
        y = rng.standard_normal(n)
        b = float(np.dot(a, y))
        moved = project_hyperplane(pair, a, b, StepMode.INEXACT)
        drop = 0.5 * inexact_step(pair.primal, a, b) ** 2
        assert bregman_distance(moved, y) <= bregman_distance(pair, y) - drop + 1e-10


def test_project_hyperplane_rejects_non_unit_row():
    pair = DualPair.from_dual(np.zeros(2), 0.0)
    with pytest.raises(ValueError):
        project_hyperplane(pair, np.array([3.0, 4.0]), 1.0, StepMode.INEXACT)
