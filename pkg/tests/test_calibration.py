import random

import numpy as np
import pytest

from electre_linkage.calibration import (
    CalibrationError,
    EpsilonInfeasibleError,
    TrainingSet,
    calibrate,
    estimate_lambda,
    estimate_profiles,
    estimate_thresholds,
)
from electre_linkage.core import (
    Alternative,
    Category,
    Criterion,
    ProfileSet,
    classify_batch,
)

from oracles import joint_lp_objective


def make_training(points, p):
    """points: list of (performance tuple, category index)."""
    alts = tuple(
        (Alternative(i, tuple(perf)), Category(cat)) for i, (perf, cat) in enumerate(points)
    )
    return TrainingSet(alts, p)


def random_training(rng, m, p, n):
    points = []
    for k in range(n):
        cat = rng.randint(1, p)
        # clouds roughly ordered by category with heavy overlap
        points.append(
            (
                tuple(
                    min(1.0, max(0.0, (cat - 1 + rng.random()) / p + rng.gauss(0, 0.15)))
                    for _ in range(m)
                ),
                cat,
            )
        )
    # ensure every category is populated
    for cat in range(1, p + 1):
        points.append((tuple((cat - 0.5) / p for _ in range(m)), cat))
    return make_training(points, p)


class TestEstimateProfiles:
    def test_separable_data_zero_objective(self):
        train = make_training(
            [((0.1,), 1), ((0.2,), 1), ((0.8,), 2), ((0.9,), 2)], p=2
        )
        sol = estimate_profiles(train, epsilon=0.01)
        assert sol.objective == 0.0
        # flat optimum [0.2, 0.8] resolved at its midpoint
        assert sol.profiles.values[0][0] == pytest.approx(0.5)

    def test_overlapping_pair_objective(self):
        train = make_training([((0.3,), 2), ((0.4,), 1)], p=2)
        sol = estimate_profiles(train, epsilon=0.01)
        assert sol.objective == pytest.approx(0.1)
        assert sol.profiles.values[0][0] == pytest.approx(0.35)

    def test_objective_equals_slack_sum(self):
        rng = random.Random(5)
        for _ in range(20):
            train = random_training(rng, rng.randint(1, 3), rng.randint(2, 4), 30)
            sol = estimate_profiles(train, epsilon=0.01)
            assert sol.objective == pytest.approx(sol.errors.sum(), rel=1e-9)
            assert (sol.errors >= 0).all()

    def test_epsilon_spacing_exact(self):
        rng = random.Random(6)
        for _ in range(20):
            train = random_training(rng, 2, 4, 40)
            sol = estimate_profiles(train, epsilon=0.01)
            vals = np.array(sol.profiles.values)
            assert (vals[1:] >= vals[:-1] + 0.01 - 1e-12).all()

    def test_empty_training_set_rejected(self):
        with pytest.raises(CalibrationError):
            TrainingSet((), 2)

    def test_empty_category_warns(self):
        train = make_training([((0.1,), 1), ((0.9,), 3)], p=3)
        with pytest.warns(UserWarning, match="no training examples"):
            estimate_profiles(train, epsilon=0.01)

    def test_infeasible_epsilon(self):
        train = make_training([((0.1,), 1), ((0.15,), 2), ((0.2,), 3)], p=3)
        with pytest.raises(EpsilonInfeasibleError, match="0.5"):
            estimate_profiles(train, epsilon=0.5)

    def test_bad_epsilon(self):
        train = make_training([((0.1,), 1), ((0.9,), 2)], p=2)
        with pytest.raises(CalibrationError):
            estimate_profiles(train, epsilon=0.0)


class TestJointLpEquivalence:
    def test_matches_simplex_oracle(self):
        rng = random.Random(99)
        for _ in range(20):
            m = rng.randint(1, 4)
            p = rng.randint(2, 4)
            train = random_training(rng, m, p, rng.randint(10, 60))
            eps = 0.01
            sol = estimate_profiles(train, epsilon=eps)
            ref = joint_lp_objective(train.matrix(), train.labels(), p, eps)
            assert sol.objective == pytest.approx(ref, rel=1e-9, abs=1e-9)

    def test_matches_grid_enumeration_single_criterion(self):
        rng = random.Random(101)
        for _ in range(10):
            p = rng.randint(2, 3)
            points = [
                ((round(rng.randint(0, 100) / 100, 2),), rng.randint(1, p))
                for _ in range(15)
            ]
            for cat in range(1, p + 1):
                points.append(((round(rng.randint(0, 100) / 100, 2),), cat))
            train = make_training(points, p)
            eps = 0.01
            sol = estimate_profiles(train, epsilon=eps)

            # exhaustive search over profile placements on the value grid
            X = train.matrix()[:, 0]
            y = train.labels()
            grid = [i / 100 for i in range(-100, 201)]

            def objective(profs):
                total = 0.0
                for g, cat in zip(X, y):
                    t = 0.0
                    if cat != p:
                        t = max(t, g - profs[cat - 1])
                    if cat != 1:
                        t = max(t, profs[cat - 2] - g)
                    total += t
                return total

            if p == 2:
                best = min(objective((b,)) for b in grid)
            else:
                best = min(
                    objective((b1, b2))
                    for b1 in grid
                    for b2 in grid
                    if b2 >= b1 + eps
                )
            assert sol.objective == pytest.approx(best, abs=1e-12)


class TestEstimateThresholds:
    def test_fractions_of_range(self):
        train = make_training([((0.0,), 1), ((1.0,), 2)], p=2)
        assert estimate_thresholds(train, 0.05, 0.15) == [(0.05, 0.15)]

    def test_constant_criterion(self):
        train = make_training([((0.5,), 1), ((0.5,), 2)], p=2)
        assert estimate_thresholds(train, 0.05, 0.15) == [(0.0, 0.0)]

    def test_zero_fractions_true_criterion(self):
        train = make_training([((0.0,), 1), ((1.0,), 2)], p=2)
        assert estimate_thresholds(train, 0.0, 0.0) == [(0.0, 0.0)]

    def test_bad_fractions(self):
        train = make_training([((0.0,), 1), ((1.0,), 2)], p=2)
        with pytest.raises(CalibrationError):
            estimate_thresholds(train, 0.2, 0.1)


class TestEstimateLambda:
    def test_perfect_fit_picks_largest(self):
        train = make_training([((0.1,), 1), ((0.9,), 2)], p=2)
        crits = (Criterion("g", 1.0, 0.0, 0.0),)
        profiles = ProfileSet(((0.5,),))
        lam, curve = estimate_lambda(train, crits, profiles, grid_step=0.05)
        assert lam == 1.0
        assert all(acc == 1.0 for _, acc in curve)

    def test_grid_contains_paper_points(self):
        train = make_training([((0.1,), 1), ((0.9,), 2)], p=2)
        crits = (Criterion("g", 1.0, 0.0, 0.0),)
        _, curve = estimate_lambda(train, crits, ProfileSet(((0.5,),)), grid_step=0.05)
        grid = [lam for lam, _ in curve]
        for wanted in (0.5, 0.7, 0.85, 1.0):
            assert any(abs(lam - wanted) < 1e-9 for lam in grid)

    def test_accuracy_cutoff_selection(self):
        # one alternative correctly classified only at lambda <= 0.6
        crits = (Criterion("g1", 2.0, 0.0, 0.0), Criterion("g2", 1.0, 0.0, 0.0))
        profiles = ProfileSet(((0.5, 0.5),))
        # sigma against the profile: 2/3 (first criterion above, second below)
        train = make_training([((0.9, 0.1), 2)], p=2)
        lam, curve = estimate_lambda(train, crits, profiles, grid_step=0.05)
        assert lam == pytest.approx(0.65)  # largest grid point below 2/3
        for lam_i, acc in curve:
            assert acc == (1.0 if lam_i <= 2 / 3 else 0.0)

    def test_bad_grid_step(self):
        train = make_training([((0.1,), 1), ((0.9,), 2)], p=2)
        crits = (Criterion("g", 1.0, 0.0, 0.0),)
        with pytest.raises(CalibrationError):
            estimate_lambda(train, crits, ProfileSet(((0.5,),)), grid_step=0.6)


class TestCalibrate:
    def test_zero_loss_recovery(self):
        # three margin-separated clouds on two criteria
        rng = random.Random(21)
        points = []
        for cat, (lo, hi) in enumerate([(0.0, 0.25), (0.4, 0.6), (0.75, 1.0)], start=1):
            for _ in range(30):
                points.append(
                    ((rng.uniform(lo, hi), rng.uniform(lo, hi)), cat)
                )
        train = make_training(points, 3)
        model, sol, _ = calibrate(train, q_fraction=0.0, p_fraction=0.0)
        assert sol.objective == 0.0
        cats, _ = classify_batch(
            type(model)(model.criteria, model.profiles, 0.5, model.epsilon),
            train.matrix(),
        )
        assert (cats == train.labels()).all()

    def test_weight_count_mismatch(self):
        train = make_training([((0.1,), 1), ((0.9,), 2)], p=2)
        with pytest.raises(CalibrationError):
            calibrate(train, weights=[1.0, 2.0])
