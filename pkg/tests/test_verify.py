import json
import random
from importlib import resources

import jsonschema
import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from nilclose.closure import MonomialCurve, TorusClosure, polymap_closure, torus_curve_closure
from nilclose.exactfield import QQ, Subspace
from nilclose.nilcore import GroupSpec, NilMatrix, PolyMatrix
from nilclose.poly import Poly
from nilclose.subalg import Subalgebra
from nilclose.closure import orbit_closure
from nilclose.verify import (
    SamplePlan,
    SampleSet,
    grid_coverage,
    hausdorff_check,
    sample_orbit,
    sample_predicted,
    sample_torus_closure,
    sample_torus_curve,
)

from conftest import SQRT2, E, exp_line, rand_polymap

E12, E13, E23 = (1, 0, 0), (0, 1, 0), (0, 0, 1)


def heisenberg_line():
    return exp_line(E(3, 1, 2) + E(3, 2, 3, c=SQRT2.theta))


def full_torus(n, field=QQ):
    return TorusClosure(tuple(field.zero for _ in range(n)), Subspace.full(field, n), (), True)


def report_schema():
    return json.loads(resources.files("nilclose").joinpath("schemas", "verify_report.schema.json").read_text())


# -- plans ------------------------------------------------------------------------

def test_plan_validation():
    with pytest.raises(ValueError):
        SamplePlan(((0, 1),), count=0)
    with pytest.raises(ValueError):
        SamplePlan(((1, 0),))
    with pytest.raises(ValueError):
        SamplePlan(((0, 1),), strategy="sobol")
    with pytest.raises(ValueError):
        SamplePlan(((0, 1),), scale="log")


@pytest.mark.parametrize("strategy", ["grid", "low-discrepancy", "random"])
def test_plan_stays_in_box(strategy):
    plan = SamplePlan(((-2, 3), (1, 1e4)), strategy, 500, seed=3)
    x = plan.params()
    assert x.shape[1] == 2 and 1 <= len(x) <= 500
    assert np.all((x[:, 0] >= -2) & (x[:, 0] <= 3) & (x[:, 1] >= 1) & (x[:, 1] <= 1e4))


def test_low_discrepancy_plans_are_nested():
    plan = SamplePlan(((0, 1),) * 3, count=300, seed=5)
    assert_array_equal(plan.with_count(1200).unit()[:300], plan.unit())


def test_log_scale_spreads_decades():
    x = SamplePlan(((1, 1e4),), count=4000, scale="log").params()[:, 0]
    counts = np.histogram(np.log10(x), bins=4, range=(0, 4))[0]
    assert counts.min() > 900


# -- orbit samples ------------------------------------------------------------------

def test_constant_map_gives_identical_points():
    zero = Poly.constant(SQRT2, 1, 0)
    entries = [Poly.constant(SQRT2, 1, v) for v in (SQRT2([0, 1]), SQRT2(5), SQRT2(-2))]
    F = PolyMatrix(NilMatrix(3, entries, zero), "unipotent", SQRT2, 1)
    s = sample_orbit(F, SamplePlan(((0, 10),), count=5))
    assert len(s) == 5
    assert np.all(s.coords == s.coords[0])


def test_circle_coordinates_are_fractional_parts():
    F = exp_line(E(2, 1, 2, QQ), QQ)
    plan = SamplePlan(((0, 10),), "grid", 1000)
    t = plan.params()[:, 0]
    s = sample_orbit(F, plan)
    expected = t - np.floor(t)
    assert_allclose(s.coords[:, 0], expected, atol=1e-12)


def test_heisenberg_line_spreads_through_cube():
    s = sample_orbit(heisenberg_line(), SamplePlan(((0, 1e4),), count=20000))
    assert np.all((s.coords >= 0) & (s.coords < 1))
    cells = {tuple(c) for c in np.floor(s.coords * 4).astype(int)}
    assert len(cells) == 64


def test_reconstruction_from_reduced_samples():
    s = sample_orbit(heisenberg_line(), SamplePlan(((0, 500),), count=200))
    assert_allclose(s.reduced.reps @ s.reduced.gammas, s.raw, rtol=1e-12, atol=1e-9)


def test_overflow_reported_with_parameter():
    t = Poly.variable(QQ, 1, 0)
    zero = Poly.constant(QQ, 1, 0)
    F = PolyMatrix(NilMatrix(2, [t ** 3], zero), "unipotent", QQ, 1)
    with pytest.raises(OverflowError, match="parameter"):
        sample_orbit(F, SamplePlan(((0, 1e120),), "grid", 10))


def test_plan_dimension_must_match_map():
    with pytest.raises(ValueError):
        sample_orbit(heisenberg_line(), SamplePlan(((0, 1), (0, 1)), count=4))


def test_samples_csv():
    s = sample_orbit(heisenberg_line(), SamplePlan(((0, 10),), count=3))
    lines = s.to_csv().splitlines()
    assert lines[0] == "e12,e13,e23"
    assert len(lines) == 4
    assert_allclose(np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]]), s.coords)


# -- predicted samples ---------------------------------------------------------------------

def test_zero_dim_closure_is_one_point(heis):
    res = orbit_closure(Subalgebra.zero(heis))
    s = sample_predicted(res, SamplePlan((), count=50))
    assert np.all(s.coords == s.coords[0])
    assert_allclose(s.coords[0], 0.0)


def test_full_closure_fills_cube(heis):
    res = orbit_closure(Subalgebra.whole(heis))
    s = sample_predicted(res, SamplePlan((), count=20000))
    cells = {tuple(c) for c in np.floor(s.coords * 4).astype(int)}
    assert len(cells) == 64


def test_two_torus_samples_have_zero_e23(heis):
    t = SQRT2.theta
    res = orbit_closure(Subalgebra.from_vectors(heis, [(SQRT2.one, t, SQRT2.zero)]))
    s = sample_predicted(res, SamplePlan((), count=5000))
    assert np.max(np.abs(s.coords[:, 2])) <= 1e-12
    assert len({tuple(c) for c in np.floor(s.coords[:, :2] * 8).astype(int)}) == 64


def test_predicted_samples_lie_on_the_predicted_set():
    rng = random.Random(60)
    for k in range(20):
        n = 2 + k % 3
        F = rand_polymap(rng, n, 2, 2)
        res = polymap_closure(F, GroupSpec.full(n, QQ))
        s = sample_predicted(res, SamplePlan((), count=200, seed=k))
        assert np.max(s.residual(s.raw)) <= 1e-9


# -- Hausdorff checks -----------------------------------------------------------------------

def test_identical_sets_give_zero():
    s = sample_orbit(heisenberg_line(), SamplePlan(((0, 1e3),), count=2000))
    rep = hausdorff_check(s, s)
    assert rep.max_orbit_to_predicted == 0.0
    assert rep.max_predicted_to_orbit == 0.0
    assert rep.coverage == 1.0
    assert rep.passed


def test_sparse_orbit_fails_density_only():
    predicted = sample_torus_closure(full_torus(2), SamplePlan((), count=4000))
    sparse = SampleSet("torus", predicted.coords[:6], 2)
    rep = hausdorff_check(sparse, predicted)
    assert rep.max_orbit_to_predicted == 0.0
    assert rep.max_predicted_to_orbit > 0.2
    assert rep.failed == ["density"]
    assert not rep.passed
    assert rep.coverage < 0.2


def test_enforce_selects_directions():
    predicted = sample_torus_closure(full_torus(2), SamplePlan((), count=1000))
    sparse = SampleSet("torus", predicted.coords[:3], 2)
    assert hausdorff_check(sparse, predicted, enforce=("containment",)).passed


def test_containment_failure_flagged(heis):
    # orbit of the dense line checked against the 2-torus closure
    t = SQRT2.theta
    res = orbit_closure(Subalgebra.from_vectors(heis, [(SQRT2.one, t, SQRT2.zero)]))
    predicted = sample_predicted(res, SamplePlan((), count=3000))
    orbit = sample_orbit(heisenberg_line(), SamplePlan(((0, 1e3),), count=3000))
    rep = hausdorff_check(orbit, predicted)
    assert "containment" in rep.failed
    assert rep.containment_method == "exact-set residual"


def test_reports_are_deterministic(heis):
    F = heisenberg_line()
    res = polymap_closure(F, heis)

    def run(seed):
        orbit = sample_orbit(F, SamplePlan(((0, 1e4),), count=5000, seed=seed))
        predicted = sample_predicted(res, SamplePlan((), count=2000, seed=seed + 1))
        return hausdorff_check(orbit, predicted).to_json(), orbit.to_csv()

    a, b = run(4), run(4)
    assert a == b
    assert run(5)[1] != a[1]


def test_density_monotone_in_orbit_size(heis):
    F = heisenberg_line()
    predicted = sample_predicted(polymap_closure(F, heis), SamplePlan((), count=1000, seed=1))
    plan = SamplePlan(((0, 1e4),), count=500)
    last = np.inf
    for N in (500, 2000, 8000, 32000):
        orbit = sample_orbit(F, plan.with_count(N))
        d = hausdorff_check(orbit, predicted).max_predicted_to_orbit
        assert d <= last
        last = d


def test_coverage_monotone_for_nested_plans():
    curve = MonomialCurve.make([(1, [SQRT2.one, SQRT2.theta])], field=SQRT2)
    predicted = sample_torus_closure(torus_curve_closure(curve), SamplePlan((), count=5000))
    plan = SamplePlan(((0, 1e3),), count=100)
    covs = [grid_coverage(sample_torus_curve(curve, plan.with_count(N)), predicted, 0.05)
            for N in (100, 400, 1600, 6400)]
    assert covs == sorted(covs)
    assert 0 <= covs[0] and covs[-1] <= 1


def test_containment_is_exact_for_polymap_closures():
    rng = random.Random(61)
    for k in range(30):
        n = 2 + k % 3
        d = 1 + k % 2
        F = rand_polymap(rng, n, d, 3)
        res = polymap_closure(F, GroupSpec.full(n, QQ))
        orbit = sample_orbit(F, SamplePlan(((-3, 3),) * d, count=300, seed=k))
        predicted = sample_predicted(res, SamplePlan((), count=300, seed=k))
        rep = hausdorff_check(orbit, predicted)
        assert rep.max_orbit_to_predicted <= 1e-9


def test_rational_line_torus_samples():
    curve = MonomialCurve.make([(1, [1, 2])])
    s = sample_torus_curve(curve, SamplePlan(((0, 1e3),), count=10000))
    v = 2 * s.coords[:, 0] - s.coords[:, 1]
    assert np.max(np.abs(v - np.round(v))) <= 1e-9
    assert np.max(torus_curve_closure(curve).residual(s.coords)) <= 1e-9


def test_report_distances_and_schema(heis):
    F = heisenberg_line()
    orbit = sample_orbit(F, SamplePlan(((0, 1e4),), count=3000))
    predicted = sample_predicted(polymap_closure(F, heis), SamplePlan((), count=1000, seed=1))
    rep = hausdorff_check(orbit, predicted)
    assert rep.max_orbit_to_predicted >= 0 and rep.max_predicted_to_orbit >= 0
    assert 0 <= rep.coverage <= 1
    jsonschema.validate(rep.to_json(), report_schema())


def test_empty_sets_rejected():
    s = SampleSet("torus", np.zeros((0, 2)), 2)
    t = SampleSet("torus", np.zeros((3, 2)), 2)
    with pytest.raises(ValueError):
        hausdorff_check(s, t)
