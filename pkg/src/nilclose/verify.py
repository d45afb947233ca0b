"""Sampling checks that predicted closures match sampled orbits.

Two one-sided distances are reported.  The containment direction (orbit
samples against the predicted set) is measured analytically whenever the
predicted set is known exactly; the density direction (predicted samples
against orbit samples) is a nearest-neighbour search in the fundamental
domain.  Grid coverage counts how many predicted cells the orbit visits.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial import cKDTree
from scipy.stats import qmc

from .closure import ClosureResult, MonomialCurve, TorusClosure
from .malcev import ReducedSamples, lattice_ball, reduce_batch, weak_malcev_through
from .nilcore import PolyMatrix, positions, polymap_eval

__all__ = [
    "SamplePlan",
    "SampleSet",
    "VerifyReport",
    "sample_orbit",
    "sample_predicted",
    "sample_torus_curve",
    "sample_torus_closure",
    "sample_torus_product",
    "hausdorff_check",
    "grid_coverage",
    "OVERFLOW_LIMIT",
]

OVERFLOW_LIMIT = 1e300
STRATEGIES = ("grid", "low-discrepancy", "random")


@dataclass(frozen=True)
class SamplePlan:
    """Parameter box, sampling strategy and count.

    ``scale="log"`` samples each coordinate uniformly in log space, which
    needs a strictly positive box.
    """

    box: tuple
    strategy: str = "low-discrepancy"
    count: int = 1000
    seed: int = 0
    scale: str = "linear"

    def __post_init__(self):
        box = tuple((float(lo), float(hi)) for lo, hi in self.box)
        object.__setattr__(self, "box", box)
        if self.count < 1:
            raise ValueError("count must be at least 1")
        if self.strategy not in STRATEGIES:
            raise ValueError("strategy must be one of %s" % (STRATEGIES,))
        if self.scale not in ("linear", "log"):
            raise ValueError("scale must be 'linear' or 'log'")
        if any(lo > hi for lo, hi in box):
            raise ValueError("empty parameter box")
        if self.scale == "log" and any(lo <= 0 for lo, _ in box):
            raise ValueError("log scale needs a positive box")

    @property
    def d(self) -> int:
        return len(self.box)

    def unit(self) -> np.ndarray:
        """(count, d) points in the unit cube."""
        d, N = self.d, self.count
        if d == 0:
            return np.zeros((N, 0))
        if self.strategy == "random":
            return np.random.default_rng(self.seed).random((N, d))
        if self.strategy == "low-discrepancy":
            return qmc.Halton(d, scramble=True, seed=self.seed).random(N)
        k = max(1, math.ceil(round(N ** (1.0 / d), 9)))
        axes = [(np.arange(k) + 0.5) / k if d > 1 else np.linspace(0.0, 1.0, N)] * d
        if d == 1:
            return axes[0][:, None]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        idx = np.unique(np.linspace(0, len(grid) - 1, N).round().astype(int))
        return grid[idx]

    def params(self) -> np.ndarray:
        u = self.unit()
        lo = np.array([b[0] for b in self.box])
        hi = np.array([b[1] for b in self.box])
        if self.scale == "log":
            return np.exp(np.log(lo) + u * (np.log(hi) - np.log(lo)))
        return lo + u * (hi - lo)

    def with_count(self, count: int) -> "SamplePlan":
        return SamplePlan(self.box, self.strategy, count, self.seed, self.scale)


@dataclass
class SampleSet:
    """Points of a compact quotient, stored as fundamental-domain coordinates.

    ``kind`` is ``"nil"`` (UT(n)/UT(n,Z), coordinates = above-diagonal
    entries of the reduced representative) or ``"torus"`` (R^n/Z^n).
    ``raw`` keeps the unreduced float matrices when available; ``residual``
    maps raw orbit samples to their distance from an exactly known set.
    """

    kind: str
    coords: np.ndarray
    n: int
    reduced: ReducedSamples | None = None
    raw: np.ndarray | None = None
    residual: Callable | None = None

    def __len__(self):
        return self.coords.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.kind == "nil":
            w.writerow(["e%d%d" % (i + 1, j + 1) for i, j in positions(self.n)])
        else:
            w.writerow(["x%d" % (i + 1) for i in range(self.coords.shape[1])])
        for row in self.coords:
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()


def _nil_set(g: np.ndarray, residual=None) -> SampleSet:
    reps, gammas = reduce_batch(g)
    red = ReducedSamples(reps, gammas)
    return SampleSet("nil", red.coords(), g.shape[-1], red, g, residual)


def sample_orbit(F: PolyMatrix, plan: SamplePlan) -> SampleSet:
    """Evaluate F on the plan in floating point and reduce modulo UT(n, Z)."""
    if plan.d != F.d:
        raise ValueError("plan has %d parameters but the map has %d" % (plan.d, F.d))
    x = plan.params()
    # overflow is detected below and reported with its parameter
    with np.errstate(over="ignore", invalid="ignore"):
        g = polymap_eval(F, [x[:, k] for k in range(F.d)]) if F.d else \
            np.broadcast_to(polymap_eval(F, []), (plan.count, F.n, F.n)).copy()
    bad = ~np.isfinite(g).all(axis=(-2, -1)) | (np.abs(g) > OVERFLOW_LIMIT).any(axis=(-2, -1))
    if bad.any():
        k = int(np.argmax(bad))
        raise OverflowError("map entries exceed %g at parameter %s" % (OVERFLOW_LIMIT, x[k].tolist()))
    return _nil_set(g)


def _lattice_period(vectors) -> int:
    dens = [x.to_fraction().denominator for v in vectors for x in v if x]
    return math.lcm(*dens) if dens else 1


def _closure_residual(result: ClosureResult):
    """Distance of log(c^-1 g) from the closed algebra, in above-diagonal coordinates."""
    coset = result.coset
    n = coset.group.n
    cinv = coset.base.inverse().to_float()
    basis = np.array([[float(x) for x in v] for v in coset.algebra.space.basis]).reshape(-1, len(positions(n)))
    Q = np.linalg.qr(basis.T)[0] if basis.shape[0] else np.zeros((len(positions(n)), 0))
    rows, cols = zip(*positions(n)) if n > 1 else ((), ())

    def residual(g: np.ndarray) -> np.ndarray:
        u = cinv @ g
        N = u - np.eye(n)
        L = np.zeros_like(N)
        P = np.broadcast_to(np.eye(n), N.shape).copy()
        for k in range(1, n):
            P = P @ N
            L += ((-1) ** (k + 1) / k) * P
        v = L[..., list(rows), list(cols)]
        v = v - (v @ Q) @ Q.T
        return np.linalg.norm(v, axis=-1)

    return residual


def sample_predicted(result: ClosureResult, plan: SamplePlan) -> SampleSet:
    """Samples c·psi(s) of the predicted sub-nilmanifold, reduced.

    s ranges over [0, K)^k for a Malcev basis of the closed algebra, with K
    the common denominator of the basis entries, so the image covers the
    sub-nilmanifold.  Only ``plan``'s count, strategy and seed are used.
    """
    coset = result.coset
    n = coset.group.n
    h = coset.algebra
    k = h.dim
    residual = _closure_residual(result)
    c = coset.base.to_float()
    if k == 0:
        g = np.broadcast_to(c, (plan.count, n, n)).copy()
        return _nil_set(g, residual)
    B = weak_malcev_through(h)
    xs = B.xs[:k]
    K = _lattice_period([x.entries for x in xs]) * math.factorial(n - 1)
    u = SamplePlan(((0.0, 1.0),) * k, plan.strategy, plan.count, plan.seed).unit() * K
    g = np.broadcast_to(c, (plan.count, n, n)).copy()
    for i, x in enumerate(xs):
        X = x.to_float()
        # exp(s X) by its finite series
        term = np.broadcast_to(np.eye(n), (plan.count, n, n)).copy()
        E = term.copy()
        for j in range(1, n):
            term = term @ (u[:, i, None, None] * X) / j
            E = E + term
        g = g @ E
    return _nil_set(g, residual)


# -- torus samples -------------------------------------------------------------

def _curve_values(curve, t) -> np.ndarray:
    if isinstance(curve, MonomialCurve):
        return curve.evaluate(t)
    return np.asarray(curve(t), dtype=float)


def sample_torus_curve(curve, plan: SamplePlan) -> SampleSet:
    """frac(sigma(t)) for t from a one-parameter plan."""
    if plan.d != 1:
        raise ValueError("curves take a one-parameter plan")
    v = _curve_values(curve, plan.params()[:, 0])
    if not np.all(np.isfinite(v)) or np.any(np.abs(v) > OVERFLOW_LIMIT):
        raise OverflowError("curve values exceed %g" % OVERFLOW_LIMIT)
    return SampleSet("torus", v - np.floor(v), v.shape[-1], raw=v)


def _integer_directions(L) -> np.ndarray:
    rows = []
    for v in L.basis:
        fr = [x.to_fraction() for x in v]
        den = math.lcm(*[f.denominator for f in fr])
        rows.append([int(f * den) for f in fr])
    return np.array(rows, dtype=float).reshape(-1, L.dim)


def sample_torus_closure(closure: TorusClosure, plan: SamplePlan) -> SampleSet:
    """Samples of pi(point + L), with the closure's exact residual attached."""
    n = len(closure.point)
    a = np.array([float(x) for x in closure.point])
    D = _integer_directions(closure.L)
    u = SamplePlan(((0.0, 1.0),) * D.shape[0], plan.strategy, plan.count, plan.seed).unit()
    v = a + u @ D
    return SampleSet("torus", v - np.floor(v), n, raw=v, residual=closure.residual)


def sample_torus_product(pieces: Sequence, plan: SamplePlan) -> SampleSet:
    """Samples of a union of products, each factor a curve or a torus closure.

    ``pieces`` is a list of tuples of ``("curve", sigma)`` / ``("coset",
    TorusClosure)`` (see closure.torus_product_frontier).  Curve factors use
    the first coordinate of ``plan``'s box and scale; the count is split
    evenly across pieces.
    """
    per = max(1, plan.count // len(pieces))
    blocks = []
    for p_idx, piece in enumerate(pieces):
        cols = []
        for f_idx, (kind, obj) in enumerate(piece):
            seed = plan.seed + 1000 * p_idx + f_idx
            if kind == "curve":
                sub = SamplePlan(plan.box[:1], plan.strategy, per, seed, plan.scale)
                cols.append(sample_torus_curve(obj, sub).coords)
            else:
                cols.append(sample_torus_closure(obj, SamplePlan((), plan.strategy, per, seed)).coords)
        blocks.append(np.hstack(cols))
    coords = np.vstack(blocks)
    return SampleSet("torus", coords, coords.shape[1])


# -- checks ---------------------------------------------------------------------

def grid_coverage(orbit: SampleSet, predicted: SampleSet, delta: float) -> float:
    """Fraction of grid cells of side ``delta`` holding a predicted sample that also hold an orbit sample."""
    k = max(1, math.ceil(1.0 / delta - 1e-12))

    def cells(x):
        idx = np.clip(np.floor(x / delta).astype(np.int64), 0, k - 1)
        return set(map(tuple, idx))

    pc = cells(predicted.coords)
    if not pc:
        return 1.0
    return len(pc & cells(orbit.coords)) / len(pc)


def _nearest_torus(targets: np.ndarray, points: np.ndarray) -> np.ndarray:
    t = targets - np.floor(targets)
    p = points - np.floor(points)
    # boxsize requires coordinates strictly below 1
    t[t >= 1.0] = 0.0
    p[p >= 1.0] = 0.0
    tree = cKDTree(p, boxsize=1.0)
    d, _ = tree.query(t)
    return d


def _nearest_nil(targets: SampleSet, points: SampleSet, cap: float) -> np.ndarray:
    """min over points q and lattice γ of min(|p - qγ|, |q - pγ|), capped at ``cap``."""
    n = points.n
    rows, cols = zip(*positions(n))
    rows, cols = list(rows), list(cols)
    ball = lattice_ball(n, cap)
    P = targets.reduced.reps
    Q = points.reduced.reps

    def translates(A):
        out = []
        for gam in ball:
            c = (A @ gam)[:, rows, cols]
            keep = np.all((c > -cap) & (c < 1.0 + cap), axis=1)
            out.append((c[keep], np.nonzero(keep)[0]))
        return out

    best = np.full(len(P), np.inf)
    # |p - qγ|: tree over translated orbit points
    tq = translates(Q)
    cloud = np.vstack([c for c, _ in tq])
    tree = cKDTree(cloud)
    d, _ = tree.query(targets.coords, distance_upper_bound=cap)
    best = np.minimum(best, d)
    # |q - pγ|: tree over orbit points, queries translated
    plain = cKDTree(points.coords)
    for c, idx in translates(P):
        if len(idx):
            d, _ = plain.query(c, distance_upper_bound=cap)
            np.minimum.at(best, idx, d)
    return np.minimum(best, cap)


def _nearest(targets: SampleSet, points: SampleSet, cap: float = 1.0) -> np.ndarray:
    if targets.kind != points.kind:
        raise ValueError("sample sets live in different spaces")
    if targets.kind == "torus":
        return _nearest_torus(targets.coords, points.coords)
    if targets.n == 1:
        return np.zeros(len(targets))
    return _nearest_nil(targets, points, cap)


@dataclass
class VerifyReport:
    n_orbit: int
    n_predicted: int
    max_orbit_to_predicted: float
    max_predicted_to_orbit: float
    coverage: float
    delta: float
    tol_containment: float
    tol_density: float
    containment_method: str
    failed: list = dc_field(default_factory=list)
    enforced: tuple = ("containment", "density")

    @property
    def passed(self) -> bool:
        return not self.failed

    def to_json(self) -> dict:
        return {
            "format": 1,
            "counts": {"orbit": self.n_orbit, "predicted": self.n_predicted},
            "max_orbit_to_predicted": self.max_orbit_to_predicted,
            "max_predicted_to_orbit": self.max_predicted_to_orbit,
            "coverage": self.coverage,
            "delta": self.delta,
            "tolerances": {"containment": self.tol_containment, "density": self.tol_density},
            "containment_method": self.containment_method,
            "enforced": list(self.enforced),
            "passed": self.passed,
            "failed_directions": list(self.failed),
        }


def hausdorff_check(orbit: SampleSet, predicted: SampleSet, delta: float = 0.125,
                    tol_containment: float = 1e-6, tol_density: float = 0.2,
                    cap: float = 1.0, enforce=("containment", "density")) -> VerifyReport:
    """One-sided distances between orbit and predicted samples, plus grid coverage.

    Containment uses ``predicted.residual`` on the raw orbit samples when both
    exist (distance to the exact predicted set); otherwise nearest predicted
    sample.  Density is always the max over predicted samples of the distance
    to the nearest orbit sample.  Distances are capped at ``cap``.  Only the
    directions named in ``enforce`` decide pass/fail.
    """
    if not len(orbit) or not len(predicted):
        raise ValueError("sample sets must be nonempty")
    if predicted.residual is not None and orbit.raw is not None:
        cont = float(np.max(predicted.residual(orbit.raw)))
        method = "exact-set residual"
    else:
        cont = float(np.max(_nearest(orbit, predicted, cap)))
        method = "nearest predicted sample"
    dens = float(np.max(_nearest(predicted, orbit, cap)))
    cov = grid_coverage(orbit, predicted, delta)
    failed = []
    if "containment" in enforce and not cont <= tol_containment:
        failed.append("containment")
    if "density" in enforce and not dens <= tol_density:
        failed.append("density")
    return VerifyReport(len(orbit), len(predicted), cont, dens, cov, delta,
                        tol_containment, tol_density, method, failed, tuple(enforce))
