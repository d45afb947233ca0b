"""Weyl sums and continuous-uniform-distribution verdicts for curves on tori."""

from __future__ import annotations

import csv
import io
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .closure import MonomialCurve, torus_curve_closure
from .parser import numeric_derivative, parse, to_numeric

__all__ = [
    "NumericCurve",
    "QuadratureError",
    "WeylRow",
    "WeylReport",
    "weyl_sum",
    "cud_verdict_polynomial",
    "cud_numeric",
    "small_frequencies",
    "thread_cap",
]

TWO_PI = 2.0 * math.pi


class QuadratureError(RuntimeError):
    def __init__(self, message: str, achieved: float):
        super().__init__("%s (achieved error estimate %.3g)" % (message, achieved))
        self.achieved = achieved


@dataclass(frozen=True)
class NumericCurve:
    """A curve t -> R^n with a matching derivative; both vectorized over t."""

    n: int
    value: Callable
    deriv: Callable
    label: str = ""

    def __call__(self, t):
        return self.value(t)

    @classmethod
    def from_expressions(cls, components: Sequence, theta: float = 0.0, var: str = "t") -> "NumericCurve":
        """Components are grammar strings (or ASTs); ``ln1p`` is allowed."""
        asts = [parse(c, allow_ln=True) if isinstance(c, str) else c for c in components]
        fs = [to_numeric(a, theta, (var,)) for a in asts]
        ds = [numeric_derivative(a, var, theta, (var,)) for a in asts]

        def value(t):
            t = np.asarray(t, dtype=float)
            return np.stack([f(t) for f in fs], axis=-1)

        def deriv(t):
            t = np.asarray(t, dtype=float)
            return np.stack([d(t) for d in ds], axis=-1)

        label = "(" + ", ".join(c if isinstance(c, str) else repr(c) for c in components) + ")"
        return cls(len(asts), value, deriv, label)

    @classmethod
    def from_monomial(cls, sigma: MonomialCurve) -> "NumericCurve":
        return cls(sigma.n, sigma.evaluate, sigma.derivative, repr(sigma.terms))


def thread_cap() -> int:
    """Worker count from NILCLOSE_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("NILCLOSE_THREADS", "1")))
    except ValueError:
        return 1


def _phase_fns(curve: NumericCurve, m):
    m = np.asarray(m, dtype=float)

    def phi(t):
        return curve.value(t) @ m

    def dphi(t):
        return curve.deriv(t) @ m

    return phi, dphi


_NODES = np.linspace(0.0, 1.0, 9)


def weyl_sum(curve: NumericCurve, m, T: float, tol: float = 1e-6,
             budget: int = 10 ** 7, initial_panels: int = 64) -> complex:
    """(1/T) * integral_0^T exp(2 pi i <m, sigma(t)>) dt.

    Each panel carries composite Simpson sums on 1, 2 and 4 subintervals
    combined by two Richardson steps.  Panels are split until the phase
    moves by less than 1/8 of a cycle across them and the last Richardson
    correction is below ``tol * h``, so the average is accurate to about
    ``tol``.  Raises QuadratureError past ``budget`` integrand evaluations.
    """
    m = np.asarray(m)
    if not np.any(m):
        raise ValueError("m must be nonzero")
    if not T > 0:
        raise ValueError("T must be positive")
    phi, dphi = _phase_fns(curve, m)

    probe = np.linspace(0.0, T, 257)
    if np.all(dphi(probe) == 0.0):
        p0 = float(phi(np.array([0.0]))[0])
        return complex(np.exp(2j * math.pi * p0)) if p0 else 1 + 0j

    edges = np.linspace(0.0, T, initial_panels + 1)
    a, b = edges[:-1], edges[1:]
    total = 0j
    evals = 0
    worst = 0.0
    while a.size:
        h = b - a
        nodes = a[:, None] + h[:, None] * _NODES
        ph = phi(nodes.ravel()).reshape(nodes.shape)
        evals += nodes.size
        if evals > budget:
            raise QuadratureError("quadrature budget of %d evaluations exhausted" % budget, worst)
        dph = np.abs(dphi(nodes[:, ::2].ravel()).reshape(-1, 5)).max(axis=1)
        swing = np.maximum(np.abs(np.diff(ph, axis=1)).max(axis=1) * 8, dph * h)
        f = np.exp(TWO_PI * 1j * (ph - np.floor(ph)))
        s1 = h / 6 * (f[:, 0] + 4 * f[:, 4] + f[:, 8])
        s2 = h / 12 * (f[:, 0] + 4 * f[:, 2] + 2 * f[:, 4] + 4 * f[:, 6] + f[:, 8])
        s4 = h / 24 * (f[:, 0] + f[:, 8] + 4 * f[:, 1:8:2].sum(axis=1) + 2 * f[:, 2:7:2].sum(axis=1))
        r1 = s2 + (s2 - s1) / 15
        r2 = s4 + (s4 - s2) / 15
        err = np.abs(r2 - r1) / 63
        ok = (swing < 0.125) & (err <= tol * h)
        # a panel too narrow to split further is accepted as is
        tiny = h <= T * 1e-15
        done = ok | tiny
        total += np.sum(r2[done] + (r2[done] - r1[done]) / 63)
        if np.any(~done):
            worst = float(err[~done].max())
        mid = (a + b) / 2
        keep = ~done
        a, b = np.concatenate([a[keep], mid[keep]]), np.concatenate([mid[keep], b[keep]])
    return complex(total / T)


def small_frequencies(n: int, count: int) -> list:
    """The first ``count`` nonzero integer vectors ordered by norm, then lexicographically."""
    r = 1
    while True:
        cands = [v for v in itertools.product(range(-r, r + 1), repeat=n)
                 if any(v) and max(abs(x) for x in v) <= r]
        cands.sort(key=lambda v: (sum(x * x for x in v), v))
        # every vector of norm <= r is in the box of radius r
        ok = [v for v in cands if sum(x * x for x in v) <= r * r]
        if len(ok) >= count:
            return [tuple(v) for v in ok[:count]]
        r += 1


@dataclass
class WeylRow:
    m: tuple
    T: float
    W: complex | None
    error: str = ""

    @property
    def abs(self) -> float:
        return abs(self.W) if self.W is not None else float("nan")


@dataclass
class WeylReport:
    rows: list
    verdict: str = ""
    bar: float = 0.02
    probe: dict = dc_field(default_factory=dict)
    label: str = ""

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "T", "re_W", "im_W", "abs_W"])
        for r in self.rows:
            if r.W is None:
                w.writerow([";".join(map(str, r.m)), repr(r.T), "", "", ""])
            else:
                w.writerow([";".join(map(str, r.m)), repr(r.T), repr(r.W.real),
                            repr(r.W.imag), repr(abs(r.W))])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "format": 1,
            "curve": self.label,
            "verdict": self.verdict,
            "thresholds": {"bar": self.bar, "growth_slack": self.bar / 10},
            "max_abs_W_at_T_max": max((r.abs for r in self.rows if r.T == self._tmax()),
                                      default=None),
            "probe": {";".join(map(str, m)): vals for m, vals in self.probe.items()},
            "failures": [{"m": list(r.m), "T": r.T, "error": r.error}
                         for r in self.rows if r.W is None],
        }

    def _tmax(self):
        return max((r.T for r in self.rows), default=None)


def cud_verdict_polynomial(sigma: MonomialCurve) -> dict:
    """Exact verdict for a polynomial curve: c.u.d. iff dense iff no integer m kills it."""
    closure = torus_curve_closure(sigma)
    return {"cud": closure.dense, "dense": closure.dense,
            "witnesses": [list(w) for w in closure.witnesses]}


def _probe(curve: NumericCurve, m, t_max: float) -> list:
    """t·<m, sigma'(t)> sampled at t = 10^k, k = 0..log10(t_max)."""
    kmax = max(0, int(math.floor(math.log10(t_max))))
    ts = 10.0 ** np.arange(kmax + 1)
    vals = ts * (curve.deriv(ts) @ np.asarray(m, dtype=float))
    return [float(v) for v in vals]


def cud_numeric(curve: NumericCurve, ms: Sequence, Ts: Sequence, bar: float = 0.02,
                tol: float = 1e-6, workers: int | None = None) -> WeylReport:
    """Tabulate Weyl sums over (m, T) and give a heuristic verdict.

    "cud-consistent" needs every |W(m, T_max)| < bar and, per m, no value at
    a later T exceeding the largest earlier value by more than bar/10.
    Otherwise "not-cud".
    """
    Ts = sorted(float(T) for T in Ts)
    ms = [tuple(int(x) for x in m) for m in ms]
    cells = [(m, T) for m in ms for T in Ts]

    def run(cell):
        m, T = cell
        try:
            return WeylRow(m, T, weyl_sum(curve, m, T, tol))
        except QuadratureError as exc:
            return WeylRow(m, T, None, str(exc))

    workers = workers or thread_cap()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, cells))
    else:
        rows = [run(c) for c in cells]

    consistent = all(r.W is not None for r in rows)
    for m in ms:
        vals = [r.abs for r in rows if r.m == m]
        if not consistent:
            break
        if vals[-1] >= bar:
            consistent = False
        elif any(v > max(vals[:k]) + bar / 10 for k, v in enumerate(vals) if k):
            consistent = False
    probe = {m: _probe(curve, m, Ts[-1]) for m in ms}
    return WeylReport(rows, "cud-consistent" if consistent else "not-cud", bar, probe, curve.label)
