"""Extraction of the per-layer decay rate from empirical likelihood curves.

The protocol sweeps the ansatz angle so a target term's expectation takes
prescribed values, measures the even-parity rate of the L-layer circuit at
each, and fits the single decay parameter of the parity model by weighted
least squares.  Fitting many depths and comparing the recovered rates is
the device-stability diagnostic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .inference import IdentifiabilityError, chebyshev_parity_probability
from .pauli import AnsatzSpec, PauliString, angle_for_expectation
from .simulator import RAECircuitSpec, sample_parities

FORMAT_VERSION = 1

# curves whose Chebyshev values are all this small carry no decay signal
FLAT_TOL = 1e-12

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class FitError(RuntimeError):
    """The least-squares minimizer exhausted its iteration budget."""


@dataclass(frozen=True)
class CurvePoint:
    pi: float
    p_even: float
    std_err: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.pi <= 1.0:
            raise ValueError("pi must lie in [0, 1]")
        if not 0.0 <= self.p_even <= 1.0:
            raise ValueError("p_even must lie in [0, 1]")
        if not self.std_err > 0.0:
            raise ValueError("std_err must be positive")


@dataclass(frozen=True)
class LikelihoodCurve:
    """Even-parity rates of one circuit depth over a sweep of amplitudes."""

    layers: int
    points: tuple[CurvePoint, ...]

    def __post_init__(self) -> None:
        if self.layers < 0:
            raise ValueError("layers must be non-negative")
        if len(self.points) < 3:
            raise ValueError("curve needs at least 3 points")
        pis = [p.pi for p in self.points]
        if len(set(pis)) != len(pis):
            raise ValueError("pi values must be distinct")

    def to_dict(self) -> dict:
        return {
            "version": FORMAT_VERSION,
            "L": self.layers,
            "points": [
                {"pi": p.pi, "p_even": p.p_even, "std_err": p.std_err}
                for p in self.points
            ],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LikelihoodCurve":
        if doc.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported curve format version {doc.get('version')!r}")
        points = tuple(
            CurvePoint(float(p["pi"]), float(p["p_even"]), float(p["std_err"]))
            for p in doc["points"]
        )
        return cls(layers=int(doc["L"]), points=points)


def save_curve(path: str, curve: LikelihoodCurve) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(curve.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_curve(path: str) -> LikelihoodCurve:
    with open(path, encoding="utf-8") as fh:
        return LikelihoodCurve.from_dict(json.load(fh))


@dataclass(frozen=True)
class LambdaFit:
    lambda_hat: float
    delta_lambda: float
    chi_square: float


def _curve_arrays(curve: LikelihoodCurve) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    pis = np.array([p.pi for p in curve.points])
    rates = np.array([p.p_even for p in curve.points])
    weights = np.array([p.std_err for p in curve.points]) ** -2.0
    return pis, rates, weights


def fit_lambda(curve: LikelihoodCurve, lambda_max: float = 5.0,
               tol: float = 1e-12, max_iter: int = 500) -> LambdaFit:
    """Weighted least-squares decay fit with a linearized error bar.

    The objective chi^2(lam) = sum_i w_i (p_i - P_L(0 | pi_i, lam))^2 is
    minimized over [0, lambda_max] by a coarse scan, golden-section
    shrinking of the bracket, and one parabolic refinement step.  The
    error bar is the Gauss-Newton one: delta = 1 / sqrt(sum_i J_i^2 / s_i^2)
    with J = dP/dlam at the optimum.
    """
    pis, rates, weights = _curve_arrays(curve)
    half_order = curve.layers + 0.5
    cheb = np.cos((2 * curve.layers + 1) * np.arccos(pis))
    if np.max(np.abs(cheb)) < FLAT_TOL:
        raise IdentifiabilityError(
            "curve carries no decay signal: the boosted amplitude vanishes "
            "at every sweep point, so lambda does not affect the model"
        )

    def objective(lam: float) -> float:
        model = 0.5 * (1.0 + np.exp(-lam * half_order) * cheb)
        return float(np.sum(weights * (rates - model) ** 2))

    # coarse scan pins the basin; the model is smooth and unimodal in the
    # decay factor, so 201 points over the full range is ample
    scan = np.linspace(0.0, lambda_max, 201)
    values = [objective(l) for l in scan]
    center = int(np.argmin(values))
    lo = scan[max(center - 1, 0)]
    hi = scan[min(center + 1, len(scan) - 1)]

    a, b = lo, hi
    x1 = b - GOLDEN * (b - a)
    x2 = a + GOLDEN * (b - a)
    f1, f2 = objective(x1), objective(x2)
    iterations = 0
    while b - a > tol:
        if iterations >= max_iter:
            raise FitError(
                f"no convergence after {max_iter} iterations; bracket "
                f"[{a:.3e}, {b:.3e}], residual {min(f1, f2):.3e}"
            )
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - GOLDEN * (b - a)
            f1 = objective(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + GOLDEN * (b - a)
            f2 = objective(x2)
        iterations += 1
    best = x1 if f1 < f2 else x2
    best_value = min(f1, f2)

    # parabolic polish through (a, best, b); degenerate spacing falls back
    # to the golden-section answer
    fa, fb = objective(a), objective(b)
    denom = (a - best) * (fb - best_value) - (b - best) * (fa - best_value)
    if abs(denom) > 0.0:
        num = (a - best) ** 2 * (fb - best_value) - (b - best) ** 2 * (fa - best_value)
        candidate = best + 0.5 * num / denom
        if 0.0 <= candidate <= lambda_max and objective(candidate) < best_value:
            best = candidate
            best_value = objective(candidate)
    lambda_hat = max(float(best), 0.0)

    jac = -0.5 * half_order * math.exp(-lambda_hat * half_order) * cheb
    curvature = float(np.sum(weights * jac ** 2))
    if curvature <= 0.0:
        raise IdentifiabilityError("zero curvature at the optimum; lambda unidentifiable")
    return LambdaFit(
        lambda_hat=lambda_hat,
        delta_lambda=1.0 / math.sqrt(curvature),
        chi_square=best_value,
    )


@dataclass(frozen=True)
class ProfileRow:
    layers: int
    lambda_hat: float
    delta_lambda: float


@dataclass(frozen=True)
class LambdaProfile:
    """Per-depth decay fits plus the cross-depth stability metric."""

    rows: tuple[ProfileRow, ...]
    variation: float
    unstable: bool


def lambda_profile(curves, instability_threshold: float = 0.20,
                   lambda_max: float = 5.0) -> LambdaProfile:
    """Fit every curve and report (max - min)/min relative variation."""
    curves = list(curves)
    if not curves:
        raise ValueError("need at least one curve")
    depths = [c.layers for c in curves]
    if len(set(depths)) != len(depths):
        raise ValueError("curves must have distinct layer counts")
    rows = []
    for c in curves:
        fit = fit_lambda(c, lambda_max=lambda_max)
        rows.append(ProfileRow(c.layers, fit.lambda_hat, fit.delta_lambda))
    rows = tuple(rows)
    lo = min(r.lambda_hat for r in rows)
    hi = max(r.lambda_hat for r in rows)
    if hi == lo:
        variation = 0.0
    elif lo == 0.0:
        variation = math.inf
    else:
        variation = (hi - lo) / lo
    return LambdaProfile(rows=rows, variation=variation,
                         unstable=variation > instability_threshold)


def synthetic_curve(layers: int, lam: float, pi_values=None,
                    std_err: float = 1e-6) -> LikelihoodCurve:
    """Noise-free curve evaluated straight from the parity model."""
    if pi_values is None:
        pi_values = np.linspace(0.0, 1.0, 10)
    points = tuple(
        CurvePoint(float(pi),
                   chebyshev_parity_probability(float(pi), lam, layers, 0),
                   std_err)
        for pi in pi_values
    )
    return LikelihoodCurve(layers=layers, points=points)


def simulate_curve(ansatz_kind: str, target: PauliString, layers: int,
                   lam: float, n_shots: int, seed: int = 0,
                   pi_values=None) -> LikelihoodCurve:
    """Measured curve: sweep the ansatz angle through the prescribed
    amplitudes and sample parity counts from the density-matrix simulator.

    Error bars are binomial with a half-count floor so degenerate rates
    (0 or 1) still carry a positive uncertainty.
    """
    if pi_values is None:
        pi_values = np.linspace(0.0, 1.0, 10)
    pi_values = [float(pi) for pi in pi_values]
    base = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    seeds = base.spawn(len(pi_values))
    points = []
    for pi, child in zip(pi_values, seeds):
        theta = angle_for_expectation(ansatz_kind, target, float(pi))
        spec = RAECircuitSpec(ansatz=AnsatzSpec(ansatz_kind, theta),
                              target=target, layers=layers, lam=lam)
        e_even = sample_parities(spec, n_shots, seed=child)
        rate = e_even / n_shots
        std_err = max(math.sqrt(rate * (1.0 - rate) / n_shots),
                      0.5 / n_shots)
        points.append(CurvePoint(float(pi), rate, std_err))
    return LikelihoodCurve(layers=layers, points=tuple(points))
