"""Independent brute-force validators.

Deterministic adaptive quadrature in the quantile domain (which tames the
Pareto tails: the integrand lives on (0,1) with at worst an integrable
endpoint singularity), tensor-product quadrature over the transformed unit
square for the three-index Pareto family, and seeded Monte Carlo reference
estimates whose standard errors come from replication spread rather than
within-run asymptotics (heavy tails make the latter unreliable).

Everything here is trusted *before* any closed form and arbitrates them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .distributions import (
    BVP3,
    BivariateFamily,
    PairedSample,
    bvp3_pdf_terms,
    chunk_seeds,
    margins,
    _draw,
)
from .errors import DegenerateSampleError, DomainError, MomentError, QuadratureError
from .weights import WeightFunction


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 10_000

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


DEFAULT_QUAD = QuadratureSpec()


def _quad01(fn, spec: QuadratureSpec, what: str) -> float:
    """Adaptive quadrature of fn over (0, 1) with failure escalation."""
    res = integrate.quad(fn, 0.0, 1.0, epsabs=spec.abs_tol, epsrel=spec.rel_tol,
                         limit=spec.max_subdivisions, full_output=1)
    value, abserr = res[0], res[1]
    if len(res) > 3:
        raise QuadratureError(
            f"quadrature for {what} did not converge: {res[3]}",
            estimate=value, error_estimate=abserr,
        )
    return value


def quad_cov_margin(margin, w: WeightFunction,
                    spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Cov[X, w(1 - F_X(X))] by quantile-domain quadrature.

    Uses Cov = int_0^1 Q(u) w(1-u) du - (int Q)(int w(1-u)); `margin` is any
    object with a `quantile(u)` method. Requires a finite mean.
    """
    q = margin.quantile
    exw = _quad01(lambda u: float(q(u)) * w(1.0 - u), spec, "E[X w(1-F(X))]")
    ex = _quad01(lambda u: float(q(u)), spec, "E[X]")
    ew = _quad01(lambda u: w(1.0 - u), spec, "E[w(1-F(X))]")
    return exw - ex * ew


def quad_mean_weight(w: WeightFunction, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """int_0^1 w(u) du by quadrature (independent of WeightFunction.mean_on_unit)."""
    return _quad01(lambda u: w(u), spec, "int w")


# ---------------------------------------------------------------------------
# BVP3 double-integral oracle
# ---------------------------------------------------------------------------

def _bvp3_term_integral(d_x: float, d_y: float, d: float, gamma: float,
                        trip, spec: QuadratureSpec, with_x: bool) -> float:
    """One density term integrated over the positive quadrant.

    Transformed to the unit square by x = s/(1-s), y = t/(1-t); with_x adds
    the x * (1 - F_Y(y))^gamma factor of the weighted moment.
    """
    i1, i2, i3 = trip
    dys = d + d_y
    if with_x:
        ps = d_x + i1 + d + i3 - 3.0
        pt = d_y + i2 + gamma * dys + d + i3 - 2.0
    else:
        ps = d_x + i1 + d + i3 - 2.0
        pt = d_y + i2 + d + i3 - 2.0
    pc = d + i3

    def inner(t):
        tf = (1.0 - t) ** pt

        def f(s):
            base = (1.0 - s) ** ps * (1.0 - s * t) ** (-pc)
            return s * base if with_x else base

        val = integrate.quad(f, 0.0, 1.0, epsabs=spec.abs_tol * 1e-2,
                             epsrel=spec.rel_tol * 1e-2,
                             limit=spec.max_subdivisions)[0]
        return val * tf

    return _quad01(inner, spec, f"BVP3 term {trip}")


def bvp3_density_integral(f: BVP3, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Integral of the BVP3 density terms over the positive quadrant (should be 1)."""
    return sum(
        coeff * _bvp3_term_integral(f.delta_x, f.delta_y, f.delta, 0.0, trip,
                                    spec, with_x=False)
        for trip, coeff in bvp3_pdf_terms(f) if coeff != 0.0
    )


def quad2_bvp3_moment(f: BVP3, gamma: float,
                      spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Oracle extended Gini correlation for BVP3, built from quadrature only.

    The numerator covariance comes from the 2-d integral of
    x (1 - F_Y(y))^gamma against the density terms plus the exact uniform
    moments E[(1-F)^gamma] = 1/(gamma+1) and E[X - mu_X] = sigma_X/(dX*-1);
    the denominator covariance is 1-d quantile-domain quadrature, so no
    hypergeometric machinery is involved anywhere.
    """
    if not gamma > 0.0:
        raise DomainError(f"gamma must be > 0, got {gamma}")
    dxs = f.delta_x_star
    if dxs <= 1.0:
        raise MomentError(f"needs delta_x* > 1 for a finite mean, got {dxs}")
    moment = sum(
        coeff * _bvp3_term_integral(f.delta_x, f.delta_y, f.delta, gamma, trip,
                                    spec, with_x=True)
        for trip, coeff in bvp3_pdf_terms(f) if coeff != 0.0
    )
    cov_num = moment - 1.0 / ((dxs - 1.0) * (gamma + 1.0))
    x_margin, _ = margins(f)
    std_x = type(x_margin)(0.0, 1.0, x_margin.delta)
    cov_den = quad_cov_margin(std_x, WeightFunction.power(gamma), spec)
    return cov_num / cov_den


# ---------------------------------------------------------------------------
# Monte Carlo reference
# ---------------------------------------------------------------------------

MC_STATISTICS = ("cw", "pearson", "gini_premium")


def mc_reference(f: BivariateFamily, statistic: str, n: int, seed: int,
                 replications: int, weight: WeightFunction | None = None):
    """Replicated Monte Carlo estimate of a statistic under the family.

    Returns (mean, std_error) with the standard error taken from the spread
    of the replication values. Deterministic for a fixed seed: replication
    r uses the child seed (seed, r).
    """
    from . import gini as _gini  # deferred: gini imports this module
    from . import wipm as _wipm

    if statistic not in MC_STATISTICS:
        raise DomainError(f"unknown statistic {statistic!r}; pick from {MC_STATISTICS}")
    if statistic != "pearson" and weight is None:
        raise DomainError(f"statistic {statistic!r} needs a weight function")
    if n < 1000:
        raise DomainError(f"need n >= 1000 per replication, got {n}")
    if replications < 10:
        raise DomainError(f"need >= 10 replications, got {replications}")

    values = np.empty(replications)
    for r, ss in enumerate(chunk_seeds(seed, replications)):
        x, y = _draw(f, n, np.random.default_rng(ss))
        s = PairedSample(x, y, {"family": f.describe(), "seed": seed, "rep": r})
        try:
            if statistic == "cw":
                values[r] = _gini.empirical_cw(s, weight, n_boot=0).value
            elif statistic == "pearson":
                values[r] = _gini.empirical_pearson(s, n_boot=0).value
            else:
                values[r] = _wipm.gini_premium(s, weight).premium
        except DegenerateSampleError as exc:
            raise DegenerateSampleError(
                f"statistic {statistic!r} undefined on replication {r}: {exc}"
            ) from exc
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(replications))
