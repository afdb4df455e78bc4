"""Parametric bivariate families and their marginal laws.

Covers the bivariate normal, an elliptical Student-t, and three
heavy-tailed bivariate Pareto constructions built from ratios of
exponential (idiosyncratic) and gamma (background) variates:

  BVP1: exchangeable margins, linear regression,
        joint ddf (1 + x~ + y~)^(-delta)
  BVP2: non-exchangeable margins, still linear regression,
        joint ddf (1 + x~ + y~)^(-delta) (1 + y~)^(-delta_y)
  BVP3: non-exchangeable margins, no linear regression,
        joint ddf (1 + x~ + y~)^(-delta) (1 + x~)^(-delta_x) (1 + y~)^(-delta_y)

where x~ = (x - mu_x) / sigma_x, y~ = (y - mu_y) / sigma_y.  Samplers draw
exactly from the stochastic representations, so they are independent of
every density/ddf formula here and act as one side of the validation
triangle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy import stats as sps

from .errors import DomainError, MomentError, UnsupportedPairError, NoLinearRegressionError

# Deterministic evaluation of the Student-t joint cdf (its Genz integrator
# is randomized); fixed stream keeps CLI output byte-identical.
_T_CDF_SEED = 20160913


# ---------------------------------------------------------------------------
# samples
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairedSample:
    """Two equal-length observation vectors with a provenance record."""

    xs: np.ndarray
    ys: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        xs = np.asarray(self.xs, dtype=float)
        ys = np.asarray(self.ys, dtype=float)
        if xs.ndim != 1 or ys.ndim != 1 or xs.size != ys.size:
            raise DomainError("paired sample needs two equal-length 1-d arrays")
        if xs.size < 3:
            raise DomainError(f"paired sample needs n >= 3, got {xs.size}")
        if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
            raise DomainError("paired sample values must be finite")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return self.xs.size

    def swapped(self) -> "PairedSample":
        return PairedSample(self.ys, self.xs, dict(self.meta, swapped=True))


# ---------------------------------------------------------------------------
# margins
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParetoIIMargin:
    """Pareto of the 2nd kind: ddf (1 + (x - mu)/sigma)^(-delta) for x > mu.

    Mean finite iff delta > 1, variance finite iff delta > 2.
    """

    mu: float
    sigma: float
    delta: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not self.delta > 0.0:
            raise DomainError(f"delta must be > 0, got {self.delta}")

    def ddf(self, x):
        z = np.maximum((np.asarray(x, dtype=float) - self.mu) / self.sigma, 0.0)
        out = (1.0 + z) ** (-self.delta)
        return float(out) if np.ndim(x) == 0 else out

    def cdf(self, x):
        return 1.0 - self.ddf(x)

    def quantile(self, u):
        """Inverse c.d.f.: mu + sigma ((1-u)^(-1/delta) - 1) for u in [0, 1)."""
        arr = np.asarray(u, dtype=float)
        if arr.size and (arr.min() < 0.0 or arr.max() >= 1.0):
            raise DomainError("quantile argument must lie in [0, 1)")
        out = self.mu + self.sigma * ((1.0 - arr) ** (-1.0 / self.delta) - 1.0)
        return float(out) if np.ndim(u) == 0 else out

    def mean(self) -> float:
        if self.delta <= 1.0:
            raise MomentError(f"Pareto mean infinite for delta={self.delta} <= 1")
        return self.mu + self.sigma / (self.delta - 1.0)


@dataclass(frozen=True)
class NormalMargin:
    mu: float
    sigma: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")

    def ddf(self, x):
        return sps.norm.sf(x, loc=self.mu, scale=self.sigma)

    def cdf(self, x):
        return sps.norm.cdf(x, loc=self.mu, scale=self.sigma)

    def quantile(self, u):
        return sps.norm.ppf(u, loc=self.mu, scale=self.sigma)

    def mean(self) -> float:
        return self.mu


@dataclass(frozen=True)
class StudentTMargin:
    """Location-scale Student t; `sigma` is the dispersion scale, not the s.d."""

    mu: float
    sigma: float
    nu: float

    def __post_init__(self):
        if not self.sigma > 0.0:
            raise DomainError(f"sigma must be > 0, got {self.sigma}")
        if not self.nu > 1.0:
            raise DomainError(f"need nu > 1 for a finite mean, got {self.nu}")

    def ddf(self, x):
        return sps.t.sf(x, df=self.nu, loc=self.mu, scale=self.sigma)

    def cdf(self, x):
        return sps.t.cdf(x, df=self.nu, loc=self.mu, scale=self.sigma)

    def quantile(self, u):
        return sps.t.ppf(u, df=self.nu, loc=self.mu, scale=self.sigma)

    def mean(self) -> float:
        return self.mu


# ---------------------------------------------------------------------------
# families
# ---------------------------------------------------------------------------

def _require_positive(**kwargs):
    for name, value in kwargs.items():
        if not value > 0.0:
            raise DomainError(f"{name} must be > 0, got {value}")


@dataclass(frozen=True)
class Normal:
    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        _require_positive(sigma_x=self.sigma_x, sigma_y=self.sigma_y)
        if not abs(self.rho) < 1.0:
            raise DomainError(f"|rho| must be < 1, got {self.rho}")

    def describe(self) -> str:
        return (f"normal(mu_x={self.mu_x:g}, mu_y={self.mu_y:g}, "
                f"sigma_x={self.sigma_x:g}, sigma_y={self.sigma_y:g}, rho={self.rho:g})")


@dataclass(frozen=True)
class EllipticalT:
    """Bivariate Student t with dispersion matrix [[sx^2, sxy], [sxy, sy^2]].

    The dispersion entries are not variances (those are nu/(nu-2) times
    larger and only exist for nu > 2), which is exactly why this family
    exercises the weighted-Gini machinery where Pearson may not exist.
    """

    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    sigma_xy: float = 0.0
    nu: float = 3.0

    def __post_init__(self):
        _require_positive(sigma_x=self.sigma_x, sigma_y=self.sigma_y)
        if not self.nu > 1.0:
            raise DomainError(f"need nu > 1, got {self.nu}")
        det = self.sigma_x ** 2 * self.sigma_y ** 2 - self.sigma_xy ** 2
        if not det > 0.0:
            raise DomainError("dispersion matrix must be positive definite")

    @property
    def dispersion(self) -> np.ndarray:
        return np.array([[self.sigma_x ** 2, self.sigma_xy],
                         [self.sigma_xy, self.sigma_y ** 2]])

    def describe(self) -> str:
        return (f"elliptical_t(mu_x={self.mu_x:g}, mu_y={self.mu_y:g}, "
                f"sigma_x={self.sigma_x:g}, sigma_y={self.sigma_y:g}, "
                f"sigma_xy={self.sigma_xy:g}, nu={self.nu:g})")


@dataclass(frozen=True)
class BVP1:
    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    delta: float = 2.0

    def __post_init__(self):
        _require_positive(sigma_x=self.sigma_x, sigma_y=self.sigma_y, delta=self.delta)

    def describe(self) -> str:
        return (f"bvp1(mu_x={self.mu_x:g}, mu_y={self.mu_y:g}, "
                f"sigma_x={self.sigma_x:g}, sigma_y={self.sigma_y:g}, delta={self.delta:g})")


@dataclass(frozen=True)
class BVP2:
    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    delta: float = 2.0
    delta_y: float = 1.0

    def __post_init__(self):
        _require_positive(sigma_x=self.sigma_x, sigma_y=self.sigma_y,
                          delta=self.delta, delta_y=self.delta_y)

    @property
    def delta_y_star(self) -> float:
        """Tail index of the Y margin."""
        return self.delta + self.delta_y

    def describe(self) -> str:
        return (f"bvp2(mu_x={self.mu_x:g}, mu_y={self.mu_y:g}, "
                f"sigma_x={self.sigma_x:g}, sigma_y={self.sigma_y:g}, "
                f"delta={self.delta:g}, delta_y={self.delta_y:g})")


@dataclass(frozen=True)
class BVP3:
    mu_x: float = 0.0
    mu_y: float = 0.0
    sigma_x: float = 1.0
    sigma_y: float = 1.0
    delta: float = 2.0
    delta_x: float = 1.0
    delta_y: float = 1.0

    def __post_init__(self):
        _require_positive(sigma_x=self.sigma_x, sigma_y=self.sigma_y,
                          delta=self.delta, delta_x=self.delta_x, delta_y=self.delta_y)

    @property
    def delta_x_star(self) -> float:
        return self.delta + self.delta_x

    @property
    def delta_y_star(self) -> float:
        return self.delta + self.delta_y

    def describe(self) -> str:
        return (f"bvp3(mu_x={self.mu_x:g}, mu_y={self.mu_y:g}, "
                f"sigma_x={self.sigma_x:g}, sigma_y={self.sigma_y:g}, "
                f"delta={self.delta:g}, delta_x={self.delta_x:g}, delta_y={self.delta_y:g})")


BivariateFamily = Union[Normal, EllipticalT, BVP1, BVP2, BVP3]


def margins(f: BivariateFamily):
    """Marginal laws (x_margin, y_margin) of the family."""
    if isinstance(f, Normal):
        return NormalMargin(f.mu_x, f.sigma_x), NormalMargin(f.mu_y, f.sigma_y)
    if isinstance(f, EllipticalT):
        return (StudentTMargin(f.mu_x, f.sigma_x, f.nu),
                StudentTMargin(f.mu_y, f.sigma_y, f.nu))
    if isinstance(f, BVP1):
        return (ParetoIIMargin(f.mu_x, f.sigma_x, f.delta),
                ParetoIIMargin(f.mu_y, f.sigma_y, f.delta))
    if isinstance(f, BVP2):
        return (ParetoIIMargin(f.mu_x, f.sigma_x, f.delta),
                ParetoIIMargin(f.mu_y, f.sigma_y, f.delta_y_star))
    if isinstance(f, BVP3):
        return (ParetoIIMargin(f.mu_x, f.sigma_x, f.delta_x_star),
                ParetoIIMargin(f.mu_y, f.sigma_y, f.delta_y_star))
    raise DomainError(f"unknown family {f!r}")


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def _draw(f: BivariateFamily, n: int, rng: np.random.Generator):
    if isinstance(f, Normal):
        z1 = rng.standard_normal(n)
        z2 = rng.standard_normal(n)
        x = f.mu_x + f.sigma_x * z1
        y = f.mu_y + f.sigma_y * (f.rho * z1 + math.sqrt(1.0 - f.rho ** 2) * z2)
        return x, y
    if isinstance(f, EllipticalT):
        chol = np.linalg.cholesky(f.dispersion)
        z = rng.standard_normal((2, n))
        w = rng.chisquare(f.nu, n) / f.nu
        g = (chol @ z) / np.sqrt(w)
        return f.mu_x + g[0], f.mu_y + g[1]
    if isinstance(f, BVP1):
        ex = rng.standard_exponential(n)
        ey = rng.standard_exponential(n)
        g = rng.standard_gamma(f.delta, n)
        return f.mu_x + f.sigma_x * ex / g, f.mu_y + f.sigma_y * ey / g
    if isinstance(f, BVP2):
        ex = rng.standard_exponential(n)
        ey = rng.standard_exponential(n)
        g = rng.standard_gamma(f.delta, n)
        gy = rng.standard_gamma(f.delta_y, n)
        return f.mu_x + f.sigma_x * ex / g, f.mu_y + f.sigma_y * ey / (gy + g)
    if isinstance(f, BVP3):
        ex = rng.standard_exponential(n)
        ey = rng.standard_exponential(n)
        g = rng.standard_gamma(f.delta, n)
        gx = rng.standard_gamma(f.delta_x, n)
        gy = rng.standard_gamma(f.delta_y, n)
        return f.mu_x + f.sigma_x * ex / (gx + g), f.mu_y + f.sigma_y * ey / (gy + g)
    raise DomainError(f"unknown family {f!r}")


def chunk_seeds(seed: int, n_chunks: int):
    """Counter-derived child seeds for partitioned parallel generation."""
    return [np.random.SeedSequence(entropy=seed, spawn_key=(i,))
            for i in range(n_chunks)]


def sample(f: BivariateFamily, n: int, seed: int) -> PairedSample:
    """n i.i.d. pairs from the family's exact stochastic representation.

    Deterministic for a fixed seed; the BVP families are generated from
    ratios of unit exponentials over gamma background variates, never from
    their ddf formulas.  n >= 3 because PairedSample carries that invariant.
    """
    if n < 3:
        raise DomainError(f"need n >= 3 for a paired sample, got {n}")
    rng = np.random.default_rng(seed)
    x, y = _draw(f, n, rng)
    return PairedSample(x, y, {"family": f.describe(), "seed": int(seed), "n": int(n)})


def sample_chunked(f: BivariateFamily, n: int, seed: int,
                   n_chunks: int) -> PairedSample:
    """Like `sample`, but generated in n_chunks independent sub-streams.

    Each chunk uses a child seed derived from (seed, chunk index), so the
    chunks can be produced by concurrent workers and concatenated in index
    order with a reproducible result.
    """
    if n_chunks < 1 or n < n_chunks:
        raise DomainError("need 1 <= n_chunks <= n")
    bounds = np.linspace(0, n, n_chunks + 1).astype(int)
    xs, ys = [], []
    for ss, lo, hi in zip(chunk_seeds(seed, n_chunks), bounds[:-1], bounds[1:]):
        x, y = _draw(f, int(hi - lo), np.random.default_rng(ss))
        xs.append(x)
        ys.append(y)
    return PairedSample(np.concatenate(xs), np.concatenate(ys),
                        {"family": f.describe(), "seed": int(seed), "n": int(n),
                         "n_chunks": int(n_chunks)})


# ---------------------------------------------------------------------------
# joint ddf
# ---------------------------------------------------------------------------

def joint_ddf(f: BivariateFamily, x, y):
    """P[X > x, Y > y].

    Product form for the Pareto families (with inputs at or below the
    location boundary clamped, so the value degrades continuously to the
    marginal ddf); Genz-algorithm survival evaluation for the elliptical
    families via P[X > x, Y > y] = F_{(-X,-Y)}(-x, -y).
    """
    if isinstance(f, (BVP1, BVP2, BVP3)):
        xt = np.maximum((np.asarray(x, dtype=float) - f.mu_x) / f.sigma_x, 0.0)
        yt = np.maximum((np.asarray(y, dtype=float) - f.mu_y) / f.sigma_y, 0.0)
        out = (1.0 + xt + yt) ** (-f.delta)
        if isinstance(f, (BVP2, BVP3)):
            out = out * (1.0 + yt) ** (-f.delta_y)
        if isinstance(f, BVP3):
            out = out * (1.0 + xt) ** (-f.delta_x)
        return float(out) if (np.ndim(x) == 0 and np.ndim(y) == 0) else out

    xb, yb = np.broadcast_arrays(np.asarray(x, dtype=float),
                                 np.asarray(y, dtype=float))
    pts = np.column_stack([-np.atleast_1d(xb).ravel(), -np.atleast_1d(yb).ravel()])
    if isinstance(f, Normal):
        cov = np.array([[f.sigma_x ** 2, f.rho * f.sigma_x * f.sigma_y],
                        [f.rho * f.sigma_x * f.sigma_y, f.sigma_y ** 2]])
        vals = sps.multivariate_normal(mean=[-f.mu_x, -f.mu_y], cov=cov).cdf(pts)
    elif isinstance(f, EllipticalT):
        vals = sps.multivariate_t(loc=[-f.mu_x, -f.mu_y], shape=f.dispersion,
                                  df=f.nu, seed=_T_CDF_SEED).cdf(pts)
    else:
        raise DomainError(f"unknown family {f!r}")
    vals = np.clip(np.atleast_1d(vals), 0.0, 1.0)
    if np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(vals[0])
    return vals.reshape(xb.shape)


# ---------------------------------------------------------------------------
# regression line, Pearson, BVP3 density terms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegressionLine:
    """Coefficients of E[X | Y] = alpha + beta Y."""

    alpha: float
    beta: float


def regression_line(f: BivariateFamily) -> RegressionLine:
    """The (alpha, beta) of the family's linear regression of X on Y.

    BVP3 has no linear regression function and raises; infinite-mean
    parameter regimes raise MomentError.
    """
    if isinstance(f, Normal):
        beta = f.rho * f.sigma_x / f.sigma_y
        return RegressionLine(f.mu_x - beta * f.mu_y, beta)
    if isinstance(f, EllipticalT):
        beta = f.sigma_xy / f.sigma_y ** 2
        return RegressionLine(f.mu_x - beta * f.mu_y, beta)
    if isinstance(f, BVP1):
        if f.delta <= 1.0:
            raise MomentError(f"regression needs delta > 1, got {f.delta}")
        beta = f.sigma_x / (f.delta * f.sigma_y)
        alpha = f.mu_x + (f.sigma_x / f.delta) * (1.0 - f.mu_y / f.sigma_y)
        return RegressionLine(alpha, beta)
    if isinstance(f, BVP2):
        if f.delta <= 1.0:
            raise MomentError(f"regression needs delta > 1, got {f.delta}")
        dys = f.delta_y_star
        alpha0 = f.sigma_x * (dys - 1.0) / (dys * (f.delta - 1.0))
        beta = alpha0 / f.sigma_y
        return RegressionLine(f.mu_x + alpha0 - beta * f.mu_y, beta)
    if isinstance(f, BVP3):
        raise NoLinearRegressionError(
            "BVP3 has no linear regression function of X on Y"
        )
    raise DomainError(f"unknown family {f!r}")


def pearson_closed_form(f: BivariateFamily) -> float:
    """Population Pearson correlation, where the second moments exist."""
    if isinstance(f, Normal):
        return f.rho
    if isinstance(f, EllipticalT):
        if f.nu <= 2.0:
            raise MomentError(f"Pearson needs nu > 2, got {f.nu}")
        return f.sigma_xy / (f.sigma_x * f.sigma_y)
    if isinstance(f, BVP1):
        if f.delta <= 2.0:
            raise MomentError(f"Pearson needs delta > 2, got {f.delta}")
        return 1.0 / f.delta
    if isinstance(f, BVP2):
        dys = f.delta_y_star
        if f.delta <= 2.0 or dys <= 2.0:
            raise MomentError(
                f"Pearson needs delta > 2 and delta_y* > 2, got {f.delta}, {dys}"
            )
        return math.sqrt((f.delta - 2.0) / (f.delta * dys * (dys - 2.0)))
    if isinstance(f, BVP3):
        raise UnsupportedPairError(
            "no closed-form Pearson for BVP3 here; use a Monte Carlo reference",
            suggestion="oracle.mc_reference(f, 'pearson', ...)",
        )
    raise DomainError(f"unknown family {f!r}")


# Triplets (i1, i2, i3) with i1 + i2 + i3 = 2, in a fixed deterministic order.
BVP3_TRIPLETS = ((0, 0, 2), (0, 1, 1), (1, 0, 1), (1, 1, 0), (2, 0, 0), (0, 2, 0))


def bvp3_pdf_terms(f: BVP3):
    """Coefficients d_i of the standardized BVP3 joint density.

    p(x, y) = sum_i d_i (1+x)^-(delta_x+i1) (1+y)^-(delta_y+i2)
                        (1+x+y)^-(delta+i3)  over triplets i1+i2+i3 = 2.

    Obtained as the mixed partial d^2 Fbar / dx dy of the joint ddf; the
    nonzero coefficients are delta(delta+1), delta*delta_y, delta*delta_x
    and delta_x*delta_y, and the density integrates to one exactly.
    """
    if not isinstance(f, BVP3):
        raise DomainError("bvp3_pdf_terms requires a BVP3 family")
    d = f.delta
    coeff = {
        (0, 0, 2): d * (d + 1.0),
        (0, 1, 1): d * f.delta_y,
        (1, 0, 1): d * f.delta_x,
        (1, 1, 0): f.delta_x * f.delta_y,
    }
    return [(trip, coeff.get(trip, 0.0)) for trip in BVP3_TRIPLETS]
