"""Premium principles and the Gini-type weighted insurance pricing model.

The economic weighted premium prices X against a reference risk Y through
a value function v:

    Pi_v[X, Y] = E[X v(Y)] / E[v(Y)].

Replacing v by w(1 - F_Y(.)) gives the Gini premium, which stays finite
for infinite-variance risks.  When E[X | Y] is linear, the premium
decomposes into E[X] plus a loading driven by the weighted Gini
correlation (the Gini WIPM identity); pricing each portfolio column
against the aggregate turns the same identity into an additive capital
allocation rule.

Orientation note: the defining weight w(1 - F_Y(Y)) is *decreasing* in Y,
so for comonotone (X, Y) the loading is <= 0.  That orientation is the
default; pass orientation="risk_loading" to price with the reflected
weight w*(F_Y(Y)) = 1 - w(1 - F_Y(Y)) instead, which up-weights large Y
and flips the loading sign.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import rankdata

from . import gini as _gini
from .distributions import BVP3, PairedSample, margins, regression_line
from .errors import (
    DegenerateSampleError,
    DomainError,
    NoLinearRegressionError,
    UnsupportedPairError,
)
from .oracle import DEFAULT_QUAD, QuadratureSpec
from .weights import WeightFunction

ORIENTATIONS = ("survival", "risk_loading")


@dataclass(frozen=True)
class PremiumResult:
    """A premium with its decomposition into base E[X] and loading."""

    premium: float
    base: float
    method: str  # empirical | closed_identity
    detail: dict = field(default_factory=dict)

    @property
    def loading(self) -> float:
        """premium = base + loading, exactly by construction."""
        return self.premium - self.base


@dataclass(frozen=True)
class Portfolio:
    """Named loss columns of common length; the aggregate is their sum."""

    names: tuple
    columns: np.ndarray  # shape (n_obs, n_cols)

    def __post_init__(self):
        cols = np.asarray(self.columns, dtype=float)
        if cols.ndim != 2 or cols.shape[1] != len(self.names):
            raise DomainError("portfolio needs an (n_obs, n_cols) array matching names")
        if cols.shape[0] < 3:
            raise DomainError("portfolio needs at least 3 observations")
        if not np.all(np.isfinite(cols)):
            raise DomainError("portfolio losses must be finite")
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "columns", cols)

    @property
    def aggregate(self) -> np.ndarray:
        return self.columns.sum(axis=1)

    @classmethod
    def from_csv(cls, path) -> "Portfolio":
        """Load from a CSV with one named column per risk."""
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh)
                    if r and not r[0].lstrip().startswith("#")]
        if len(rows) < 2:
            raise DomainError(f"no data rows in {path}")
        names = [c.strip() for c in rows[0]]
        data = np.array([[float(c) for c in r] for r in rows[1:]])
        return cls(tuple(names), data)


def _rank_weights(ys: np.ndarray, w: WeightFunction, orientation: str) -> np.ndarray:
    if orientation not in ORIENTATIONS:
        raise DomainError(f"orientation must be one of {ORIENTATIONS}")
    u = rankdata(ys, method="average") / (ys.size + 1.0)
    wv = w(1.0 - u)
    if orientation == "risk_loading":
        wv = 1.0 - wv
    return wv


def weighted_premium(s: PairedSample, v_of_y) -> PremiumResult:
    """Economic weighted premium: sample analogue of E[X v(Y)] / E[v(Y)].

    `v_of_y` is a non-decreasing value function applied to raw Y values
    (monotonicity is the caller's contract; only non-negativity of the
    computed weights is verified).
    """
    vv = np.asarray(v_of_y(s.ys), dtype=float)
    if vv.shape != s.ys.shape:
        raise DomainError("value function must map the sample elementwise")
    if not np.all(np.isfinite(vv)) or vv.min() < 0.0:
        raise DomainError("value function produced negative or non-finite weights")
    total = vv.sum()
    if total <= 0.0:
        raise DegenerateSampleError("E[v(Y)] estimate is zero")
    premium = float((s.xs @ vv) / total)
    return PremiumResult(premium, float(s.xs.mean()), "empirical",
                         {"n": s.n, "kind": "economic_weighted"})


def gini_premium(s: PairedSample, w: WeightFunction,
                 orientation: str = "survival") -> PremiumResult:
    """Gini economic premium: E[X w(1 - F_Y(Y))] / E[w(1 - F_Y(Y))] on ranks.

    Uses u_i = rank_i/(n+1); exactly invariant under strictly increasing
    transforms of Y and scale-equivariant in X.  See the module docstring
    for the orientation of the weight and the sign of the loading.
    """
    wv = _rank_weights(s.ys, w, orientation)
    if np.ptp(wv) == 0.0:
        raise DegenerateSampleError(
            "weight is constant on the sample's rank range (degenerate ranks)"
        )
    premium = float((s.xs @ wv) / wv.sum())
    return PremiumResult(premium, float(s.xs.mean()), "empirical",
                         {"n": s.n, "orientation": orientation})


def margin_gini_premium(margin, w: WeightFunction,
                        spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Population pi_{G,w}[Y] = E[Y] + Cov[Y, w(1-F_Y)] / E[w(U)] for a margin."""
    ew = w.mean_on_unit()
    cov = _gini._cov_margin_weighted(margin, w, spec)
    return margin.mean() + cov / ew


def gini_wipm_rhs(f_or_s, w: WeightFunction,
                  spec: QuadratureSpec = DEFAULT_QUAD) -> PremiumResult:
    """Right-hand side of the Gini WIPM identity.

    E[X] + C_w[X,Y] (Cov[X, w(1-F_X)] / Cov[Y, w(1-F_Y)]) (pi_{G,w}[Y] - E[Y]),
    valid when E[X | Y] is linear.  Accepts a parametric family (closed
    components, method "closed_identity") or a paired sample (rank plug-ins
    throughout, method "empirical").  The assembled loading slope
    C_w * Cov_X / Cov_Y equals the regression slope beta; for the normal
    family that is rho sqrt(Var X / Var Y), for the elliptical-t family
    sigma_xy / sigma_y^2, both recorded in the detail map.
    """
    if isinstance(f_or_s, PairedSample):
        s = f_or_s
        cw = _gini.empirical_cw(s, w, n_boot=0).value
        dev_x = s.xs - s.xs.mean()
        dev_y = s.ys - s.ys.mean()
        cov_x = dev_x @ w(1.0 - _gini._u_ranks(s.xs)) / s.n
        cov_y = dev_y @ w(1.0 - _gini._u_ranks(s.ys)) / s.n
        if cov_y == 0.0:
            raise DegenerateSampleError("Cov[Y, w(1-F_Y)] estimate is zero")
        pi_y = gini_premium(PairedSample(s.ys, s.ys, dict(s.meta)), w).premium
        ex, ey = float(s.xs.mean()), float(s.ys.mean())
        slope = cw * cov_x / cov_y
        return PremiumResult(ex + slope * (pi_y - ey), ex, "empirical",
                             {"cw": cw, "slope": slope, "pi_y": pi_y})

    f = f_or_s
    if isinstance(f, BVP3):
        raise NoLinearRegressionError(
            "Gini WIPM hypothesis violated: BVP3 has no linear regression of X on Y"
        )
    line = regression_line(f)  # also rejects infinite-mean regimes
    mx, my = margins(f)
    try:
        cw = _gini.closed_cw(f, w).value
    except UnsupportedPairError:
        cw = _gini.cw_via_regression(f, w, spec).value
    cov_x = _gini._cov_margin_weighted(mx, w, spec)
    cov_y = _gini._cov_margin_weighted(my, w, spec)
    pi_y = margin_gini_premium(my, w, spec)
    ex, ey = mx.mean(), my.mean()
    slope = cw * cov_x / cov_y
    return PremiumResult(ex + slope * (pi_y - ey), ex, "closed_identity",
                         {"cw": cw, "slope": slope, "pi_y": pi_y,
                          "regression_beta": line.beta})


def classical_wipm_rhs(s: PairedSample, v_of_y) -> PremiumResult:
    """Right-hand side of the classical (Pearson) WIPM, for comparison runs.

    E[X] + rho[X,Y] sqrt(Var X / Var Y) (pi_v[Y] - E[Y]).  Meaningless for
    infinite-variance populations; that failure mode is the reason the
    Gini variant exists.
    """
    if s.xs.std() == 0.0 or s.ys.std() == 0.0:
        raise DegenerateSampleError("classical WIPM undefined: constant margin")
    rho = float(np.corrcoef(s.xs, s.ys)[0, 1])
    ratio = s.xs.std(ddof=1) / s.ys.std(ddof=1)
    pi_v = weighted_premium(PairedSample(s.ys, s.ys, dict(s.meta)), v_of_y).premium
    ex, ey = float(s.xs.mean()), float(s.ys.mean())
    return PremiumResult(ex + rho * ratio * (pi_v - ey), ex, "empirical",
                         {"rho": rho, "sd_ratio": ratio, "pi_v": pi_v})


def allocate(p: Portfolio, w: WeightFunction,
             orientation: str = "survival") -> list:
    """Capital allocation: price each column against the aggregate S.

    Column j receives E[X_j w(1 - F_S(S))] / E[w(1 - F_S(S))]; by linearity
    of the numerator the allocations sum to the aggregate premium
    pi_{G,w}[S] exactly (up to floating summation).
    """
    if len(p.names) < 2:
        raise DomainError("allocation needs at least 2 columns")
    agg = p.aggregate
    if np.ptp(agg) == 0.0:
        raise DegenerateSampleError("aggregate risk is constant")
    wv = _rank_weights(agg, w, orientation)
    if np.ptp(wv) == 0.0:
        raise DegenerateSampleError("weight is constant on the aggregate's ranks")
    total = wv.sum()
    out = []
    for j, name in enumerate(p.names):
        col = p.columns[:, j]
        out.append(PremiumResult(
            float((col @ wv) / total), float(col.mean()), "empirical",
            {"column": name, "orientation": orientation},
        ))
    return out
