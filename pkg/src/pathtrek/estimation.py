"""Standardized path-coefficient estimation from a correlation matrix.

Each endogenous variable y with parent set P is fit independently by solving
the normal equations R_PP · beta = r_Py, so the whole recursive system is
reproducible from the correlation matrix plus the sample size alone; raw
data never enters.  R² = betaᵀ r_Py and the disturbance scale is
sqrt(1 - R²).
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

from . import numeric
from .errors import (
    DegreesOfFreedomExhausted,
    SingularMatrix,
    VariableMissing,
)
from .pathspec import topological_order

DEFAULT_ALPHA = 0.05


@dataclass(frozen=True)
class EquationFit:
    """One endogenous equation: standardized coefficients and inference."""

    target: str
    parents: tuple
    beta: tuple
    r_squared: float
    disturbance: float
    se: Optional[tuple] = None
    t: Optional[tuple] = None
    p: Optional[tuple] = None
    significant: Optional[tuple] = None

    def coefficient(self, parent):
        return self.beta[self.parents.index(parent)]


@dataclass(frozen=True)
class FittedModel:
    model: "PathModel"
    equations: dict  # target -> EquationFit, in causal order
    correlation: "CorrelationMatrix"
    n: int
    alpha: float = DEFAULT_ALPHA

    def equation(self, target):
        return self.equations[target]

    def r_squared(self):
        return {t: eq.r_squared for t, eq in self.equations.items()}

    def annotated_model(self):
        """The model with every arrow carrying its fitted coefficient."""
        coeffs = {}
        for eq in self.equations.values():
            for parent, b in zip(eq.parents, eq.beta):
                coeffs[(parent, eq.target)] = b
        return self.model.with_coefficients(coeffs)

    @property
    def has_inference(self):
        return all(eq.se is not None for eq in self.equations.values())


def fit_standardized(corr, m):
    """Fit every endogenous equation of model `m` against `corr`.

    Equations are independent, estimated in causal order.  Raises
    VariableMissing when the model names a variable absent from the matrix
    and SingularMatrix (tagged with the equation) when a parent block cannot
    be solved.
    """
    for v in m.variables:
        if v not in corr.variables:
            raise VariableMissing(v, where="correlation matrix")
    order = topological_order(m)
    endo = [v for v in order if m.parents(v)]
    if not endo:
        raise ValueError("model has no endogenous variable to estimate")
    equations = {}
    for y in endo:
        parents = m.parents(y)
        rpp = corr.submatrix(parents)
        rpy = [corr.value(p, y) for p in parents]
        try:
            beta = numeric.solve_linear(rpp, rpy)
        except SingularMatrix as exc:
            raise SingularMatrix(f"equation for {y!r}: {exc}") from exc
        r2 = float(sum(b * r for b, r in zip(beta, rpy)))
        if r2 < -1e-9 or r2 > 1.0 + 1e-9:
            raise ValueError(
                f"equation for {y!r}: R² = {r2:.6g} outside [0, 1]; "
                "correlation matrix is not positive definite"
            )
        r2 = min(1.0, max(0.0, r2))
        equations[y] = EquationFit(
            target=y,
            parents=parents,
            beta=tuple(beta),
            r_squared=r2,
            disturbance=math.sqrt(1.0 - r2),
        )
    return FittedModel(model=m, equations=equations, correlation=corr, n=corr.n)


def coefficient_inference(fit, alpha=DEFAULT_ALPHA):
    """Populate SE / t / two-sided p per coefficient.

    SE(beta_j) = sqrt((1 - R²) [R_PP⁻¹]_jj / (n - |P| - 1)); the t statistic
    has n - |P| - 1 degrees of freedom.  Raises DegreesOfFreedomExhausted
    when any equation has n <= |P| + 1.
    """
    corr, n = fit.correlation, fit.n
    equations = {}
    for y, eq in fit.equations.items():
        df = n - len(eq.parents) - 1
        if df < 1:
            raise DegreesOfFreedomExhausted(
                f"equation for {y!r}: n={n} with {len(eq.parents)} parents"
            )
        inv = numeric.invert(corr.submatrix(eq.parents))
        resid_var = 1.0 - eq.r_squared
        se, t, p, sig = [], [], [], []
        for j, b in enumerate(eq.beta):
            s = math.sqrt(max(resid_var, 0.0) * inv[j][j] / df)
            se.append(s)
            tj = b / s if s > 0.0 else math.inf
            t.append(tj)
            pj = numeric.t_sf_two_sided(tj, df) if math.isfinite(tj) else 0.0
            p.append(pj)
            sig.append(pj < alpha)
        equations[y] = replace(
            eq, se=tuple(se), t=tuple(t), p=tuple(p), significant=tuple(sig)
        )
    return FittedModel(
        model=fit.model,
        equations=equations,
        correlation=corr,
        n=n,
        alpha=alpha,
    )
