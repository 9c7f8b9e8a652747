"""Trek enumeration and model-implied correlations for recursive models.

A trek between two variables is a walk with all against-arrow steps first
and all along-arrow steps last, visiting no variable twice.  Its coefficient
product contributes to the model-implied correlation of the endpoint pair:

  * direct   - exactly one along-arrow step, none against
  * indirect - two or more along-arrow steps, none against
  * spurious - at least one against-arrow step (shared-cause component)

`reproduced_matrix` sums treks exhaustively; `implied_matrix` builds the
same correlations by the structural recursion Sigma = (I-B)^-1 Psi (I-B)^-T
computed in causal order, giving an independent cross-check of the
enumeration.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    NonPositiveResidualVariance,
    TooManyVariables,
    VariableMissing,
)
from .pathspec import topological_order

MAX_VARIABLES = 20

DIRECT = "direct"
INDIRECT = "indirect"
SPURIOUS = "spurious"


@dataclass(frozen=True)
class Trek:
    """One backward-then-forward walk with its coefficient product."""

    nodes: tuple
    backward_steps: int
    product: float

    @property
    def forward_steps(self):
        return len(self.nodes) - 1 - self.backward_steps

    @property
    def classification(self):
        if self.backward_steps > 0:
            return SPURIOUS
        return DIRECT if self.forward_steps == 1 else INDIRECT


@dataclass(frozen=True)
class ReproducedMatrix:
    """Model-implied correlations; trek decompositions when enumerated."""

    variables: tuple
    r_hat: np.ndarray
    treks: dict  # (earlier, later) -> tuple of Trek; empty for implied route
    psi: Optional[dict] = None  # residual variances, implied route only

    def index(self, name):
        return self.variables.index(name)

    def value(self, a, b):
        return float(self.r_hat[self.index(a), self.index(b)])

    def cell_treks(self, a, b):
        key = (a, b) if (a, b) in self.treks else (b, a)
        return self.treks.get(key, ())


def _guard(m):
    if m.k > MAX_VARIABLES:
        raise TooManyVariables(
            f"exhaustive enumeration refused for k={m.k} > {MAX_VARIABLES}"
        )
    m.require_annotated()


def enumerate_treks(m, i, j):
    """All treks between i and j, in lexicographic node-sequence order.

    The pair is canonicalized so the walk starts at whichever endpoint comes
    first in causal order; lexicographic position is taken over that order's
    indices.
    """
    if i == j:
        raise ValueError("trek endpoints must differ")
    for name in (i, j):
        if name not in m.variables:
            raise VariableMissing(name, where="model")
    _guard(m)
    order = topological_order(m)
    pos = {v: idx for idx, v in enumerate(order)}
    start, goal = (i, j) if pos[i] < pos[j] else (j, i)

    parents = {v: sorted(m.parents(v), key=pos.get) for v in m.variables}
    children = {v: sorted(m.children(v), key=pos.get) for v in m.variables}
    coeff = {(a.source, a.target): a.coefficient for a in m.arrows}

    out = []

    def walk(u, nodes, nback, prod, backward_ok):
        if u == goal:
            out.append(Trek(tuple(nodes), nback, prod))
            return
        if backward_ok:
            for w in parents[u]:
                if w not in nodes:
                    walk(w, nodes + [w], nback + 1, prod * coeff[(w, u)], True)
        for w in children[u]:
            if w not in nodes:
                walk(w, nodes + [w], nback, prod * coeff[(u, w)], False)

    walk(start, [start], 0, 1.0, True)
    out.sort(key=lambda t: [pos[v] for v in t.nodes])
    return out


def reproduced_matrix(m):
    """Exhaustive trek-sum correlations for every variable pair."""
    _guard(m)
    order = topological_order(m)
    pos = {v: idx for idx, v in enumerate(order)}
    k = m.k
    r_hat = np.eye(k)
    treks = {}
    for a in range(k):
        for b in range(a + 1, k):
            va, vb = m.variables[a], m.variables[b]
            ts = enumerate_treks(m, va, vb)
            key = (va, vb) if pos[va] < pos[vb] else (vb, va)
            treks[key] = tuple(ts)
            total = sum(t.product for t in ts)
            r_hat[a, b] = r_hat[b, a] = total
    return ReproducedMatrix(m.variables, r_hat, treks)


def implied_matrix(m):
    """Structural implied correlations, built recursively in causal order.

    For each endogenous y with parents P and coefficients beta, the residual
    variance is psi_y = 1 - betaᵀ Sigma_PP beta and Sigma_yj = betaᵀ Sigma_Pj
    for every earlier j; exogenous variables get unit variance.  Equivalent
    to (I-B)⁻¹ Psi (I-B)⁻ᵀ, without forming an inverse.  Raises
    NonPositiveResidualVariance when the coefficients imply variance > 1.
    """
    _guard(m)
    order = topological_order(m)
    k = m.k
    sigma = np.zeros((k, k))
    idx = {v: m.variables.index(v) for v in m.variables}
    psi = {}
    coeff = {(a.source, a.target): a.coefficient for a in m.arrows}
    for v in order:
        vi = idx[v]
        parents = m.parents(v)
        if not parents:
            sigma[vi, vi] = 1.0
            psi[v] = 1.0
            continue
        p_idx = [idx[p] for p in parents]
        beta = np.array([coeff[(p, v)] for p in parents])
        explained = float(beta @ sigma[np.ix_(p_idx, p_idx)] @ beta)
        resid = 1.0 - explained
        if resid <= 0.0:
            raise NonPositiveResidualVariance(v, resid)
        psi[v] = resid
        cov_with_all = beta @ sigma[p_idx, :]
        sigma[vi, :] = cov_with_all
        sigma[:, vi] = cov_with_all
        sigma[vi, vi] = 1.0
    return ReproducedMatrix(m.variables, sigma, {}, psi=psi)


def coefficient_matrix(m):
    """Arrow coefficients as B with B[target, source] = beta (declaration order)."""
    m.require_annotated()
    k = m.k
    b = np.zeros((k, k))
    for a in m.arrows:
        b[m.index(a.target), m.index(a.source)] = a.coefficient
    return b


def write_treks_csv(reproduced, path):
    """Export every enumerated trek: pair, node sequence, class, product."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["pair", "sequence", "classification", "product"])
        for (a, b), treks in reproduced.treks.items():
            for t in treks:
                writer.writerow([
                    f"{a}-{b}",
                    " ".join(t.nodes),
                    t.classification,
                    repr(t.product),
                ])
