"""Model fit against observed correlations, causal-effect decomposition,
and the drop/add revision loop.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import NoAdmissibleRevision, VariableMismatch
from .estimation import coefficient_inference, fit_standardized
from .pathspec import Arrow, topological_order
from .tracing import coefficient_matrix, implied_matrix, reproduced_matrix

DEFAULT_MISFIT_THRESHOLD = 0.05


# ---------------------------------------------------------------------------
# Fit assessment.

@dataclass(frozen=True)
class PairFit:
    a: str
    b: str
    observed: float
    reproduced: float
    difference: float
    flagged: bool


@dataclass(frozen=True)
class FitAssessment:
    pairs: tuple
    threshold: float

    @property
    def misfit_count(self):
        return sum(1 for p in self.pairs if p.flagged)

    @property
    def fits(self):
        return self.misfit_count == 0

    @property
    def verdict(self):
        return "fits" if self.fits else "does-not-fit"

    @property
    def max_difference(self):
        return max((p.difference for p in self.pairs), default=0.0)

    def flagged_pairs(self):
        return [p for p in self.pairs if p.flagged]


def assess_fit(observed, reproduced, threshold=DEFAULT_MISFIT_THRESHOLD):
    """Compare every unordered pair: |r - r_hat| > threshold flags a misfit."""
    if set(observed.variables) != set(reproduced.variables):
        raise VariableMismatch(
            f"observed variables {sorted(observed.variables)} != "
            f"reproduced {sorted(reproduced.variables)}"
        )
    pairs = []
    for a, b in observed.pairs():
        r = observed.value(a, b)
        r_hat = reproduced.value(a, b)
        diff = abs(r - r_hat)
        pairs.append(PairFit(a, b, r, r_hat, diff, diff > threshold))
    return FitAssessment(tuple(pairs), threshold)


# ---------------------------------------------------------------------------
# Effect decomposition.

@dataclass(frozen=True)
class EffectRow:
    outcome: str
    determinant: str
    direct: float
    indirect: float

    @property
    def total(self):
        return self.direct + self.indirect


@dataclass(frozen=True)
class EffectsTable:
    rows: tuple
    r_squared: dict  # outcome -> R² implied by the coefficients

    def row(self, determinant, outcome):
        for r in self.rows:
            if r.determinant == determinant and r.outcome == outcome:
                return r
        return None


def _directed_path_sum(m, src, dst):
    """Sum of coefficient products over all-forward paths of length >= 2."""
    coeff = {(a.source, a.target): a.coefficient for a in m.arrows}
    children = {v: m.children(v) for v in m.variables}
    total = 0.0

    def walk(u, length, prod, visited):
        nonlocal total
        if u == dst:
            if length >= 2:
                total += prod
            return
        for w in children[u]:
            if w not in visited:
                walk(w, length + 1, prod * coeff[(u, w)], visited | {w})

    walk(src, 0, 1.0, {src})
    return total


def decompose_effects(m):
    """Direct / indirect / total effects for every causally linked pair.

    Outcomes are listed most-downstream first with determinants in causal
    order; R² per outcome is the variance its equation explains under the
    model-implied correlations.
    """
    implied = implied_matrix(m)
    order = topological_order(m)
    rows = []
    for outcome in reversed(order):
        if not m.parents(outcome):
            continue
        for det in order:
            if det == outcome:
                continue
            arrow = m.arrow(det, outcome)
            direct = arrow.coefficient if arrow else 0.0
            indirect = _directed_path_sum(m, det, outcome)
            if arrow is None and indirect == 0.0:
                continue
            rows.append(EffectRow(outcome, det, direct, indirect))
    r2 = {v: 1.0 - implied.psi[v] for v in order if m.parents(v)}
    return EffectsTable(tuple(rows), r2)


def total_effect_oracle(m):
    """Total effects via the nilpotent Neumann sum of the coefficient matrix.

    Returns (variables, T) where T[target, source] = sum over all directed
    paths of coefficient products, exactly (I-B)⁻¹ - I for a DAG.
    """
    b = coefficient_matrix(m)
    k = m.k
    total = np.zeros((k, k))
    power = np.eye(k)
    for _ in range(k - 1):
        power = power @ b
        total += power
    return m.variables, total


# ---------------------------------------------------------------------------
# Revision loop.

@dataclass(frozen=True)
class RevisionStep:
    iteration: int
    action: str  # "drop" or "add"
    arrows: tuple  # (source, target) pairs involved
    reason: str
    candidates: tuple = ()  # ranked (source, target, |misfit|) for adds
    misfit_count: int = 0
    max_difference: float = 0.0


@dataclass
class RevisionTrace:
    steps: list = field(default_factory=list)
    final_model: Optional["PathModel"] = None
    final_fit: Optional["FittedModel"] = None
    final_assessment: Optional[FitAssessment] = None
    iterations: int = 0
    converged: bool = False


def write_effects_csv(table, path):
    """Export the effects table: outcome, determinant, direct, indirect, total."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["outcome", "determinant", "direct", "indirect", "total"])
        for r in table.rows:
            writer.writerow([r.outcome, r.determinant,
                             repr(r.direct), repr(r.indirect), repr(r.total)])


def write_revision_csv(trace, path):
    """Export the revision trace, one row per step."""
    import csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iteration", "action", "arrows", "reason",
                         "misfit_count", "max_difference"])
        for s in trace.steps:
            writer.writerow([
                s.iteration,
                s.action,
                "; ".join(f"{a}->{b}" for a, b in s.arrows),
                s.reason,
                s.misfit_count,
                repr(s.max_difference),
            ])


def revise_model(corr, m, alpha=0.05, threshold=DEFAULT_MISFIT_THRESHOLD,
                 max_iter=10):
    """Iteratively drop non-significant arrows and add arrows for misfit pairs.

    Per iteration: refit; drop every arrow with p >= alpha as one batch;
    reassess; if misfit remains, add the single admissible arrow covering
    the largest misfit, oriented from the causally earlier variable.  An
    addition is admissible when the pair has no arrow and the resulting
    arrow set has not been visited before.  Stops on fit, on no possible
    change (NoAdmissibleRevision, partial trace attached), or after
    max_iter iterations (non-converged trace returned).
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    trace = RevisionTrace()
    model = m
    seen = {model.arrow_set()}

    def refit(current):
        fit = coefficient_inference(fit_standardized(corr, current), alpha=alpha)
        assessment = assess_fit(
            corr, reproduced_matrix(fit.annotated_model()), threshold
        )
        return fit, assessment

    fit, assessment = refit(model)
    for iteration in range(1, max_iter + 1):
        trace.iterations = iteration
        changed = False

        drops = [
            (eq.parents[j], y)
            for y, eq in fit.equations.items()
            for j in range(len(eq.parents))
            if eq.p[j] >= alpha
        ]
        if drops:
            dropped = set(drops)
            reduced = model.with_arrows(
                [a for a in model.arrows if (a.source, a.target) not in dropped]
            )
            if not reduced.endogenous:
                trace.final_model = model
                trace.final_fit = fit
                trace.final_assessment = assessment
                raise NoAdmissibleRevision(
                    "every arrow is non-significant; dropping all of them "
                    "leaves nothing to estimate",
                    trace=trace,
                )
            model = reduced
            seen.add(model.arrow_set())
            fit, assessment = refit(model)
            trace.steps.append(
                RevisionStep(
                    iteration=iteration,
                    action="drop",
                    arrows=tuple(sorted(drops)),
                    reason=f"coefficient p >= {alpha}",
                    misfit_count=assessment.misfit_count,
                    max_difference=assessment.max_difference,
                )
            )
            changed = True

        if assessment.fits:
            trace.converged = True
            break

        order = topological_order(model)
        pos = {v: i for i, v in enumerate(order)}
        candidates = []
        for pair in assessment.flagged_pairs():
            if model.has_arrow_between(pair.a, pair.b):
                continue
            src, dst = sorted((pair.a, pair.b), key=pos.get)
            candidates.append((src, dst, pair.difference))
        candidates.sort(key=lambda c: (-c[2], pos[c[0]], pos[c[1]]))

        added = None
        for src, dst, diff in candidates:
            proposal = model.arrow_set() | {(src, dst)}
            if proposal in seen:
                continue
            added = (src, dst, diff)
            break

        if added is None:
            if not changed:
                exc = NoAdmissibleRevision(
                    f"misfit persists ({assessment.misfit_count} pairs) but no "
                    "arrow can be added",
                    trace=trace,
                )
                trace.final_model = model
                trace.final_fit = fit
                trace.final_assessment = assessment
                raise exc
        else:
            src, dst, diff = added
            model = model.with_arrows(model.arrows + (Arrow(src, dst, None),))
            seen.add(model.arrow_set())
            fit, assessment = refit(model)
            trace.steps.append(
                RevisionStep(
                    iteration=iteration,
                    action="add",
                    arrows=((src, dst),),
                    reason=f"misfit |r - r_hat| = {diff:.4f} > {threshold}",
                    candidates=tuple(candidates),
                    misfit_count=assessment.misfit_count,
                    max_difference=assessment.max_difference,
                )
            )
            if assessment.fits:
                trace.converged = True
                break

    trace.final_model = model
    trace.final_fit = fit
    trace.final_assessment = assessment
    return trace
