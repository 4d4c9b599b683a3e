"""Inequality reports and the tolerance policy.

A report always records the two sides actually computed.  ``passed`` is the
literal comparison ``lhs <= rhs + tol`` except for *vacuous* reports, where
the theorem's implication holds for empty reasons (its inner hypothesis is
false, or the bound exceeds the trivial one) and ``passed`` is True by
definition.  ``out_of_hypothesis`` marks reports whose parameters violate
the theorem's preconditions: both sides are still evaluated and compared,
but a failure there does not count against a run.
"""

from __future__ import annotations

from dataclasses import dataclass, field

# Explicit constants used by the bound evaluators, one place so a change is
# a one-line diff.  Keys name the checker that consumes the constant.
CONSTANTS: dict[str, float] = {
    "level_d_factor": 2200.0,           # level-d: E^2[f] (C r^2 log(1/E[f]) / d)^d
    "level_globalness_factor": 33.0,    # scale (C r / sqrt(d))^d for level pieces
    "level_qnorm_factor": 400.0,        # q-norm of a level piece
    "hyper_main_rate": 32.0,            # rho <= log q / (C r q), restriction form
    "hyper_cor2_rate": 16.0,            # rho <= log q / (C r q), derivative form
    "cross_intersect_scale": 3200.0,    # c = 1 / (C r) in the cross-intersection bound
    "cross_intersect_prefactor": 8.0,   # mu_p(g) < C exp(-c/p)
    "smeared_level1_factor": 750.0,     # sigma^2 <= C alpha^2 log(1/alpha)
    "density_decrease_exponent": 0.001,  # mu_p(f) < exp(-C sqrt(m))
    "intersecting_prefactor": 32.0,     # mu_p(F) <= C exp(-c/p)
    "intersecting_exponent": 0.0001,
    "vector_prefactor": 128.0,          # |A|/k^n <= C exp(-c k / log n)
    "vector_exponent": 0.0001,
}

BASE_TOL = 1e-9


def tolerance(lhs: float, rhs: float, scale: float = 1.0, ci: float = 0.0) -> float:
    """1e-9 relative (floored at absolute) plus 3x any Monte Carlo CI."""
    mags = [1.0]
    for v in (lhs, rhs):
        if v == v and abs(v) != float("inf"):  # skip nan/inf
            mags.append(abs(v))
    return BASE_TOL * max(mags) * scale + 3.0 * ci


@dataclass
class InequalityReport:
    theorem_id: str
    lhs: float
    rhs: float
    passed: bool
    vacuous: bool = False
    out_of_hypothesis: bool = False
    params: dict = field(default_factory=dict)
    witness: dict | None = None

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    @property
    def failed(self) -> bool:
        """True when this report should fail a run."""
        return not self.passed and not self.vacuous and not self.out_of_hypothesis

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "theorem_id": self.theorem_id,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "margin": float(self.margin),
            "pass": self.passed,
            "vacuous": self.vacuous,
            "out_of_hypothesis": self.out_of_hypothesis,
            "params": self.params,
            "witness": self.witness,
        }


def make_report(theorem_id: str, lhs: float, rhs: float, *,
                vacuous: bool = False, out_of_hypothesis: bool = False,
                params: dict | None = None, witness: dict | None = None,
                tol_scale: float = 1.0, ci: float = 0.0,
                tol: float | None = None) -> InequalityReport:
    if tol is None:
        tol = tolerance(lhs, rhs, tol_scale, ci)
    passed = True if vacuous else lhs <= rhs + tol
    return InequalityReport(
        theorem_id=theorem_id,
        lhs=float(lhs),
        rhs=float(rhs),
        passed=bool(passed),
        vacuous=vacuous,
        out_of_hypothesis=out_of_hypothesis,
        params=params or {},
        witness=witness,
    )
