"""Globalness certificates and the hypercontractivity / level-d checkers.

Certificates are exhaustive: the minimal rate r is the max of
(norm / gamma)^(1/|S|) over every coordinate subset S up to the requested
depth and every assignment x, with the lexicographically smallest (S, x)
maximizer kept as witness.  Checkers evaluate both sides of a published
bound; when a theorem's precondition fails they still evaluate and flag the
report ``out_of_hypothesis`` rather than erroring, since the negative space
is useful data.

Conventions: log is the natural logarithm; (anything)^0 = 1, including
r/0 and log terms at d = 0; rates clamped to 1 + 1e-9 where a theorem
assumes r > 1, which only weakens the bound being verified.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .gaussian import beta_rate
from .operators import derivative_moment, iter_derivatives, level_part, noise_resample
from .reports import CONSTANTS, InequalityReport, make_report, tolerance
from .space import FunctionTable, iter_restrictions, lp_norm, lp_norm_pow

R_CLAMP = 1.0 + 1e-9
INF = float("inf")


@dataclass(frozen=True)
class GlobalnessCertificate:
    kind: str            # "derivative" | "restriction"
    norm_p: float
    depth: int
    r: float
    gamma: float
    witness_mask: int
    witness_assignment: tuple[int, ...]

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": self.kind,
            "norm_p": self.norm_p,
            "depth": self.depth,
            "r": self.r,
            "gamma": self.gamma,
            "witness": {"mask": self.witness_mask,
                        "assignment": list(self.witness_assignment)},
        }

    def bound(self, size: int) -> float:
        """r^size * gamma with the 0^0 = 1 convention."""
        return self.gamma if size == 0 else self.r ** size * self.gamma


def _iter_pieces(f: FunctionTable, kind: str, mask: int):
    if kind == "derivative":
        yield from iter_derivatives(f, mask)
    else:
        yield from iter_restrictions(f, mask)


def _certify(f: FunctionTable, kind: str, norm_p: float, depth: int,
             gamma: float) -> GlobalnessCertificate:
    if gamma <= 0.0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    if not 0 <= depth <= f.domain.n:
        raise DomainError(f"depth must be in [0, {f.domain.n}], got {depth}")
    base = lp_norm(f, norm_p)
    if base > gamma * (1.0 + 1e-12):
        return GlobalnessCertificate(kind, norm_p, depth, INF, gamma, 0, ())
    r = 0.0
    witness = (0, ())
    for mask in range(1, 1 << f.domain.n):
        size = mask.bit_count()
        if size > depth:
            continue
        for assignment, _, piece in _iter_pieces(f, kind, mask):
            ratio = (lp_norm(piece, norm_p) / gamma) ** (1.0 / size)
            if ratio > r:
                r = ratio
                witness = (mask, assignment)
    return GlobalnessCertificate(kind, norm_p, depth, r, gamma, witness[0], witness[1])


def certify_derivative_global(f: FunctionTable, norm_p: float, depth: int,
                              gamma: float) -> GlobalnessCertificate:
    """Minimal r with ||D_{S,x} f||_p <= r^|S| gamma for all |S| <= depth."""
    return _certify(f, "derivative", norm_p, depth, gamma)


def certify_restriction_global(f: FunctionTable, norm_p: float, depth: int,
                               gamma: float) -> GlobalnessCertificate:
    """Minimal r with ||f_{S->x}||_p <= r^|S| gamma for all |S| <= depth.

    For Boolean f and norm_p = 1 this is the restriction-expectation form
    E[f_{S->x}] <= r^|S| E[f].
    """
    return _certify(f, "restriction", norm_p, depth, gamma)


def certificate_excess(f: FunctionTable, kind: str, norm_p: float, depth: int,
                       r: float, gamma: float):
    """max over |S| <= depth, x of (norm - r^|S| gamma), with its witness.

    <= 0 means f satisfies the certificate.  Includes |S| = 0.
    """
    worst = lp_norm(f, norm_p) - gamma
    witness = (0, ())
    for mask in range(1, 1 << f.domain.n):
        size = mask.bit_count()
        if size > depth:
            continue
        bound = gamma if r == 0.0 and size == 0 else r ** size * gamma
        for assignment, _, piece in _iter_pieces(f, kind, mask):
            excess = lp_norm(piece, norm_p) - bound
            if excess > worst:
                worst = excess
                witness = (mask, assignment)
    return worst, witness


def _witness_dict(mask: int, assignment) -> dict:
    return {"mask": mask, "assignment": list(assignment)}


# ---------------------------------------------------------------------------
# restriction- vs derivative-globalness
# ---------------------------------------------------------------------------

def check_restriction_implies_derivative(f: FunctionTable, norm_p: float, depth: int, *,
                                         tol_scale: float = 1.0) -> InequalityReport:
    """Restriction rate r forces derivative rate 2r at the same scale."""
    gamma = lp_norm(f, norm_p)
    if gamma == 0.0:
        return make_report("restriction-implies-derivative", 0.0, 0.0,
                           params={"norm_p": norm_p, "depth": depth, "degenerate": True},
                           tol_scale=tol_scale)
    cert = certify_restriction_global(f, norm_p, depth, gamma)
    excess, witness = certificate_excess(f, "derivative", norm_p, depth,
                                         2.0 * cert.r, gamma)
    return make_report(
        "restriction-implies-derivative", excess, 0.0, tol_scale=tol_scale,
        params={"norm_p": norm_p, "depth": depth, "r": cert.r, "gamma": gamma},
        witness=_witness_dict(*witness))


# ---------------------------------------------------------------------------
# hypercontractivity checkers
# ---------------------------------------------------------------------------

def check_derivative_norm_bound(f: FunctionTable, rho: float, q: float, *,
                                tol_scale: float = 1.0) -> InequalityReport:
    """Derivative-norm bound: with noise rate rho/sqrt(q),

        ||T_{rho/sqrt q} f||_q^q
            <= sum_S beta^{q|S|} q^{-q|S|/2} E_x ||D_{S,x} f||_2^q.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    beta = beta_rate(rho, q)
    noise_rate = rho / math.sqrt(q)
    lhs = lp_norm_pow(noise_resample(f, noise_rate), q)
    total = 0.0
    for mask in range(1 << f.domain.n):
        s = mask.bit_count()
        factor = (beta / math.sqrt(q)) ** (q * s) if s else 1.0
        total += factor * derivative_moment(f, mask, q)
    return make_report(
        "derivative-norm-bound", lhs, total, tol_scale=tol_scale,
        params={"rho": rho, "q": q, "beta": beta, "noise_rate": noise_rate})


def check_classical_hyper(f: FunctionTable, q: float, *,
                          tol_scale: float = 1.0) -> InequalityReport:
    """Two-point uniform hypercontractivity: ||T_{1/sqrt(q-1)} f||_q <= ||f||_2."""
    if f.domain.k != 2 or abs(f.domain.space.weights[0] - 0.5) > 1e-12:
        raise DomainError("classical form needs the uniform two-point space")
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    rho = 1.0 / math.sqrt(q - 1.0)
    lhs = lp_norm(noise_resample(f, rho), q)
    rhs = lp_norm(f, 2.0)
    return make_report("classical-hyper", lhs, rhs, tol_scale=tol_scale,
                       params={"q": q, "rho": rho})


def _max_admissible_beta_rho(q: float, bound: float) -> float:
    """Largest rho' in (0, 1/3] with beta_rate(rho', q) <= bound."""
    if beta_rate(1.0 / 3.0, q) <= bound:
        return 1.0 / 3.0
    lo, hi = 0.0, 1.0 / 3.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if mid == 0.0 or beta_rate(mid, q) <= bound:
            lo = mid
        else:
            hi = mid
    return lo


def check_global_hyper(f: FunctionTable, q: float, variant: str,
                       certificate: GlobalnessCertificate | None = None, *,
                       tol_scale: float = 1.0) -> InequalityReport:
    """Sharp hypercontractivity for global f, at the variant's maximal rho.

    main: restriction-globalness (gamma = ||f||_2) certified internally,
          rho = log q / (32 r q), conclusion ||T_rho f||_q <= ||f||_2.
    alt:  derivative certificate (r, gamma); largest rho' <= 1/3 with
          beta(rho') <= sqrt(q) (r/sqrt 2)^{-(q-2)/q}, rho = rho'/sqrt(2q),
          conclusion ||T_rho f||_q^q <= ||f||_2^2 gamma^{q-2}.
    cor1: rho = (1/(3 sqrt 2)) min(1/(r^{(q-2)/q} q), 1/sqrt q), same conclusion.
    cor2: r >= 1 and rho = log q / (16 r q), same conclusion.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    if variant not in ("main", "alt", "cor1", "cor2"):
        raise DomainError(f"unknown variant {variant!r}")
    norm2 = lp_norm(f, 2.0)
    if norm2 == 0.0:
        return make_report(f"global-hyper-{variant}", 0.0, 0.0, vacuous=True,
                           params={"q": q, "degenerate": True}, tol_scale=tol_scale)
    params: dict = {"q": q}
    if variant == "main":
        cert = certify_restriction_global(f, 2.0, f.domain.n, norm2)
        r = max(cert.r, R_CLAMP)
        rho = math.log(q) / (CONSTANTS["hyper_main_rate"] * r * q)
        lhs = lp_norm(noise_resample(f, rho), q)
        rhs = norm2
        params.update({"r": r, "r_measured": cert.r, "rho": rho, "gamma": norm2})
        return make_report("global-hyper-main", lhs, rhs, params=params,
                           witness=_witness_dict(cert.witness_mask, cert.witness_assignment),
                           tol_scale=tol_scale)
    if certificate is None:
        certificate = certify_derivative_global(f, 2.0, f.domain.n, norm2)
        params["auto_certificate"] = True
    r, gamma = certificate.r, certificate.gamma
    if variant == "alt":
        if r == 0.0:
            rho_p = 1.0 / 3.0
        else:
            bound = math.sqrt(q) * (r / math.sqrt(2.0)) ** (-(q - 2.0) / q)
            rho_p = _max_admissible_beta_rho(q, bound)
        rho = rho_p / math.sqrt(2.0 * q)
        params.update({"rho_prime": rho_p, "beta": beta_rate(rho_p, q)})
    elif variant == "cor1":
        inv = 1.0 / math.sqrt(q) if r == 0.0 else min(
            1.0 / (r ** ((q - 2.0) / q) * q), 1.0 / math.sqrt(q))
        rho = inv / (3.0 * math.sqrt(2.0))
    else:  # cor2
        r = max(r, R_CLAMP)
        rho = math.log(q) / (CONSTANTS["hyper_cor2_rate"] * r * q)
    params.update({"r": r, "gamma": gamma, "rho": rho})
    lhs = lp_norm_pow(noise_resample(f, rho), q)
    rhs = norm2 ** 2 * gamma ** (q - 2.0)
    return make_report(f"global-hyper-{variant}", lhs, rhs, params=params,
                       tol_scale=tol_scale)


# ---------------------------------------------------------------------------
# level-d inequalities
# ---------------------------------------------------------------------------

def _require_boolean(f: FunctionTable) -> None:
    import numpy as np
    v = f.values
    if not np.all(np.minimum(np.abs(v), np.abs(v - 1.0)) <= 1e-9):
        raise DomainError("function must be Boolean-valued")


def level_norm_sq(f: FunctionTable, d: int) -> float:
    piece = level_part(f, d)
    return lp_norm_pow(piece, 2.0)


def check_level_d(f: FunctionTable, d: int, *, tol_scale: float = 1.0) -> InequalityReport:
    """Boolean level-d inequality:

        ||f^{=d}||_2^2 <= E^2[f] (2200 r^2 log(1/E[f]) / d)^d,

    with r the restriction-expectation rate to depth d, clamped above 1,
    and d <= (1/4) log(1/E[f]) as the hypothesis.
    """
    _require_boolean(f)
    alpha = lp_norm(f, 1.0)
    if alpha == 0.0:
        return make_report("level-d", 0.0, 0.0, params={"d": d, "alpha": 0.0},
                           tol_scale=tol_scale)
    cert = certify_restriction_global(f, 1.0, d, alpha)
    r = max(cert.r, R_CLAMP)
    log_term = math.log(1.0 / alpha)
    in_hyp = d <= 0.25 * log_term + 1e-12
    lhs = level_norm_sq(f, d)
    C = CONSTANTS["level_d_factor"]
    rhs = alpha ** 2 * (1.0 if d == 0 else (C * r * r * log_term / d) ** d)
    return make_report(
        "level-d", lhs, rhs, out_of_hypothesis=not in_hyp, tol_scale=tol_scale,
        params={"d": d, "alpha": alpha, "r": r, "r_measured": cert.r,
                "log_inv_alpha": log_term, "constant": C})


def check_level_d_general(f: FunctionTable, gamma1: float, gamma2: float, d: int, *,
                          tol_scale: float = 1.0) -> InequalityReport:
    """Real-valued level-d inequality from L1+L2 restriction bounds:

        ||f^{=d}||_2^2 <= gamma1^2 (2200 r^2 log(gamma2/gamma1) / d)^d.
    """
    if not gamma2 > gamma1 > 0.0:
        raise DomainError("need gamma2 > gamma1 > 0")
    c1 = certify_restriction_global(f, 1.0, d, gamma1)
    c2 = certify_restriction_global(f, 2.0, d, gamma2)
    r_measured = max(c1.r, c2.r)
    r = max(r_measured, R_CLAMP)
    log_term = math.log(gamma2 / gamma1)
    in_hyp = d <= 0.5 * log_term + 1e-12 and math.isfinite(r)
    lhs = level_norm_sq(f, d)
    C = CONSTANTS["level_d_factor"]
    if math.isfinite(r):
        rhs = gamma1 ** 2 * (1.0 if d == 0 else (C * r * r * log_term / d) ** d)
    else:
        rhs = INF
    return make_report(
        "level-d-general", lhs, rhs, out_of_hypothesis=not in_hyp, tol_scale=tol_scale,
        params={"d": d, "gamma1": gamma1, "gamma2": gamma2, "r": r,
                "r_measured": r_measured, "log_ratio": log_term, "constant": C})


def level_globalness_params(r: float, gamma1: float, gamma2: float, d: int) -> tuple[float, float]:
    """The derived rate and scale certifying f^{=d} from depth-d globalness:

        r'_d = sqrt(d / log(gamma2/gamma1)),
        gamma'_d = (33 r / sqrt d)^d gamma1 log^{d/2}(gamma2/gamma1),

    with (r'_0, gamma'_0) = (0, gamma1).
    """
    if r < 1.0:
        raise DomainError(f"rate must be >= 1, got {r}")
    if not gamma2 > gamma1 > 0.0:
        raise DomainError("need gamma2 > gamma1 > 0")
    log_term = math.log(gamma2 / gamma1)
    if not 0 <= d <= 0.5 * log_term + 1e-12:
        raise DomainError(f"d = {d} outside [0, log(gamma2/gamma1)/2]")
    if d == 0:
        return 0.0, gamma1
    C = CONSTANTS["level_globalness_factor"]
    r_d = math.sqrt(d / log_term)
    gamma_d = (C * r / math.sqrt(d)) ** d * gamma1 * log_term ** (d / 2.0)
    return r_d, gamma_d


def check_level_globalness(f: FunctionTable, d: int,
                           gamma1: float | None = None, gamma2: float | None = None, *,
                           tol_scale: float = 1.0) -> InequalityReport:
    """Companion checker: certify f at depth d in L1 and L2 (derivative
    sense), then verify f^{=d} against the derived (r'_d, gamma'_d)
    certificate.  lhs is the worst excess norm - r'^|S| gamma' over all
    (S, x); rhs is 0.
    """
    if gamma1 is None:
        gamma1 = lp_norm(f, 1.0)
    if gamma2 is None:
        gamma2 = lp_norm(f, 2.0)
    if not (gamma2 > gamma1 > 0.0):
        return make_report("level-globalness", 0.0, 0.0, vacuous=True,
                           params={"d": d, "gamma1": gamma1, "gamma2": gamma2,
                                   "reason": "needs gamma2 > gamma1 > 0"},
                           tol_scale=tol_scale)
    c1 = certify_derivative_global(f, 1.0, d, gamma1)
    c2 = certify_derivative_global(f, 2.0, d, gamma2)
    r_measured = max(c1.r, c2.r)
    r = max(r_measured, 1.0)
    log_term = math.log(gamma2 / gamma1)
    in_hyp = d <= 0.5 * log_term + 1e-12 and math.isfinite(r)
    if d == 0:
        r_d, gamma_d = 0.0, gamma1
    else:
        C = CONSTANTS["level_globalness_factor"]
        r_d = math.sqrt(d / log_term)
        gamma_d = (C * r / math.sqrt(d)) ** d * gamma1 * log_term ** (d / 2.0)
    piece = level_part(f, d)
    excess, witness = certificate_excess(piece, "derivative", 2.0,
                                         piece.domain.n, r_d, gamma_d)
    return make_report(
        "level-globalness", excess, 0.0, out_of_hypothesis=not in_hyp,
        tol_scale=tol_scale * max(1.0, gamma_d),
        params={"d": d, "gamma1": gamma1, "gamma2": gamma2, "r": r,
                "r_measured": r_measured, "r_level": r_d, "gamma_level": gamma_d},
        witness=_witness_dict(*witness))


def check_lemma_level_given_global(f: FunctionTable, d: int, gamma: float | None = None,
                                   r: float | None = None, *,
                                   tol_scale: float = 1.0) -> InequalityReport:
    """Level bound assuming f^{=d} itself is (r, gamma)-L2-global:

        ||f^{=d}||_2^2 <= (33 r / d)^d gamma1 gamma log^d(gamma2/gamma1)

    with gamma1 = ||f||_1 and gamma2 = ||f||_2 as the norm bounds.
    """
    piece = level_part(f, d)
    gamma1 = lp_norm(f, 1.0)
    gamma2 = lp_norm(f, 2.0)
    hyp_ok = gamma2 > gamma1 > 0.0
    log_term = math.log(gamma2 / gamma1) if hyp_ok else 0.0
    if gamma is None:
        gamma = lp_norm(piece, 2.0)
    if r is None:
        if gamma > 0.0:
            r = certify_derivative_global(piece, 2.0, piece.domain.n, gamma).r
        else:
            r = 0.0
        if d > 0 and log_term > 0.0:
            # a larger rate is still a valid certificate; lift to the
            # hypothesis minimum when auto-certifying
            r = max(r, math.sqrt(d / log_term))
    if gamma > 0.0:
        excess, _ = certificate_excess(piece, "derivative", 2.0, piece.domain.n, r, gamma)
        cert_ok = excess <= tolerance(0.0, gamma, tol_scale)
    else:
        cert_ok = lp_norm(piece, 2.0) <= tolerance(0.0, 1.0, tol_scale)
    in_hyp = (hyp_ok and cert_ok
              and d < 0.5 * log_term - 1e-12
              and (d == 0 or r >= math.sqrt(d / log_term) - 1e-12))
    C = CONSTANTS["level_globalness_factor"]
    lhs = lp_norm_pow(piece, 2.0)
    if d == 0:
        rhs = gamma1 * gamma
    elif hyp_ok:
        rhs = (C * r / d) ** d * gamma1 * gamma * log_term ** d
    else:
        rhs = INF
    params = {"d": d, "r": r, "gamma": gamma, "gamma1": gamma1,
              "gamma2": gamma2, "certificate_ok": cert_ok, "constant": C}
    if d >= 1 and hyp_ok:
        # the Hoelder pair behind the bound, recorded for replay
        params["theta"] = d / log_term
        params["q_conjugate"] = 2.0 * log_term / d
    return make_report(
        "level-given-global", lhs, rhs, out_of_hypothesis=not in_hyp,
        tol_scale=tol_scale, params=params)


def qnorm_level_bound(f: FunctionTable, d: int, q: float, *,
                      tol_scale: float = 1.0) -> InequalityReport:
    """q-norm of a Boolean level piece:

        ||f^{=d}||_q <= gamma (400 r sqrt(q) sqrt(max(log(1/gamma), q)))^d

    where gamma = E[f] and r is the depth-d restriction-expectation rate
    clamped above 1.  Covers both branches of the d vs (1/4) log(1/gamma)
    case split.
    """
    _require_boolean(f)
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    gamma = lp_norm(f, 1.0)
    if gamma == 0.0:
        return make_report("level-qnorm", 0.0, 0.0, params={"d": d, "q": q, "gamma": 0.0},
                           tol_scale=tol_scale)
    cert = certify_restriction_global(f, 1.0, d, gamma)
    r = max(cert.r, R_CLAMP)
    log_term = math.log(1.0 / gamma) if gamma < 1.0 else 0.0
    C = CONSTANTS["level_qnorm_factor"]
    lhs = lp_norm(level_part(f, d), q)
    factor = C * r * math.sqrt(q) * math.sqrt(max(log_term, q))
    rhs = gamma * (1.0 if d == 0 else factor ** d)
    case = 1 if d <= 0.25 * log_term + 1e-12 else 2
    return make_report(
        "level-qnorm", lhs, rhs, tol_scale=tol_scale,
        params={"d": d, "q": q, "gamma": gamma, "r": r, "r_measured": cert.r,
                "case": case, "constant": C})
