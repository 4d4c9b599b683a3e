"""The full acceptance program, one function per criterion.

Each criterion builds its own corpus from fixed seeds, runs the relevant
checkers at their stated tolerances, and returns a CriterionResult.  The
pytest module ``tests/test_acceptance.py`` asserts these, and
``hypercheck suite --default`` runs them all and exits nonzero on any
failure.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import families, gaussian, inequalities, operators, suite
from .space import (
    Domain,
    FunctionTable,
    biased_space,
    expectation,
    inner_product,
    lp_norm,
    uniform_space,
)

IDENTITY_TOL = 1e-10
BOUND_TOL = 1e-9


@dataclass
class CriterionResult:
    number: int
    title: str
    ok: bool
    detail: str
    elapsed: float
    budget: float | None = None

    @property
    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        budget = f", budget {self.budget:.0f}s" if self.budget else ""
        return (f"criterion {self.number:2d} [{status}] {self.title}: "
                f"{self.detail} ({self.elapsed:.2f}s{budget})")


def _timed(number, title, budget, body) -> CriterionResult:
    start = time.perf_counter()
    ok, detail = body()
    elapsed = time.perf_counter() - start
    if budget is not None and elapsed > budget:
        ok = False
        detail += f"; OVER RUNTIME BUDGET {budget}s"
    return CriterionResult(number, title, ok, detail, elapsed, budget)


def _random_corpus(n: int, k: int, count: int, seed: int) -> list[FunctionTable]:
    rng = np.random.default_rng(seed)
    space = uniform_space(k) if k > 2 else biased_space(0.5)
    dom = Domain(space, n)
    return [FunctionTable(dom, rng.standard_normal(dom.size)) for _ in range(count)]


def _corpora() -> list[FunctionTable]:
    return _random_corpus(4, 2, 100, seed=101) + _random_corpus(3, 3, 100, seed=202)


def _max_abs(a, b) -> float:
    return float(np.max(np.abs(a - b)))


def _boolean_cube_functions(n: int, p: float) -> list[FunctionTable]:
    dom = Domain(biased_space(p), n)
    out = []
    for bits in range(1 << dom.size):
        vals = [(bits >> i) & 1 for i in range(dom.size)]
        out.append(FunctionTable(dom, np.array(vals, dtype=np.float64)))
    return out


# --------------------------------------------------------------------------

def criterion_01() -> CriterionResult:
    def body():
        worst = 0.0
        for f in _corpora():
            dec = operators.efron_stein(f)
            parts = list(dec.parts.values())
            total = np.sum([t.values for t in parts], axis=0)
            worst = max(worst, _max_abs(total, f.values))
            norms = 0.0
            for i, a in enumerate(parts):
                norms += inner_product(a, a)
                for b in parts[i + 1:]:
                    worst = max(worst, abs(inner_product(a, b)))
            worst = max(worst, abs(norms - inner_product(f, f)))
        return worst <= IDENTITY_TOL, f"max decomposition defect {worst:.2e}"
    return _timed(1, "Efron-Stein sum/orthogonality/Parseval", 5.0, body)


def criterion_02() -> CriterionResult:
    def body():
        rhos = [0.0, 0.3, 1.0 / math.sqrt(3.0), 1.0]
        worst = 0.0
        for f in _corpora():
            for rho in rhos:
                a = operators.noise_resample(f, rho)
                b = operators.noise_spectral(f, rho)
                worst = max(worst, _max_abs(a.values, b.values))
            for r1, r2 in [(0.3, 0.5), (0.3, 1.0 / math.sqrt(3.0))]:
                ab = operators.noise_resample(operators.noise_resample(f, r1), r2)
                worst = max(worst, _max_abs(ab.values,
                                            operators.noise_resample(f, r1 * r2).values))
        return worst <= IDENTITY_TOL, f"max noise-route disagreement {worst:.2e}"
    return _timed(2, "noise resample vs spectral, multiplicativity", None, body)


def criterion_03() -> CriterionResult:
    def body():
        worst = 0.0
        rho = 0.3
        for f in _corpora():
            tf = operators.noise_resample(f, rho)
            tf_half = operators.noise_resample(f, 1.0 / math.sqrt(2.0))
            total = 0.0
            for mask in range(1 << f.domain.n):
                a = operators.laplacian_L(tf, mask)
                b = operators.noise_resample(operators.laplacian_L(f, mask), rho)
                worst = max(worst, _max_abs(a.values, b.values))
                s = mask.bit_count()
                for assignment, _, dsx in operators.iter_derivatives(f, mask):
                    lhs = operators.derivative_D(tf, mask, assignment)
                    rhs = operators.noise_resample(dsx, rho)
                    worst = max(worst, _max_abs(lhs.values, rho ** s * rhs.values))
                half = operators.laplacian_L(tf_half, mask)
                total += inner_product(half, half)
            worst = max(worst, abs(total - inner_product(f, f)))
        return worst <= IDENTITY_TOL, f"max swap/identity defect {worst:.2e}"
    return _timed(3, "noise-derivative swap rules and the L_S T identity", None, body)


def criterion_04() -> CriterionResult:
    def body():
        rng = np.random.default_rng(404)
        dom = Domain(biased_space(0.5), 4)
        bad = 0
        count = 0
        for _ in range(1000):
            f = FunctionTable(dom, rng.standard_normal(dom.size))
            for q in (2, 4, 6):
                rep = inequalities.check_classical_hyper(f, q)
                count += 1
                if not rep.passed:
                    bad += 1
        return bad == 0, f"{count} classical-hyper checks, {bad} violations"
    return _timed(4, "two-point uniform hypercontractivity, random sweep", 10.0, body)


def criterion_05() -> CriterionResult:
    def body():
        bad = 0
        count = 0
        for p in (0.5, 1.0 / 3.0):
            for f in _boolean_cube_functions(3, p):
                for rho in (0.1, 1.0 / 3.0):
                    for q in (2, 4):
                        rep = gaussian.check_tensorization(f, rho, q)
                        count += 1
                        if not rep.passed:
                            bad += 1
        return bad == 0, f"{count} tensorization checks, {bad} violations"
    return _timed(5, "encoding tensorization bound, exhaustive Boolean sweep", 120.0, body)


def criterion_06() -> CriterionResult:
    def body():
        bad = 0
        count = 0
        for p in (0.1, 0.3, 0.5):
            x = gaussian.standardized_two_point(p)
            for d in (0.25, 1.0, 4.0):
                for rho in (0.05, 1.0 / 3.0):
                    for q in (2, 4, 6):
                        rep = gaussian.check_one_var_bound(x, d, rho, q)
                        count += 1
                        if not rep.passed:
                            bad += 1
        return bad == 0, f"{count} one-variable encoding checks, {bad} violations"
    return _timed(6, "one-variable encoding bound grid", None, body)


def criterion_07() -> CriterionResult:
    def body():
        bad = 0
        count = 0
        flagged = 0

        def tally(rep):
            nonlocal bad, count, flagged
            count += 1
            if rep.out_of_hypothesis or rep.vacuous:
                flagged += 1
            elif not rep.passed:
                bad += 1

        for p in (0.5, 1.0 / 3.0):
            for f in _boolean_cube_functions(3, p):
                for q in (2, 4, 6):
                    for rho in (0.2, 1.0 / 3.0):
                        tally(inequalities.check_derivative_norm_bound(f, rho, q))
                    tally(inequalities.check_global_hyper(f, q, "main"))
                for q in (3, 4, 6):
                    for variant in ("alt", "cor1", "cor2"):
                        tally(inequalities.check_global_hyper(f, q, variant))
                alpha = expectation(f)
                for d in range(4):
                    tally(inequalities.check_level_d(f, d))
                    tally(inequalities.check_level_globalness(f, d))
                    for q in (2, 4):
                        tally(inequalities.qnorm_level_bound(f, d, q))
                if 0.0 < alpha < 1.0:
                    g1 = lp_norm(f, 1.0)
                    g2 = lp_norm(f, 2.0)
                    for d in (0, 1):
                        tally(inequalities.check_level_d_general(f, g1, g2, d))
                        tally(inequalities.check_lemma_level_given_global(f, d))
                    # inflate the L2 scale so depth 1 is inside the hypothesis
                    g2_wide = max(g2, g1 * math.exp(2.2))
                    tally(inequalities.check_level_d_general(f, g1, g2_wide * 1.01, 1))
                    tally(inequalities.check_level_globalness(f, 1, g1, g2_wide * 1.01))
        return bad == 0, (f"{count} checks ({flagged} flagged vacuous/out-of-hypothesis), "
                          f"{bad} non-vacuous violations")
    return _timed(7, "hypercontractivity and level-d chain, exhaustive sweep", 300.0, body)


def criterion_08() -> CriterionResult:
    def body():
        worst_eigen = 0.0
        n = 3
        for p in (0.25, 1.0 / 3.0, 0.5):
            dom = Domain(biased_space(p), n)
            op = families.FriedgutOperator(p, n)
            lam = -p / (1.0 - p)
            for mask in range(1 << n):
                chi = operators.chi_table(dom, mask)
                out = families.apply_friedgut(op, chi)
                worst_eigen = max(worst_eigen, _max_abs(
                    out.values, lam ** mask.bit_count() * chi.values))
        # upward-closed cross-intersecting pairs, exhaustively
        upsets = []
        for bits in range(1 << 8):
            mem = [x for x in range(8) if bits >> x & 1]
            memset = set(mem)
            if all((x | (1 << b)) in memset for x in mem for b in range(n)):
                upsets.append(mem)
        pair_count = 0
        bad = 0
        worst_pairing = 0.0
        for p in (0.25, 1.0 / 3.0, 0.5):
            for hm in upsets:
                for gm in upsets:
                    if hm and gm and not all(a & b for a in hm for b in gm):
                        continue
                    h = families.family_table(n, p, hm)
                    g = families.family_table(n, p, gm)
                    rep = families.check_disjointness_pairing(h, g, p)
                    pair_count += 1
                    worst_pairing = max(worst_pairing, abs(rep.params["pairing_value"]))
                    if not rep.passed:
                        bad += 1
        ok = worst_eigen <= IDENTITY_TOL and worst_pairing <= IDENTITY_TOL and bad == 0
        return ok, (f"eigen defect {worst_eigen:.2e}, {pair_count} up-closed pairs, "
                    f"pairing defect {worst_pairing:.2e}, {bad} display violations")
    return _timed(8, "pseudo-disjointness operator facts", None, body)


def criterion_09() -> CriterionResult:
    def body():
        bad = 0
        count = 0
        nonvac = 0
        for n in range(5, 10):
            for p in (1.0 / 3.0, 0.5):
                for weight_bits in range(1 << (n + 1)):
                    weights = [w for w in range(n + 1) if weight_bits >> w & 1]
                    f = families.symmetric_family(n, p, weights)
                    rep = families.check_smeared_level1(f, p)
                    count += 1
                    if not rep.out_of_hypothesis:
                        nonvac += 1
                        if not rep.passed:
                            bad += 1
                    for mask in (0, 0b1, 0b10, 0b100, 0b11, 0b101):
                        rep = families.check_density_decrease(f, p, mask)
                        count += 1
                        if not (rep.out_of_hypothesis or rep.vacuous):
                            nonvac += 1
                            if not rep.passed:
                                bad += 1
        return bad == 0, (f"{count} smeared/density checks over symmetric families, "
                          f"{nonvac} non-vacuous, {bad} violations")
    return _timed(9, "smeared level-1 and density-decrease implications", 120.0, body)


def criterion_10() -> CriterionResult:
    def body():
        bad = 0
        count = 0
        vectors2 = [(a, b) for a in range(2) for b in range(2)]
        for bits in range(1 << 4):
            mem = tuple(v for i, v in enumerate(vectors2) if bits >> i & 1)
            fam = families.VectorFamily(2, 2, mem)
            for p in [0.1 * i for i in range(1, 10)]:
                rep = families.check_coupling_bound(fam, p)
                count += 1
                if not rep.passed:
                    bad += 1
        rng = np.random.default_rng(1010)
        vectors3 = [(a, b, c) for a in range(3) for b in range(3) for c in range(3)]
        p3 = math.log(3.0) / 3.0
        for _ in range(500):
            mem = tuple(v for v in vectors3 if rng.random() < 0.5)
            fam = families.VectorFamily(3, 3, mem)
            rep = families.check_coupling_bound(fam, p3)
            count += 1
            if not rep.passed:
                bad += 1
        return bad == 0, f"{count} coupling checks, {bad} violations"
    return _timed(10, "embedding coupling bound, exhaustive and random", None, body)


def criterion_11() -> CriterionResult:
    def body():
        worst_eigen = 0.0
        worst_restr = 0.0
        for n, d in ((4, 1), (4, 2), (6, 2), (6, 3)):
            f = families.sharpness_product(n, d)
            rep = families.check_noise_eigenfunction(f, d)
            worst_eigen = max(worst_eigen, rep.lhs)
            rep2 = families.check_restriction_rate(f, 2.0)
            worst_restr = max(worst_restr, rep2.lhs)
        ok = worst_eigen <= IDENTITY_TOL and worst_restr <= IDENTITY_TOL
        return ok, (f"eigen defect {worst_eigen:.2e}, "
                    f"restriction-rate excess {worst_restr:.2e}")
    return _timed(11, "sharpness example: eigenfunction and rate 2", None, body)


def criterion_12() -> CriterionResult:
    def body():
        worst = 0.0
        for f in _corpora()[::4]:
            basis = gaussian.canonical_basis(f.domain.space)
            ref = lp_norm(f, 2.0)
            for mask in range(1 << f.domain.n):
                enc = gaussian.encode_G(f, mask, basis)
                est = gaussian.gaussian_qnorm(enc, 2)
                worst = max(worst, abs(est.value - ref))
        covered = 0
        rng = np.random.default_rng(1212)
        dom = Domain(biased_space(0.5), 3)
        basis = gaussian.canonical_basis(dom.space)
        for trial in range(100):
            f = FunctionTable(dom, rng.standard_normal(dom.size))
            enc = gaussian.encode_G(f, 0b111, basis)
            exact = gaussian.gaussian_qnorm(enc, 4).value
            mc = gaussian.gaussian_qnorm(enc, 4, "monte-carlo",
                                         seed=5000 + trial, samples=20000)
            if abs(mc.value - exact) <= mc.ci_halfwidth:
                covered += 1
        ok = worst <= IDENTITY_TOL and covered >= 95
        return ok, f"2-norm defect {worst:.2e}, MC coverage {covered}/100"
    return _timed(12, "encoding 2-norm preservation and MC interval coverage", None, body)


def criterion_13() -> CriterionResult:
    def body():
        config = suite.SuiteConfig.from_dict({
            "schema": 1,
            "seed": 7,
            "targets": [
                {"name": "and2", "generator": "and",
                 "params": {"n": 3, "p": 0.5, "t": 2}},
                {"name": "rnd", "generator": "random-boolean",
                 "params": {"n": 3, "p": 0.5, "density": 0.4}},
            ],
            "checkers": ["level-d", "classical-hyper", "level-qnorm",
                         "smeared-level1"],
            "grids": {"d": [0, 1], "q": [2, 4], "p": [0.5]},
        })
        a = suite.run_suite(config).to_json()
        b = suite.run_suite(config).to_json()
        ok = a == b
        return ok, f"two runs {'byte-identical' if ok else 'DIFFER'} ({len(a)} bytes)"
    return _timed(13, "suite determinism: identical config+seed twice", None, body)


ALL_CRITERIA = [
    criterion_01, criterion_02, criterion_03, criterion_04, criterion_05,
    criterion_06, criterion_07, criterion_08, criterion_09, criterion_10,
    criterion_11, criterion_12, criterion_13,
]


def run_all(echo=print) -> list[CriterionResult]:
    results = []
    for fn in ALL_CRITERIA:
        res = fn()
        results.append(res)
        if echo:
            echo(res.line)
    return results
