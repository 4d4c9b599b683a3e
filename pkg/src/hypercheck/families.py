"""Intersecting families, smeared level-1 statistics, the pseudo-disjointness
operator, vector-family embeddings, and the named example generators.

Set families on n ground elements are Boolean tables on the two-point cube:
the table index IS the subset bitmask, so membership and intersection tests
are integer bit operations.  All measure-sensitive checkers take the bias p
explicitly and re-weight the table, which lets one family be scanned across
a p-grid without regenerating it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, HypercheckError, HypothesisError, ResourceError, UnsupportedError
from .operators import (
    apply_axis_matrix,
    chi_table,
    efron_stein,
    level1_coefficients,
    noise_resample,
)
from .reports import CONSTANTS, InequalityReport, make_report, tolerance
from .space import (
    Domain,
    FunctionTable,
    biased_space,
    expectation,
    inner_product,
    iter_restrictions,
    lp_norm,
    restrict,
)

DELTA_ZERO_TOL = 1e-12


# ---------------------------------------------------------------------------
# Boolean families on the two-point cube
# ---------------------------------------------------------------------------

def _require_boolean_cube(f: FunctionTable) -> None:
    if f.domain.k != 2:
        raise UnsupportedError("set families live on the two-point cube")
    v = f.values
    if not np.all(np.minimum(np.abs(v), np.abs(v - 1.0)) <= 1e-9):
        raise DomainError("family indicator must be Boolean-valued")


def rebias(f: FunctionTable, p: float) -> FunctionTable:
    """The same table re-weighted to the p-biased cube."""
    if f.domain.k != 2:
        raise UnsupportedError("re-biasing needs a two-point space")
    if abs(f.domain.space.weights[1] - p) <= 1e-15:
        return f
    return FunctionTable(Domain(biased_space(p), f.domain.n), f.values)


def members(f: FunctionTable) -> np.ndarray:
    """Member subsets as index bitmasks."""
    _require_boolean_cube(f)
    return np.flatnonzero(f.values >= 0.5)


def is_intersecting(f: FunctionTable) -> bool:
    """Every two members share an element (the empty set never qualifies)."""
    mem = members(f)
    if mem.size == 0:
        return True
    return bool(np.all(mem[:, None] & mem[None, :]))


def is_cross_intersecting(f: FunctionTable, g: FunctionTable) -> bool:
    a, b = members(f), members(g)
    if a.size == 0 or b.size == 0:
        return True
    return bool(np.all(a[:, None] & b[None, :]))


def family_table(n: int, p: float, subsets) -> FunctionTable:
    """Indicator of an explicit collection of subset bitmasks."""
    dom = Domain(biased_space(p), n)
    vals = np.zeros(dom.size)
    for s in subsets:
        vals[s] = 1.0
    return FunctionTable(dom, vals)


# ---------------------------------------------------------------------------
# pseudo-disjointness operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FriedgutOperator:
    """Tensor power of the 2x2 pseudo-disjointness matrix.

    The base matrix vanishes at (1,1), so the n-fold tensor power vanishes
    on every pair of intersecting subsets; its eigenfunctions are the
    p-biased characters with eigenvalues (-p/(1-p))^|S|.
    """

    p: float
    n: int

    @property
    def base(self) -> np.ndarray:
        p = self.p
        return np.array([[(1.0 - 2.0 * p) / (1.0 - p), p / (1.0 - p)],
                         [1.0, 0.0]])

    def entry(self, s: int, t: int) -> float:
        """Matrix entry at a pair of subset masks."""
        out = 1.0
        base = self.base
        for i in range(self.n):
            out *= base[(s >> i) & 1, (t >> i) & 1]
        return out


def apply_friedgut(op: FriedgutOperator, f: FunctionTable) -> FunctionTable:
    _require_two_point_bias(f, op.p)
    if f.domain.n != op.n:
        raise DomainError("operator arity does not match the table")
    v = f.values
    base = op.base
    for i in range(op.n):
        v = apply_axis_matrix(v, base, 2 ** i)
    return FunctionTable(f.domain, v)


def _require_two_point_bias(f: FunctionTable, p: float) -> None:
    if f.domain.k != 2:
        raise UnsupportedError("needs a two-point space")
    if abs(f.domain.space.weights[1] - p) > 1e-12:
        raise DomainError(f"table lives at bias {f.domain.space.weights[1]}, not {p}")


def check_disjointness_pairing(h: FunctionTable, g: FunctionTable, p: float, *,
                               tol_scale: float = 1.0) -> InequalityReport:
    """For cross-intersecting Boolean h, g at bias p <= 1/2:

        <Ah, g> = 0   and   mu(h) mu(g) <= sum_{d>=1} (p/(1-p))^d |<h^{=d}, g>|.
    """
    if not 0.0 < p <= 0.5:
        raise DomainError(f"bias must be in (0, 1/2], got {p}")
    h, g = rebias(h, p), rebias(g, p)
    if h.domain != g.domain:
        raise DomainError("families must share a ground set")
    if not is_cross_intersecting(h, g):
        raise HypothesisError("families are not cross-intersecting")
    op = FriedgutOperator(p, h.domain.n)
    pairing = inner_product(apply_friedgut(op, h), g)
    dec = efron_stein(h)
    n = h.domain.n
    by_level = [0.0] * (n + 1)
    for mask, part in dec.parts.items():
        by_level[mask.bit_count()] += inner_product(part, g)
    ratio = p / (1.0 - p)
    rhs = math.fsum(ratio ** d * abs(by_level[d]) for d in range(1, n + 1))
    lhs = expectation(h) * expectation(g)
    rep = make_report(
        "disjointness-pairing", lhs, rhs, tol_scale=tol_scale,
        params={"p": p, "pairing_value": pairing,
                "level_inner_products": by_level})
    rep.passed = rep.passed and abs(pairing) <= 1e-10 * tol_scale
    return rep


# ---------------------------------------------------------------------------
# smeared level-1 machinery
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmearedStats:
    p: float
    alpha: float       # E[f]
    sigma_sq: float    # sum of squared level-1 coefficients
    delta: float       # max |level-1 coefficient|, zeroed below 1e-12
    m: int             # count of coefficients with square >= delta^2/2


def smeared_stats(f: FunctionTable, p: float) -> SmearedStats:
    f = rebias(f, p)
    _require_boolean_cube(f)
    coeffs = level1_coefficients(f)
    alpha = expectation(f)
    sigma_sq = float(math.fsum(coeffs * coeffs))
    delta = float(np.max(np.abs(coeffs))) if coeffs.size else 0.0
    if delta <= DELTA_ZERO_TOL:
        return SmearedStats(p, alpha, sigma_sq, 0.0, 0)
    cut = 0.5 * delta * delta * (1.0 - 1e-12)
    m = int(np.count_nonzero(coeffs * coeffs >= cut))
    return SmearedStats(p, alpha, sigma_sq, delta, m)


def check_smeared_level1(f: FunctionTable, p: float, *,
                         tol_scale: float = 1.0) -> InequalityReport:
    """Level-1 bound for smeared families: sigma^2 <= 750 alpha^2 log(1/alpha),
    under m > 1/p^2 and alpha > exp(-sqrt(m))."""
    st = smeared_stats(f, p)
    in_hyp = st.m > 1.0 / (p * p) and st.alpha > math.exp(-math.sqrt(st.m))
    if 0.0 < st.alpha < 1.0:
        rhs = CONSTANTS["smeared_level1_factor"] * st.alpha ** 2 * math.log(1.0 / st.alpha)
    else:
        rhs = 0.0
    return make_report(
        "smeared-level1", st.sigma_sq, rhs, out_of_hypothesis=not in_hyp,
        tol_scale=tol_scale,
        params={"p": p, "alpha": st.alpha, "m": st.m, "delta": st.delta,
                "constant": CONSTANTS["smeared_level1_factor"]})


def check_density_decrease(f: FunctionTable, p: float, mask: int, *,
                           tol_scale: float = 1.0) -> InequalityReport:
    """If fixing a small S to zero drops the measure below a quarter, the
    family was already small: mu_p(f) < exp(-0.001 sqrt(m)).

    Vacuous when the restriction hypothesis fails; flagged when m <= 1/p^2.
    """
    f = rebias(f, p)
    _require_boolean_cube(f)
    f.domain.validate_mask(mask)
    st = smeared_stats(f, p)
    in_hyp = st.m > 1.0 / (p * p)
    mu = expectation(f)
    size = mask.bit_count()
    zeros = (0,) * size
    mu_zero = expectation(restrict(f, mask, zeros)) if mask else mu
    small_s = size <= 1.0 / (4.0 * p) + 1e-12
    drops = mu > 0.0 and mu_zero / mu < 0.25
    conclusion_rhs = math.exp(-CONSTANTS["density_decrease_exponent"] * math.sqrt(st.m))
    return make_report(
        "density-decrease", mu, conclusion_rhs,
        vacuous=not (small_s and drops),
        out_of_hypothesis=not in_hyp, tol_scale=tol_scale,
        params={"p": p, "mask": mask, "set_size": size, "m": st.m,
                "mu_zero_restricted": mu_zero,
                "ratio": (mu_zero / mu) if mu > 0 else 1.0})


def globalizing_restriction(f: FunctionTable, r: float):
    """The measure-maximizing restriction at rate r.

    Picks (S, x) maximizing mu(f_{S->x}) / r^|S| (lexicographically smallest
    maximizer), so the result h satisfies mu(h_{T->y}) <= mu(h) r^|T| for
    every further restriction; that is verified before returning, as is
    |S| <= log(1/mu(f)) / log(r).
    """
    if r <= 1.0:
        raise DomainError(f"rate must exceed 1, got {r}")
    _require_boolean_cube(f)
    mu_f = expectation(f)
    if mu_f <= 0.0:
        return 0, (), f
    best_score = mu_f
    best = (0, ())
    for mask in range(1, 1 << f.domain.n):
        scale = r ** -mask.bit_count()
        for assignment, _, sub in iter_restrictions(f, mask):
            score = expectation(sub) * scale
            if score > best_score:
                best_score = score
                best = (mask, assignment)
    mask, assignment = best
    h = restrict(f, mask, assignment) if mask else f
    mu_h = expectation(h)
    tol = tolerance(mu_h, mu_h)
    for t_mask in range(1, 1 << h.domain.n):
        bound = mu_h * r ** t_mask.bit_count() + tol
        for _, _, sub in iter_restrictions(h, t_mask):
            if expectation(sub) > bound:
                raise HypercheckError("globalizing restriction failed its post-check")
    if mu_f <= 1.0 and mask.bit_count() > math.log(1.0 / mu_f) / math.log(r) + 1e-9:
        raise HypercheckError("globalizing restriction size bound violated")
    return mask, assignment, h


def check_intersecting_bound(f: FunctionTable, p: float, *,
                             tol_scale: float = 1.0) -> InequalityReport:
    """Measure bound for smeared intersecting families:

        mu_p(F) <= 32 exp(-0.0001/p)  for  1/sqrt(m) <= p <= 1/2.

    At desk scale the bound exceeds 1 (recorded as vacuous); the report also
    exercises the globalizing-restriction / cross-intersection pipeline at
    rate r = e and records the derived constant c = 1/(3200 r).
    """
    f = rebias(f, p)
    if not is_intersecting(f):
        raise HypothesisError("family is not intersecting")
    st = smeared_stats(f, p)
    in_hyp = st.m > 0 and 1.0 / math.sqrt(st.m) <= p <= 0.5
    lhs = expectation(f)
    rhs = CONSTANTS["intersecting_prefactor"] * math.exp(
        -CONSTANTS["intersecting_exponent"] / p)
    params: dict = {"p": p, "m": st.m, "alpha": st.alpha,
                    "prefactor": CONSTANTS["intersecting_prefactor"],
                    "exponent": CONSTANTS["intersecting_exponent"]}
    rate = math.e
    c_cross = 1.0 / (CONSTANTS["cross_intersect_scale"] * rate)
    params["cross_rate"] = rate
    params["cross_constant"] = c_cross
    if lhs > 0.0:
        mask, assignment, h = globalizing_restriction(f, rate)
        mu_h = expectation(h)
        g = restrict(f, mask, (0,) * mask.bit_count()) if mask else f
        mu_g = expectation(g)
        threshold = math.exp(-c_cross / p)
        bound_g = CONSTANTS["cross_intersect_prefactor"] * threshold
        params.update({
            "glob_mask": mask, "glob_size": mask.bit_count(),
            "mu_h": mu_h, "mu_g": mu_g,
            "cross_threshold": threshold, "cross_bound": bound_g,
            "cross_implication_holds":
                not mu_h > threshold or mu_g < bound_g + tolerance(mu_g, bound_g, tol_scale),
        })
    return make_report("intersecting-measure", lhs, rhs,
                       vacuous=rhs >= 1.0, out_of_hypothesis=not in_hyp,
                       tol_scale=tol_scale, params=params)


# ---------------------------------------------------------------------------
# vector families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VectorFamily:
    k: int
    n: int
    members: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.k < 2 or self.n < 1:
            raise DomainError("need k >= 2 and n >= 1")
        seen = set()
        for v in self.members:
            if len(v) != self.n:
                raise DomainError(f"vector {v} has wrong length")
            if any(not 0 <= c < self.k for c in v):
                raise DomainError(f"vector {v} has out-of-range coordinates")
            if v in seen:
                raise DomainError(f"duplicate vector {v}")
            seen.add(v)

    @property
    def density(self) -> float:
        return len(self.members) / self.k ** self.n


def is_vector_intersecting(fam: VectorFamily) -> bool:
    """Every two member vectors agree in some coordinate."""
    mem = fam.members
    for i, x in enumerate(mem):
        for y in mem[i + 1:]:
            if all(a != b for a, b in zip(x, y)):
                return False
    return True


def _apply_perm(vec: tuple[int, ...], perm) -> tuple[int, ...]:
    # coordinate i of the image reads from coordinate perm[i]
    return tuple(vec[perm[i]] for i in range(len(vec)))


def _verify_symmetry(fam: VectorFamily, generators) -> None:
    mem = set(fam.members)
    for perm in generators:
        if sorted(perm) != list(range(fam.n)):
            raise DomainError(f"not a permutation of range({fam.n}): {perm}")
        if {_apply_perm(v, perm) for v in mem} != mem:
            raise HypothesisError(f"generator {perm} does not preserve the family")
    # transitivity of the generated group on coordinates
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for perm in generators:
            for j in (perm[i], perm.index(i) if i in perm else i):
                if j not in seen:
                    seen.add(j)
                    frontier.append(j)
    if len(seen) != fam.n:
        raise HypothesisError("generators are not transitive on coordinates")


@dataclass(frozen=True)
class EmbeddingResult:
    family: VectorFamily
    p: float
    tilde_size: int
    table: FunctionTable  # indicator of the up-closure B on {0,1}^{k n}
    density: float        # |A| / k^n
    mu_b: float           # mu_p(B)
    m_smeared: int | None


def embed_vector_family(fam: VectorFamily, p: float | None = None,
                        generators=None) -> EmbeddingResult:
    """Embed A into the cube of letter-indicator blocks and up-close it.

    Vector z maps to the point whose block i carries exactly the letter
    z_i (bit i*k + z_i); B is the up-closure of the image.  When symmetry
    generators are supplied they are verified and the smeared count
    m(1_B) >= n is checked.
    """
    bits = fam.k * fam.n
    if bits > 20:
        raise ResourceError(f"embedded cube needs 2^{bits} entries, cap is 2^20")
    if p is None:
        if fam.n < 2:
            raise DomainError("default bias log(n)/k needs n >= 2")
        p = math.log(fam.n) / fam.k
    if not 0.0 < p < 1.0:
        raise DomainError(f"bias must be in (0,1), got {p}")
    arr = np.zeros(1 << bits)
    for z in fam.members:
        idx = 0
        for i, c in enumerate(z):
            idx |= 1 << (i * fam.k + c)
        arr[idx] = 1.0
    tilde_size = int(np.count_nonzero(arr))
    for b in range(bits):
        view = arr.reshape(-1, 2, 1 << b)
        view[:, 1, :] = np.maximum(view[:, 1, :], view[:, 0, :])
        arr = view.reshape(-1)
    table = FunctionTable(Domain(biased_space(p), bits), arr)
    mu_b = expectation(table)
    m_val = None
    if generators is not None:
        _verify_symmetry(fam, [tuple(g) for g in generators])
        m_val = smeared_stats(table, p).m
        if m_val < fam.n:
            raise HypercheckError(
                f"embedded family of a transitive-symmetric input has m = {m_val} < n")
    return EmbeddingResult(fam, p, tilde_size, table, fam.density, mu_b, m_val)


def check_coupling_bound(fam: VectorFamily, p: float | None = None, *,
                         tol_scale: float = 1.0) -> InequalityReport:
    """Coupling bound |A|/k^n <= mu_p(B) / (1-(1-p)^k)^n, and its fixed-bias
    corollary |A|/k^n <= 4 mu_p(B) at p = log(n)/k (n >= 2)."""
    emb = embed_vector_family(fam, p)
    p = emb.p
    conditional_mass = (1.0 - (1.0 - p) ** fam.k) ** fam.n
    lhs = emb.density
    rhs = emb.mu_b / conditional_mass
    cor_applicable = fam.n >= 2 and abs(p - math.log(fam.n) / fam.k) <= 1e-12
    params = {"p": p, "mu_b": emb.mu_b, "conditional_mass": conditional_mass,
              "tilde_size": emb.tilde_size, "cor_applicable": cor_applicable}
    rep = make_report("coupling", lhs, rhs, tol_scale=tol_scale, params=params)
    if cor_applicable:
        cor_rhs = 4.0 * emb.mu_b
        params["cor_rhs"] = cor_rhs
        rep.passed = rep.passed and lhs <= cor_rhs + tolerance(lhs, cor_rhs, tol_scale)
    return rep


def check_vector_bound(fam: VectorFamily, generators, *,
                       tol_scale: float = 1.0) -> InequalityReport:
    """Density bound for transitive-symmetric vector-intersecting families:

        |A|/k^n <= 128 exp(-0.0001 k / log n)   for 2 log n <= k <= sqrt(n) log n,
        |A|/k^n <= 128 exp(-0.0001 sqrt(n))     for larger k.

    At desk scale the bound exceeds 1; that is recorded as a vacuous pass.
    """
    if not is_vector_intersecting(fam):
        raise HypothesisError("family is not vector-intersecting")
    _verify_symmetry(fam, [tuple(g) for g in generators])
    pre = CONSTANTS["vector_prefactor"]
    expo = CONSTANTS["vector_exponent"]
    log_n = math.log(fam.n) if fam.n >= 2 else 0.0
    if log_n == 0.0:
        rhs = pre
        in_hyp = False
    elif fam.k > math.sqrt(fam.n) * log_n:
        rhs = pre * math.exp(-expo * math.sqrt(fam.n))
        in_hyp = True
    else:
        rhs = pre * math.exp(-expo * fam.k / log_n)
        in_hyp = fam.k >= 2.0 * log_n
    lhs = fam.density
    return make_report("vector-bound", lhs, rhs,
                       vacuous=rhs >= 1.0, out_of_hypothesis=not in_hyp,
                       tol_scale=tol_scale,
                       params={"k": fam.k, "n": fam.n,
                               "prefactor": pre, "exponent": expo})


def vector_family_to_dict(fam: VectorFamily, generators=None) -> dict:
    out = {"schema": 1, "k": fam.k, "n": fam.n,
           "members": [list(v) for v in fam.members]}
    if generators is not None:
        out["generators"] = [list(g) for g in generators]
    return out


def vector_family_from_dict(obj: dict) -> tuple[VectorFamily, list | None]:
    fam = VectorFamily(int(obj["k"]), int(obj["n"]),
                       tuple(tuple(int(c) for c in v) for v in obj["members"]))
    gens = obj.get("generators")
    return fam, gens


# ---------------------------------------------------------------------------
# example generators
# ---------------------------------------------------------------------------

def dictator(n: int, p: float, i: int = 0) -> FunctionTable:
    """f(x) = x_i on the p-biased cube (coordinate 0-based)."""
    dom = Domain(biased_space(p), n)
    if not 0 <= i < n:
        raise DomainError(f"coordinate {i} out of range")
    idx = np.arange(dom.size)
    return FunctionTable(dom, ((idx >> i) & 1).astype(np.float64))


def and_t(n: int, p: float, t: int) -> FunctionTable:
    """f(x) = 1 iff the first t coordinates are all 1."""
    if not 1 <= t <= n:
        raise DomainError(f"need 1 <= t <= {n}, got {t}")
    dom = Domain(biased_space(p), n)
    idx = np.arange(dom.size)
    want = (1 << t) - 1
    return FunctionTable(dom, (idx & want == want).astype(np.float64))


def threshold(n: int, p: float, t: int) -> FunctionTable:
    """f(x) = 1 iff at least t coordinates are 1."""
    if not 0 <= t <= n + 1:
        raise DomainError(f"threshold {t} out of range")
    dom = Domain(biased_space(p), n)
    idx = np.arange(dom.size)
    pop = np.array([int(x).bit_count() for x in idx])
    return FunctionTable(dom, (pop >= t).astype(np.float64))


def majority(n: int, p: float) -> FunctionTable:
    if n % 2 == 0:
        raise DomainError("majority needs odd n")
    return threshold(n, p, (n + 1) // 2)


def symmetric_family(n: int, p: float, weights) -> FunctionTable:
    """Indicator of all subsets whose size lies in ``weights``."""
    dom = Domain(biased_space(p), n)
    wset = set(weights)
    if any(not 0 <= w <= n for w in wset):
        raise DomainError("weight out of range")
    idx = np.arange(dom.size)
    pop = np.array([int(x).bit_count() for x in idx])
    return FunctionTable(dom, np.isin(pop, sorted(wset)).astype(np.float64))


def tribes_dual(n: int, p: float, size: int) -> FunctionTable:
    """The tribes family (some block all-ones) intersected with its dual
    (no block all-zeros), with consecutive blocks of the given size."""
    if size < 1 or n % size != 0:
        raise DomainError(f"block size {size} must divide n = {n}")
    dom = Domain(biased_space(p), n)
    blocks = [((1 << size) - 1) << (j * size) for j in range(n // size)]
    vals = np.empty(dom.size)
    for x in range(dom.size):
        has_full = any(x & b == b for b in blocks)
        has_empty = any(x & b == 0 for b in blocks)
        vals[x] = 1.0 if has_full and not has_empty else 0.0
    return FunctionTable(dom, vals)


def sharpness_product(n: int, d: int) -> FunctionTable:
    """The degree-d product of centered block sums at bias p = d/n:

        f = prod_j sum_{i in block j} (x_i - p),

    an eigenfunction of every noise operator with eigenvalue rho^d, and
    restriction-2-norm-global at rate 2.
    """
    if d < 1 or n % d != 0:
        raise DomainError(f"d = {d} must divide n = {n}")
    p = d / n
    dom = Domain(biased_space(p), n)
    block = n // d
    idx = np.arange(dom.size)
    vals = np.ones(dom.size)
    for j in range(d):
        s = np.zeros(dom.size)
        for i in range(block):
            s += ((idx >> (j * block + i)) & 1) - p
        vals *= s
    return FunctionTable(dom, vals)


def character(n: int, p: float, mask: int) -> FunctionTable:
    return chi_table(Domain(biased_space(p), n), mask)


def constant(n: int, p: float, c: float) -> FunctionTable:
    dom = Domain(biased_space(p), n)
    return FunctionTable(dom, np.full(dom.size, float(c)))


def random_boolean(n: int, p: float, density: float, seed: int) -> FunctionTable:
    dom = Domain(biased_space(p), n)
    rng = np.random.default_rng(seed)
    return FunctionTable(dom, (rng.random(dom.size) < density).astype(np.float64))


def random_table(n: int, p: float, seed: int) -> FunctionTable:
    dom = Domain(biased_space(p), n)
    rng = np.random.default_rng(seed)
    return FunctionTable(dom, rng.standard_normal(dom.size))


def constant_vectors(k: int, n: int) -> VectorFamily:
    return VectorFamily(k, n, tuple((c,) * n for c in range(k)))


GENERATORS = {
    "dictator": dictator,
    "and": and_t,
    "threshold": threshold,
    "majority": majority,
    "symmetric": symmetric_family,
    "tribes-dual": tribes_dual,
    "sharpness": sharpness_product,
    "chi": character,
    "constant": constant,
    "random-boolean": random_boolean,
    "random-table": random_table,
    "constant-vectors": constant_vectors,
}


def generate_example(name: str, params: dict):
    if name not in GENERATORS:
        raise DomainError(f"unknown generator {name!r}; have {sorted(GENERATORS)}")
    try:
        return GENERATORS[name](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from None


# ---------------------------------------------------------------------------
# sharpness-example facts
# ---------------------------------------------------------------------------

def check_noise_eigenfunction(f: FunctionTable, d: int,
                              rhos=(0.3, 0.7, 1.0), *,
                              tol_scale: float = 1.0) -> InequalityReport:
    """Worst pointwise deviation of T_rho f from rho^d f over a rho grid."""
    worst = 0.0
    for rho in rhos:
        lhs_tab = noise_resample(f, rho)
        dev = float(np.max(np.abs(lhs_tab.values - rho ** d * f.values)))
        worst = max(worst, dev)
    return make_report("noise-eigenfunction", worst, 0.0, tol=1e-10 * tol_scale,
                       params={"d": d, "rhos": list(rhos)})


def check_restriction_rate(f: FunctionTable, r: float, *,
                           tol_scale: float = 1.0) -> InequalityReport:
    """Worst excess of ||f_{S->x}||_2 over r^|S| ||f||_2, across all (S, x)."""
    norm2 = lp_norm(f, 2.0)
    worst = 0.0
    witness = (0, ())
    for mask in range(1, 1 << f.domain.n):
        bound = r ** mask.bit_count() * norm2
        for assignment, _, sub in iter_restrictions(f, mask):
            excess = lp_norm(sub, 2.0) - bound
            if excess > worst:
                worst = excess
                witness = (mask, assignment)
    return make_report("restriction-rate", worst, 0.0, tol=1e-10 * tol_scale,
                       params={"r": r, "norm2": norm2},
                       witness={"mask": witness[0], "assignment": list(witness[1])})
