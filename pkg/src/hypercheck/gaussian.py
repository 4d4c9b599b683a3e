"""Gaussian encodings and mixed discrete/Gaussian q-norms.

A one-coordinate function expands in an orthonormal basis {1, f_1, ...,
f_{k-1}}; the encoding replaces each f_j by an independent standard Gaussian
z_j.  Tensorizing over a coordinate subset S gives a function on
``Omega^{S^c} x R^{(k-1)|S|}``, represented here by its coefficient tensor:
basis indices on S, point indices elsewhere.

q-norms of encodings are computed two ways: exact product Gauss-Hermite
quadrature for even integer q (the integrand |g|^q is then a polynomial of
per-variable degree <= q) and seeded Monte Carlo with a 99% confidence
interval otherwise.

The basis is pinned: Gram-Schmidt applied to the centered indicators
(1_{w=0} - mu(0), ..., 1_{w=k-2} - mu(k-2)) in element order.  Any
orthonormal basis works in the inequalities below, but q-norms of encodings
depend on the choice, so reproducibility requires fixing one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy import integrate

from . import kernels
from .errors import DomainError, ShapeError, UnsupportedError
from .operators import apply_axis_matrix, laplacian_L, noise_resample
from .reports import InequalityReport, make_report
from .space import Domain, FunctionTable, ProductSpace, lp_norm_pow, mask_coords

MAX_QUAD_VARS = 10
MAX_QUAD_NODES = 6
_CHUNK = 1 << 18
_Z99 = 2.5758293035489004  # two-sided 99% normal quantile

DEFAULT_MC_SAMPLES = 2_000_000
DEFAULT_SEED = 42


@dataclass(frozen=True)
class OrthonormalBasis:
    """{1, f_1, ..., f_{k-1}}: rows of ``vectors`` are the f_j values."""

    space: ProductSpace
    vectors: np.ndarray  # shape (k-1, k), read-only

    @property
    def k(self) -> int:
        return self.space.k

    def eval_matrix(self) -> np.ndarray:
        """B[w, b] = b-th basis function at element w (b=0 is the constant)."""
        k = self.k
        out = np.empty((k, k))
        out[:, 0] = 1.0
        out[:, 1:] = self.vectors.T
        return out

    def projection_matrix(self) -> np.ndarray:
        """P[b, w] = mu(w) * (b-th basis function at w); P @ values = coefficients."""
        return self.eval_matrix().T * self.space.weight_array[None, :]


def canonical_basis(space: ProductSpace) -> OrthonormalBasis:
    """Gram-Schmidt on the centered indicators, in element order."""
    k = space.k
    mu = space.weight_array
    if np.any(mu <= 0.0):
        raise DomainError("degenerate weights")
    vecs = []
    for j in range(k - 1):
        v = -mu[j] * np.ones(k)
        v[j] += 1.0
        for u in vecs:
            v = v - kernels.weighted_dot(mu, v, u) * u
        # second pass for orthogonality at the 1e-12 budget
        for u in vecs:
            v = v - kernels.weighted_dot(mu, v, u) * u
        norm = math.sqrt(kernels.weighted_dot(mu, v, v))
        if norm < 1e-14:
            raise DomainError("weights too degenerate for a basis")
        vecs.append(v / norm)
    arr = np.array(vecs)
    arr.flags.writeable = False
    return OrthonormalBasis(space, arr)


@dataclass(frozen=True)
class MixedGaussianFunction:
    """Coefficient tensor of an encoding G_S f.

    ``coeffs`` is flat in the table's mixed-radix order; slots on encoded
    coordinates index the basis (0 = constant), the rest index points.
    """

    domain: Domain
    encoded_mask: int
    basis: OrthonormalBasis
    coeffs: np.ndarray

    @property
    def gaussian_vars(self) -> int:
        return (self.domain.k - 1) * self.encoded_mask.bit_count()


def encode_G(f: FunctionTable, mask: int, basis: OrthonormalBasis) -> MixedGaussianFunction:
    if basis.space != f.domain.space:
        raise ShapeError("basis was built for a different space")
    f.domain.validate_mask(mask)
    proj = basis.projection_matrix()
    v = f.values
    k = f.domain.k
    for i in mask_coords(mask):
        v = apply_axis_matrix(v, proj, k ** i)
    v = np.ascontiguousarray(v)
    v.flags.writeable = False
    return MixedGaussianFunction(f.domain, mask, basis, v)


def decode_table(g: MixedGaussianFunction) -> FunctionTable:
    """Evaluate each Gaussian slot at its basis-function values; inverts encode_G."""
    ev = g.basis.eval_matrix()
    v = g.coeffs
    k = g.domain.k
    for i in mask_coords(g.encoded_mask):
        v = apply_axis_matrix(v, ev, k ** i)
    return FunctionTable(g.domain, v)


def evaluate_at(g: MixedGaussianFunction, point, z) -> float:
    """g at a discrete point (values on S^c, ascending coordinates) and
    Gaussian values z[(k-1) per encoded coordinate, ascending]."""
    dom = g.domain
    k = dom.k
    encoded = mask_coords(g.encoded_mask)
    free = [i for i in range(dom.n) if i not in encoded]
    if len(point) != len(free) or len(z) != (k - 1) * len(encoded):
        raise ShapeError("point/z lengths do not match the encoding")
    t = g.coeffs.reshape((k,) * dom.n)
    # axis n-1-i corresponds to coordinate i; contract slowest axis first
    for coord in reversed(range(dom.n)):
        if coord in encoded:
            pos = encoded.index(coord)
            u = np.concatenate(([1.0], z[pos * (k - 1):(pos + 1) * (k - 1)]))
            t = np.tensordot(u, t, axes=([0], [0]))
        else:
            t = t[point[free.index(coord)]]
    return float(t)


@dataclass(frozen=True)
class NormEstimate:
    value: float
    method: str  # "exact-quadrature" | "monte-carlo"
    ci_halfwidth: float
    sample_count: int

    def to_dict(self) -> dict:
        return {"value": self.value, "method": self.method,
                "ci_halfwidth": self.ci_halfwidth,
                "sample_count": self.sample_count}


def _hermite_nodes(m: int) -> tuple[np.ndarray, np.ndarray]:
    t, w = np.polynomial.hermite_e.hermegauss(m)
    return t, w / math.sqrt(2.0 * math.pi)


def _node_matrix(k: int, m: int, nodes: np.ndarray, weights: np.ndarray):
    """Per-coordinate evaluation matrix over all (k-1)-fold node combos.

    Row c enumerates node choices for the coordinate's k-1 Gaussian slots
    (first slot fastest); columns are basis indices.
    """
    combos = m ** (k - 1)
    u = np.ones((combos, k))
    w = np.ones(combos)
    idx = np.arange(combos)
    for j in range(k - 1):
        digit = (idx // m ** j) % m
        u[:, j + 1] = nodes[digit]
        w *= weights[digit]
    return u, w


def _grid_sum(tensor: np.ndarray, axis_weights: list[np.ndarray], q: float) -> float:
    if tensor.size <= _CHUNK:
        w = reduce(np.multiply.outer, axis_weights) if axis_weights else np.ones(())
        return kernels.weighted_pow_sum(
            np.ascontiguousarray(w, dtype=np.float64).ravel(),
            np.ascontiguousarray(tensor, dtype=np.float64).ravel(), q)
    w0 = axis_weights[0]
    return math.fsum(
        w0[j] * _grid_sum(tensor[j], axis_weights[1:], q) for j in range(tensor.shape[0]))


def gaussian_moment_exact(g: MixedGaussianFunction, q: int) -> tuple[float, int]:
    """E |g|^q over mu^{S^c} x gamma^S by product Gauss-Hermite.

    Returns (moment, number of grid evaluations).  Exact up to rounding for
    even integer q since |g|^q is then a polynomial of per-variable degree
    <= q and ceil((q+1)/2) nodes integrate degree <= q+1 exactly.
    """
    if q < 2 or q % 2 != 0:
        raise UnsupportedError("exact quadrature needs an even integer q >= 2")
    dom = g.domain
    k = dom.k
    m = (q + 2) // 2  # = ceil((q+1)/2) for even q
    nodes, nw = _hermite_nodes(m)
    node_u, node_w = _node_matrix(k, m, nodes, nw)
    t = g.coeffs.reshape((k,) * dom.n)
    axis_weights = []
    for axis in range(dom.n):
        coord = dom.n - 1 - axis
        if g.encoded_mask >> coord & 1:
            moved = np.tensordot(node_u, t, axes=([1], [axis]))
            t = np.moveaxis(moved, 0, axis)
            axis_weights.append(node_w)
        else:
            axis_weights.append(dom.space.weight_array)
    return _grid_sum(t, axis_weights, float(q)), t.size


def _mc_moment(g: MixedGaussianFunction, q: float, seed: int, samples: int):
    dom = g.domain
    k = dom.k
    rng = np.random.default_rng(seed)
    mu = dom.space.weight_array
    tensor = g.coeffs.reshape((k,) * dom.n)
    eye = np.eye(k)
    total = []
    total_sq = []
    done = 0
    batch = max(1, _CHUNK // max(dom.size, 1))
    while done < samples:
        b = min(batch, samples - done)
        t = np.broadcast_to(tensor, (b,) + tensor.shape)
        for axis in range(dom.n):
            coord = dom.n - 1 - axis
            if g.encoded_mask >> coord & 1:
                u = np.ones((b, k))
                u[:, 1:] = rng.standard_normal((b, k - 1))
            else:
                u = eye[rng.choice(k, size=b, p=mu)]
            t = np.einsum("bj,bj...->b...", u, t)
        vals = np.abs(t) ** q
        total.append(math.fsum(vals))
        total_sq.append(math.fsum(vals * vals))
        done += b
    s1 = math.fsum(total)
    s2 = math.fsum(total_sq)
    mean = s1 / samples
    var = max(0.0, (s2 - samples * mean * mean) / max(1, samples - 1))
    return mean, math.sqrt(var / samples)


def gaussian_qnorm(g: MixedGaussianFunction, q: float, method: str = "exact",
                   *, seed: int = DEFAULT_SEED, samples: int = DEFAULT_MC_SAMPLES) -> NormEstimate:
    """The q-norm of an encoding under mu^{S^c} x gamma^S."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if method == "exact":
        if q != int(q) or int(q) % 2 != 0:
            raise UnsupportedError("exact quadrature needs an even integer q")
        m = (int(q) + 2) // 2
        if g.gaussian_vars > MAX_QUAD_VARS or m > MAX_QUAD_NODES:
            method = "monte-carlo"  # beyond the desk-scale quadrature cap
        else:
            moment, count = gaussian_moment_exact(g, int(q))
            return NormEstimate(moment ** (1.0 / q), "exact-quadrature", 0.0, count)
    if method != "monte-carlo":
        raise DomainError(f"unknown method {method!r}")
    mean, se = _mc_moment(g, float(q), seed, samples)
    hw_moment = _Z99 * se
    value = mean ** (1.0 / q)
    if mean > 0.0:
        hw = hw_moment * value / (q * mean)  # delta method on x^(1/q)
    else:
        hw = hw_moment
    return NormEstimate(value, "monte-carlo", hw, samples)


# ---------------------------------------------------------------------------
# rates and the two encoding checkers
# ---------------------------------------------------------------------------

def beta_rate(rho: float, q: float) -> float:
    """beta = rho * (1 + 2(q-2)/log(1/rho)) for rho in [0, 1/3]."""
    if not 0.0 <= rho <= 1.0 / 3.0 + 1e-15:
        raise DomainError(f"rho must be in [0, 1/3], got {rho}")
    if rho == 0.0:
        return 0.0
    return rho * (1.0 + 2.0 * (q - 2.0) / math.log(1.0 / rho))


def check_tensorization(f: FunctionTable, rho: float, q: int, *,
                        tol_scale: float = 1.0) -> InequalityReport:
    """||T_rho f||_q^q against the subset sum of encoded Laplacian q-norms.

    LHS is fully discrete; every RHS summand ||(L_S o G_{S^c}) f||_q^q is an
    exact quadrature, so the margin is reproducible bit for bit.
    """
    if q < 2 or int(q) != q or q % 2 != 0:
        raise DomainError("tensorization check needs an even integer q >= 2")
    beta = beta_rate(rho, q)
    basis = canonical_basis(f.domain.space)
    lhs = lp_norm_pow(noise_resample(f, rho), q)
    full = f.domain.full_mask()
    terms = []
    for mask in range(full + 1):
        lap = laplacian_L(f, mask)
        enc = encode_G(lap, full ^ mask, basis)
        moment, _ = gaussian_moment_exact(enc, int(q))
        s = mask.bit_count()
        terms.append((beta ** (q * s) if s else 1.0) * moment)
    rhs = math.fsum(terms)
    return make_report(
        "tensorization", lhs, rhs, tol_scale=tol_scale,
        params={"rho": rho, "q": int(q), "beta": beta,
                "k": f.domain.k, "n": f.domain.n,
                "summands": terms})


def gaussian_affine_moment(d: float, q: float) -> float:
    """E |1 + d Z|^q for standard Gaussian Z.

    Even integer q: exact Gauss-Hermite.  Otherwise adaptive quadrature
    split at the kink z = -1/d.
    """
    if q == int(q) and int(q) % 2 == 0 and q >= 2:
        m = (int(q) + 2) // 2
        nodes, w = _hermite_nodes(m)
        return float(kernels.weighted_pow_sum(w, 1.0 + d * nodes, float(q)))
    phi = lambda z: math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
    fn = lambda z: abs(1.0 + d * z) ** q * phi(z)
    if d == 0.0:
        return 1.0
    kink = -1.0 / d
    a, _ = integrate.quad(fn, -np.inf, kink, limit=200)
    b, _ = integrate.quad(fn, kink, np.inf, limit=200)
    return a + b


def check_one_var_bound(x_values, d: float, rho: float, q: float, *,
                        tol_scale: float = 1.0) -> InequalityReport:
    """One-variable encoding bound for a standardized discrete X:

        ||1 + rho d X||_q^q <= ||1 + d Z||_q^q + beta^q ||d X||_q^q.
    """
    if q < 2:
        raise DomainError(f"q must be >= 2, got {q}")
    vals = np.array([v for v, _ in x_values], dtype=np.float64)
    probs = np.array([p for _, p in x_values], dtype=np.float64)
    if np.any(probs <= 0) or abs(math.fsum(probs) - 1.0) > 1e-12:
        raise DomainError("probabilities must be positive and sum to 1")
    mean = kernels.weighted_sum(probs, vals)
    var = kernels.weighted_pow_sum(probs, vals, 2.0)
    if abs(mean) > 1e-10 or abs(var - 1.0) > 1e-10:
        raise DomainError(f"X must be standardized (mean {mean}, second moment {var})")
    beta = beta_rate(rho, q)
    lhs = float(kernels.weighted_pow_sum(probs, 1.0 + rho * d * vals, float(q)))
    gauss = gaussian_affine_moment(d, q)
    tail = beta ** q * float(kernels.weighted_pow_sum(probs, d * vals, float(q)))
    rhs = gauss + tail
    return make_report(
        "one-var-encoding", lhs, rhs, tol_scale=tol_scale,
        params={"d": d, "rho": rho, "q": q, "beta": beta,
                "gaussian_term": gauss, "discrete_term": tail})


def standardized_two_point(p: float) -> list[tuple[float, float]]:
    """The mean-0 variance-1 two-point variable supported per bias p."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"bias must be in (0,1), got {p}")
    return [(-math.sqrt(p / (1.0 - p)), 1.0 - p),
            (math.sqrt((1.0 - p) / p), p)]
