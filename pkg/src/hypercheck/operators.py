"""Averaging, Laplacians, Efron-Stein decomposition, noise, derivatives.

All operators act coordinate-wise through the shared ``axis_mix`` kernel:
``rho*id + (1-rho)*E_i`` applied along one mixed-radix axis.  With rho=0 this
is the conditional-expectation operator E_i, and composing it over a subset
of coordinates gives E_S; ``id - E_i`` composed over S gives the Laplacian
L_S = sum_{T subseteq S} (-1)^|T| E_T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, ResourceError, UnsupportedError
from .serialize import dumps
from .space import (
    Domain,
    FunctionTable,
    inner_product,
    iter_restrictions,
    lp_norm,
    mask_coords,
    masks_by_size,
    restrict,
    submasks,
)

ES_MEMORY_CAP = 1 << 26  # 2**n tables of k**n entries must fit under this


def _axis_mix(values: np.ndarray, domain: Domain, coord: int, rho: float) -> np.ndarray:
    stride = domain.k ** coord
    return kernels.axis_mix(values, domain.space.weight_array, stride, rho)


def apply_axis_matrix(values: np.ndarray, M: np.ndarray, stride: int) -> np.ndarray:
    """Apply a square matrix along one mixed-radix coordinate axis."""
    k = M.shape[1]
    t = values.reshape(-1, k, stride)
    out = np.einsum("bj,ojs->obs", M, t)
    return np.ascontiguousarray(out.reshape(values.shape[0]))


def average_E(f: FunctionTable, mask: int) -> FunctionTable:
    """E_S: resample the masked coordinates and take the expectation."""
    f.domain.validate_mask(mask)
    v = f.values
    for i in mask_coords(mask):
        v = _axis_mix(v, f.domain, i, 0.0)
    return FunctionTable(f.domain, v)


def laplacian_L(f: FunctionTable, mask: int) -> FunctionTable:
    """L_S = prod_{i in S} (id - E_i)."""
    f.domain.validate_mask(mask)
    v = f.values
    for i in mask_coords(mask):
        v = v - _axis_mix(v, f.domain, i, 0.0)
    return FunctionTable(f.domain, v)


@dataclass(frozen=True)
class EfronSteinDecomposition:
    """The orthogonal pieces f^{=T} keyed by coordinate mask T."""

    domain: Domain
    parts: dict[int, FunctionTable]

    def norm2_sq(self, mask: int) -> float:
        part = self.parts[mask]
        return inner_product(part, part)

    def to_json(self) -> str:
        return dumps({
            "schema": 1,
            "k": self.domain.k,
            "n": self.domain.n,
            "weights": list(self.domain.space.weights),
            "parts": {str(m): t.values.tolist() for m, t in self.parts.items()},
        })


def efron_stein(f: FunctionTable) -> EfronSteinDecomposition:
    """Compute every f^{=T} = E_{T^c} L_T f.

    Uses the Moebius form f^{=T} = sum_{U subseteq T} (-1)^{|U|} E_{U cup T^c} f
    over a table of all 2^n averaged copies, built with one axis operation
    each.
    """
    dom = f.domain
    n = dom.n
    if (1 << n) * dom.size > ES_MEMORY_CAP:
        raise ResourceError("full decomposition too large; use level_part")
    averages: list[np.ndarray] = [f.values] + [None] * ((1 << n) - 1)  # type: ignore[list-item]
    for mask in range(1, 1 << n):
        low = mask & -mask
        averages[mask] = _axis_mix(averages[mask ^ low], dom, low.bit_length() - 1, 0.0)
    full = dom.full_mask()
    parts = {}
    for t_mask in range(1 << n):
        comp = full ^ t_mask
        acc = np.zeros(dom.size)
        for u in submasks(t_mask):
            if u.bit_count() % 2 == 0:
                acc += averages[u | comp]
            else:
                acc -= averages[u | comp]
        parts[t_mask] = FunctionTable(dom, acc)
    return EfronSteinDecomposition(dom, parts)


def es_part(f: FunctionTable, mask: int) -> FunctionTable:
    """A single f^{=T} without materializing the full decomposition."""
    f.domain.validate_mask(mask)
    dom = f.domain
    v = f.values
    for i in mask_coords(mask):
        v = v - _axis_mix(v, dom, i, 0.0)
    for i in mask_coords(dom.full_mask() ^ mask):
        v = _axis_mix(v, dom, i, 0.0)
    return FunctionTable(dom, v)


def level_part(f: FunctionTable, d: int) -> FunctionTable:
    """f^{=d}: the sum of f^{=T} over |T| = d, streamed subset by subset."""
    if not 0 <= d <= f.domain.n:
        raise DomainError(f"level must be in [0, {f.domain.n}], got {d}")
    acc = np.zeros(f.domain.size)
    for mask in masks_by_size(f.domain.n, d):
        acc += es_part(f, mask).values
    return FunctionTable(f.domain, acc)


def noise_resample(f: FunctionTable, rho: float) -> FunctionTable:
    """T_rho computed as the exact tensor power (rho*id + (1-rho)*E)^{(x) n}.

    This is the resampling semantics evaluated in closed form, not Monte
    Carlo; requires 0 <= rho <= 1.
    """
    if not 0.0 <= rho <= 1.0:
        raise DomainError(f"rho must be in [0,1], got {rho}")
    v = f.values
    for i in range(f.domain.n):
        v = _axis_mix(v, f.domain, i, rho)
    return FunctionTable(f.domain, v)


def noise_spectral(f: FunctionTable, rho: float) -> FunctionTable:
    """T_rho as sum_T rho^|T| f^{=T} over the full decomposition.

    rho > 1 is permitted here as a formal degree amplification; the
    resampling semantics only exist for rho in [0,1].
    """
    dec = efron_stein(f)
    acc = np.zeros(f.domain.size)
    for mask, part in dec.parts.items():
        acc += rho ** mask.bit_count() * part.values
    return FunctionTable(f.domain, acc)


def noise(f: FunctionTable, rho: float) -> FunctionTable:
    """T_rho by the cheap tensor route (the checkers' workhorse)."""
    return noise_resample(f, rho)


def derivative_D(f: FunctionTable, mask: int, assignment) -> FunctionTable:
    """D_{S,x} f = [L_S f]_{S -> x}, a table on the remaining coordinates."""
    return restrict(laplacian_L(f, mask), mask, assignment)


def iter_derivatives(f: FunctionTable, mask: int):
    """Yield (assignment, weight, D_{S,x} f) over all x in Omega^S."""
    lap = laplacian_L(f, mask)
    yield from iter_restrictions(lap, mask)


def derivative_moment(f: FunctionTable, mask: int, q: float) -> float:
    """E_{x ~ Omega^S} ||D_{S,x} f||_2^q."""
    total = 0.0
    for _, prob, dsx in iter_derivatives(f, mask):
        total += prob * lp_norm(dsx, 2.0) ** q
    return total


# ---------------------------------------------------------------------------
# p-biased Fourier transform (two-point spaces only)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FourierSpectrum:
    """Coefficients w.r.t. the p-biased characters chi_S, keyed by mask."""

    p: float
    n: int
    coeffs: dict[int, float]

    def weight_at_level(self, d: int) -> float:
        return sum(c * c for m, c in self.coeffs.items() if m.bit_count() == d)


def _require_two_point(f: FunctionTable) -> float:
    if f.domain.k != 2:
        raise UnsupportedError("Fourier characters require a two-point space")
    return f.domain.space.weights[1]


def chi_table(domain: Domain, mask: int) -> FunctionTable:
    """chi_S = prod_{i in S} (x_i - p)/sqrt(p(1-p)) on a two-point domain."""
    if domain.k != 2:
        raise UnsupportedError("Fourier characters require a two-point space")
    domain.validate_mask(mask)
    p = domain.space.weights[1]
    sigma = np.sqrt(p * (1.0 - p))
    c = np.array([-p / sigma, (1.0 - p) / sigma])
    vals = np.ones(domain.size)
    idx = np.arange(domain.size)
    for i in mask_coords(mask):
        vals = vals * c[(idx >> i) & 1]
    return FunctionTable(domain, vals)


def fourier_spectrum(f: FunctionTable, p: float | None = None) -> FourierSpectrum:
    p_w = _require_two_point(f)
    if p is not None and abs(p - p_w) > 1e-12:
        raise DomainError(f"table lives at bias {p_w}, not {p}")
    coeffs = {}
    for mask in range(f.domain.size):
        coeffs[mask] = inner_product(f, chi_table(f.domain, mask))
    return FourierSpectrum(p_w, f.domain.n, coeffs)


def level1_coefficients(f: FunctionTable) -> np.ndarray:
    """The n level-1 coefficients hat f({i}), cheaper than a full spectrum."""
    _require_two_point(f)
    out = np.empty(f.domain.n)
    for i in range(f.domain.n):
        out[i] = inner_product(f, chi_table(f.domain, 1 << i))
    return out


def spectrum_to_table(spec: FourierSpectrum, domain: Domain) -> FunctionTable:
    if domain.k != 2 or domain.n != spec.n:
        raise DomainError("domain does not match spectrum")
    acc = np.zeros(domain.size)
    for mask, c in spec.coeffs.items():
        acc += c * chi_table(domain, mask).values
    return FunctionTable(domain, acc)
