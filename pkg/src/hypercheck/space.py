"""Finite product probability spaces and dense function tables.

A point of ``Omega^n`` is a tuple ``(x_0, ..., x_{n-1})`` with ``x_i`` in
``range(k)``.  Tables are stored flat in mixed-radix order with coordinate 0
fastest::

    index = x_0 + k*x_1 + ... + k**(n-1) * x_{n-1}

This order is fixed and documented so serialized tables stay portable.
Subsets of coordinates are plain ints used as bitmasks (bit ``i`` is
coordinate ``i``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

from . import kernels
from .errors import DomainError, ParseError, ShapeError
from .serialize import dumps, loads

MAX_TABLE_SIZE = 1 << 24
MAX_COORDS = 20  # two-point tables stay ample; k**n <= 2**24 still binds for k > 2

WEIGHT_SUM_TOL = 1e-12


@dataclass(frozen=True)
class ProductSpace:
    """A finite probability space: k elements with strictly positive weights."""

    weights: tuple[float, ...]

    def __post_init__(self):
        if len(self.weights) < 2:
            raise DomainError("need at least 2 elements")
        if any(w <= 0.0 for w in self.weights):
            raise DomainError("weights must be strictly positive")
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError(f"weights sum to {sum(self.weights)!r}, not 1")

    @property
    def k(self) -> int:
        return len(self.weights)

    @cached_property
    def weight_array(self) -> np.ndarray:
        w = np.array(self.weights, dtype=np.float64)
        w.flags.writeable = False
        return w


def biased_space(p: float) -> ProductSpace:
    """The two-point space with Pr[1] = p."""
    if not 0.0 < p < 1.0:
        raise DomainError(f"bias must be in (0,1), got {p}")
    return ProductSpace((1.0 - p, p))


def uniform_space(k: int) -> ProductSpace:
    return ProductSpace((1.0 / k,) * k)


@dataclass(frozen=True)
class Domain:
    """n independent copies of a ProductSpace."""

    space: ProductSpace
    n: int

    def __post_init__(self):
        if not 1 <= self.n <= MAX_COORDS:
            raise DomainError(f"n must be in [1, {MAX_COORDS}], got {self.n}")
        if self.space.k ** self.n > MAX_TABLE_SIZE:
            raise DomainError(f"{self.space.k}**{self.n} exceeds max table size")

    @property
    def k(self) -> int:
        return self.space.k

    @property
    def size(self) -> int:
        return self.k ** self.n

    def point_index(self, coords: Sequence[int]) -> int:
        """Mixed-radix index of a point, coordinate 0 fastest."""
        if len(coords) != self.n:
            raise DomainError(f"expected {self.n} coordinates, got {len(coords)}")
        idx = 0
        for i in reversed(range(self.n)):
            c = coords[i]
            if not 0 <= c < self.k:
                raise DomainError(f"coordinate {i} out of range: {c}")
            idx = idx * self.k + c
        return idx

    def unindex(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < self.size:
            raise DomainError(f"index out of range: {idx}")
        out = []
        for _ in range(self.n):
            idx, c = divmod(idx, self.k)
            out.append(c)
        return tuple(out)

    @cached_property
    def point_weights(self) -> np.ndarray:
        """mu^n as a flat table aligned with the mixed-radix order."""
        w = self.space.weight_array
        out = w
        for _ in range(self.n - 1):
            out = np.kron(out, w)  # coordinate 0 fastest => new coord on the left
        out = np.ascontiguousarray(out)
        out.flags.writeable = False
        return out

    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def validate_mask(self, mask: int) -> None:
        if mask < 0 or mask >> self.n:
            raise DomainError(f"mask {mask:#x} has bits outside [0, {self.n})")


class FunctionTable:
    """A dense real-valued function on Omega^n."""

    __slots__ = ("domain", "values")

    def __init__(self, domain: Domain, values):
        arr = np.ascontiguousarray(values, dtype=np.float64)
        if arr.shape != (domain.size,):
            raise ShapeError(f"expected {domain.size} values, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("table entries must be finite")
        arr = arr.copy() if arr.flags.writeable else arr
        arr.flags.writeable = False
        object.__setattr__(self, "domain", domain)
        object.__setattr__(self, "values", arr)

    def __setattr__(self, name, value):
        raise AttributeError("FunctionTable is immutable")

    def __repr__(self):
        return f"FunctionTable(k={self.domain.k}, n={self.domain.n})"

    def same_domain(self, other: "FunctionTable") -> bool:
        return self.domain == other.domain


def table_from_values(domain: Domain, values) -> FunctionTable:
    return FunctionTable(domain, values)


def table_from_function(domain: Domain, fn) -> FunctionTable:
    """Tabulate ``fn(coords) -> float`` over all points."""
    vals = np.empty(domain.size)
    for idx in range(domain.size):
        vals[idx] = fn(domain.unindex(idx))
    return FunctionTable(domain, vals)


def constant_table(domain: Domain, c: float) -> FunctionTable:
    return FunctionTable(domain, np.full(domain.size, float(c)))


# ---------------------------------------------------------------------------
# bitmask helpers
# ---------------------------------------------------------------------------

def mask_coords(mask: int) -> tuple[int, ...]:
    """Coordinates of a mask, ascending."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def mask_from_coords(coords) -> int:
    mask = 0
    for c in coords:
        mask |= 1 << c
    return mask


def submasks(mask: int) -> Iterator[int]:
    """All subsets of ``mask``, ascending as integers."""
    sub = 0
    while True:
        yield sub
        if sub == mask:
            return
        sub = (sub - mask) & mask


def masks_by_size(n: int, d: int) -> Iterator[int]:
    """All masks on n bits with exactly d bits set, ascending."""
    for coords in itertools.combinations(range(n), d):
        yield mask_from_coords(coords)


def iter_assignments(k: int, mask: int) -> Iterator[tuple[int, ...]]:
    """All assignments on the masked coordinates, lexicographically ascending.

    Value tuples follow the ascending coordinate order of ``mask_coords``.
    """
    return itertools.product(range(k), repeat=mask.bit_count())


# ---------------------------------------------------------------------------
# norms, inner products, restrictions
# ---------------------------------------------------------------------------

def expectation(f: FunctionTable) -> float:
    return kernels.weighted_sum(f.domain.point_weights, f.values)


def lp_norm(f: FunctionTable, p: float) -> float:
    """(sum_x mu(x) |f(x)|^p)^(1/p); nondecreasing in p by power-mean."""
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    s = kernels.weighted_pow_sum(f.domain.point_weights, f.values, float(p))
    return s ** (1.0 / p)


def lp_norm_pow(f: FunctionTable, p: float) -> float:
    """sum_x mu(x) |f(x)|^p, the p-th power of the norm."""
    if p < 1.0:
        raise DomainError(f"p must be >= 1, got {p}")
    return kernels.weighted_pow_sum(f.domain.point_weights, f.values, float(p))


def inner_product(f: FunctionTable, g: FunctionTable) -> float:
    if not f.same_domain(g):
        raise ShapeError("inner product requires a common domain")
    return kernels.weighted_dot(f.domain.point_weights, f.values, g.values)


def _free_strides(k: int, n: int, mask: int) -> tuple[np.ndarray, list[int]]:
    """Gather offsets for the unmasked coordinates plus masked strides."""
    free = [i for i in range(n) if not mask >> i & 1]
    size = k ** len(free)
    idx = np.zeros(size, dtype=np.intp)
    t = np.arange(size, dtype=np.intp)
    for pos, coord in enumerate(free):
        digit = (t // k**pos) % k
        idx += digit * k**coord
    fixed_strides = [k**i for i in mask_coords(mask)]
    return idx, fixed_strides


def restrict(f: FunctionTable, mask: int, assignment: Sequence[int]) -> FunctionTable:
    """The restriction fixing the masked coordinates to ``assignment``.

    ``assignment`` lists values for the masked coordinates in ascending
    coordinate order; the result lives on the remaining coordinates, which
    keep their relative order.
    """
    dom = f.domain
    dom.validate_mask(mask)
    coords = mask_coords(mask)
    if len(assignment) != len(coords):
        raise DomainError(
            f"assignment covers {len(assignment)} of {len(coords)} coordinates")
    if mask == 0:
        return f
    for v in assignment:
        if not 0 <= v < dom.k:
            raise DomainError(f"assigned value out of range: {v}")
    if mask == dom.full_mask():
        # fully restricted: a single point, returned as a 1-coordinate
        # constant so the result is still a FunctionTable
        base = dom.point_index(_scatter(dom.n, mask, assignment))
        sub = Domain(dom.space, 1)
        return constant_table(sub, float(f.values[base]))
    offsets, strides = _free_strides(dom.k, dom.n, mask)
    base = sum(v * s for v, s in zip(assignment, strides))
    sub = Domain(dom.space, dom.n - len(coords))
    return FunctionTable(sub, f.values[offsets + base])


def _scatter(n: int, mask: int, assignment: Sequence[int]) -> list[int]:
    coords = [0] * n
    for c, v in zip(mask_coords(mask), assignment):
        coords[c] = v
    return coords


def iter_restrictions(f: FunctionTable, mask: int):
    """Yield (assignment, weight, restricted table) over all assignments.

    ``weight`` is the mu^S probability of the assignment.  Shares the gather
    offsets across assignments, which is what certificate searches iterate.
    """
    dom = f.domain
    dom.validate_mask(mask)
    if mask == 0:
        yield (), 1.0, f
        return
    coords = mask_coords(mask)
    w = dom.space.weights
    if mask == dom.full_mask():
        sub = Domain(dom.space, 1)
        for assignment in iter_assignments(dom.k, mask):
            base = dom.point_index(_scatter(dom.n, mask, assignment))
            prob = 1.0
            for v in assignment:
                prob *= w[v]
            yield assignment, prob, constant_table(sub, float(f.values[base]))
        return
    offsets, strides = _free_strides(dom.k, dom.n, mask)
    sub = Domain(dom.space, dom.n - len(coords))
    for assignment in iter_assignments(dom.k, mask):
        base = sum(v * s for v, s in zip(assignment, strides))
        prob = 1.0
        for v in assignment:
            prob *= w[v]
        yield assignment, prob, FunctionTable(sub, f.values[offsets + base])


# ---------------------------------------------------------------------------
# table file format
# ---------------------------------------------------------------------------

def table_to_json(f: FunctionTable) -> str:
    return dumps({
        "k": f.domain.k,
        "n": f.domain.n,
        "weights": list(f.domain.space.weights),
        "values": f.values.tolist(),
    })


def table_from_json(text: str) -> FunctionTable:
    obj = loads(text)
    if not isinstance(obj, dict):
        raise ParseError("table file must be a JSON object")
    for key in ("k", "n", "weights", "values"):
        if key not in obj:
            raise ParseError(f"table file missing key {key!r}")
    k, n = obj["k"], obj["n"]
    if not (isinstance(k, int) and isinstance(n, int)):
        raise ParseError("k and n must be integers")
    if len(obj["weights"]) != k:
        raise ParseError(f"expected {k} weights, got {len(obj['weights'])}")
    if len(obj["values"]) != k ** n:
        raise ParseError(f"expected {k}**{n} = {k**n} values, got {len(obj['values'])}")
    space = ProductSpace(tuple(float(w) for w in obj["weights"]))
    return FunctionTable(Domain(space, n), obj["values"])
