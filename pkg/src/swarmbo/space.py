"""Bounded mixed real/integer search domains.

Points are always represented as continuous vectors, even on integer
dimensions; integers are materialized (rounded) only at objective-evaluation
and reporting boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

REAL = "real"
INTEGER = "integer"


class SpaceError(ValueError):
    """Base class for search-space validation failures."""


class EmptySpaceError(SpaceError):
    pass


class InvertedBoundsError(SpaceError):
    def __init__(self, name):
        super().__init__(f"dimension {name!r}: lower bound must be strictly below upper bound")
        self.name = name


class EmptyIntegerRangeError(SpaceError):
    def __init__(self, name):
        super().__init__(f"integer dimension {name!r}: no integer inside its bounds")
        self.name = name


class DimensionMismatchError(SpaceError):
    def __init__(self, expected, got):
        super().__init__(f"point has {got} coordinates, space has {expected} dimensions")
        self.expected = expected
        self.got = got


@dataclass(frozen=True)
class Dimension:
    """One bounded dimension, either continuous or integer-valued."""

    name: str
    kind: str  # REAL or INTEGER
    lower: float
    upper: float

    def __post_init__(self):
        if self.kind not in (REAL, INTEGER):
            raise SpaceError(f"dimension {self.name!r}: unknown kind {self.kind!r}")


@dataclass(frozen=True)
class SearchSpace:
    """Ordered list of bounded dimensions defining the optimization domain."""

    dims: tuple[Dimension, ...]
    lower: np.ndarray = field(init=False, repr=False, compare=False)
    upper: np.ndarray = field(init=False, repr=False, compare=False)

    def __init__(self, dims):
        object.__setattr__(self, "dims", tuple(dims))
        object.__setattr__(self, "lower", np.array([d.lower for d in self.dims], dtype=float))
        object.__setattr__(self, "upper", np.array([d.upper for d in self.dims], dtype=float))

    @property
    def dim(self) -> int:
        return len(self.dims)

    @property
    def ranges(self) -> np.ndarray:
        return self.upper - self.lower

    def integer_mask(self) -> np.ndarray:
        return np.array([d.kind == INTEGER for d in self.dims], dtype=bool)


def validate_space(space: SearchSpace) -> None:
    """Raise a SpaceError unless every dimension invariant holds."""
    if space.dim == 0:
        raise EmptySpaceError("search space has no dimensions")
    names = [d.name for d in space.dims]
    if len(set(names)) != len(names):
        raise SpaceError("dimension names must be unique")
    for d in space.dims:
        if not d.lower < d.upper:
            raise InvertedBoundsError(d.name)
        if d.kind == INTEGER and math.floor(d.upper) < math.ceil(d.lower):
            raise EmptyIntegerRangeError(d.name)


def _check_len(space: SearchSpace, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != space.dim:
        raise DimensionMismatchError(space.dim, x.shape[-1])
    return x


def sample_uniform(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    """Draw one point uniformly inside the box bounds."""
    return rng.uniform(space.lower, space.upper)


def clamp(space: SearchSpace, x: np.ndarray) -> np.ndarray:
    """Coordinate-wise projection onto the box. Idempotent."""
    x = _check_len(space, x)
    return np.clip(x, space.lower, space.upper)


def _round_half_away(v: np.ndarray) -> np.ndarray:
    # np.round ties to even; half-away-from-zero keeps results
    # platform-independent and matches the documented contract.
    return np.sign(v) * np.floor(np.abs(v) + 0.5)


def materialize(space: SearchSpace, x: np.ndarray) -> np.ndarray:
    """Round integer coordinates to the nearest feasible integer.

    Real coordinates pass through unchanged. Idempotent.
    """
    x = _check_len(space, x)
    out = np.array(x, dtype=float, copy=True)
    mask = space.integer_mask()
    if mask.any():
        rounded = _round_half_away(out[..., mask])
        lo = np.ceil(space.lower[mask])
        hi = np.floor(space.upper[mask])
        out[..., mask] = np.clip(rounded, lo, hi)
    return out
