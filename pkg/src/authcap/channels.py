"""Finite-alphabet probability primitives.

Distributions, row-stochastic channels, memoryless n-fold extensions, and
joint laws over named variables.  Alphabets are contiguous integer index sets
``0..size-1``; n-tuples over an alphabet of size ``b`` are packed into a
single integer in base ``b``, big-endian (symbol 0 of the tuple is the most
significant digit).  That packing fixes iteration order for every exact
enumeration in the package.

All values are immutable after construction and every operation is a pure
function, so instances are safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .caps import check_entries, product_cap
from .errors import ValidationError

# Stochasticity tolerance at construction; chained operations are validated
# at the looser JOINT_TOL because float error accumulates.
ROW_TOL = 1e-9
JOINT_TOL = 1e-8


def _as_prob_array(values, what: str) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} contains non-finite entries")
    if np.any(arr < 0):
        raise ValidationError(f"{what} contains negative entries (min {arr.min()})")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Pmf:
    """Probability mass function over ``0..size-1``."""

    probs: np.ndarray

    def __post_init__(self):
        arr = _as_prob_array(self.probs, "Pmf")
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("Pmf must be a non-empty vector")
        total = float(arr.sum())
        if abs(total - 1.0) > ROW_TOL:
            raise ValidationError(f"Pmf sums to {total}, expected 1 within {ROW_TOL}")
        object.__setattr__(self, "probs", arr)

    @property
    def size(self) -> int:
        return self.probs.size

    @staticmethod
    def uniform(size: int) -> "Pmf":
        return Pmf(np.full(size, 1.0 / size))

    @staticmethod
    def point_mass(index: int, size: int) -> "Pmf":
        probs = np.zeros(size)
        probs[index] = 1.0
        return Pmf(probs)


@dataclass(frozen=True)
class DiscreteChannel:
    """Row-stochastic transition matrix: ``rows[x][y] = p(y | x)``."""

    rows: np.ndarray

    def __post_init__(self):
        arr = _as_prob_array(self.rows, "channel matrix")
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValidationError("channel matrix must be 2-D and non-empty")
        sums = arr.sum(axis=1)
        bad = np.abs(sums - 1.0) > ROW_TOL
        if np.any(bad):
            x = int(np.argmax(bad))
            if sums[x] == 0.0:
                raise ValidationError(f"channel row {x} has zero probability mass")
            raise ValidationError(
                f"channel row {x} sums to {sums[x]}, expected 1 within {ROW_TOL}"
            )
        object.__setattr__(self, "rows", arr)

    @property
    def input_size(self) -> int:
        return self.rows.shape[0]

    @property
    def output_size(self) -> int:
        return self.rows.shape[1]

    def apply(self, pmf: Pmf) -> Pmf:
        """Output distribution for the given input distribution."""
        if pmf.size != self.input_size:
            raise ValidationError(
                f"input pmf has size {pmf.size}, channel expects {self.input_size}"
            )
        return Pmf(pmf.probs @ self.rows)


@dataclass(frozen=True)
class ChannelPair:
    """Main (sender to receiver) and tap (sender to adversary) channels."""

    main: DiscreteChannel
    tap: DiscreteChannel

    def __post_init__(self):
        if self.main.input_size != self.tap.input_size:
            raise ValidationError(
                "main and tap channels must share the input alphabet "
                f"({self.main.input_size} vs {self.tap.input_size})"
            )

    @property
    def input_size(self) -> int:
        return self.main.input_size


@dataclass(frozen=True)
class JointLaw:
    """Joint probability table over an ordered tuple of named variables.

    ``table`` has one axis per name, in order.  Total mass must be 1 within
    ``JOINT_TOL``; marginalizing any subset of variables yields another valid
    JointLaw.
    """

    names: tuple
    table: np.ndarray

    def __post_init__(self):
        names = tuple(self.names)
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate variable names in {names}")
        arr = _as_prob_array(self.table, "joint table")
        if arr.ndim != len(names):
            raise ValidationError(
                f"joint table has {arr.ndim} axes for {len(names)} names"
            )
        total = float(arr.sum())
        if abs(total - 1.0) > JOINT_TOL:
            raise ValidationError(
                f"joint law mass is {total}, expected 1 within {JOINT_TOL}"
            )
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "table", arr)

    def axes(self, variables) -> tuple:
        variables = _name_tuple(variables)
        missing = [v for v in variables if v not in self.names]
        if missing:
            raise ValidationError(f"unknown variable names {missing}; have {self.names}")
        return tuple(self.names.index(v) for v in variables)

    def marginal(self, variables) -> "JointLaw":
        """Marginal law over `variables`, preserving this law's axis order."""
        keep = set(self.axes(variables))
        drop = tuple(i for i in range(len(self.names)) if i not in keep)
        names = tuple(n for i, n in enumerate(self.names) if i in keep)
        return JointLaw(names, self.table.sum(axis=drop)) if drop else self


def _name_tuple(variables) -> tuple:
    if isinstance(variables, str):
        return (variables,)
    return tuple(variables)


def bsc(lam: float) -> DiscreteChannel:
    """Binary symmetric channel with crossover probability ``lam`` in [0, 1/2]."""
    if not 0.0 <= lam <= 0.5:
        raise ValidationError(f"BSC parameter must lie in [0, 1/2], got {lam}")
    return DiscreteChannel(np.array([[1.0 - lam, lam], [lam, 1.0 - lam]]))


def product_extension(ch: DiscreteChannel, n: int) -> DiscreteChannel:
    """Memoryless n-fold extension: entry for (x-tuple, y-tuple) is the product
    of per-symbol entries.  Tuples are packed big-endian per the module rule."""
    if n < 1:
        raise ValidationError(f"extension length must be >= 1, got {n}")
    needed = (ch.input_size**n) * (ch.output_size**n)
    check_entries(needed, product_cap(), f"{n}-fold channel extension")
    rows = ch.rows
    out = np.array([[1.0]])
    for _ in range(n):
        out = np.kron(out, rows)
    return DiscreteChannel(out)


def push_joint(input_pmf: Pmf, ch: DiscreteChannel, names=("X", "Y")) -> JointLaw:
    """Joint law ``p(x, y) = input(x) * ch(y | x)``."""
    if input_pmf.size != ch.input_size:
        raise ValidationError(
            f"input pmf size {input_pmf.size} does not match channel input {ch.input_size}"
        )
    return JointLaw(tuple(names), input_pmf.probs[:, None] * ch.rows)


def tuple_to_index(symbols, base: int) -> int:
    """Pack a symbol tuple into its big-endian integer index."""
    idx = 0
    for s in symbols:
        if not 0 <= s < base:
            raise ValidationError(f"symbol {s} outside alphabet of size {base}")
        idx = idx * base + int(s)
    return idx


def index_to_tuple(index: int, base: int, n: int) -> tuple:
    """Unpack a big-endian integer index into its n-symbol tuple."""
    if not 0 <= index < base**n:
        raise ValidationError(f"index {index} outside {n}-tuple range for base {base}")
    out = []
    for _ in range(n):
        out.append(index % base)
        index //= base
    return tuple(reversed(out))
