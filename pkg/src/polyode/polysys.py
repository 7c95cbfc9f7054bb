"""Systems of N first-order ODEs with homogeneous polynomial right-hand sides.

A system of dimension N and degree M is a sparse complex coefficient tensor:
coefficient c[(eq, exponents)] multiplies the monomial
z_1^{m_1} * ... * z_N^{m_N} on the right-hand side of equation ``eq``,
where the exponents are nonnegative integers summing to M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

import numpy as np

from .errors import ValidationError

# A multi-index is a plain tuple of N nonnegative integers summing to M.
MultiIndex = tuple


def enumerate_multi_indices(n: int, m: int) -> list[MultiIndex]:
    """All tuples of ``n`` nonnegative integers summing to ``m``.

    Canonical order: lexicographically descending on the exponents. The
    length is always binomial(m + n - 1, n - 1).
    """
    if n < 1:
        raise ValidationError(f"need at least one variable, got n={n}")
    if m < 0:
        raise ValidationError(f"degree must be nonnegative, got m={m}")
    if n == 1:
        return [(m,)]
    out = []
    for first in range(m, -1, -1):
        for rest in enumerate_multi_indices(n - 1, m - first):
            out.append((first,) + rest)
    return out


def canonical_sort_key(key: tuple[int, MultiIndex]):
    """Sort key for (equation, multi-index) pairs: equation ascending, then
    exponents in descending lexicographic order."""
    eq, index = key
    return (eq, tuple(-e for e in index))


def validate_multi_index(index, n: int, m: int) -> MultiIndex:
    index = tuple(index)
    if len(index) != n:
        raise ValidationError(f"multi-index {index} has length {len(index)}, expected {n}")
    if any(not isinstance(e, (int, np.integer)) or e < 0 for e in index):
        raise ValidationError(f"multi-index {index} must hold nonnegative integers")
    if sum(index) != m:
        raise ValidationError(f"multi-index {index} sums to {sum(index)}, expected {m}")
    return tuple(int(e) for e in index)


def _finite_complex(value) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValidationError(f"non-finite complex value {z!r}")
    return z


def as_state(z, n: int) -> np.ndarray:
    """Validate and convert a state to a length-``n`` complex array."""
    arr = np.asarray(z, dtype=complex)
    if arr.shape != (n,):
        raise ValidationError(f"state has shape {arr.shape}, expected ({n},)")
    if not np.all(np.isfinite(arr.real) & np.isfinite(arr.imag)):
        raise ValidationError("state contains non-finite components")
    return arr


@dataclass(frozen=True)
class PolynomialSystem:
    """Sparse homogeneous polynomial system of dimension ``n`` and degree ``m``.

    ``coefficients`` maps (equation index in 1..n, multi-index) to a nonzero
    complex coefficient; absent keys are zero. The mapping is normalized to
    canonical iteration order at construction.
    """

    n: int
    m: int
    coefficients: Mapping[tuple[int, MultiIndex], complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise ValidationError(f"need n >= 2 and m >= 2, got n={self.n}, m={self.m}")
        normalized = {}
        for (eq, index), value in self.coefficients.items():
            if not 1 <= eq <= self.n:
                raise ValidationError(f"equation index {eq} outside 1..{self.n}")
            index = validate_multi_index(index, self.n, self.m)
            value = _finite_complex(value)
            if value == 0:
                raise ValidationError(
                    f"stored coefficient for eq {eq}, index {index} is exactly zero"
                )
            if (eq, index) in normalized:
                raise ValidationError(f"duplicate coefficient key ({eq}, {index})")
            normalized[(eq, index)] = value
        ordered = dict(sorted(normalized.items(), key=lambda kv: canonical_sort_key(kv[0])))
        object.__setattr__(self, "coefficients", ordered)

    @cached_property
    def _per_equation(self):
        """Per-equation (coefficient vector, exponent matrix) in canonical order."""
        table = []
        for eq in range(1, self.n + 1):
            items = [(idx, c) for (e, idx), c in self.coefficients.items() if e == eq]
            if items:
                exps = np.array([idx for idx, _ in items], dtype=np.int64)
                coeffs = np.array([c for _, c in items], dtype=complex)
            else:
                exps = np.empty((0, self.n), dtype=np.int64)
                coeffs = np.empty(0, dtype=complex)
            table.append((coeffs, exps))
        return table

    def coefficient(self, eq: int, index) -> complex:
        return self.coefficients.get((eq, tuple(index)), 0j)


def evaluate_rhs(system: PolynomialSystem, z) -> np.ndarray:
    """Evaluate the polynomial right-hand sides at state ``z``.

    Powers are built by repeated multiplication (exact for integer
    exponents, 0^0 = 1) and each equation is summed in canonical
    multi-index order, so the floating-point result is deterministic.
    """
    z = as_state(z, system.n)
    pows = np.empty((system.n, system.m + 1), dtype=complex)
    pows[:, 0] = 1.0
    for e in range(1, system.m + 1):
        pows[:, e] = pows[:, e - 1] * z
    cols = np.arange(system.n)
    out = np.zeros(system.n, dtype=complex)
    for i, (coeffs, exps) in enumerate(system._per_equation):
        if coeffs.size:
            monomials = pows[cols, exps].prod(axis=1)
            out[i] = (coeffs * monomials).sum()
    return out


def scale_state(z, lam) -> np.ndarray:
    """Componentwise multiplication of a state by a complex scalar."""
    return np.asarray(z, dtype=complex) * complex(lam)
