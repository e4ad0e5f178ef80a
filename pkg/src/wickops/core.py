"""Multi-index arithmetic, graded bases, Gauss-Hermite quadrature and the
sparse coefficient-expansion container shared by the real and complex sides.

Every basis (Hermite functions on the real side, normalized monomials on the
Fock side) is indexed by multi-indices in graded lexicographic order: total
degree first, ties broken so that weight on earlier coordinates comes first,
e.g. for d = 2 the order starts (0,0), (1,0), (0,1), (2,0), (1,1), (0,2).
All matrices in the package index rows and columns by this order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

HERMITE = "hermite"
FOCK = "fock"

__all__ = [
    "CalculusError",
    "UsageError",
    "InputDataError",
    "NumericalError",
    "MultiIndex",
    "grlex_key",
    "enumerate_basis",
    "basis_index_map",
    "QuadratureRule",
    "gauss_hermite",
    "tensor_rule",
    "CoefficientExpansion",
    "expansion_inner",
    "HERMITE",
    "FOCK",
]


class CalculusError(Exception):
    """Base class for package errors."""


class UsageError(CalculusError):
    """Caller violated a precondition (wrong side, mismatched dimensions, ...)."""


class InputDataError(CalculusError):
    """Supplied data is malformed or produced non-finite samples."""


class NumericalError(CalculusError):
    """A numerical routine failed (eigen-solve, inconsistent linear system)."""


class MultiIndex(tuple):
    """Tuple of non-negative integers with graded-lexicographic ordering.

    Addition and subtraction are componentwise; subtraction raises if any
    entry would go negative.
    """

    def __new__(cls, entries):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise UsageError(f"multi-index entries must be non-negative, got {entries}")
        return super().__new__(cls, entries)

    @property
    def dimension(self) -> int:
        return len(self)

    def degree(self) -> int:
        return sum(self)

    def factorial(self) -> int:
        out = 1
        for e in self:
            out *= math.factorial(e)
        return out

    def dominates(self, other) -> bool:
        """Componentwise self >= other (both derivatives and shifts need this)."""
        return len(self) == len(other) and all(a >= b for a, b in zip(self, other))

    def __add__(self, other):
        if len(self) != len(other):
            raise UsageError("multi-index dimension mismatch in addition")
        return MultiIndex(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        if len(self) != len(other):
            raise UsageError("multi-index dimension mismatch in subtraction")
        return MultiIndex(a - b for a, b in zip(self, other))

    def __lt__(self, other):
        return grlex_key(self) < grlex_key(other)

    def __le__(self, other):
        return grlex_key(self) <= grlex_key(other)

    def __gt__(self, other):
        return grlex_key(self) > grlex_key(other)

    def __ge__(self, other):
        return grlex_key(self) >= grlex_key(other)

    @staticmethod
    def unit(d: int, j: int) -> "MultiIndex":
        return MultiIndex(int(i == j) for i in range(d))

    @staticmethod
    def zero(d: int) -> "MultiIndex":
        return MultiIndex((0,) * d)


def grlex_key(alpha):
    """Sort key realizing the graded lexicographic order."""
    return (sum(alpha), tuple(-a for a in alpha))


def _fixed_degree(d, n):
    if d == 1:
        yield (n,)
        return
    for k in range(n, -1, -1):
        for rest in _fixed_degree(d - 1, n - k):
            yield (k,) + rest


@lru_cache(maxsize=None)
def enumerate_basis(d: int, degree_bound: int) -> tuple:
    """All multi-indices of length d and degree <= degree_bound, graded-lex.

    The list for bound N is a prefix of the list for any bound M > N, which
    is what makes zero-padding of operator matrices a pure row extension.
    """
    if d < 1:
        raise UsageError(f"dimension must be >= 1, got {d}")
    if degree_bound < 0:
        raise UsageError(f"degree bound must be >= 0, got {degree_bound}")
    out = []
    for n in range(degree_bound + 1):
        out.extend(MultiIndex(a) for a in _fixed_degree(d, n))
    assert len(out) == math.comb(degree_bound + d, d)
    return tuple(out)


@lru_cache(maxsize=None)
def basis_index_map(d: int, degree_bound: int) -> dict:
    """Position of each multi-index inside enumerate_basis(d, degree_bound)."""
    return {alpha: i for i, alpha in enumerate(enumerate_basis(d, degree_bound))}


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight e^{-x^2} on the real line."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


def gauss_hermite(order: int) -> QuadratureRule:
    """Gauss-Hermite rule (weight e^{-x^2}), exact on degree <= 2*order - 1.

    numpy's hermgauss runs the Golub-Welsch symmetric tridiagonal
    eigen-solve internally.
    """
    if order < 1:
        raise UsageError(f"quadrature order must be >= 1, got {order}")
    try:
        nodes, weights = np.polynomial.hermite.hermgauss(order)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - hermgauss is robust
        raise NumericalError(f"Gauss-Hermite construction failed at order {order}") from exc
    return QuadratureRule(order=order, nodes=nodes, weights=weights)


def tensor_rule(rule: QuadratureRule, d: int):
    """Tensorize a 1-d rule over d coordinates.

    Returns (points, weights, index_grid): points has shape (order^d, d),
    weights is the product weight, index_grid holds the 1-d node index used
    in each coordinate (handy for reusing per-coordinate value tables).
    """
    q = rule.order
    grids = np.meshgrid(*([np.arange(q)] * d), indexing="ij")
    idx = np.stack([g.ravel() for g in grids], axis=1)
    points = rule.nodes[idx]
    weights = np.prod(rule.weights[idx], axis=1)
    return points, weights, idx


class CoefficientExpansion:
    """Finite map multi-index -> complex coefficient, on one side of the
    Bargmann transform.

    On the hermite side the expansion means sum_a c_a h_a; on the fock side
    sum_a c_a e_a with e_a(z) = z^a / sqrt(a!).  Both bases are orthonormal,
    so the squared norm is sum |c_a|^2 on either side.
    """

    def __init__(self, dimension, side, coeffs, prune_threshold=0.0):
        if dimension < 1:
            raise UsageError(f"dimension must be >= 1, got {dimension}")
        if side not in (HERMITE, FOCK):
            raise UsageError(f"side must be '{HERMITE}' or '{FOCK}', got {side!r}")
        self.dimension = int(dimension)
        self.side = side
        self.prune_threshold = float(prune_threshold)
        clean = {}
        for key, value in dict(coeffs).items():
            alpha = MultiIndex(key)
            if len(alpha) != self.dimension:
                raise UsageError(
                    f"index {alpha} has length {len(alpha)}, expected {self.dimension}")
            value = complex(value)
            if abs(value) <= self.prune_threshold and value != 0:
                continue
            if value != 0:
                clean[alpha] = value
        self.coeffs = clean

    @property
    def degree_bound(self) -> int:
        """Max degree present (0 for the zero expansion)."""
        if not self.coeffs:
            return 0
        return max(a.degree() for a in self.coeffs)

    def norm_squared(self) -> float:
        return float(sum(abs(v) ** 2 for v in self.coeffs.values()))

    def with_side(self, side) -> "CoefficientExpansion":
        return CoefficientExpansion(self.dimension, side, self.coeffs)

    def scaled(self, factor) -> "CoefficientExpansion":
        return CoefficientExpansion(
            self.dimension, self.side, {a: factor * v for a, v in self.coeffs.items()})

    def plus(self, other) -> "CoefficientExpansion":
        if other.dimension != self.dimension or other.side != self.side:
            raise UsageError("cannot add expansions with different dimension or side")
        out = dict(self.coeffs)
        for a, v in other.coeffs.items():
            out[a] = out.get(a, 0.0) + v
        return CoefficientExpansion(self.dimension, self.side, out)

    def dense(self, degree_bound=None) -> np.ndarray:
        """Coefficient vector over the graded basis up to degree_bound."""
        n = self.degree_bound if degree_bound is None else degree_bound
        idx = basis_index_map(self.dimension, n)
        vec = np.zeros(len(idx), dtype=complex)
        for a, v in self.coeffs.items():
            if a.degree() <= n:
                vec[idx[a]] = v
        return vec

    def to_json_dict(self) -> dict:
        items = sorted(self.coeffs.items(), key=lambda kv: grlex_key(kv[0]))
        return {
            "dimension": self.dimension,
            "side": self.side,
            "coeffs": [
                {"index": list(a), "value": [v.real, v.imag]} for a, v in items
            ],
        }

    @classmethod
    def from_json_dict(cls, data) -> "CoefficientExpansion":
        try:
            coeffs = {
                tuple(entry["index"]): complex(entry["value"][0], entry["value"][1])
                for entry in data["coeffs"]
            }
            return cls(int(data["dimension"]), data["side"], coeffs)
        except (KeyError, TypeError, IndexError) as exc:
            raise InputDataError(f"malformed expansion JSON: {exc}") from exc

    def __repr__(self):
        return (f"CoefficientExpansion(dimension={self.dimension}, side={self.side!r}, "
                f"terms={len(self.coeffs)}, degree_bound={self.degree_bound})")


def expansion_inner(f: CoefficientExpansion, g: CoefficientExpansion) -> complex:
    """Sesquilinear inner product sum_a c_f(a) * conj(c_g(a)).

    Valid on either side since both bases are orthonormal; conjugate-linear
    in the second slot.
    """
    if f.dimension != g.dimension:
        raise UsageError("expansion dimensions differ")
    if f.side != g.side:
        raise UsageError("expansions live on different sides of the transform")
    small, large = (f.coeffs, g.coeffs) if len(f.coeffs) <= len(g.coeffs) else (g.coeffs, f.coeffs)
    total = 0.0 + 0.0j
    for a in small:
        if a in large:
            total += f.coeffs.get(a, 0.0) * np.conj(g.coeffs.get(a, 0.0))
    return complex(total)
