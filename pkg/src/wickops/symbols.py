"""The four quantizations on graded truncated bases: Wick, anti-Wick,
Kohn-Nirenberg and Weyl, plus the real-symbol -> Wick-symbol assignment and
grid-based symbol-class bound checkers.

Matrix conventions: operators are stored as rectangular matrices mapping
span{basis of degree <= N_in} into span{degree <= N_out}, with N_out chosen
so that polynomial operators are represented *exactly* (no truncation
error).  Square compressions to the degree <= N_in block are only taken
where spectra are wanted and are labeled as compressed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, product

import numpy as np

from .core import (
    FOCK,
    HERMITE,
    CoefficientExpansion,
    MultiIndex,
    NumericalError,
    UsageError,
    basis_index_map,
    enumerate_basis,
    grlex_key,
)
from .bargmann import gaussian_plane_rule, evaluate_fock, _as_complex_vector
from .hermite import ANNIHILATION, CREATION, LadderKind, apply_ladder

KOHN_NIRENBERG = "kohn_nirenberg"
WEYL = "weyl"


def _falling(n: int, k: int) -> int:
    """n! / (n-k)! for integers n >= k >= 0."""
    out = 1
    for i in range(k):
        out *= n - i
    return out


def _falling_multi(alpha: MultiIndex, beta: MultiIndex) -> int:
    """alpha! / (alpha - beta)! componentwise; caller guarantees alpha >= beta."""
    out = 1
    for a, b in zip(alpha, beta):
        out *= _falling(a, b)
    return out


class WickSymbol:
    """Polynomial Wick symbol a(z, w) = sum c(alpha, beta) z^alpha conj(w)^beta.

    With point_symbol=True the same container holds an anti-Wick point symbol
    a0(w) = sum c(sigma, tau) w^sigma conj(w)^tau (no z dependence); the
    first key slot is then the holomorphic w-exponent.
    """

    def __init__(self, dimension, terms, point_symbol=False):
        if dimension < 1:
            raise UsageError(f"dimension must be >= 1, got {dimension}")
        self.dimension = int(dimension)
        self.point_symbol = bool(point_symbol)
        clean = {}
        for (alpha, beta), value in dict(terms).items():
            alpha = MultiIndex(alpha)
            beta = MultiIndex(beta)
            if len(alpha) != self.dimension or len(beta) != self.dimension:
                raise UsageError(f"symbol key ({alpha}, {beta}) has wrong length")
            value = complex(value)
            if value != 0:
                clean[(alpha, beta)] = value
        self.terms = clean

    @property
    def z_degree(self) -> int:
        return max((a.degree() for a, _ in self.terms), default=0)

    @property
    def w_degree(self) -> int:
        return max((b.degree() for _, b in self.terms), default=0)

    @property
    def total_degree(self) -> int:
        return max((a.degree() + b.degree() for a, b in self.terms), default=0)

    def evaluate(self, z, w=None) -> complex:
        """a(z, w); for point symbols call with a single argument a0(w)."""
        if self.point_symbol:
            if w is not None:
                raise UsageError("point symbols take a single argument")
            w = _as_complex_vector(z)
            total = 0.0 + 0.0j
            for (sigma, tau), c in self.terms.items():
                total += c * np.prod(w**np.array(sigma)) * np.prod(np.conj(w) ** np.array(tau))
            return complex(total)
        if w is None:
            raise UsageError("Wick symbols take two arguments (z, w)")
        z = _as_complex_vector(z)
        w = _as_complex_vector(w)
        total = 0.0 + 0.0j
        for (alpha, beta), c in self.terms.items():
            total += c * np.prod(z**np.array(alpha)) * np.prod(np.conj(w) ** np.array(beta))
        return complex(total)

    def diagonal_value(self, w) -> complex:
        """a(w, w), the diagonal restriction appearing in the Garding hypothesis."""
        if self.point_symbol:
            return self.evaluate(w)
        return self.evaluate(w, w)

    def derivative(self, alpha, beta) -> "WickSymbol":
        """Exact term-wise derivative d_z^alpha dbar_w^beta of a standard symbol."""
        if self.point_symbol:
            raise UsageError("derivative in (z, conj w) applies to standard Wick symbols")
        alpha = MultiIndex(alpha)
        beta = MultiIndex(beta)
        out = {}
        for (a, b), c in self.terms.items():
            if not (a.dominates(alpha) and b.dominates(beta)):
                continue
            factor = _falling_multi(a, alpha) * _falling_multi(b, beta)
            key = (a - alpha, b - beta)
            out[key] = out.get(key, 0.0) + factor * c
        return WickSymbol(self.dimension, out)

    def scaled(self, factor) -> "WickSymbol":
        return WickSymbol(self.dimension,
                          {k: factor * v for k, v in self.terms.items()},
                          point_symbol=self.point_symbol)

    def plus(self, other) -> "WickSymbol":
        if other.dimension != self.dimension or other.point_symbol != self.point_symbol:
            raise UsageError("cannot add symbols of different dimension or kind")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0.0) + v
        return WickSymbol(self.dimension, out, point_symbol=self.point_symbol)

    def conjugate(self) -> "WickSymbol":
        """Symbol of the adjoint operator: conj(c), slots swapped."""
        return WickSymbol(self.dimension,
                          {(b, a): np.conj(c) for (a, b), c in self.terms.items()},
                          point_symbol=self.point_symbol)

    def to_json_dict(self) -> dict:
        kind = "antiwick" if self.point_symbol else "wick"
        items = sorted(self.terms.items(), key=lambda kv: (grlex_key(kv[0][0]), grlex_key(kv[0][1])))
        return {
            "dimension": self.dimension,
            "kind": kind,
            "terms": [{"alpha": list(a), "beta": list(b), "value": [c.real, c.imag]}
                      for (a, b), c in items],
        }

    @classmethod
    def from_json_dict(cls, data) -> "WickSymbol":
        from .core import InputDataError
        try:
            kind = data.get("kind", "wick")
            terms = {(tuple(t["alpha"]), tuple(t["beta"])): complex(t["value"][0], t["value"][1])
                     for t in data["terms"]}
            return cls(int(data["dimension"]), terms, point_symbol=(kind == "antiwick"))
        except (KeyError, TypeError, IndexError) as exc:
            raise InputDataError(f"malformed symbol JSON: {exc}") from exc

    def __repr__(self):
        tag = "point" if self.point_symbol else "wick"
        return f"WickSymbol(d={self.dimension}, {tag}, terms={len(self.terms)})"


class RealSymbol:
    """Polynomial real-side symbol b(x, xi) = sum c(alpha, beta) x^alpha xi^beta
    with a quantization tag (Kohn-Nirenberg or Weyl)."""

    def __init__(self, dimension, quantization, terms, real_valued=False):
        if quantization not in (KOHN_NIRENBERG, WEYL):
            raise UsageError(f"quantization must be '{KOHN_NIRENBERG}' or '{WEYL}'")
        if dimension < 1:
            raise UsageError(f"dimension must be >= 1, got {dimension}")
        self.dimension = int(dimension)
        self.quantization = quantization
        clean = {}
        for (alpha, beta), value in dict(terms).items():
            alpha = MultiIndex(alpha)
            beta = MultiIndex(beta)
            if len(alpha) != self.dimension or len(beta) != self.dimension:
                raise UsageError(f"symbol key ({alpha}, {beta}) has wrong length")
            value = complex(value)
            if value != 0:
                clean[(alpha, beta)] = value
        self.terms = clean
        if real_valued:
            for (alpha, beta), c in self.terms.items():
                if abs(c.imag) > 1e-14 * max(1.0, abs(c)):
                    raise UsageError(
                        f"symbol flagged real-valued has complex coefficient at ({alpha}, {beta})")

    @property
    def total_degree(self) -> int:
        return max((a.degree() + b.degree() for a, b in self.terms), default=0)

    def to_json_dict(self) -> dict:
        kind = "kn" if self.quantization == KOHN_NIRENBERG else "weyl"
        items = sorted(self.terms.items(), key=lambda kv: (grlex_key(kv[0][0]), grlex_key(kv[0][1])))
        return {
            "dimension": self.dimension,
            "kind": kind,
            "terms": [{"alpha": list(a), "beta": list(b), "value": [c.real, c.imag]}
                      for (a, b), c in items],
        }

    @classmethod
    def from_json_dict(cls, data) -> "RealSymbol":
        from .core import InputDataError
        try:
            kind = data["kind"]
            quant = KOHN_NIRENBERG if kind == "kn" else WEYL
            if kind not in ("kn", "weyl"):
                raise InputDataError(f"unknown real-symbol kind {kind!r}")
            terms = {(tuple(t["alpha"]), tuple(t["beta"])): complex(t["value"][0], t["value"][1])
                     for t in data["terms"]}
            return cls(int(data["dimension"]), quant, terms)
        except (KeyError, TypeError, IndexError) as exc:
            raise InputDataError(f"malformed symbol JSON: {exc}") from exc


@dataclass
class OperatorMatrix:
    """Dense complex matrix between graded truncated bases.

    Rows index the codomain basis (degree <= codomain_degree), columns the
    domain basis (degree <= domain_degree), both in graded-lex order.
    """

    dimension: int
    domain_degree: int
    codomain_degree: int
    basis_side: str
    entries: np.ndarray
    compressed_from: int | None = None

    def __post_init__(self):
        n_in = len(enumerate_basis(self.dimension, self.domain_degree))
        n_out = len(enumerate_basis(self.dimension, self.codomain_degree))
        self.entries = np.asarray(self.entries, dtype=complex)
        if self.entries.shape != (n_out, n_in):
            raise UsageError(
                f"matrix shape {self.entries.shape} does not match bases ({n_out}, {n_in})")

    def embedded(self, codomain_degree: int) -> "OperatorMatrix":
        """Zero-pad rows up to a larger codomain degree (graded bases nest)."""
        if codomain_degree < self.codomain_degree:
            raise UsageError("cannot embed into a smaller codomain")
        n_out = len(enumerate_basis(self.dimension, codomain_degree))
        padded = np.zeros((n_out, self.entries.shape[1]), dtype=complex)
        padded[: self.entries.shape[0], :] = self.entries
        return OperatorMatrix(self.dimension, self.domain_degree, codomain_degree,
                              self.basis_side, padded)

    def compressed(self) -> "OperatorMatrix":
        """Square block on degrees <= domain_degree (truncation artifacts possible)."""
        n = len(enumerate_basis(self.dimension, self.domain_degree))
        return OperatorMatrix(self.dimension, self.domain_degree, self.domain_degree,
                              self.basis_side, self.entries[:n, :n].copy(),
                              compressed_from=self.codomain_degree)

    def apply(self, f: CoefficientExpansion) -> CoefficientExpansion:
        if f.side != self.basis_side or f.dimension != self.dimension:
            raise UsageError("expansion does not match the matrix bases")
        if f.degree_bound > self.domain_degree:
            raise UsageError("expansion degree exceeds the matrix domain")
        vec = f.dense(self.domain_degree)
        out = self.entries @ vec
        basis = enumerate_basis(self.dimension, self.codomain_degree)
        return CoefficientExpansion(
            self.dimension, self.basis_side,
            {basis[i]: out[i] for i in range(len(basis)) if out[i] != 0})

    def to_json_dict(self) -> dict:
        return {
            "dimension": self.dimension,
            "n_in": self.domain_degree,
            "n_out": self.codomain_degree,
            "side": self.basis_side,
            "entries": [[v.real, v.imag] for v in self.entries.ravel(order="C")],
        }

    @classmethod
    def from_json_dict(cls, data) -> "OperatorMatrix":
        from .core import InputDataError
        try:
            d = int(data["dimension"])
            n_in_deg = int(data["n_in"])
            n_out_deg = int(data["n_out"])
            n_in = len(enumerate_basis(d, n_in_deg))
            n_out = len(enumerate_basis(d, n_out_deg))
            flat = np.array([complex(re, im) for re, im in data["entries"]])
            return cls(d, n_in_deg, n_out_deg, data["side"], flat.reshape(n_out, n_in))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputDataError(f"malformed matrix JSON: {exc}") from exc


@dataclass(frozen=True)
class ShubinWeight:
    """Power weight omega(x) = <x>^t with decay exponent rho in [0, 1].

    <x> = (1 + |x|^2)^{1/2}; power weights are automatically v-moderate with
    v = <.>^{|t|}.
    """

    t: float
    rho: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise UsageError(f"rho must lie in [0, 1], got {self.rho}")

    def omega(self, x) -> float:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        return float((1.0 + np.sum(x**2)) ** (self.t / 2.0))

    def omega_complex(self, z) -> float:
        """omega through the identification C^d ~ R^{2d} (real and imaginary
        parts stacked)."""
        z = _as_complex_vector(z)
        return self.omega(np.concatenate([z.real, z.imag]))


def japanese_bracket(v) -> float:
    """<v> = (1 + |v|^2)^{1/2} for a real or complex vector."""
    v = np.atleast_1d(np.asarray(v, dtype=complex))
    return float(np.sqrt(1.0 + np.sum(np.abs(v) ** 2)))


# ---------------------------------------------------------------------------
# matrix builders
# ---------------------------------------------------------------------------

def wick_matrix(a: WickSymbol, n_in: int) -> OperatorMatrix:
    """Exact matrix of the Wick operator of a polynomial symbol.

    The monomial z^alpha conj(w)^beta acts normal-ordered as
    (multiply by z^alpha) o (d/dz)^beta, giving

        e_g -> [g!/(g-b)!] sqrt((g-b+a)! / g!) e_{g-b+a}   when g >= b.

    Columns span degrees <= n_in; rows extend to n_in + z_degree so the
    matrix is exact on its domain.
    """
    if a.point_symbol:
        raise UsageError("point symbols are anti-Wick data; use antiwick_matrix")
    if n_in < 0:
        raise UsageError(f"n_in must be >= 0, got {n_in}")
    d = a.dimension
    n_out = n_in + a.z_degree
    basis_in = enumerate_basis(d, n_in)
    out_index = basis_index_map(d, n_out)
    M = np.zeros((len(out_index), len(basis_in)), dtype=complex)
    for (alpha, beta), c in a.terms.items():
        for col, gamma in enumerate(basis_in):
            if not gamma.dominates(beta):
                continue
            target = gamma - beta + alpha
            weight = _falling_multi(gamma, beta) * math.sqrt(
                target.factorial() / gamma.factorial())
            M[out_index[target], col] += c * weight
    return OperatorMatrix(d, n_in, n_out, FOCK, M)


def antiwick_matrix(a0: WickSymbol, n_in: int) -> OperatorMatrix:
    """Exact matrix of the anti-Wick operator of a polynomial point symbol.

    Gaussian-moment evaluation: for a0 = w^s conj(w)^t,

        e_g -> d^t [z^{s+g}] / sqrt(g!)
             = [(s+g)!/(s+g-t)!] sqrt((s+g-t)! / g!) e_{s+g-t}  when s+g >= t.
    """
    if n_in < 0:
        raise UsageError(f"n_in must be >= 0, got {n_in}")
    if not a0.point_symbol:
        if a0.z_degree > 0:
            raise UsageError("symbol depends on z; use wick_matrix")
        # z-independent standard symbol: reinterpret conj(w)^beta terms
        a0 = WickSymbol(a0.dimension,
                        {(MultiIndex.zero(a0.dimension), b): c
                         for (_, b), c in a0.terms.items()},
                        point_symbol=True)
    d = a0.dimension
    holo_degree = max((s.degree() for s, _ in a0.terms), default=0)
    n_out = n_in + holo_degree
    basis_in = enumerate_basis(d, n_in)
    out_index = basis_index_map(d, n_out)
    M = np.zeros((len(out_index), len(basis_in)), dtype=complex)
    for (sigma, tau), c in a0.terms.items():
        for col, gamma in enumerate(basis_in):
            top = sigma + gamma
            if not top.dominates(tau):
                continue
            target = top - tau
            weight = _falling_multi(top, tau) * math.sqrt(
                target.factorial() / gamma.factorial())
            M[out_index[target], col] += c * weight
    return OperatorMatrix(d, n_in, n_out, FOCK, M)


def _apply_position(f: CoefficientExpansion, j: int) -> CoefficientExpansion:
    """Multiply by x_j, via x = (A + A+)/2."""
    up = apply_ladder(f, LadderKind(CREATION, j))
    down = apply_ladder(f, LadderKind(ANNIHILATION, j))
    return up.plus(down).scaled(0.5)


def _apply_derivative(f: CoefficientExpansion, j: int) -> CoefficientExpansion:
    """Apply d/dx_j, via d/dx = (A+ - A)/2."""
    down = apply_ladder(f, LadderKind(ANNIHILATION, j))
    up = apply_ladder(f, LadderKind(CREATION, j))
    return down.plus(up.scaled(-1.0)).scaled(0.5)


def _apply_momentum(f: CoefficientExpansion, j: int) -> CoefficientExpansion:
    """Apply D_j = -i d/dx_j."""
    return _apply_derivative(f, j).scaled(-1j)


def _columns_to_matrix(columns, d, n_in, n_out) -> OperatorMatrix:
    out_index = basis_index_map(d, n_out)
    M = np.zeros((len(out_index), len(columns)), dtype=complex)
    for col, expansion in enumerate(columns):
        for alpha, c in expansion.coeffs.items():
            M[out_index[alpha], col] = c
    return OperatorMatrix(d, n_in, n_out, HERMITE, M)


def kn_matrix(b: RealSymbol, n_in: int) -> OperatorMatrix:
    """Exact matrix of the Kohn-Nirenberg quantization sum c x^alpha D^beta
    (all position factors to the left of all momentum factors)."""
    if b.quantization != KOHN_NIRENBERG:
        raise UsageError("symbol is not tagged kohn_nirenberg")
    if n_in < 0:
        raise UsageError(f"n_in must be >= 0, got {n_in}")
    d = b.dimension
    n_out = n_in + b.total_degree
    basis_in = enumerate_basis(d, n_in)
    columns = []
    for gamma in basis_in:
        unit = CoefficientExpansion(d, HERMITE, {gamma: 1.0})
        acc = CoefficientExpansion(d, HERMITE, {})
        for (alpha, beta), c in b.terms.items():
            g = unit
            for j in range(d):
                for _ in range(beta[j]):
                    g = _apply_momentum(g, j)
            for j in range(d):
                for _ in range(alpha[j]):
                    g = _apply_position(g, j)
            acc = acc.plus(g.scaled(c))
        columns.append(acc)
    return _columns_to_matrix(columns, d, n_in, n_out)


def _weyl_words(n_x: int, n_d: int):
    """All distinct interleavings of n_x position and n_d momentum factors."""
    total = n_x + n_d
    for positions in combinations(range(total), n_x):
        yield tuple("x" if i in positions else "D" for i in range(total))


def _apply_word(f: CoefficientExpansion, word, j: int) -> CoefficientExpansion:
    # operator words act right to left
    for factor in reversed(word):
        f = _apply_position(f, j) if factor == "x" else _apply_momentum(f, j)
    return f


def weyl_matrix(b: RealSymbol, n_in: int) -> OperatorMatrix:
    """Exact matrix of the Weyl quantization.

    Each monomial x^alpha xi^beta is realized as the average over all
    interleavings of its position and momentum factors (per coordinate;
    factors in distinct coordinates commute).  Equivalent to the double
    integral formula for polynomial symbols, and exact at desk scale.
    """
    if b.quantization != WEYL:
        raise UsageError("symbol is not tagged weyl")
    if n_in < 0:
        raise UsageError(f"n_in must be >= 0, got {n_in}")
    d = b.dimension
    n_out = n_in + b.total_degree
    basis_in = enumerate_basis(d, n_in)
    columns = []
    for gamma in basis_in:
        unit = CoefficientExpansion(d, HERMITE, {gamma: 1.0})
        acc = CoefficientExpansion(d, HERMITE, {})
        for (alpha, beta), c in b.terms.items():
            g = unit
            for j in range(d):
                if alpha[j] == 0 and beta[j] == 0:
                    continue
                words = list(_weyl_words(alpha[j], beta[j]))
                avg = CoefficientExpansion(d, HERMITE, {})
                for word in words:
                    avg = avg.plus(_apply_word(g, word, j))
                g = avg.scaled(1.0 / len(words))
            acc = acc.plus(g.scaled(c))
        columns.append(acc)
    return _columns_to_matrix(columns, d, n_in, n_out)


def quantization_matrix(b: RealSymbol, n_in: int) -> OperatorMatrix:
    return kn_matrix(b, n_in) if b.quantization == KOHN_NIRENBERG else weyl_matrix(b, n_in)


def enumerate_symbol_keys(d: int, degree: int):
    """All (alpha, beta) with |alpha| + |beta| <= degree, in a fixed graded
    order (split halves of length-2d multi-indices)."""
    return [(MultiIndex(pair[:d]), MultiIndex(pair[d:]))
            for pair in enumerate_basis(2 * d, degree)]


def real_to_wick_symbol(b: RealSymbol, n_probe: int | None = None) -> WickSymbol:
    """The unique polynomial Wick symbol whose Wick operator matches the
    Bargmann conjugation of Op(b) (identity on coefficients).

    Solved as an exact linear system: unknown coefficients on all monomials
    of total degree <= deg(b), equations from the quantization matrix built
    at degree n_probe.
    """
    deg = b.total_degree
    if n_probe is None:
        n_probe = deg
    if n_probe < deg:
        raise UsageError(f"n_probe {n_probe} below symbol degree {deg}")
    d = b.dimension
    target = quantization_matrix(b, n_probe)  # hermite side; fock side identical
    keys = enumerate_symbol_keys(d, deg)
    n_out_common = n_probe + deg
    cols = []
    for alpha, beta in keys:
        unit = WickSymbol(d, {(alpha, beta): 1.0})
        cols.append(wick_matrix(unit, n_probe).embedded(n_out_common).entries.ravel())
    A = np.array(cols).T
    rhs = target.embedded(n_out_common).entries.ravel()
    coeffs, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    residual = np.max(np.abs(A @ coeffs - rhs)) if rhs.size else 0.0
    scale = max(1.0, np.max(np.abs(rhs)) if rhs.size else 0.0)
    if residual > 1e-9 * scale:
        raise NumericalError(
            f"no exact Wick symbol of degree {deg} reproduces the quantization matrix "
            f"(residual {residual:.3e}); this signals an upstream matrix bug")
    terms = {}
    for (alpha, beta), c in zip(keys, coeffs):
        if abs(c) > 1e-12:
            terms[(alpha, beta)] = complex(c)
    return WickSymbol(d, terms)


def wick_kernel(a: WickSymbol, z, w) -> complex:
    """Kernel K_a(z, w) = a(z, w) e^{(z,w)} with the sesquilinear pairing."""
    z = _as_complex_vector(z)
    w = _as_complex_vector(w)
    value = a.evaluate(w) if a.point_symbol else a.evaluate(z, w)
    return complex(value * np.exp(np.sum(z * np.conj(w))))


# ---------------------------------------------------------------------------
# quadrature oracles for the defining integrals (d = 1)
# ---------------------------------------------------------------------------

def wick_apply_quadrature(a: WickSymbol, F: CoefficientExpansion, z,
                          radial_order: int = 60, angular_order: int = 128) -> complex:
    """Direct quadrature of pi^{-1} integral a(z,w) F(w) e^{(z-w,w)} dlambda(w),
    d = 1.  Independent route used to validate the closed-form matrices."""
    if a.dimension != 1 or F.dimension != 1:
        raise UsageError("quadrature oracle is d = 1 only")
    if F.side != FOCK:
        raise UsageError("oracle expects a fock-side expansion")
    z = complex(_as_complex_vector(z)[0])
    points, weights = gaussian_plane_rule(radial_order, angular_order)
    pts = np.asarray(points, dtype=complex)
    Fv = np.zeros(pts.shape, dtype=complex)
    for k, c in F.coeffs.items():
        Fv += c * pts ** k[0] / math.sqrt(float(MultiIndex(k).factorial()))
    av = np.zeros(pts.shape, dtype=complex)
    if a.point_symbol:
        for (sigma, tau), c in a.terms.items():
            av += c * pts ** sigma[0] * np.conj(pts) ** tau[0]
    else:
        for (alpha, beta), c in a.terms.items():
            av += c * z ** alpha[0] * np.conj(pts) ** beta[0]
    return complex(np.sum(weights * av * Fv * np.exp(z * np.conj(pts))))


def matrix_apply_at_point(M: OperatorMatrix, F: CoefficientExpansion, z) -> complex:
    """Evaluate (M F)(z) through the codomain basis; comparison partner for
    wick_apply_quadrature."""
    return evaluate_fock(M.apply(F), z)


# ---------------------------------------------------------------------------
# symbol-class bound checkers (grid evidence, never proofs)
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    """Grid supremum of a bound ratio plus the maximizing point.

    A finite supremum is evidence for a symbol-class hypothesis on the grid
    only; membership over all of C^{2d} is never claimed.
    """

    description: str
    sup: float
    argmax: tuple | None
    params: dict = field(default_factory=dict)
    details: list = field(default_factory=list)

    def to_json_dict(self) -> dict:
        def enc(zw):
            if zw is None:
                return None
            z, w = zw
            z = _as_complex_vector(z)
            w = _as_complex_vector(w)
            return {"z": [[c.real, c.imag] for c in z],
                    "w": [[c.real, c.imag] for c in w]}
        return {
            "description": self.description,
            "sup": self.sup,
            "argmax": enc(self.argmax),
            "params": self.params,
            "details": [
                {**{k: v for k, v in entry.items() if k != "argmax"},
                 "argmax": enc(entry.get("argmax"))}
                for entry in self.details
            ],
        }


def pair_grid(dimension: int = 1, radius: float = 4.0, points_per_axis: int = 7):
    """Cartesian grid of (z, w) pairs in C^d x C^d; desk-scale default."""
    axis = np.linspace(-radius, radius, points_per_axis)
    singles = [np.array(p, dtype=complex)
               for p in product(*[[complex(x, y) for x in axis for y in axis]] * dimension)]
    return [(z, w) for z in singles for w in singles]


def symbol_bound_check(a: WickSymbol, s: float, r: float, direction: str,
                       grid) -> BoundReport:
    """Grid supremum of |a(z,w)| against the Gaussian-modulated bound
    e^{1/2 |z-w|^2 -+ r(|z|^{1/s} + |w|^{1/s})}.

    direction 'gain' tests the decaying bound (ratio multiplies by
    e^{+r(...)}), 'loss' the growing one (ratio multiplies by e^{-r(...)}).
    """
    if s < 0.5:
        raise UsageError(f"s must be >= 1/2, got {s}")
    if r <= 0:
        raise UsageError(f"r must be > 0, got {r}")
    if direction not in ("gain", "loss"):
        raise UsageError("direction must be 'gain' or 'loss'")
    grid = list(grid)
    if not grid:
        raise UsageError("bound check requires a non-empty grid")
    sign = +1.0 if direction == "gain" else -1.0
    best = -np.inf
    best_point = None
    for z, w in grid:
        z = _as_complex_vector(z)
        w = _as_complex_vector(w)
        nz = float(np.linalg.norm(z))
        nw = float(np.linalg.norm(w))
        exponent = (-0.5 * float(np.linalg.norm(z - w)) ** 2
                    + sign * r * (nz ** (1.0 / s) + nw ** (1.0 / s)))
        ratio = abs(a.evaluate(z, w)) * math.exp(exponent)
        if ratio > best:
            best = ratio
            best_point = (tuple(z), tuple(w))
    return BoundReport(
        description=f"symbol bound check ({direction})",
        sup=float(best), argmax=best_point,
        params={"s": s, "r": r, "direction": direction, "grid_size": len(grid)})


def shubin_estimate_check(a: WickSymbol, weight: ShubinWeight, max_order: int,
                          n_decay: int, grid) -> BoundReport:
    """Grid suprema of the Shubin-Wick estimate ratios

        |d_z^alpha dbar_w^beta a| /
        (e^{1/2|z-w|^2} omega(sqrt2 conj z) <z+w>^{-rho|a+b|} <z-w>^{-N})

    for all derivative orders |alpha + beta| <= max_order and N <= n_decay.
    Derivatives of polynomial symbols are exact (term-wise); omega of a
    complex argument goes through the R^{2d} realification.
    """
    if a.point_symbol:
        raise UsageError("Shubin estimates apply to standard Wick symbols")
    grid = list(grid)
    if not grid:
        raise UsageError("estimate check requires a non-empty grid")
    details = []
    overall = -np.inf
    overall_arg = None
    for alpha, beta in enumerate_symbol_keys(a.dimension, max_order):
        deriv = a.derivative(alpha, beta)
        order = alpha.degree() + beta.degree()
        for N in range(n_decay + 1):
            best = -np.inf
            best_point = None
            for z, w in grid:
                z = _as_complex_vector(z)
                w = _as_complex_vector(w)
                denom = (math.exp(0.5 * float(np.linalg.norm(z - w)) ** 2)
                         * weight.omega_complex(math.sqrt(2.0) * np.conj(z))
                         * japanese_bracket(z + w) ** (-weight.rho * order)
                         * japanese_bracket(z - w) ** (-N))
                ratio = abs(deriv.evaluate(z, w)) / denom
                if ratio > best:
                    best = ratio
                    best_point = (tuple(z), tuple(w))
            details.append({"alpha": tuple(alpha), "beta": tuple(beta), "N": N,
                            "sup": float(best), "argmax": best_point})
            if best > overall:
                overall = best
                overall_arg = best_point
    return BoundReport(
        description="Shubin-Wick estimate check",
        sup=float(overall), argmax=overall_arg,
        params={"t": weight.t, "rho": weight.rho,
                "max_order": max_order, "n_decay": n_decay, "grid_size": len(grid)},
        details=details)
