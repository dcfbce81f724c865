"""Finite complex Grassmann algebra with conjugation and jet extensions.

Symbols are laid out on bit positions::

    0 .. n-1        xi^1 .. xi^n          (odd)
    n .. 2n-1       xi*^1 .. xi*^n        (odd)
    2n .. 2n+m-1    eps_1 .. eps_m        (even, eps^2 = 0)

A basis monomial is the bitmask of the symbols it contains, written in
increasing bit order.  The ``eps`` symbols are commuting nilpotents used for
forward-mode differentiation: an element over ``n_eps = m`` is a jet of depth
``m`` over the plain algebra.  Because the jet symbols occupy the highest
bits, embedding an element into a deeper jet algebra is zero padding and the
coefficient of the newest ``eps`` is the upper half of the coefficient array.

Coefficients are stored densely (``2 ** (2n + m)`` complex numbers); the
working scale of the harness is ``n <= 3``.
"""
from __future__ import annotations

import functools
import math
from numbers import Number
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .errors import BranchError, DimensionError, FixtureError, ParityError, SingularityError

DEFAULT_TOL = 1e-9


class AlgebraTables:
    """Precomputed multiplication and conjugation tables for one algebra."""

    def __init__(self, n_pairs: int, n_eps: int = 0):
        if n_pairs < 0 or n_eps < 0:
            raise DimensionError("generator counts must be nonnegative")
        self.n_pairs = n_pairs
        self.n_eps = n_eps
        self.n_odd = 2 * n_pairs
        self.n_symbols = self.n_odd + n_eps
        self.size = 1 << self.n_symbols
        odd_mask = (1 << self.n_odd) - 1

        idx = np.arange(self.size)
        self.degree = np.array([bin(i).count("1") for i in range(self.size)])
        self.odd_degree = np.array([bin(i & odd_mask).count("1") for i in range(self.size)])
        self.parity = self.odd_degree % 2

        a = idx[:, None]
        b = idx[None, :]
        disjoint = (a & b) == 0
        # sign of e_a e_b -> e_{a|b}: inversions between odd bits of a and b
        inversions = np.zeros((self.size, self.size), dtype=np.int64)
        for j in range(self.n_odd):
            bit_in_b = (b >> j) & 1
            above = self.odd_degree[(a & odd_mask) >> (j + 1) << (j + 1)]
            inversions += bit_in_b * above
        sign = np.where(inversions % 2 == 0, 1.0, -1.0)

        aa, bb = np.nonzero(disjoint)
        self.pair_a = aa
        self.pair_b = bb
        self.pair_c = aa | bb
        self.pair_sign = sign[aa, bb]
        self.left = []
        for k in range(self.size):
            sel = aa == k
            self.left.append((bb[sel], self.pair_c[sel], self.pair_sign[sel]))

        swap = np.empty(self.n_symbols, dtype=np.int64)
        for p in range(self.n_symbols):
            if p < n_pairs:
                swap[p] = p + n_pairs
            elif p < self.n_odd:
                swap[p] = p - n_pairs
            else:
                swap[p] = p
        self.star_index = np.empty(self.size, dtype=np.int64)
        self.star_sign = np.empty(self.size)
        for m in range(self.size):
            odd_bits = [p for p in range(self.n_odd) if m >> p & 1]
            seq = [int(swap[p]) for p in reversed(odd_bits)]
            inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
            target = sum(1 << s for s in seq) | (m & ~odd_mask)
            self.star_index[m] = target
            self.star_sign[m] = -1.0 if inv % 2 else 1.0

    def mul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Broadcast Grassmann product over leading axes; last axis is the basis."""
        shape = np.broadcast_shapes(x.shape[:-1], y.shape[:-1]) + (self.size,)
        out = np.zeros(shape, dtype=complex)
        for k, (bi, ci, si) in enumerate(self.left):
            xk = x[..., k]
            if not np.any(xk):
                continue
            out[..., ci] += si * xk[..., None] * y[..., bi]
        return out

    def matmul(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Matrix product of arrays shaped (I, K, N) and (K, J, N)."""
        I, K, N = x.shape
        K2, J, _ = y.shape
        if K != K2:
            raise DimensionError(f"cannot multiply {I}x{K} by {K2}x{J}")
        if K == 0:
            return np.zeros((I, J, N), dtype=complex)
        # yperm[a, k, j, c] = sign(a, b) * y[k, j, b] with c = a | b
        yperm = np.zeros((N, K, J, N), dtype=complex)
        yperm[self.pair_a, :, :, self.pair_c] = self.pair_sign[:, None, None] * np.moveaxis(
            y[:, :, self.pair_b], -1, 0
        )
        out = np.tensordot(x, yperm, axes=([1, 2], [1, 0]))
        return out

    def star(self, x: np.ndarray) -> np.ndarray:
        out = np.zeros_like(x, dtype=complex)
        out[..., self.star_index] = self.star_sign * np.conj(x)
        return out


@functools.lru_cache(maxsize=None)
def tables(n_pairs: int, n_eps: int = 0) -> AlgebraTables:
    return AlgebraTables(n_pairs, n_eps)


def pad_eps(arr: np.ndarray, n_pairs: int, from_eps: int, to_eps: int) -> np.ndarray:
    """Embed coefficient arrays into an algebra with more jet symbols."""
    if to_eps == from_eps:
        return arr
    if to_eps < from_eps:
        raise DimensionError("cannot drop jet symbols by padding")
    size = 1 << (2 * n_pairs + to_eps)
    out = np.zeros(arr.shape[:-1] + (size,), dtype=complex)
    out[..., : arr.shape[-1]] = arr
    return out


def split_top_eps(arr: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Split coefficients into (base, tangent) along the newest jet symbol."""
    half = arr.shape[-1] // 2
    return arr[..., :half], arr[..., half:]


def _coerce_scalar(value, n_pairs: int, n_eps: int) -> "GrassmannElement":
    arr = np.zeros(1 << (2 * n_pairs + n_eps), dtype=complex)
    arr[0] = complex(value)
    return GrassmannElement(arr, n_pairs, n_eps)


class GrassmannElement:
    """An element of the complex Grassmann algebra on ``n_pairs`` generator pairs.

    ``coeffs`` is a dense vector indexed by monomial bitmask.  Instances are
    treated as immutable; every operation returns a new element.
    """

    __slots__ = ("coeffs", "n_pairs", "n_eps")
    __array_ufunc__ = None

    def __init__(self, coeffs, n_pairs: int, n_eps: int = 0):
        arr = np.asarray(coeffs, dtype=complex)
        expected = 1 << (2 * n_pairs + n_eps)
        if arr.shape != (expected,):
            raise DimensionError(f"expected {expected} coefficients, got shape {arr.shape}")
        self.coeffs = arr
        self.n_pairs = n_pairs
        self.n_eps = n_eps

    # construction -------------------------------------------------------
    @classmethod
    def scalar(cls, value, n_pairs: int, n_eps: int = 0) -> "GrassmannElement":
        return _coerce_scalar(value, n_pairs, n_eps)

    @classmethod
    def zero(cls, n_pairs: int, n_eps: int = 0) -> "GrassmannElement":
        return _coerce_scalar(0.0, n_pairs, n_eps)

    @classmethod
    def one(cls, n_pairs: int, n_eps: int = 0) -> "GrassmannElement":
        return _coerce_scalar(1.0, n_pairs, n_eps)

    @classmethod
    def monomial(cls, mask: int, n_pairs: int, coeff=1.0, n_eps: int = 0) -> "GrassmannElement":
        arr = np.zeros(1 << (2 * n_pairs + n_eps), dtype=complex)
        arr[mask] = coeff
        return cls(arr, n_pairs, n_eps)

    @classmethod
    def xi(cls, a: int, n_pairs: int) -> "GrassmannElement":
        """Generator xi^a, 1-based as in the usual notation."""
        if not 1 <= a <= n_pairs:
            raise DimensionError(f"xi^{a} does not exist for n_pairs={n_pairs}")
        return cls.monomial(1 << (a - 1), n_pairs)

    @classmethod
    def xi_star(cls, a: int, n_pairs: int) -> "GrassmannElement":
        if not 1 <= a <= n_pairs:
            raise DimensionError(f"xi*^{a} does not exist for n_pairs={n_pairs}")
        return cls.monomial(1 << (n_pairs + a - 1), n_pairs)

    @classmethod
    def from_terms(cls, terms: Dict[int, complex], n_pairs: int, n_eps: int = 0) -> "GrassmannElement":
        arr = np.zeros(1 << (2 * n_pairs + n_eps), dtype=complex)
        for mask, c in terms.items():
            arr[int(mask)] += c
        return cls(arr, n_pairs, n_eps)

    # introspection ------------------------------------------------------
    @property
    def tables(self) -> AlgebraTables:
        return tables(self.n_pairs, self.n_eps)

    def terms(self) -> Dict[int, complex]:
        """Sparse view: bitmask -> nonzero coefficient."""
        return {int(k): complex(self.coeffs[k]) for k in np.flatnonzero(self.coeffs)}

    def body(self) -> complex:
        return complex(self.coeffs[0])

    def soul(self) -> "GrassmannElement":
        arr = self.coeffs.copy()
        arr[0] = 0.0
        return GrassmannElement(arr, self.n_pairs, self.n_eps)

    def parity(self, tol: float = 0.0) -> Optional[int]:
        """0 or 1 for homogeneous elements, ``None`` for mixed ones (zero is even)."""
        mask = np.abs(self.coeffs) > tol
        pars = set(self.tables.parity[mask].tolist())
        if not pars:
            return 0
        return pars.pop() if len(pars) == 1 else None

    def is_even(self, tol: float = 0.0) -> bool:
        return self.parity(tol) == 0

    def promote(self, n_eps: int) -> "GrassmannElement":
        if n_eps == self.n_eps:
            return self
        return GrassmannElement(pad_eps(self.coeffs, self.n_pairs, self.n_eps, n_eps), self.n_pairs, n_eps)

    def _align(self, other) -> Tuple["GrassmannElement", "GrassmannElement"]:
        if isinstance(other, GrassmannElement):
            if other.n_pairs != self.n_pairs:
                raise DimensionError(f"n_pairs mismatch: {self.n_pairs} vs {other.n_pairs}")
            m = max(self.n_eps, other.n_eps)
            return self.promote(m), other.promote(m)
        if isinstance(other, Number):
            return self, _coerce_scalar(other, self.n_pairs, self.n_eps)
        return NotImplemented, NotImplemented

    # arithmetic ---------------------------------------------------------
    def __add__(self, other):
        x, y = self._align(other)
        if x is NotImplemented:
            return NotImplemented
        return GrassmannElement(x.coeffs + y.coeffs, x.n_pairs, x.n_eps)

    __radd__ = __add__

    def __sub__(self, other):
        x, y = self._align(other)
        if x is NotImplemented:
            return NotImplemented
        return GrassmannElement(x.coeffs - y.coeffs, x.n_pairs, x.n_eps)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return GrassmannElement(-self.coeffs, self.n_pairs, self.n_eps)

    def __mul__(self, other):
        if isinstance(other, Number):
            return GrassmannElement(self.coeffs * complex(other), self.n_pairs, self.n_eps)
        x, y = self._align(other)
        if x is NotImplemented:
            return NotImplemented
        return GrassmannElement(x.tables.mul(x.coeffs, y.coeffs), x.n_pairs, x.n_eps)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return GrassmannElement(self.coeffs * complex(other), self.n_pairs, self.n_eps)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return GrassmannElement(self.coeffs / complex(other), self.n_pairs, self.n_eps)
        return self * g_inverse(other)

    def __pow__(self, k: int):
        if not isinstance(k, (int, np.integer)):
            return g_pow(self, float(k))
        if k < 0:
            return g_inverse(self) ** (-k)
        out = GrassmannElement.one(self.n_pairs, self.n_eps)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def star(self) -> "GrassmannElement":
        return g_star(self)

    def allclose(self, other, tol: float = DEFAULT_TOL) -> bool:
        return max_abs_diff(self, other) <= tol

    def __repr__(self):
        return f"GrassmannElement({format_element(self)})"

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        out = {"n": self.n_pairs, "coeffs": {}}
        if self.n_eps:
            out["eps"] = self.n_eps
        for k in np.flatnonzero(self.coeffs):
            c = self.coeffs[k]
            out["coeffs"][str(int(k))] = [float(c.real) + 0.0, float(c.imag) + 0.0]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GrassmannElement":
        try:
            n = int(obj["n"])
            n_eps = int(obj.get("eps", 0))
            arr = np.zeros(1 << (2 * n + n_eps), dtype=complex)
            for key, (re, im) in obj.get("coeffs", {}).items():
                mask = int(key)
                if not 0 <= mask < arr.size:
                    raise FixtureError(f"monomial bitmask {mask} out of range for n={n}")
                arr[mask] = complex(re, im)
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, FixtureError):
                raise
            raise FixtureError(f"malformed Grassmann element: {exc}") from exc
        return cls(arr, n, n_eps)


def _symbol_name(p: int, n_pairs: int) -> str:
    if p < n_pairs:
        return f"x{p + 1}"
    if p < 2 * n_pairs:
        return f"x*{p - n_pairs + 1}"
    return f"e{p - 2 * n_pairs + 1}"


def format_element(x: GrassmannElement, digits: int = 6) -> str:
    parts = []
    for mask, c in x.terms().items():
        syms = [_symbol_name(p, x.n_pairs) for p in range(x.tables.n_symbols) if mask >> p & 1]
        coeff = f"({c.real:.{digits}g}{c.imag:+.{digits}g}j)"
        parts.append(coeff + ("*" + "*".join(syms) if syms else ""))
    return " + ".join(parts) if parts else "0"


def max_abs_diff(x, y) -> float:
    """Largest coefficient-wise absolute difference."""
    if not isinstance(x, GrassmannElement):
        x, y = y, x
    d = x - y
    return float(np.max(np.abs(d.coeffs))) if d.coeffs.size else 0.0


# --------------------------------------------------------------------------
# the named operations
# --------------------------------------------------------------------------

def g_mul(x: GrassmannElement, y: GrassmannElement) -> GrassmannElement:
    if x.n_pairs != y.n_pairs:
        raise DimensionError(f"n_pairs mismatch: {x.n_pairs} vs {y.n_pairs}")
    return x * y


def g_star(x: GrassmannElement) -> GrassmannElement:
    """Antilinear involution xi^a <-> xi*^a reversing products; jet symbols are real."""
    return GrassmannElement(x.tables.star(x.coeffs), x.n_pairs, x.n_eps)


def _soul_series(x: GrassmannElement, coeffs_of_k) -> GrassmannElement:
    """sum_k c_k (soul/body)^k, truncated where the soul power vanishes."""
    b = x.body()
    t = x.soul() * (1.0 / b)
    out = GrassmannElement.one(x.n_pairs, x.n_eps)
    term = GrassmannElement.one(x.n_pairs, x.n_eps)
    for k in range(1, x.tables.n_symbols + 1):
        term = term * t
        if not np.any(term.coeffs):
            break
        out = out + term * coeffs_of_k(k)
    return out


def g_inverse(x: GrassmannElement) -> GrassmannElement:
    """Two-sided inverse via the terminating Neumann series in the soul."""
    b = x.body()
    if b == 0:
        raise SingularityError("element with zero body has no inverse")
    return _soul_series(x, lambda k: (-1.0) ** k) * (1.0 / b)


def g_pow(x: GrassmannElement, alpha: float) -> GrassmannElement:
    """Principal power of an even element with real positive body."""
    if alpha == 0:
        return GrassmannElement.one(x.n_pairs, x.n_eps)
    if x.parity(tol=0.0) != 0:
        raise ParityError("fractional powers need an even element")
    b = x.body()
    if abs(b.imag) > 1e-14 * max(1.0, abs(b)) or b.real <= 0:
        if float(alpha).is_integer():
            return x ** int(alpha)
        raise BranchError(f"body {b} is not real positive")
    return _soul_series(x, lambda k: _binom(alpha, k)) * (b.real ** alpha)


def _binom(alpha: float, k: int) -> float:
    out = 1.0
    for j in range(k):
        out *= (alpha - j) / (j + 1)
    return out


def g_exp(x: GrassmannElement) -> GrassmannElement:
    """exp of an even element: exp(body) times the terminating soul series."""
    s = x.soul()
    out = GrassmannElement.one(x.n_pairs, x.n_eps)
    term = out
    for k in range(1, x.tables.n_symbols + 1):
        term = term * s * (1.0 / k)
        if not np.any(term.coeffs):
            break
        out = out + term
    return out * np.exp(x.body())


def g_l2_norm(x: GrassmannElement) -> float:
    return float(np.sqrt(np.sum(np.abs(x.coeffs) ** 2)))


# --------------------------------------------------------------------------
# jets
# --------------------------------------------------------------------------

def make_jet(base: GrassmannElement, tangent: GrassmannElement) -> GrassmannElement:
    """base + eps * tangent with a fresh jet symbol on top of both operands."""
    base, tangent = base._align(tangent)
    return GrassmannElement(np.concatenate([base.coeffs, tangent.coeffs]), base.n_pairs, base.n_eps + 1)


def jet_parts(x: GrassmannElement) -> Tuple[GrassmannElement, GrassmannElement]:
    """Inverse of :func:`make_jet` for the newest jet symbol."""
    if x.n_eps == 0:
        raise DimensionError("element carries no jet symbol")
    lo, hi = split_top_eps(x.coeffs)
    return GrassmannElement(lo, x.n_pairs, x.n_eps - 1), GrassmannElement(hi, x.n_pairs, x.n_eps - 1)


class JetScalar:
    """Convenience view of ``base + eps * tangent``.

    Arithmetic lives on the underlying :class:`GrassmannElement` (``.value``);
    nesting is just another jet symbol.
    """

    __slots__ = ("value",)

    def __init__(self, base: GrassmannElement, tangent: Optional[GrassmannElement] = None):
        if tangent is None:
            tangent = GrassmannElement.zero(base.n_pairs, base.n_eps)
        self.value = make_jet(base, tangent)

    @classmethod
    def wrap(cls, value: GrassmannElement) -> "JetScalar":
        obj = cls.__new__(cls)
        obj.value = value
        return obj

    @property
    def base(self) -> GrassmannElement:
        return jet_parts(self.value)[0]

    @property
    def tangent(self) -> GrassmannElement:
        return jet_parts(self.value)[1]

    def __add__(self, other):
        o = other.value if isinstance(other, JetScalar) else other
        return JetScalar.wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = other.value if isinstance(other, JetScalar) else other
        return JetScalar.wrap(self.value - o)

    def __mul__(self, other):
        o = other.value if isinstance(other, JetScalar) else other
        return JetScalar.wrap(self.value * o)

    def __rmul__(self, other):
        return JetScalar.wrap(other * self.value)

    def __truediv__(self, other):
        o = other.value if isinstance(other, JetScalar) else other
        return JetScalar.wrap(self.value / o)


def random_element(rng: np.random.Generator, n_pairs: int, *, parity: Optional[int] = None,
                   body_scale: float = 1.0, soul_scale: float = 0.1) -> GrassmannElement:
    """Random element; body ~ N(0, body_scale) complex, soul coefficients with |c| <= soul_scale."""
    t = tables(n_pairs)
    arr = np.zeros(t.size, dtype=complex)
    mags = rng.uniform(0.0, soul_scale, t.size)
    phases = rng.uniform(0.0, 2 * math.pi, t.size)
    arr[:] = mags * np.exp(1j * phases)
    if parity is not None:
        arr[t.parity != parity] = 0.0
    arr[0] = (rng.normal() + 1j * rng.normal()) * body_scale if parity in (None, 0) else 0.0
    return GrassmannElement(arr, n_pairs)


def sum_elements(items: Iterable[GrassmannElement]) -> GrassmannElement:
    items = list(items)
    out = items[0]
    for it in items[1:]:
        out = out + it
    return out
