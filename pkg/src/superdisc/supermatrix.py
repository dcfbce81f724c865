"""Graded matrices over the Grassmann algebra.

Every axis of a :class:`SuperMatrix` carries a *kind string*, one character
per slot:

``-``  even slot of H^e_-      ``+``  even slot of H^e_+      ``o``  odd slot of H^o_+

The Z2 grading (even = ``-`` or ``+``, odd = ``o``) drives the supertrace and
the Berezinian.  The disc split (``-`` versus ``+``/``o``) drives the blocks
A, B, C, D of group elements and the coordinate Z.  Keeping both on the kind
string means neither decomposition is ever inferred from a dimension count.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from numbers import Number
from typing import Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from .errors import BranchError, DimensionError, FixtureError, IllConditionedError, ParityError, SingularityError
from .grassmann import GrassmannElement, g_inverse, pad_eps, tables

COND_GUARD = 1e8

EVEN, ODD = "even", "odd"


@dataclass(frozen=True)
class SpaceShape:
    """Truncated space H = C^p_minus (+) C^p_plus | C^q over n_pairs generator pairs."""

    p_minus: int
    p_plus: int
    q: int
    n_pairs: int

    def __post_init__(self):
        if min(self.p_minus, self.p_plus, self.q, self.n_pairs) < 0:
            raise DimensionError("space dimensions must be nonnegative")

    @property
    def dim(self) -> int:
        return self.p_minus + self.p_plus + self.q

    @property
    def kinds(self) -> str:
        return "-" * self.p_minus + "+" * self.p_plus + "o" * self.q

    @property
    def plus_kinds(self) -> str:
        return "+" * self.p_plus + "o" * self.q

    @property
    def minus_kinds(self) -> str:
        return "-" * self.p_minus

    def to_json(self) -> dict:
        return {"p_minus": self.p_minus, "p_plus": self.p_plus, "q": self.q, "n": self.n_pairs}

    @classmethod
    def from_json(cls, obj: dict) -> "SpaceShape":
        try:
            return cls(int(obj["p_minus"]), int(obj["p_plus"]), int(obj["q"]), int(obj["n"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FixtureError(f"malformed shape: {exc}") from exc


def _parity_of(kinds: str) -> np.ndarray:
    return np.array([1 if k == "o" else 0 for k in kinds], dtype=np.int64)


def _type_product(a: Optional[str], b: Optional[str]) -> Optional[str]:
    if a is None or b is None:
        return None
    return EVEN if a == b else ODD


class SuperMatrix:
    """Dense matrix of Grassmann numbers, shape ``(rows, cols, 2**(2n+m))``."""

    __slots__ = ("data", "row_kinds", "col_kinds", "n_pairs", "n_eps", "declared_type")
    __array_ufunc__ = None

    def __init__(self, data, row_kinds: str, col_kinds: str, n_pairs: int, n_eps: int = 0,
                 declared_type: Optional[str] = EVEN):
        data = np.asarray(data, dtype=complex)
        size = 1 << (2 * n_pairs + n_eps)
        if data.shape != (len(row_kinds), len(col_kinds), size):
            raise DimensionError(
                f"data shape {data.shape} does not match kinds {row_kinds!r}/{col_kinds!r} and algebra size {size}"
            )
        if declared_type not in (EVEN, ODD, None):
            raise ParityError(f"unknown declared type {declared_type!r}")
        self.data = data
        self.row_kinds = row_kinds
        self.col_kinds = col_kinds
        self.n_pairs = n_pairs
        self.n_eps = n_eps
        self.declared_type = declared_type

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, row_kinds: str, col_kinds: str, n_pairs: int, n_eps: int = 0,
              declared_type: Optional[str] = EVEN) -> "SuperMatrix":
        size = 1 << (2 * n_pairs + n_eps)
        return cls(np.zeros((len(row_kinds), len(col_kinds), size), dtype=complex),
                   row_kinds, col_kinds, n_pairs, n_eps, declared_type)

    @classmethod
    def identity(cls, kinds: str, n_pairs: int, n_eps: int = 0) -> "SuperMatrix":
        out = cls.zeros(kinds, kinds, n_pairs, n_eps)
        out.data[np.arange(len(kinds)), np.arange(len(kinds)), 0] = 1.0
        return out

    @classmethod
    def from_body(cls, body, row_kinds: str, col_kinds: str, n_pairs: int, n_eps: int = 0) -> "SuperMatrix":
        out = cls.zeros(row_kinds, col_kinds, n_pairs, n_eps)
        out.data[:, :, 0] = np.asarray(body, dtype=complex)
        return out

    @classmethod
    def from_entries(cls, entries, row_kinds: str, col_kinds: str,
                     declared_type: Optional[str] = EVEN) -> "SuperMatrix":
        """Build from a nested list of GrassmannElement."""
        first = entries[0][0]
        arr = np.stack([np.stack([e.promote(first.n_eps).coeffs for e in row]) for row in entries])
        return cls(arr, row_kinds, col_kinds, first.n_pairs, first.n_eps, declared_type)

    @classmethod
    def block(cls, rows: Sequence[Sequence["SuperMatrix"]]) -> "SuperMatrix":
        """Assemble a block matrix; kinds are concatenated."""
        m = max(b.n_eps for r in rows for b in r)
        rows = [[b.promote(m) for b in r] for r in rows]
        data = np.concatenate([np.concatenate([b.data for b in r], axis=1) for r in rows], axis=0)
        row_kinds = "".join(r[0].row_kinds for r in rows)
        col_kinds = "".join(b.col_kinds for b in rows[0])
        types = {b.declared_type for r in rows for b in r}
        dtype = types.pop() if len(types) == 1 else None
        return cls(data, row_kinds, col_kinds, rows[0][0].n_pairs, m, dtype)

    # views ----------------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return self.data.shape[0], self.data.shape[1]

    @property
    def is_square(self) -> bool:
        return self.row_kinds == self.col_kinds

    @property
    def row_parity(self) -> np.ndarray:
        return _parity_of(self.row_kinds)

    @property
    def col_parity(self) -> np.ndarray:
        return _parity_of(self.col_kinds)

    def body(self) -> np.ndarray:
        return self.data[:, :, 0].copy()

    def soul(self) -> "SuperMatrix":
        out = self.copy()
        out.data[:, :, 0] = 0.0
        return out

    def entry(self, i: int, j: int) -> GrassmannElement:
        return GrassmannElement(self.data[i, j].copy(), self.n_pairs, self.n_eps)

    def copy(self) -> "SuperMatrix":
        return SuperMatrix(self.data.copy(), self.row_kinds, self.col_kinds, self.n_pairs, self.n_eps,
                           self.declared_type)

    def sub(self, rows, cols) -> "SuperMatrix":
        """Sub-block selected by slices or index arrays; kinds follow."""
        ri = np.arange(len(self.row_kinds))[rows]
        ci = np.arange(len(self.col_kinds))[cols]
        data = self.data[np.ix_(ri, ci)] if len(ri) and len(ci) else np.zeros((len(ri), len(ci), self.data.shape[2]), complex)
        return SuperMatrix(data, "".join(self.row_kinds[i] for i in ri), "".join(self.col_kinds[j] for j in ci),
                           self.n_pairs, self.n_eps, self.declared_type)

    def disc_blocks(self) -> Tuple["SuperMatrix", "SuperMatrix", "SuperMatrix", "SuperMatrix"]:
        """(A, B, C, D) in the disc split H^e_- versus H^e_+ | H^o_+."""
        r = self.row_kinds.count("-")
        c = self.col_kinds.count("-")
        return (self.sub(slice(0, r), slice(0, c)), self.sub(slice(0, r), slice(c, None)),
                self.sub(slice(r, None), slice(0, c)), self.sub(slice(r, None), slice(c, None)))

    def grade_blocks(self) -> Tuple["SuperMatrix", "SuperMatrix", "SuperMatrix", "SuperMatrix"]:
        """Blocks in the even|odd grading (used by Str and sdet)."""
        re = np.flatnonzero(self.row_parity == 0)
        ro = np.flatnonzero(self.row_parity == 1)
        ce = np.flatnonzero(self.col_parity == 0)
        co = np.flatnonzero(self.col_parity == 1)
        return self.sub(re, ce), self.sub(re, co), self.sub(ro, ce), self.sub(ro, co)

    def promote(self, n_eps: int) -> "SuperMatrix":
        if n_eps == self.n_eps:
            return self
        return SuperMatrix(pad_eps(self.data, self.n_pairs, self.n_eps, n_eps), self.row_kinds, self.col_kinds,
                           self.n_pairs, n_eps, self.declared_type)

    def with_type(self, declared_type: Optional[str]) -> "SuperMatrix":
        return SuperMatrix(self.data, self.row_kinds, self.col_kinds, self.n_pairs, self.n_eps, declared_type)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.data))) if self.data.size else 0.0

    def parity_violation(self) -> float:
        """Largest coefficient sitting on a monomial of the wrong parity for the declared type."""
        if self.declared_type is None:
            return 0.0
        want = (self.row_parity[:, None] ^ self.col_parity[None, :]) ^ (1 if self.declared_type == ODD else 0)
        par = tables(self.n_pairs, self.n_eps).parity
        wrong = par[None, None, :] != want[:, :, None]
        return float(np.max(np.abs(self.data) * wrong)) if self.data.size else 0.0

    # arithmetic -----------------------------------------------------------
    def _align(self, other: "SuperMatrix"):
        if self.n_pairs != other.n_pairs:
            raise DimensionError(f"n_pairs mismatch: {self.n_pairs} vs {other.n_pairs}")
        m = max(self.n_eps, other.n_eps)
        return self.promote(m), other.promote(m)

    def __add__(self, other):
        if isinstance(other, Number) or isinstance(other, GrassmannElement):
            return self + _scalar_identity(self, other)
        x, y = self._align(other)
        if x.shape != y.shape or x.row_kinds != y.row_kinds or x.col_kinds != y.col_kinds:
            raise DimensionError(f"cannot add {x.row_kinds!r}x{x.col_kinds!r} and {y.row_kinds!r}x{y.col_kinds!r}")
        dtype = x.declared_type if x.declared_type == y.declared_type else None
        return SuperMatrix(x.data + y.data, x.row_kinds, x.col_kinds, x.n_pairs, x.n_eps, dtype)

    def __radd__(self, other):
        return self + other

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return SuperMatrix(-self.data, self.row_kinds, self.col_kinds, self.n_pairs, self.n_eps, self.declared_type)

    def __mul__(self, other):
        """Scalar multiplication on the right (entries times ``other``)."""
        if isinstance(other, Number):
            return SuperMatrix(self.data * complex(other), self.row_kinds, self.col_kinds, self.n_pairs,
                               self.n_eps, self.declared_type)
        if isinstance(other, GrassmannElement):
            return sm_scale(self, other, side="right")
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        if isinstance(other, GrassmannElement):
            return sm_scale(self, other, side="left")
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / complex(other))
        return NotImplemented

    def __matmul__(self, other):
        return sm_mul(self, other)

    def dagger(self) -> "SuperMatrix":
        return sm_dagger(self)

    def __repr__(self):
        return (f"SuperMatrix({self.row_kinds!r}x{self.col_kinds!r}, n={self.n_pairs}, eps={self.n_eps}, "
                f"type={self.declared_type}, body=\n{np.array2string(self.body(), precision=4)})")

    # serialization ----------------------------------------------------------
    def to_json(self, shape: Optional[SpaceShape] = None, kind: Optional[str] = None) -> dict:
        out = {}
        if kind is not None:
            out["kind"] = kind
        if shape is not None:
            out["shape"] = shape.to_json()
        out["n"] = self.n_pairs
        if self.n_eps:
            out["eps"] = self.n_eps
        out["row_kinds"] = self.row_kinds
        out["col_kinds"] = self.col_kinds
        out["type"] = self.declared_type
        entries = []
        for i in range(self.shape[0]):
            for j in range(self.shape[1]):
                if np.any(self.data[i, j]):
                    entries.append([i, j, self.entry(i, j).to_json()])
        out["entries"] = entries
        return out

    @classmethod
    def from_json(cls, obj: dict, row_kinds: Optional[str] = None, col_kinds: Optional[str] = None) -> "SuperMatrix":
        try:
            if "shape" in obj:
                shape = SpaceShape.from_json(obj["shape"])
                n = shape.n_pairs
                row_kinds = obj.get("row_kinds", row_kinds or shape.kinds)
                col_kinds = obj.get("col_kinds", col_kinds or shape.kinds)
            else:
                n = int(obj["n"])
                row_kinds = obj.get("row_kinds", row_kinds)
                col_kinds = obj.get("col_kinds", col_kinds)
                if row_kinds is None or col_kinds is None:
                    raise FixtureError("matrix fixture needs a shape or explicit kinds")
            n_eps = int(obj.get("eps", 0))
            out = cls.zeros(row_kinds, col_kinds, n, n_eps, obj.get("type", EVEN))
            for i, j, elem in obj.get("entries", []):
                g = GrassmannElement.from_json(elem)
                if g.n_pairs != n:
                    raise FixtureError(f"entry ({i},{j}) has n={g.n_pairs}, matrix has n={n}")
                if not (0 <= i < len(row_kinds) and 0 <= j < len(col_kinds)):
                    raise FixtureError(f"entry ({i},{j}) outside {len(row_kinds)}x{len(col_kinds)}")
                out.data[i, j] = g.promote(n_eps).coeffs
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, (FixtureError, DimensionError, ParityError)):
                raise
            raise FixtureError(f"malformed matrix fixture: {exc}") from exc
        return out


def _scalar_identity(M: SuperMatrix, value) -> SuperMatrix:
    if not M.is_square:
        raise DimensionError("adding a scalar needs a square matrix")
    out = SuperMatrix.identity(M.row_kinds, M.n_pairs, M.n_eps)
    if isinstance(value, GrassmannElement):
        return sm_scale(out, value)
    return out * value


# ----------------------------------------------------------------------------
# basic algebra
# ----------------------------------------------------------------------------

def sm_mul(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    M, N = M._align(N)
    if M.col_kinds != N.row_kinds:
        raise DimensionError(f"inner kinds differ: {M.col_kinds!r} vs {N.row_kinds!r}")
    data = tables(M.n_pairs, M.n_eps).matmul(M.data, N.data)
    return SuperMatrix(data, M.row_kinds, N.col_kinds, M.n_pairs, M.n_eps,
                       _type_product(M.declared_type, N.declared_type))


def sm_add(M: SuperMatrix, N: SuperMatrix) -> SuperMatrix:
    return M + N


def sm_scale(M: SuperMatrix, x, side: str = "left") -> SuperMatrix:
    """x*M (entries left-multiplied) or M*x; complex scalars commute."""
    if isinstance(x, Number):
        return M * x
    if x.n_pairs != M.n_pairs:
        raise DimensionError("n_pairs mismatch")
    m = max(M.n_eps, x.n_eps)
    M = M.promote(m)
    x = x.promote(m)
    t = tables(M.n_pairs, m)
    data = t.mul(x.coeffs[None, None, :], M.data) if side == "left" else t.mul(M.data, x.coeffs[None, None, :])
    px = x.parity()
    dtype = None if px is None or M.declared_type is None else _type_product(M.declared_type, EVEN if px == 0 else ODD)
    return SuperMatrix(data, M.row_kinds, M.col_kinds, M.n_pairs, m, dtype)


def sm_dagger(M: SuperMatrix) -> SuperMatrix:
    """(M^dagger)_ij = star(M_ji)."""
    t = tables(M.n_pairs, M.n_eps)
    data = t.star(np.transpose(M.data, (1, 0, 2)))
    return SuperMatrix(data, M.col_kinds, M.row_kinds, M.n_pairs, M.n_eps, M.declared_type)


def J_matrix(shape_or_kinds, n_pairs: Optional[int] = None) -> SuperMatrix:
    """diag(+1 on H^e_-, -1 on H^e_+ | H^o_+)."""
    if isinstance(shape_or_kinds, SpaceShape):
        kinds, n_pairs = shape_or_kinds.kinds, shape_or_kinds.n_pairs
    else:
        kinds = shape_or_kinds
    signs = np.array([1.0 if k == "-" else -1.0 for k in kinds])
    return SuperMatrix.from_body(np.diag(signs), kinds, kinds, n_pairs)


def identity_like(M: SuperMatrix) -> SuperMatrix:
    return SuperMatrix.identity(M.row_kinds, M.n_pairs, M.n_eps)


def sm_str(M: SuperMatrix) -> GrassmannElement:
    """Supertrace in the Z2 grading.

    Even (or undeclared) matrices: trace over even slots minus trace over odd
    slots.  Odd matrices use the plain trace, which is the sign choice making
    Str(MN) = (-1)^{|M||N|} Str(NM) hold for every homogeneous pair.
    """
    if not M.is_square:
        raise DimensionError("supertrace of a non-square matrix")
    par = M.row_parity
    signs = np.ones(len(par)) if M.declared_type == ODD else np.where(par == 1, -1.0, 1.0)
    diag = M.data[np.arange(len(par)), np.arange(len(par))]
    coeffs = (signs[:, None] * diag).sum(axis=0) if len(par) else np.zeros(M.data.shape[2], complex)
    return GrassmannElement(coeffs, M.n_pairs, M.n_eps)


def sm_str_J(M: SuperMatrix) -> GrassmannElement:
    """Conditional supertrace (1/2) Str[M + J M J]."""
    if not M.is_square:
        raise DimensionError("conditional supertrace of a non-square matrix")
    J = J_matrix(M.row_kinds, M.n_pairs)
    return sm_str(M + (J @ M @ J).with_type(M.declared_type)) * 0.5


def sm_commutator_s(X: SuperMatrix, Y: SuperMatrix) -> SuperMatrix:
    """Supercommutator XY - (-1)^{|X||Y|} YX."""
    if X.declared_type is None or Y.declared_type is None:
        raise ParityError("supercommutator needs declared parities")
    sign = -1.0 if (X.declared_type == ODD and Y.declared_type == ODD) else 1.0
    return (X @ Y) - (Y @ X) * sign


# ----------------------------------------------------------------------------
# inverses
# ----------------------------------------------------------------------------

def check_body_conditioning(body: np.ndarray, guard: float = COND_GUARD) -> None:
    if body.size == 0:
        return
    if not np.all(np.isfinite(body)):
        raise SingularityError("non-finite body")
    sv = np.linalg.svd(body, compute_uv=False)
    if sv[-1] == 0.0:
        raise SingularityError("body is singular")
    cond = sv[0] / sv[-1]
    if cond > guard:
        raise IllConditionedError(f"body condition number {cond:.3g} exceeds guard {guard:.3g}")


def sm_inverse(M: SuperMatrix, cond_guard: float = COND_GUARD) -> SuperMatrix:
    """Body inverse times the terminating Neumann series of the soul."""
    if not M.is_square:
        raise DimensionError("inverse of a non-square matrix")
    body = M.body()
    check_body_conditioning(body, cond_guard)
    if body.size == 0:
        return M.copy()
    binv = SuperMatrix.from_body(np.linalg.inv(body), M.col_kinds, M.row_kinds, M.n_pairs, M.n_eps)
    nil = binv @ M.soul()
    out = identity_like(nil)
    term = out
    for _ in range(tables(M.n_pairs, M.n_eps).n_symbols):
        term = -(term @ nil)
        if not np.any(term.data):
            break
        out = out + term
    return (out @ binv).with_type(M.declared_type)


# ----------------------------------------------------------------------------
# Berezinian
# ----------------------------------------------------------------------------

def det_even(M: SuperMatrix) -> GrassmannElement:
    """Determinant of a matrix with even (hence mutually commuting) entries.

    Gaussian elimination pivoting on the body; the nilpotent parts ride along
    exactly through the Grassmann inverse of each pivot.
    """
    t = tables(M.n_pairs, M.n_eps)
    a = M.data.copy()
    n = a.shape[0]
    det = GrassmannElement.one(M.n_pairs, M.n_eps)
    sign = 1.0
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k, 0])))
        if a[p, k, 0] == 0:
            raise SingularityError("determinant: singular body")
        if p != k:
            a[[k, p]] = a[[p, k]]
            sign = -sign
        pivot = GrassmannElement(a[k, k], M.n_pairs, M.n_eps)
        det = det * pivot
        if k + 1 < n:
            inv = g_inverse(pivot).coeffs
            factors = t.mul(a[k + 1:, k], inv[None, :])
            a[k + 1:, k:] -= t.mul(factors[:, None, :], a[k, k:][None, :, :])
    return det * sign


def sm_sdet(M: SuperMatrix) -> GrassmannElement:
    """Berezinian det(A - B D^-1 C) / det(D) in the even|odd block form."""
    if not M.is_square:
        raise DimensionError("superdeterminant of a non-square matrix")
    if M.declared_type == ODD:
        raise ParityError("superdeterminant needs an even matrix")
    A, B, C, D = M.grade_blocks()
    if D.shape[0]:
        Dinv = sm_inverse(D)
        schur = A - B @ Dinv @ C
        return det_even(schur) * g_inverse(det_even(D))
    return det_even(A)


# ----------------------------------------------------------------------------
# exponential
# ----------------------------------------------------------------------------

def _grassmann_inf_norm(M: SuperMatrix) -> float:
    if M.data.size == 0:
        return 0.0
    entry = np.abs(M.data).sum(axis=2)
    return float(entry.sum(axis=1).max())


def sm_exp(M: SuperMatrix, order: int = 18) -> SuperMatrix:
    """Scaling-and-squaring Taylor exponential over the Grassmann ring."""
    if not M.is_square:
        raise DimensionError("exponential of a non-square matrix")
    norm = _grassmann_inf_norm(M)
    s = max(0, int(math.ceil(math.log2(norm / 0.5)))) if norm > 0.5 else 0
    X = M * (0.5 ** s)
    out = identity_like(M)
    term = out
    for k in range(1, order + 1):
        term = (term @ X) * (1.0 / k)
        out = out + term
    for _ in range(s):
        out = out @ out
    return out.with_type(EVEN if M.declared_type == EVEN else None)


# ----------------------------------------------------------------------------
# fractional powers
# ----------------------------------------------------------------------------

def _hermitian_body_eig(M: SuperMatrix):
    body = M.body()
    scale = max(1.0, float(np.max(np.abs(body)))) if body.size else 1.0
    if body.size and np.max(np.abs(body - body.conj().T)) > 1e-10 * scale:
        raise BranchError("fractional power needs a hermitian body")
    evals, U = np.linalg.eigh((body + body.conj().T) / 2) if body.size else (np.zeros(0), np.zeros((0, 0)))
    if np.any(evals <= 0):
        raise BranchError(f"body spectrum not positive: min eigenvalue {evals.min():.3g}")
    return evals, U


def _rotate(data: np.ndarray, U: np.ndarray) -> np.ndarray:
    """U^dagger X U applied coefficient-wise."""
    return np.einsum("ki,klc,lj->ijc", U.conj(), data, U)


def _unrotate(data: np.ndarray, U: np.ndarray) -> np.ndarray:
    return np.einsum("ik,klc,jl->ijc", U, data, U.conj())


def sm_sqrt(M: SuperMatrix, max_iter: int = 12, tol: float = 1e-15) -> SuperMatrix:
    """Principal square root by Newton iteration seeded with the body root.

    Each Newton step solves X E + E X = M - X^2 over the Grassmann ring; the
    soul degree of the residual at least doubles per step, so the iteration
    terminates after about log2(number of generators) steps.
    """
    if not M.is_square:
        raise DimensionError("square root of a non-square matrix")
    evals, U = _hermitian_body_eig(M)
    roots = np.sqrt(evals)
    body_root = (U * roots) @ U.conj().T
    X = SuperMatrix.from_body(body_root, M.row_kinds, M.col_kinds, M.n_pairs, M.n_eps)
    denom = roots[:, None] + roots[None, :]
    scale = max(1.0, M.max_abs())
    for _ in range(max_iter):
        R = M - X @ X
        if R.max_abs() <= tol * scale:
            break
        X = X + _sylvester_newton_step(X, R, U, denom)
    return X.with_type(M.declared_type)


def _sylvester_newton_step(X: SuperMatrix, R: SuperMatrix, U: np.ndarray, denom: np.ndarray) -> SuperMatrix:
    """Solve X E + E X = R for E, X having the diagonalised body."""
    Xs = X.soul()

    def solve_body(rhs: SuperMatrix) -> SuperMatrix:
        rot = _rotate(rhs.data, U) / denom[:, :, None]
        return SuperMatrix(_unrotate(rot, U), rhs.row_kinds, rhs.col_kinds, rhs.n_pairs, rhs.n_eps, rhs.declared_type)

    E = solve_body(R)
    for _ in range(tables(X.n_pairs, X.n_eps).n_symbols):
        E_next = solve_body(R - Xs @ E - E @ Xs)
        if np.array_equal(E_next.data, E.data):
            break
        E = E_next
    return E


@functools.lru_cache(maxsize=65536)
def _divided_difference_power(points: Tuple[float, ...], alpha: float) -> float:
    """f[x0..xk] for f(x) = x**alpha via f of the bidiagonal (Opitz) matrix."""
    if len(points) == 1:
        return points[0] ** alpha
    k = len(points)
    opitz = np.diag(points) + np.diag(np.ones(k - 1), 1)
    return float(np.real(scipy.linalg.fractional_matrix_power(opitz, alpha)[0, k - 1]))


def _eigen_path_sum(M: SuperMatrix, weight) -> SuperMatrix:
    """U [sum over index paths of weight(mu_path) * S~ path products] U^dagger.

    This is the exact functional calculus for body + nilpotent soul: the
    k-th term carries k soul factors and vanishes beyond the algebra's degree.
    """
    evals, U = _hermitian_body_eig(M)
    t = tables(M.n_pairs, M.n_eps)
    d = len(evals)
    size = M.data.shape[2]
    soul = _rotate(M.soul().data, U)
    total = np.zeros((d, d, size), dtype=complex)
    total[np.arange(d), np.arange(d), 0] = [weight((float(e),)) for e in evals]
    paths = soul
    for k in range(1, t.n_symbols + 1):
        if not np.any(paths):
            break
        wts = np.empty((d,) * (k + 1))
        for idx in np.ndindex(*wts.shape):
            wts[idx] = weight(tuple(sorted(float(evals[i]) for i in idx)))
        contrib = wts[..., None] * paths
        if k > 1:
            contrib = contrib.sum(axis=tuple(range(1, k)))
        total += contrib
        if k < t.n_symbols:
            paths = t.mul(paths[..., None, :], soul)
    return SuperMatrix(_unrotate(total, U), M.row_kinds, M.col_kinds, M.n_pairs, M.n_eps, M.declared_type)


def sm_pow(M: SuperMatrix, alpha: float) -> SuperMatrix:
    """Principal power of a matrix with hermitian positive-definite body.

    Half-integer exponents go through the Newton square root; other real
    exponents use the divided-difference expansion of x**alpha in the soul,
    i.e. the noncommutative binomial series about the body.
    """
    if not M.is_square:
        raise DimensionError("power of a non-square matrix")
    alpha = float(alpha)
    if alpha == 0.0:
        return identity_like(M)
    if alpha.is_integer():
        base = M if alpha > 0 else sm_inverse(M)
        return _int_power(base, int(abs(alpha)))
    if (2 * alpha).is_integer():
        root = sm_sqrt(M)
        k = int(2 * alpha)
        base = root if k > 0 else sm_inverse(root)
        return _int_power(base, abs(k))
    return _eigen_path_sum(M, lambda pts: _divided_difference_power(pts, alpha))


def sm_pow_series(M: SuperMatrix, alpha: float) -> SuperMatrix:
    """Divided-difference route for any real alpha (also at half-integers)."""
    return _eigen_path_sum(M, lambda pts: _divided_difference_power(pts, float(alpha)))


def _int_power(M: SuperMatrix, k: int) -> SuperMatrix:
    out = identity_like(M)
    base = M
    while k:
        if k & 1:
            out = out @ base
        base = base @ base
        k >>= 1
    return out.with_type(M.declared_type)


def resolvent_power_weight(points: Tuple[float, ...], beta: float, nodes: int = 96) -> float:
    """Path weight of the resolvent integral for M**beta, -1 < beta < 0.

    M**beta = (sin(pi s)/pi) int_0^inf lam**(s-1) (lam + M)**-1 dlam with
    s = beta + 1.  Expanding the resolvent about the body gives, for the
    eigenvalue path mu_0..mu_k, the scalar integral
    (-1)**k (sin(pi s)/pi) int_0^inf lam**(s-1) prod_j (lam + mu_j)**-1 dlam,
    evaluated by Gauss-Legendre quadrature after lam = x**(1/s), x = c tan(phi).
    """
    s = beta + 1.0
    if not 0.0 < s < 1.0:
        raise BranchError("resolvent representation needs -1 < beta < 0")
    mu = np.asarray(points)
    c = float(np.sqrt(np.mean(mu))) ** (2 * s)
    xg, wg = _gauss_legendre(nodes)
    phi = (xg + 1.0) * (np.pi / 4)
    w = wg * (np.pi / 4)
    x = c * np.tan(phi)
    jac = c / np.cos(phi) ** 2
    lam = x ** (1.0 / s)
    integrand = (1.0 / s) * jac / np.prod(lam[:, None] + mu[None, :], axis=1)
    k = len(points) - 1
    return float((-1.0) ** k * np.sin(np.pi * s) / np.pi * np.sum(w * integrand))


@functools.lru_cache(maxsize=None)
def _gauss_legendre(n: int):
    return np.polynomial.legendre.leggauss(n)


def sm_pow_resolvent(M: SuperMatrix, alpha: float, nodes: int = 96) -> SuperMatrix:
    """Fractional power from the resolvent integral (independent of Newton).

    Exponents in (-1, 0) are integrated directly; exponents in (0, 1) use
    M**alpha = M @ M**(alpha - 1).
    """
    alpha = float(alpha)
    if -1.0 < alpha < 0.0:
        cache = {}

        def weight(pts):
            if pts not in cache:
                cache[pts] = resolvent_power_weight(pts, alpha, nodes)
            return cache[pts]

        return _eigen_path_sum(M, weight)
    if 0.0 < alpha < 1.0:
        return M @ sm_pow_resolvent(M, alpha - 1.0, nodes)
    raise BranchError("resolvent route covers -1 < alpha < 1, alpha != 0")


# ----------------------------------------------------------------------------
# random generation
# ----------------------------------------------------------------------------

def random_supermatrix(rng: np.random.Generator, row_kinds: str, col_kinds: str, n_pairs: int, *,
                       body_scale: float = 1.0, soul_scale: float = 0.1,
                       declared_type: str = EVEN) -> SuperMatrix:
    """Homogeneous random matrix: complex normal body, soul coefficients with |c| <= soul_scale."""
    t = tables(n_pairs)
    r, c = len(row_kinds), len(col_kinds)
    mags = rng.uniform(0.0, soul_scale, (r, c, t.size))
    phases = rng.uniform(0.0, 2 * np.pi, (r, c, t.size))
    data = mags * np.exp(1j * phases)
    data[:, :, 0] = (rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))) * body_scale / np.sqrt(2)
    out = SuperMatrix(data, row_kinds, col_kinds, n_pairs, 0, declared_type)
    want = (out.row_parity[:, None] ^ out.col_parity[None, :]) ^ (1 if declared_type == ODD else 0)
    wrong = t.parity[None, None, :] != want[:, :, None]
    out.data[wrong] = 0.0
    return out


# ----------------------------------------------------------------------------
# jets
# ----------------------------------------------------------------------------

def sm_make_jet(base: SuperMatrix, tangent: SuperMatrix) -> SuperMatrix:
    """base + eps * tangent with a fresh jet symbol on top."""
    base, tangent = base._align(tangent)
    if base.row_kinds != tangent.row_kinds or base.col_kinds != tangent.col_kinds:
        raise DimensionError("jet base and tangent kinds differ")
    dtype = base.declared_type if base.declared_type == tangent.declared_type else None
    return SuperMatrix(np.concatenate([base.data, tangent.data], axis=-1), base.row_kinds, base.col_kinds,
                       base.n_pairs, base.n_eps + 1, dtype)


def sm_jet_parts(M: SuperMatrix) -> Tuple[SuperMatrix, SuperMatrix]:
    """Inverse of :func:`sm_make_jet` for the newest jet symbol."""
    if M.n_eps == 0:
        raise DimensionError("matrix carries no jet symbol")
    half = M.data.shape[2] // 2
    mk = lambda d: SuperMatrix(d, M.row_kinds, M.col_kinds, M.n_pairs, M.n_eps - 1, M.declared_type)
    return mk(M.data[:, :, :half].copy()), mk(M.data[:, :, half:].copy())
