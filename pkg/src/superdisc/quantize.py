"""Holomorphic sections, the prequantum one-form, quantized moment maps and the
projective group representation with its multiplier.

Sections are evaluation procedures DiscPoint -> GrassmannElement.  They never
look at Z^dagger, so evaluating on a jet point gives exact derivatives, and
operators compose by nesting jets.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionError, FixtureError
from .grassmann import GrassmannElement, g_inverse, jet_parts
from .disc import DiscPoint, GroupElement, LieElement, moebius
from .supermatrix import SuperMatrix, identity_like, sm_inverse, sm_sdet, sm_str
from .symplectic import TangentVector, antiholomorphic_jet, jet_point, vector_field


def _check_level(k: int) -> int:
    if int(k) != k or k < 1:
        raise ValueError(f"quantization level must be a positive integer, got {k!r}")
    return int(k)


def sdet_power(x: GrassmannElement, k: int) -> GrassmannElement:
    """x**k for integer k (negative through the Grassmann inverse)."""
    base = x if k >= 0 else g_inverse(x)
    out = GrassmannElement.one(x.n_pairs, x.n_eps)
    for _ in range(abs(k)):
        out = out * base
    return out


# ----------------------------------------------------------------------------
# sections
# ----------------------------------------------------------------------------

class Section:
    """Holomorphic section: a callable on disc points with a polynomial degree bound."""

    def __init__(self, fn: Callable[[DiscPoint], GrassmannElement], degree: Optional[int] = None):
        self._fn = fn
        self.degree = degree

    def __call__(self, Z: DiscPoint) -> GrassmannElement:
        return self._fn(Z)


@dataclass(frozen=True)
class Factor:
    block: str  # "w" or "theta"
    row: int
    col: int
    power: int = 1


class MonomialSection(Section):
    """Sum of coefficient * product of entries of w and theta, factors multiplied in listed order."""

    def __init__(self, terms: Sequence[Tuple[complex, Sequence[Factor]]]):
        self.terms = [(complex(c), tuple(fs)) for c, fs in terms]
        for _, fs in self.terms:
            for f in fs:
                if f.block not in ("w", "theta"):
                    raise FixtureError(f"unknown block {f.block!r}")
                if f.block == "theta" and f.power != 1:
                    raise FixtureError("theta entries are odd; only power 1 is meaningful")
                if f.power < 0:
                    raise FixtureError("negative powers are not polynomial")
        degree = max((sum(f.power for f in fs) for _, fs in self.terms), default=0)
        super().__init__(self._evaluate, degree)

    def _evaluate(self, Z: DiscPoint) -> GrassmannElement:
        out = GrassmannElement.zero(Z.shape.n_pairs, Z.n_eps)
        p_plus = Z.shape.p_plus
        for c, fs in self.terms:
            val = GrassmannElement.scalar(c, Z.shape.n_pairs, Z.n_eps)
            for f in fs:
                col = f.col if f.block == "w" else p_plus + f.col
                if f.block == "w" and not 0 <= f.col < p_plus or f.block == "theta" and not 0 <= f.col < Z.shape.q:
                    raise FixtureError(f"column {f.col} out of range for block {f.block}")
                entry = Z.Z.entry(f.row, col)
                for _ in range(f.power):
                    val = val * entry
            out = out + val
        return out

    def to_json(self) -> list:
        return [{"coeff": [c.real, c.imag],
                 "vars": [{"block": f.block, "row": f.row, "col": f.col, "power": f.power} for f in fs]}
                for c, fs in self.terms]

    @classmethod
    def from_json(cls, obj: list) -> "MonomialSection":
        try:
            terms = []
            for t in obj:
                re, im = t["coeff"]
                fs = [Factor(v["block"], int(v["row"]), int(v["col"]), int(v.get("power", 1))) for v in t.get("vars", [])]
                terms.append((complex(re, im), fs))
        except (KeyError, TypeError, ValueError) as exc:
            raise FixtureError(f"malformed section fixture: {exc}") from exc
        return cls(terms)


def constant_section(value: complex = 1.0) -> Section:
    return Section(lambda Z: GrassmannElement.scalar(value, Z.shape.n_pairs, Z.n_eps), 0)


def random_monomial_section(rng: np.random.Generator, shape, max_degree: int = 2, n_terms: int = 3,
                            constant: Optional[complex] = None) -> MonomialSection:
    """Random polynomial in the entries of w and theta with total degree <= max_degree.

    ``constant`` adds a fixed degree-0 term, which keeps the section's body
    away from zero (needed when dividing section values).
    """
    slots = [("w", r, c) for r in range(shape.p_minus) for c in range(shape.p_plus)]
    slots += [("theta", r, c) for r in range(shape.p_minus) for c in range(shape.q)]
    terms = []
    for _ in range(n_terms):
        deg = int(rng.integers(0, max_degree + 1)) if slots else 0
        fs = []
        for _ in range(deg):
            blk, r, c = slots[int(rng.integers(len(slots)))]
            fs.append(Factor(blk, r, c, 1))
        coeff = complex(rng.normal(), rng.normal())
        terms.append((coeff, fs))
    if constant is not None:
        terms.append((complex(constant), []))
    return MonomialSection(terms)


# ----------------------------------------------------------------------------
# one-form, weight, polarization
# ----------------------------------------------------------------------------

def theta_s(Z: DiscPoint, dZ: TangentVector, dZbar: TangentVector, k: int = 1) -> GrassmannElement:
    """k (Str(S^-1 dZ^dagger Z) - Str(S^-1 Z^dagger dZ)), S = 1 - Z^dagger Z.

    ``dZbar`` is the direction whose adjoint moves Z^dagger, so dZ^dagger means dZbar.dZ^dagger.
    """
    zd = Z.adjoint()
    S = identity_like(zd @ Z.Z) - zd @ Z.Z
    Sinv = sm_inverse(S)
    dzd = dZbar.dZ.promote(Z.n_eps).dagger()
    dz = dZ.dZ.promote(Z.n_eps)
    return (sm_str(Sinv @ dzd @ Z.Z) - sm_str(Sinv @ zd @ dz)) * float(k)


def weight(Z: DiscPoint, k: int = 1) -> GrassmannElement:
    """sdet^k(1 - Z^dagger Z) in the even|odd grading of H^e_+ | H^o_+."""
    k = _check_level(k)
    zd = Z.adjoint()
    S = identity_like(zd @ Z.Z) - zd @ Z.Z
    return sdet_power(sm_sdet(S), k)


def polarization_residual(s: Section, Z: DiscPoint, dZbar: SuperMatrix, k: int = 1) -> float:
    """|dbar_V psi + Theta_s(dbar_V) psi| for psi = weight * s along an antiholomorphic jet."""
    k = _check_level(k)
    Zj = antiholomorphic_jet(Z, dZbar)
    psi = weight(Zj, k) * s(Zj)
    base, deriv = jet_parts(psi)
    zero = TangentVector(SuperMatrix.zeros(Z.Z.row_kinds, Z.Z.col_kinds, Z.Z.n_pairs, Z.n_eps))
    th = theta_s(Z, zero, TangentVector(dZbar), k)
    return float(np.max(np.abs((deriv + th * base).coeffs)))


def holomorphic_derivative_residual(s: Section, Z: DiscPoint, dZbar: SuperMatrix) -> float:
    """|derivative of s along an antiholomorphic jet|; zero for holomorphic s."""
    return float(np.max(np.abs(jet_parts(s(antiholomorphic_jet(Z, dZbar)))[1].coeffs)))


# ----------------------------------------------------------------------------
# quantized moment maps
# ----------------------------------------------------------------------------

def fhat(u: LieElement, s: Section, k: int = 1) -> Section:
    """(F^_u s)(Z) = -(i/k) d/de s(Z + e V_u(Z)) + i Str(u21 Z) s(Z)."""
    k = _check_level(k)
    _, _, u21, _ = u.blocks()

    def evaluate(Z: DiscPoint) -> GrassmannElement:
        V = vector_field(u, Z)
        base, deriv = jet_parts(s(jet_point(Z, V.dZ)))
        mult = sm_str(u21.promote(Z.n_eps) @ Z.Z) * 1j
        return deriv * (-1j / k) + mult * base

    degree = None if s.degree is None else s.degree + 1
    return Section(evaluate, degree)


def section_difference(a: Section, b: Section, scale_b: complex = 1.0) -> Section:
    """a - scale_b * b."""
    deg = None if a.degree is None or b.degree is None else max(a.degree, b.degree)
    return Section(lambda Z: a(Z) - b(Z) * scale_b, deg)


def commutator_defect(u: LieElement, v: LieElement, s: Section, k: int, lam: complex) -> Section:
    """([F^_u, F^_v] - lam F^_[u,v]) s."""
    uv = fhat(u, fhat(v, s, k), k)
    vu = fhat(v, fhat(u, s, k), k)
    br = fhat(u.bracket(v), s, k)
    return Section(lambda Z: uv(Z) - vu(Z) - br(Z) * lam, s.degree)


# ----------------------------------------------------------------------------
# projective representation
# ----------------------------------------------------------------------------

def rho(g: GroupElement, s: Section, k: int = 1) -> Section:
    """Z -> sdet^-k(D^-1 C Z + 1) s((AZ + B)(CZ + D)^-1), with g's own blocks."""
    k = _check_level(k)
    _, _, C, D = g.blocks()
    Dinv_C = sm_inverse(D) @ C

    def evaluate(Z: DiscPoint) -> GrassmannElement:
        M = Dinv_C.promote(Z.n_eps) @ Z.Z
        mult = sdet_power(sm_sdet(M + identity_like(M)), -k)
        return mult * s(moebius(g, Z))

    return Section(evaluate, None)


def central_term(g1: GroupElement, g2: GroupElement, k: int = 1) -> GrassmannElement:
    """c(g1, g2) = sdet^k((D1 D2)^-1 C1 B2 + 1)."""
    k = _check_level(k)
    _, _, C1, D1 = g1.blocks()
    _, B2, _, D2 = g2.blocks()
    M = sm_inverse(D1 @ D2) @ C1 @ B2
    return sdet_power(sm_sdet(M + identity_like(M)), k)


def central_term_cocycle_residual(g1: GroupElement, g2: GroupElement, g3: GroupElement, k: int = 1) -> float:
    """Relative size of c(g1,g2) c(g1g2,g3) - c(g2,g3) c(g1,g2g3)."""
    lhs = central_term(g1, g2, k) * central_term(g1 @ g2, g3, k)
    rhs = central_term(g2, g3, k) * central_term(g1, g2 @ g3, k)
    return float(np.max(np.abs((lhs - rhs).coeffs)) / max(np.max(np.abs(rhs.coeffs)), 1e-300))


# The composition law T_{g1} T_{g2} = c(g2, g1)^-1 T_{g2 g1} for rho as
# defined above.  rho_convention() re-derives it numerically; this is the
# value that derivation produces.
RHO_ORDER = "g2g1"
RHO_EXPONENT = -1


def composition_ratio(g1: GroupElement, g2: GroupElement, s: Section, Z: DiscPoint, k: int = 1,
                      order: str = RHO_ORDER) -> GrassmannElement:
    """(rho(g1) rho(g2) s)(Z) / (rho(product) s)(Z), product = g1 g2 or g2 g1."""
    num = rho(g1, rho(g2, s, k), k)(Z)
    prod = g1 @ g2 if order == "g1g2" else g2 @ g1
    den = rho(prod, s, k)(Z)
    return num * g_inverse(den)


def rho_convention(g1: GroupElement, g2: GroupElement, s: Section, points: Sequence[DiscPoint],
                   k: int = 1) -> Tuple[str, int, float]:
    """Pick (order, exponent) for which the composition ratio is constant and equals c^exponent.

    Candidates: order in {g1g2, g2g1}; the multiplier is c(g1,g2)^e or
    c(g2,g1)^e with e = +-1, matching the product order.  Returns the best
    candidate and its mismatch.
    """
    best = None
    for order in ("g1g2", "g2g1"):
        ratios = [composition_ratio(g1, g2, s, Z, k, order) for Z in points]
        c = central_term(g1, g2, k) if order == "g1g2" else central_term(g2, g1, k)
        for e in (1, -1):
            target = c if e == 1 else g_inverse(c)
            err = max(float(np.max(np.abs((r - target.promote(r.n_eps)).coeffs))) for r in ratios)
            if best is None or err < best[2]:
                best = (order, e, err)
    return best


def projective_residual(g1: GroupElement, g2: GroupElement, s: Section, points: Sequence[DiscPoint],
                        k: int = 1, order: str = RHO_ORDER, exponent: int = RHO_EXPONENT) -> Tuple[float, float]:
    """(Z-variation of the composition ratio, mismatch against the central term)."""
    ratios = [composition_ratio(g1, g2, s, Z, k, order) for Z in points]
    ref = ratios[0]
    variation = max(float(np.max(np.abs((r - ref).coeffs))) for r in ratios)
    c = central_term(g1, g2, k) if order == "g1g2" else central_term(g2, g1, k)
    target = c if exponent == 1 else g_inverse(c)
    mismatch = max(float(np.max(np.abs((r - target).coeffs))) for r in ratios)
    return variation, mismatch


# ----------------------------------------------------------------------------
# Hilbert-Schmidt pairing on Grassmann-valued matrices
# ----------------------------------------------------------------------------

def _as_list(x: Union[SuperMatrix, Sequence[SuperMatrix]]) -> List[SuperMatrix]:
    return [x] if isinstance(x, SuperMatrix) else list(x)


def hs_inner(Z: Union[SuperMatrix, Sequence[SuperMatrix]], W: Union[SuperMatrix, Sequence[SuperMatrix]]) -> complex:
    """sum over monomials m of Tr(Z_m^dagger W_m), Z_m the complex coefficient matrix of m."""
    Zs, Ws = _as_list(Z), _as_list(W)
    if len(Zs) != len(Ws):
        raise ValueError("hs_inner needs lists of equal length")
    total = 0j
    for a, b in zip(Zs, Ws):
        a, b = a._align(b)
        if a.data.shape != b.data.shape:
            raise DimensionError(f"shape mismatch {a.data.shape} vs {b.data.shape}")
        total += complex(np.vdot(a.data, b.data))
    return total


def hs_norm(Z: Union[SuperMatrix, Sequence[SuperMatrix]]) -> float:
    return float(np.sqrt(max(hs_inner(Z, Z).real, 0.0)))


def hs_product_bound(n_pairs: int) -> float:
    """C with ||Z W|| <= C ||Z|| ||W||.

    Each product monomial has at most 2^(2n) splittings into factor
    monomials, so Cauchy-Schwarz gives C = sqrt(2^(2n)) = 2^n.
    """
    return float(2 ** n_pairs)
