"""Points of the superdisc, the pseudounitary group acting on them, and the
operator Phi(Z) embedding the disc into involutions.

A point is Z = [w theta], a p_minus x (p_plus + q) even matrix: w is its
even-even block, theta its even-odd block.  Group elements are even matrices
on the full space split as [[A, B], [C, D]] along H^e_- versus H^e_+ | H^o_+.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

import numpy as np

from .errors import DimensionError, FixtureError, SingularityError
from .grassmann import tables
from .supermatrix import (
    EVEN,
    J_matrix,
    SpaceShape,
    SuperMatrix,
    identity_like,
    random_supermatrix,
    sm_exp,
    sm_inverse,
    sm_pow,
)

SeedLike = Union[int, np.random.SeedSequence, np.random.Generator, None]


def _rng(seed: SeedLike) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class DiscPoint:
    """Coordinate Z of a disc point.

    ``zdag`` overrides the adjoint Z^dagger.  It is only set for
    antiholomorphic jets, where Z and Z^dagger move independently; everywhere
    else it is None and the adjoint is computed from Z.
    """

    Z: SuperMatrix
    shape: SpaceShape
    zdag: Optional[SuperMatrix] = None

    def __post_init__(self):
        if self.Z.row_kinds != self.shape.minus_kinds or self.Z.col_kinds != self.shape.plus_kinds:
            raise DimensionError(f"Z kinds {self.Z.row_kinds!r}x{self.Z.col_kinds!r} do not match {self.shape}")

    @classmethod
    def from_blocks(cls, w: SuperMatrix, theta: SuperMatrix, shape: SpaceShape) -> "DiscPoint":
        return cls(SuperMatrix.block([[w, theta]]).with_type(EVEN), shape)

    @classmethod
    def origin(cls, shape: SpaceShape) -> "DiscPoint":
        return cls(SuperMatrix.zeros(shape.minus_kinds, shape.plus_kinds, shape.n_pairs), shape)

    @property
    def w(self) -> SuperMatrix:
        return self.Z.sub(slice(None), slice(0, self.shape.p_plus))

    @property
    def theta(self) -> SuperMatrix:
        return self.Z.sub(slice(None), slice(self.shape.p_plus, None)).with_type(EVEN)

    @property
    def n_eps(self) -> int:
        return self.Z.n_eps

    def adjoint(self) -> SuperMatrix:
        if self.zdag is None:
            return self.Z.dagger()
        return self.zdag.promote(max(self.zdag.n_eps, self.Z.n_eps))

    def promote(self, n_eps: int) -> "DiscPoint":
        zd = None if self.zdag is None else self.zdag.promote(n_eps)
        return DiscPoint(self.Z.promote(n_eps), self.shape, zd)

    def to_json(self) -> dict:
        return self.Z.to_json(self.shape, kind="disc_point")

    @classmethod
    def from_json(cls, obj: dict) -> "DiscPoint":
        if "shape" not in obj:
            raise FixtureError("disc point fixture needs a shape")
        shape = SpaceShape.from_json(obj["shape"])
        Z = SuperMatrix.from_json(obj, shape.minus_kinds, shape.plus_kinds)
        if Z.row_kinds != shape.minus_kinds or Z.col_kinds != shape.plus_kinds:
            raise FixtureError("disc point kinds do not match its shape")
        return cls(Z, shape)


@dataclass(frozen=True)
class GroupElement:
    m: SuperMatrix
    shape: SpaceShape

    def blocks(self) -> Tuple[SuperMatrix, SuperMatrix, SuperMatrix, SuperMatrix]:
        return self.m.disc_blocks()

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement(self.m @ other.m, self.shape)

    def inverse(self) -> "GroupElement":
        # g^-1 = J g^dagger J for pseudounitary g; the ring inverse avoids relying on that.
        return GroupElement(sm_inverse(self.m), self.shape)

    @classmethod
    def identity(cls, shape: SpaceShape) -> "GroupElement":
        return cls(SuperMatrix.identity(shape.kinds, shape.n_pairs), shape)

    def to_json(self) -> dict:
        return self.m.to_json(self.shape, kind="group_element")

    @classmethod
    def from_json(cls, obj: dict) -> "GroupElement":
        if "shape" not in obj:
            raise FixtureError("group element fixture needs a shape")
        shape = SpaceShape.from_json(obj["shape"])
        return cls(SuperMatrix.from_json(obj), shape)


@dataclass(frozen=True)
class LieElement:
    u: SuperMatrix
    shape: SpaceShape

    def blocks(self) -> Tuple[SuperMatrix, SuperMatrix, SuperMatrix, SuperMatrix]:
        return self.u.disc_blocks()

    def __add__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.u + other.u, self.shape)

    def __sub__(self, other: "LieElement") -> "LieElement":
        return LieElement(self.u - other.u, self.shape)

    def __mul__(self, c) -> "LieElement":
        return LieElement(self.u * c, self.shape)

    __rmul__ = __mul__

    def bracket(self, other: "LieElement") -> "LieElement":
        """[u, v]_s; both are even matrices so this is the plain commutator."""
        return LieElement(self.u @ other.u - other.u @ self.u, self.shape)

    def conjugate(self, g: GroupElement) -> "LieElement":
        """g^-1 u g."""
        return LieElement(sm_inverse(g.m) @ self.u @ g.m, self.shape)

    def residual(self) -> float:
        """max |uJ + J u^dagger|."""
        J = J_matrix(self.shape)
        return (self.u @ J + J @ self.u.dagger()).max_abs()

    def to_json(self) -> dict:
        return self.u.to_json(self.shape, kind="lie_element")

    @classmethod
    def from_json(cls, obj: dict) -> "LieElement":
        if "shape" not in obj:
            raise FixtureError("lie element fixture needs a shape")
        return cls(SuperMatrix.from_json(obj), SpaceShape.from_json(obj["shape"]))


# ----------------------------------------------------------------------------
# membership, action, Phi
# ----------------------------------------------------------------------------

def is_in_disc(Z: DiscPoint) -> Tuple[bool, float]:
    """(inside, margin) with margin = 1 - sigma_max(body w)^2."""
    body = Z.w.body()
    smax = float(np.linalg.norm(body, 2)) if body.size else 0.0
    margin = 1.0 - smax ** 2
    return margin > 0.0, margin


def moebius(g: GroupElement, Z: DiscPoint) -> DiscPoint:
    """(AZ + B)(CZ + D)^-1."""
    A, B, C, D = g.blocks()
    num = A @ Z.Z + B
    den = C @ Z.Z + D
    try:
        out = num @ sm_inverse(den)
    except SingularityError as exc:
        raise SingularityError(f"CZ + D is not invertible at this point: {exc}") from exc
    zdag = None
    if Z.zdag is not None:
        zd = Z.adjoint()
        out_dag = sm_inverse(zd @ C.dagger() + D.dagger()) @ (zd @ A.dagger() + B.dagger())
        zdag = out_dag
    return DiscPoint(out.with_type(EVEN), Z.shape, zdag)


def _k_and_s(Z: DiscPoint) -> Tuple[SuperMatrix, SuperMatrix, SuperMatrix]:
    zd = Z.adjoint()
    K = identity_like(Z.Z @ zd) - Z.Z @ zd
    S = identity_like(zd @ Z.Z) - zd @ Z.Z
    return K, S, zd


def phi(Z: DiscPoint) -> SuperMatrix:
    """Phi = -1 + 2 [1; Z^dagger] (1 - Z Z^dagger)^-1 [1, -Z]."""
    K, _, zd = _k_and_s(Z)
    Kinv = sm_inverse(K)
    top = SuperMatrix.block([[Kinv, -(Kinv @ Z.Z)]])
    bottom = zd @ top
    full = SuperMatrix.block([[top], [bottom]]).with_type(EVEN)
    return full * 2.0 - identity_like(full)


def phi_rearranged(Z: DiscPoint) -> SuperMatrix:
    """Phi written as J plus a correction, with S = 1 - Z^dagger Z inverted separately."""
    K, S, zd = _k_and_s(Z)
    Kinv = sm_inverse(K)
    Sinv = sm_inverse(S)
    corr = SuperMatrix.block([
        [Z.Z @ Sinv @ zd, -(Kinv @ Z.Z)],
        [zd @ Kinv, -(zd @ Kinv @ Z.Z)],
    ])
    return (J_matrix(Z.shape).promote(corr.n_eps) + corr * 2.0).with_type(EVEN)


def lift(Z: DiscPoint, c_block: str = "direct") -> GroupElement:
    """Coset representative g(Z) with g(Z) . 0 = Z, gauge U = V = 1.

    Blocks: A = K^-1/2, B = Z S^-1/2, D = S^-1/2 and C = Z^dagger K^-1/2.
    ``c_block="pushed"`` builds C as S^-1 Z^dagger K^1/2 instead; the two
    agree by the push-through identity and tests compare them.
    """
    K, S, zd = _k_and_s(Z)
    Kih = sm_pow(K, -0.5)
    Sih = sm_pow(S, -0.5)
    if c_block == "direct":
        C = zd @ Kih
    elif c_block == "pushed":
        C = sm_inverse(S) @ zd @ sm_pow(K, 0.5)
    else:
        raise ValueError(f"unknown c_block {c_block!r}")
    m = SuperMatrix.block([[Kih, Z.Z @ Sih], [C, Sih]]).with_type(EVEN)
    return GroupElement(m, Z.shape)


def pseudounitary_residuals(g: GroupElement) -> Dict[str, float]:
    """Residuals of the six block identities from g J g^dagger = J and g^dagger J g = J."""
    A, B, C, D = g.blocks()
    Ad, Bd, Cd, Dd = A.dagger(), B.dagger(), C.dagger(), D.dagger()

    def one(M):
        return identity_like(M)

    AA = A @ Ad - B @ Bd
    DD = D @ Dd - C @ Cd
    AtA = Ad @ A - Cd @ C
    DtD = Dd @ D - Bd @ B
    return {
        "AA+ - BB+ = 1": (AA - one(AA)).max_abs(),
        "CA+ = DB+": (C @ Ad - D @ Bd).max_abs(),
        "DD+ - CC+ = 1": (DD - one(DD)).max_abs(),
        "A+A - C+C = 1": (AtA - one(AtA)).max_abs(),
        "A+B = C+D": (Ad @ B - Cd @ D).max_abs(),
        "D+D - B+B = 1": (DtD - one(DtD)).max_abs(),
    }


def check_pseudounitary(g: GroupElement) -> float:
    return max(pseudounitary_residuals(g).values())


# ----------------------------------------------------------------------------
# identities relating K and S
# ----------------------------------------------------------------------------

def inverse_identity_residual(Z: DiscPoint) -> float:
    """|(1 - Z^dagger Z)^-1 - 1 - Z^dagger (1 - Z Z^dagger)^-1 Z|."""
    K, S, zd = _k_and_s(Z)
    rhs = identity_like(S) + zd @ sm_inverse(K) @ Z.Z
    return (sm_inverse(S) - rhs).max_abs()


def sqrt_identity_rhs(Z: DiscPoint, nodes: int = 64) -> SuperMatrix:
    """1 + Z^dagger (K^-1/2 - 1/2 int_0^1 (1 - t Z Z^dagger)^-1/2 dt) Z.

    The t-integral uses Gauss-Legendre quadrature; each integrand value is an
    exact fractional power (body eigenbasis plus nilpotent corrections).
    """
    K, S, zd = _k_and_s(Z)
    ZZd = Z.Z @ zd
    x, wts = np.polynomial.legendre.leggauss(nodes)
    t = (x + 1.0) / 2.0
    wts = wts / 2.0
    integral = SuperMatrix.zeros(ZZd.row_kinds, ZZd.col_kinds, ZZd.n_pairs, ZZd.n_eps)
    one = identity_like(ZZd)
    for ti, wi in zip(t, wts):
        integral = integral + sm_pow(one - ZZd * ti, -0.5) * wi
    inner = sm_pow(K, -0.5) - integral * 0.5
    return identity_like(S) + zd @ inner @ Z.Z


def sqrt_identity_residual(Z: DiscPoint, nodes: int = 64) -> float:
    _, S, _ = _k_and_s(Z)
    return (sm_pow(S, -0.5) - sqrt_identity_rhs(Z, nodes)).max_abs()


# ----------------------------------------------------------------------------
# random generation
# ----------------------------------------------------------------------------

def random_disc_point(seed: SeedLike, shape: SpaceShape, radius: float = 0.7,
                      soul_scale: float = 0.1) -> DiscPoint:
    """Random point with sigma_max(body w) = radius * U(0.5, 1)."""
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    rng = _rng(seed)
    t = tables(shape.n_pairs)
    p, c = shape.p_minus, shape.p_plus + shape.q
    data = rng.uniform(0.0, soul_scale, (p, c, t.size)) * np.exp(1j * rng.uniform(0, 2 * np.pi, (p, c, t.size)))
    body = rng.normal(size=(p, shape.p_plus)) + 1j * rng.normal(size=(p, shape.p_plus))
    if body.size:
        body *= radius * rng.uniform(0.5, 1.0) / np.linalg.norm(body, 2)
    want = np.array([0] * shape.p_plus + [1] * shape.q)
    data[:, t.parity[None, :] != want[:, None]] = 0.0
    data[:, :, 0] = 0.0
    data[:, : shape.p_plus, 0] = body
    Z = SuperMatrix(data, shape.minus_kinds, shape.plus_kinds, shape.n_pairs)
    return DiscPoint(Z, shape)


def random_lie_element(seed: SeedLike, shape: SpaceShape, scale: float = 0.5,
                       soul_scale: float = 0.1) -> LieElement:
    """(X - J X^dagger J) / 2 for a random even X, hence u J + J u^dagger = 0."""
    rng = _rng(seed)
    X = random_supermatrix(rng, shape.kinds, shape.kinds, shape.n_pairs, body_scale=scale, soul_scale=soul_scale)
    J = J_matrix(shape)
    return LieElement(((X - J @ X.dagger() @ J) * 0.5).with_type(EVEN), shape)


def random_group_element(seed: SeedLike, shape: SpaceShape, scale: float = 0.5,
                         soul_scale: float = 0.1) -> GroupElement:
    u = random_lie_element(seed, shape, scale, soul_scale)
    return GroupElement(sm_exp(u.u), shape)


def random_stabilizer_element(seed: SeedLike, shape: SpaceShape, scale: float = 0.5,
                              soul_scale: float = 0.1) -> GroupElement:
    """exp of a block-diagonal Lie element; fixes Z = 0."""
    u = random_lie_element(seed, shape, scale, soul_scale).u.copy()
    p = shape.p_minus
    u.data[:p, p:] = 0.0
    u.data[p:, :p] = 0.0
    return GroupElement(sm_exp(u), shape)
