"""Action vector fields, the invariant two-form, moment maps and the
Lie-algebra cocycle measuring the central extension of their brackets.

The two-form is only ever evaluated on action fields V_u, V_v.  Since the
group acts transitively these span every tangent space.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from .grassmann import GrassmannElement, jet_parts
from .disc import DiscPoint, GroupElement, LieElement, lift, moebius, phi
from .supermatrix import (
    EVEN,
    J_matrix,
    SpaceShape,
    SuperMatrix,
    identity_like,
    sm_inverse,
    sm_jet_parts,
    sm_make_jet,
    sm_str,
    sm_str_J,
)


@dataclass(frozen=True)
class TangentVector:
    """Tangent at a disc point, stored as the matrix dZ = [dw dtheta]."""

    dZ: SuperMatrix

    @property
    def dw(self) -> SuperMatrix:
        p = self.dZ.col_kinds.count("+")
        return self.dZ.sub(slice(None), slice(0, p))

    @property
    def dtheta(self) -> SuperMatrix:
        p = self.dZ.col_kinds.count("+")
        return self.dZ.sub(slice(None), slice(p, None))


def jet_point(Z: DiscPoint, dZ: SuperMatrix) -> DiscPoint:
    """Z + eps dZ for a fresh jet symbol eps (Z^dagger follows as Z^dagger + eps dZ^dagger)."""
    Zj = sm_make_jet(Z.Z, dZ.promote(Z.n_eps))
    zd = None
    if Z.zdag is not None:
        zd = sm_make_jet(Z.adjoint(), dZ.promote(Z.n_eps).dagger())
    return DiscPoint(Zj.with_type(EVEN), Z.shape, zd)


def antiholomorphic_jet(Z: DiscPoint, dZbar: SuperMatrix) -> DiscPoint:
    """Z held fixed while Z^dagger moves to Z^dagger + eps dZbar^dagger."""
    zero = SuperMatrix.zeros(Z.Z.row_kinds, Z.Z.col_kinds, Z.Z.n_pairs, Z.n_eps)
    Zj = sm_make_jet(Z.Z, zero)
    zd = sm_make_jet(Z.adjoint(), dZbar.promote(Z.n_eps).dagger())
    return DiscPoint(Zj.with_type(EVEN), Z.shape, zd)


def vector_field(u: LieElement, Z: DiscPoint) -> TangentVector:
    """V_u(Z) = u11 Z + u12 - Z u21 Z - Z u22, the velocity of exp(t u) . Z at t = 0."""
    u11, u12, u21, u22 = u.blocks()
    n = Z.n_eps
    u11, u12, u21, u22 = (b.promote(n) for b in (u11, u12, u21, u22))
    V = u11 @ Z.Z + u12 - Z.Z @ u21 @ Z.Z - Z.Z @ u22
    return TangentVector(V.with_type(EVEN))


def vector_field_jet(u: LieElement, Z: DiscPoint) -> TangentVector:
    """Tangent part of moebius(1 + eps u, Z); exp(eps u) = 1 + eps u exactly since eps^2 = 0."""
    one = identity_like(u.u)
    gj = sm_make_jet(one.promote(Z.n_eps), u.u.promote(Z.n_eps))
    img = moebius(GroupElement(gj.with_type(EVEN), u.shape), Z.promote(Z.n_eps + 1))
    return TangentVector(sm_jet_parts(img.Z)[1])


def omega(u: LieElement, v: LieElement, Z: DiscPoint, g: Optional[GroupElement] = None) -> GrassmannElement:
    """Omega(V_u, V_v) at Z = (i/8) Str J [[J, g^-1 u g], [J, g^-1 v g]], g = lift(Z)."""
    if g is None:
        g = lift(Z)
    ginv = sm_inverse(g.m)
    J = J_matrix(Z.shape).promote(g.m.n_eps)
    ug = ginv @ u.u.promote(g.m.n_eps) @ g.m
    vg = ginv @ v.u.promote(g.m.n_eps) @ g.m
    a = J @ ug - ug @ J
    b = J @ vg - vg @ J
    return sm_str(J @ (a @ b - b @ a)) * 0.125j


def omega_phi(u: LieElement, v: LieElement, Z: DiscPoint) -> GrassmannElement:
    """Omega(V_u, V_v) written through Phi: -(i/2) Str(Phi [u, v]).  Needs no coset section."""
    P = phi(Z)
    uu, vv = u.u.promote(P.n_eps), v.u.promote(P.n_eps)
    return sm_str(P @ (uu @ vv - vv @ uu)) * (-0.5j)


def moment_map(u: LieElement, Z: DiscPoint) -> GrassmannElement:
    """F_u(Z) = (i/2) Str_J[(Phi(Z) - J) u]; vanishes at the origin."""
    P = phi(Z)
    J = J_matrix(Z.shape).promote(P.n_eps)
    return sm_str_J(((P - J) @ u.u.promote(P.n_eps)).with_type(EVEN)) * 0.5j


def cocycle(u: LieElement, v: LieElement) -> GrassmannElement:
    """Sigma(u, v) = (i/2) Str_J([J, u] v)."""
    J = J_matrix(u.shape)
    return sm_str_J(((J @ u.u - u.u @ J) @ v.u).with_type(EVEN)) * 0.5j


def cocycle_blocks(u: LieElement, v: LieElement) -> GrassmannElement:
    """Sigma from the off-diagonal blocks: i Tr(u12 v21 - v12 u21) over H^e_-.

    With u12 = [b beta] and u21 = u12^dagger this is
    i Tr(b1 b2^dagger - b2 b1^dagger + beta1 beta2^dagger - beta2 beta1^dagger).
    """
    _, u12, u21, _ = u.blocks()
    _, v12, v21, _ = v.blocks()
    return sm_str((u12 @ v21 - v12 @ u21).with_type(EVEN)) * 1j


def cocycle_identity_residual(u: LieElement, v: LieElement, w: LieElement) -> float:
    """|Sigma([u,v], w) + Sigma([v,w], u) + Sigma([w,u], v)|."""
    total = cocycle(u.bracket(v), w) + cocycle(v.bracket(w), u) + cocycle(w.bracket(u), v)
    return float(np.max(np.abs(total.coeffs)))


def determine_poisson_sign(u: LieElement, v: LieElement) -> int:
    """Global sign s in Omega(V_u, V_v) = s (F_[u,v] + Sigma(u,v)), read off at Z = 0."""
    origin = DiscPoint.origin(u.shape)
    om = omega(u, v, origin)
    sig = cocycle(u, v)
    return 1 if np.max(np.abs((om - sig).coeffs)) <= np.max(np.abs((om + sig).coeffs)) else -1


def poisson_realization_residual(u: LieElement, v: LieElement, Z: DiscPoint, sign: int) -> float:
    """max coefficient of Omega(V_u, V_v) - sign (F_[u,v] + Sigma(u,v)) at Z."""
    lhs = omega(u, v, Z)
    rhs = (moment_map(u.bracket(v), Z) + cocycle(u, v).promote(lhs.n_eps)) * sign
    return float(np.max(np.abs((lhs - rhs).coeffs)))


def moment_map_derivative(u: LieElement, v: LieElement, Z: DiscPoint) -> GrassmannElement:
    """dF_u(V_v) at Z by a jet along the action field of v."""
    V = vector_field(v, Z)
    return jet_parts(moment_map(u, jet_point(Z, V.dZ)))[1]


def determine_hamiltonian_sign(u: LieElement, v: LieElement) -> int:
    """Sign c with dF_u(V_v) = c Omega(V_u, V_v), read off at Z = 0."""
    origin = DiscPoint.origin(u.shape)
    d = moment_map_derivative(u, v, origin)
    om = omega(u, v, origin)
    return 1 if np.max(np.abs((d - om).coeffs)) <= np.max(np.abs((d + om).coeffs)) else -1


def hamiltonian_step(terms: Sequence[Tuple[complex, LieElement]], v: LieElement, Z: DiscPoint,
                     sign: int = 1) -> GrassmannElement:
    """Rate of change of F_v under H = sum c_j F_{u_j}: sum c_j {F_{u_j}, F_v} at Z.

    The bracket is routed through Omega(V_{u_j}, V_v) times ``sign``.
    """
    out = GrassmannElement.zero(Z.shape.n_pairs, Z.n_eps)
    for c, u in terms:
        out = out + omega(u, v, Z) * (c * sign)
    return out


def off_diagonal_basis(shape: SpaceShape):
    """Real spanning directions of the off-diagonal part of the Lie algebra.

    Even directions put 1 or i on one entry of b; odd directions put
    (1 or i) times xi^1 on one entry of beta.  Returns (label, LieElement) pairs.
    """
    p, pp, q, n = shape.p_minus, shape.p_plus, shape.q, shape.n_pairs
    out = []
    cols = [("b", j) for j in range(pp)] + ([("beta", j) for j in range(q)] if n >= 1 else [])
    for i in range(p):
        for blk, j in cols:
            for c in (1.0, 1.0j):
                u = SuperMatrix.zeros(shape.kinds, shape.kinds, n)
                col = p + j if blk == "b" else p + pp + j
                mask = 0 if blk == "b" else 1
                u.data[i, col, mask] = c
                u = u + _adjoint_block(u, shape)
                out.append(((blk, i, j, "re" if c == 1.0 else "im"), LieElement(u.with_type(EVEN), shape)))
    return out


def _adjoint_block(u: SuperMatrix, shape: SpaceShape) -> SuperMatrix:
    """Lower-left block set to the adjoint of the upper-right one."""
    d = u.dagger()
    p = shape.p_minus
    out = SuperMatrix.zeros(u.row_kinds, u.col_kinds, u.n_pairs)
    out.data[p:, :p] = d.data[p:, :p]
    return out


def origin_gram(shape: SpaceShape) -> Dict[str, object]:
    """Real Gram matrix of Omega at Z = 0 over :func:`off_diagonal_basis`.

    Even-even entries read the body of Omega; odd-odd entries read the
    coefficient of xi^1 xi*^1 (both directions carry xi^1, one of them starred
    by the adjoint).  Mixed entries are odd-valued and carry no real number,
    so the Gram matrix is block diagonal.
    """
    basis = off_diagonal_basis(shape)
    origin = DiscPoint.origin(shape)
    pair_mask = 1 | (1 << shape.n_pairs)
    nb = len(basis)
    G = np.zeros((nb, nb))
    imag = 0.0
    for a, (la, ua) in enumerate(basis):
        for b, (lb, ub) in enumerate(basis):
            if la[0] != lb[0]:
                continue
            val = omega(ua, ub, origin)
            entry = val.coeffs[0] if la[0] == "b" else val.coeffs[pair_mask]
            G[a, b] = entry.real
            imag = max(imag, abs(entry.imag))
    sv = np.linalg.svd(G, compute_uv=False) if nb else np.zeros(0)
    return {
        "labels": [lab for lab, _ in basis],
        "gram": G,
        "singular_values": sv,
        "sigma_min": float(sv.min()) if nb else 0.0,
        "rank": int(np.sum(sv > 1e-12 * max(1.0, sv.max()))) if nb else 0,
        "antisymmetry": float(np.max(np.abs(G + G.T))) if nb else 0.0,
        "imag_max": imag,
    }
