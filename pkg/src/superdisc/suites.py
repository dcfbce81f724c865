"""Seeded property suites.

Each check draws its samples from a random stream keyed by (seed, check
name, trial, stream), so a check's samples do not depend on which other
checks ran or in what order.
"""
from __future__ import annotations

import time
import zlib
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from . import __version__
from .disc import (
    DiscPoint,
    GroupElement,
    check_pseudounitary,
    inverse_identity_residual,
    is_in_disc,
    lift,
    moebius,
    phi,
    phi_rearranged,
    random_disc_point,
    random_group_element,
    random_lie_element,
    random_stabilizer_element,
    sqrt_identity_residual,
)
from .errors import SingularityError, SuperdiscError
from .grassmann import g_exp, g_inverse, g_pow, random_element
from .quantize import (
    central_term_cocycle_residual,
    commutator_defect,
    constant_section,
    holomorphic_derivative_residual,
    fhat,
    hs_inner,
    hs_norm,
    hs_product_bound,
    polarization_residual,
    projective_residual,
    random_monomial_section,
    rho,
    rho_convention,
)
from .supermatrix import (
    EVEN,
    ODD,
    J_matrix,
    SpaceShape,
    identity_like,
    random_supermatrix,
    sm_commutator_s,
    sm_exp,
    sm_inverse,
    sm_pow,
    sm_pow_resolvent,
    sm_sdet,
    sm_str,
)
from .symplectic import (
    cocycle,
    cocycle_blocks,
    cocycle_identity_residual,
    determine_hamiltonian_sign,
    determine_poisson_sign,
    moment_map,
    moment_map_derivative,
    omega,
    origin_gram,
    poisson_realization_residual,
    vector_field,
    vector_field_jet,
)

SUITES = ("grassmann", "supermatrix", "disc", "symplectic", "quantize", "all")


@dataclass
class SuiteConfig:
    suite: str = "all"
    dims: Tuple[int, int, int] = (3, 3, 2)
    n_pairs: int = 2
    trials: Optional[int] = None
    seed: int = 42
    tol: Union[None, float, Dict[str, float]] = None
    soul_scale: float = 0.1
    radius: float = 0.7
    k: int = 1
    report: Optional[str] = None

    def validate(self) -> None:
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; choose from {', '.join(SUITES)}")
        if len(self.dims) != 3 or min(self.dims) < 0:
            raise ValueError(f"dims must be three nonnegative integers, got {self.dims!r}")
        if self.n_pairs < 0:
            raise ValueError("n must be nonnegative")
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not 0.0 < self.radius < 1.0:
            raise ValueError("radius must lie in (0, 1)")
        if int(self.k) != self.k or self.k < 1:
            raise ValueError("k must be a positive integer")
        if self.soul_scale < 0:
            raise ValueError("soul_scale must be nonnegative")

    @property
    def shape(self) -> SpaceShape:
        return SpaceShape(self.dims[0], self.dims[1], self.dims[2], self.n_pairs)

    def to_json(self) -> dict:
        out = asdict(self)
        out["dims"] = list(self.dims)
        out.pop("report")
        return out


@dataclass
class Check:
    name: str
    samples: int
    max_abs_error: float
    threshold: float
    passed: bool
    details: Dict[str, object] = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"name": self.name, "samples": self.samples, "max_abs_error": _finite(self.max_abs_error),
               "threshold": self.threshold, "pass": self.passed}
        if self.details:
            out["details"] = self.details
        return out


def _finite(x: float):
    return float(x) if np.isfinite(x) else str(x)


class Runner:
    """Per-run context: random streams, sample counts and thresholds."""

    def __init__(self, config: SuiteConfig):
        self.config = config
        self.shape = config.shape
        self.checks: List[Check] = []

    # streams ------------------------------------------------------------
    def seed(self, name: str, trial: int, stream: int = 0) -> np.random.SeedSequence:
        return np.random.SeedSequence([self.config.seed, zlib.crc32(name.encode()), trial, stream])

    def rng(self, name: str, trial: int, stream: int = 0) -> np.random.Generator:
        return np.random.default_rng(self.seed(name, trial, stream))

    def point(self, name: str, trial: int, stream: int = 0) -> DiscPoint:
        return random_disc_point(self.seed(name, trial, stream), self.shape, self.config.radius,
                                 self.config.soul_scale)

    def lie(self, name: str, trial: int, stream: int = 0):
        return random_lie_element(self.seed(name, trial, stream), self.shape, 0.5, self.config.soul_scale)

    def group(self, name: str, trial: int, stream: int = 0) -> GroupElement:
        return random_group_element(self.seed(name, trial, stream), self.shape, 0.5, self.config.soul_scale)

    def count(self, default: int) -> int:
        return self.config.trials if self.config.trials is not None else default

    def threshold(self, name: str, default: float) -> float:
        tol = self.config.tol
        if isinstance(tol, dict):
            return float(tol.get(name, default))
        if tol is not None:
            return float(tol)
        return default

    # recording ------------------------------------------------------------
    def record(self, name: str, errors: List[float], default_threshold: float, **details) -> Check:
        thr = self.threshold(name, default_threshold)
        err = max(errors) if errors else 0.0
        chk = Check(name, len(errors), err, thr, bool(np.isfinite(err) and err < thr), details)
        self.checks.append(chk)
        return chk

    def run(self, name: str, default_threshold: float, fn: Callable[[], Tuple[List[float], dict]]) -> None:
        """Run one check; library errors become a failed check carrying the message."""
        try:
            errors, details = fn()
        except SuperdiscError as exc:
            thr = self.threshold(name, default_threshold)
            self.checks.append(Check(name, 0, float("inf"), thr, False,
                                     {"error": f"{type(exc).__name__}: {exc}"}))
            return
        self.record(name, errors, default_threshold, **details)


def _err(x) -> float:
    """Largest coefficient of a Grassmann element or matrix."""
    if hasattr(x, "max_abs"):
        return x.max_abs()
    return float(np.max(np.abs(x.coeffs)))


def _rel(a, b) -> float:
    return _err(a - b) / max(_err(b), 1e-300)


# ----------------------------------------------------------------------------
# grassmann
# ----------------------------------------------------------------------------

def suite_grassmann(r: Runner) -> None:
    n = r.shape.n_pairs
    N = r.count(25)

    def elem(name, t, s, parity=None):
        return random_element(r.rng(name, t, s), n, parity=parity, soul_scale=max(r.config.soul_scale, 0.1))

    def assoc():
        errs = []
        for t in range(N):
            x, y, z = (elem("grassmann.associativity", t, s) for s in range(3))
            errs.append(_err((x * y) * z - x * (y * z)))
        return errs, {}

    def star():
        errs = []
        for t in range(N):
            x, y = (elem("grassmann.star_antihomomorphism", t, s) for s in range(2))
            errs.append(max(_err((x * y).star() - y.star() * x.star()), _err(x.star().star() - x)))
        return errs, {}

    def inverse():
        errs = []
        for t in range(N):
            x = elem("grassmann.inverse", t, 0) + 2.0
            errs.append(_err(x * g_inverse(x) - 1.0))
        return errs, {}

    def half_power():
        errs = []
        for t in range(N):
            x = elem("grassmann.pow_half_squared", t, 0, parity=0)
            x = x - x.body() + 1.5
            h = g_pow(x, 0.5)
            errs.append(_err(h * h - x))
        return errs, {}

    def exp_add():
        errs = []
        for t in range(N):
            x, y = (elem("grassmann.exp_even_additive", t, s, parity=0) for s in range(2))
            errs.append(_rel(g_exp(x + y), g_exp(x) * g_exp(y)))
        return errs, {}

    r.run("grassmann.associativity", 1e-12, assoc)
    r.run("grassmann.star_antihomomorphism", 1e-12, star)
    r.run("grassmann.inverse", 1e-12, inverse)
    r.run("grassmann.pow_half_squared", 1e-12, half_power)
    r.run("grassmann.exp_even_additive", 1e-12, exp_add)


# ----------------------------------------------------------------------------
# supermatrix
# ----------------------------------------------------------------------------

def _positive_matrix(r: Runner, name: str, t: int):
    """1 - Z^dagger Z for a random disc point: hermitian positive body."""
    Z = r.point(name, t)
    zd = Z.adjoint()
    return identity_like(zd @ Z.Z) - zd @ Z.Z


def _random_invertible(r: Runner, name: str, t: int, s: int):
    kinds = r.shape.kinds
    M = random_supermatrix(r.rng(name, t, s), kinds, kinds, r.shape.n_pairs, body_scale=0.4,
                           soul_scale=r.config.soul_scale)
    return M + 1.0


def suite_supermatrix(r: Runner) -> None:
    kinds, n = r.shape.kinds, r.shape.n_pairs
    N = r.count(25)

    def str_kills_commutators():
        errs = []
        for t in range(N):
            rng = r.rng("supermatrix.str_supercommutator", t)
            types = [(EVEN, EVEN), (EVEN, ODD), (ODD, ODD)][t % 3]
            X = random_supermatrix(rng, kinds, kinds, n, soul_scale=r.config.soul_scale, declared_type=types[0])
            Y = random_supermatrix(rng, kinds, kinds, n, soul_scale=r.config.soul_scale, declared_type=types[1])
            errs.append(_err(sm_str(sm_commutator_s(X, Y))))
        return errs, {}

    def inverse():
        errs = []
        for t in range(N):
            M = _random_invertible(r, "supermatrix.inverse", t, 0)
            Mi = sm_inverse(M)
            I = identity_like(M)
            errs.append(max(_err(M @ Mi - I), _err(Mi @ M - I)))
        return errs, {}

    def sdet_mult():
        errs = []
        for t in range(N):
            M = _random_invertible(r, "supermatrix.sdet_multiplicative", t, 0)
            P = _random_invertible(r, "supermatrix.sdet_multiplicative", t, 1)
            errs.append(_rel(sm_sdet(M @ P), sm_sdet(M) * sm_sdet(P)))
        return errs, {"relative": True}

    def sdet_exp():
        errs = []
        for t in range(N):
            X = random_supermatrix(r.rng("supermatrix.sdet_exp_str", t), kinds, kinds, n, body_scale=0.5,
                                   soul_scale=r.config.soul_scale)
            errs.append(_err(sm_sdet(sm_exp(X)) - g_exp(sm_str(X))))
        return errs, {}

    def sqrt_squared():
        errs = []
        for t in range(N):
            M = _positive_matrix(r, "supermatrix.sqrt_squared", t)
            R = sm_pow(M, 0.5)
            Ri = sm_pow(M, -0.5)
            errs.append(max(_err(R @ R - M), _err(Ri @ R - identity_like(M))))
        return errs, {}

    def newton_vs_integral():
        errs = []
        for t in range(N):
            M = _positive_matrix(r, "supermatrix.sqrt_newton_vs_integral", t)
            for a in (0.5, -0.5):
                errs.append(_err(sm_pow(M, a) - sm_pow_resolvent(M, a)))
        return errs, {"alphas": [0.5, -0.5]}

    def pow_commutes():
        errs = []
        for t in range(min(N, 10)):
            M = _positive_matrix(r, "supermatrix.pow_commutes", t)
            P = sm_pow(M, 0.3)
            errs.append(_err(M @ P - P @ M))
        return errs, {"alpha": 0.3}

    r.run("supermatrix.str_supercommutator", 1e-10, str_kills_commutators)
    r.run("supermatrix.inverse", 1e-10, inverse)
    r.run("supermatrix.sdet_multiplicative", 1e-8, sdet_mult)
    r.run("supermatrix.sdet_exp_str", 1e-8, sdet_exp)
    r.run("supermatrix.sqrt_squared", 1e-9, sqrt_squared)
    r.run("supermatrix.sqrt_newton_vs_integral", 1e-7, newton_vs_integral)
    r.run("supermatrix.pow_commutes", 1e-10, pow_commutes)


# ----------------------------------------------------------------------------
# disc
# ----------------------------------------------------------------------------

def suite_disc(r: Runner) -> None:
    J = J_matrix(r.shape)

    phi_errs = {"squared": [], "J_adjoint": [], "rearranged": []}

    def phi_identities():
        for t in range(r.count(50)):
            Z = r.point("disc.phi", t)
            P = phi(Z)
            phi_errs["squared"].append(_err(P @ P - identity_like(P)))
            phi_errs["J_adjoint"].append(_err(J @ P.dagger() @ J - P))
            phi_errs["rearranged"].append(_err(phi_rearranged(Z) - P))
        return phi_errs["squared"], {}

    r.run("disc.phi_squared", 1e-9, phi_identities)
    if phi_errs["J_adjoint"]:
        r.record("disc.phi_J_adjoint", phi_errs["J_adjoint"], 1e-9)
        r.record("disc.phi_rearranged", phi_errs["rearranged"], 1e-9)

    def equivariance():
        errs = []
        for t in range(r.count(25)):
            Z, g = r.point("disc.equivariance", t), r.group("disc.equivariance", t, 1)
            errs.append(_err(phi(moebius(g, Z)) - g.m @ phi(Z) @ sm_inverse(g.m)))
        return errs, {}

    r.run("disc.equivariance", 1e-8, equivariance)

    origin = DiscPoint.origin(r.shape)
    lift_errs = {"origin": [], "pseudounitary": [], "conjugates_J": []}

    def lifts():
        for t in range(r.count(25)):
            Z = r.point("disc.lift", t)
            L = lift(Z)
            lift_errs["origin"].append(_err(moebius(L, origin).Z - Z.Z))
            lift_errs["pseudounitary"].append(check_pseudounitary(L))
            lift_errs["conjugates_J"].append(_err(L.m @ J @ sm_inverse(L.m) - phi(Z)))
        return lift_errs["origin"], {}

    r.run("disc.lift_maps_origin", 1e-9, lifts)
    if lift_errs["pseudounitary"]:
        r.record("disc.lift_pseudounitary", lift_errs["pseudounitary"], 1e-9)
        r.record("disc.lift_conjugates_J", lift_errs["conjugates_J"], 1e-9)

    def exp_pu():
        errs = []
        for t in range(r.count(25)):
            errs.append(check_pseudounitary(r.group("disc.exp_pseudounitary", t)))
        return errs, {}

    def product_pu():
        errs = []
        for t in range(r.count(25)):
            g1, g2 = r.group("disc.product_pseudounitary", t, 0), r.group("disc.product_pseudounitary", t, 1)
            errs.append(check_pseudounitary(g1 @ g2))
        return errs, {}

    def action():
        errs, margins = [], []
        for t in range(r.count(25)):
            Z = r.point("disc.action_composition", t)
            g1, g2 = r.group("disc.action_composition", t, 1), r.group("disc.action_composition", t, 2)
            W = moebius(g1, moebius(g2, Z))
            errs.append(_err(W.Z - moebius(g1 @ g2, Z).Z))
            margins.append(is_in_disc(W)[1])
        return errs, {"min_margin": float(min(margins))}

    def stabilizer():
        errs = []
        for t in range(r.count(25)):
            h = random_stabilizer_element(r.seed("disc.stabilizer", t), r.shape, 0.5, r.config.soul_scale)
            _, B, C, _ = h.blocks()
            errs.append(max(_err(moebius(h, origin).Z), _err(B), _err(C)))
        return errs, {}

    def inverse_identity():
        return [inverse_identity_residual(r.point("disc.inverse_identity", t)) for t in range(r.count(25))], {}

    def sqrt_identity():
        return [sqrt_identity_residual(r.point("disc.sqrt_identity", t)) for t in range(r.count(25))], \
            {"quadrature_nodes": 64}

    r.run("disc.exp_pseudounitary", 1e-9, exp_pu)
    r.run("disc.product_pseudounitary", 1e-8, product_pu)
    r.run("disc.action_composition", 1e-9, action)
    r.run("disc.stabilizer_blocks", 1e-10, stabilizer)
    r.run("disc.inverse_identity", 1e-10, inverse_identity)
    r.run("disc.sqrt_identity", 1e-6, sqrt_identity)


# ----------------------------------------------------------------------------
# symplectic
# ----------------------------------------------------------------------------

def suite_symplectic(r: Runner) -> None:
    conv: Dict[str, int] = {}

    def jet():
        errs = []
        for t in range(r.count(15)):
            u, Z = r.lie("symplectic.vector_field_jet", t), r.point("symplectic.vector_field_jet", t, 1)
            errs.append(_err(vector_field(u, Z).dZ - vector_field_jet(u, Z).dZ))
        return errs, {}

    def poisson():
        u0, v0 = r.lie("symplectic.poisson_realization", 0, 0), r.lie("symplectic.poisson_realization", 0, 1)
        sign = determine_poisson_sign(u0, v0)
        conv["poisson"] = sign
        errs, imag = [], []
        for t in range(r.count(15)):
            u, v = r.lie("symplectic.poisson_realization", t, 0), r.lie("symplectic.poisson_realization", t, 1)
            for j in range(5):
                Z = r.point("symplectic.poisson_realization", t, 10 + j)
                errs.append(poisson_realization_residual(u, v, Z, sign))
                imag.append(abs(moment_map(u, Z).body().imag))
        return errs, {"sign": sign, "max_imag_body_F": float(max(imag))}

    def cocycle_id():
        errs = []
        for t in range(r.count(15)):
            u, v, w = (r.lie("symplectic.cocycle_identity", t, s) for s in range(3))
            errs.append(cocycle_identity_residual(u, v, w))
        return errs, {}

    def cocycle_forms():
        errs = []
        for t in range(r.count(15)):
            u, v = (r.lie("symplectic.cocycle_block_form", t, s) for s in range(2))
            errs.append(max(_err(cocycle(u, v) - cocycle_blocks(u, v)), _err(cocycle(u, u))))
        return errs, {}

    def hamiltonian():
        u0, v0 = r.lie("symplectic.hamiltonian_relation", 0, 0), r.lie("symplectic.hamiltonian_relation", 0, 1)
        sign = determine_hamiltonian_sign(u0, v0)
        errs = []
        for t in range(r.count(15)):
            u, v = (r.lie("symplectic.hamiltonian_relation", t, s) for s in range(2))
            Z = r.point("symplectic.hamiltonian_relation", t, 2)
            errs.append(_err(moment_map_derivative(u, v, Z) - omega(u, v, Z) * sign))
        return errs, {"sign": sign}

    def gram():
        g = origin_gram(r.shape)
        deficiency = len(g["labels"]) - g["rank"]
        return [float(deficiency)], {"sigma_min": g["sigma_min"], "dimension": len(g["labels"]),
                                     "antisymmetry": g["antisymmetry"]}

    def homogeneity():
        errs = []
        for t in range(r.count(15)):
            u, v = (r.lie("symplectic.homogeneity", t, s) for s in range(2))
            Z, g = r.point("symplectic.homogeneity", t, 2), r.group("symplectic.homogeneity", t, 3)
            errs.append(_err(omega(u, v, moebius(g, Z)) - omega(u.conjugate(g), v.conjugate(g), Z)))
        return errs, {}

    def gauge():
        errs = []
        for t in range(r.count(15)):
            u, v = (r.lie("symplectic.gauge_invariance", t, s) for s in range(2))
            Z = r.point("symplectic.gauge_invariance", t, 2)
            h = random_stabilizer_element(r.seed("symplectic.gauge_invariance", t, 3), r.shape, 0.5,
                                          r.config.soul_scale)
            errs.append(_err(omega(u, v, Z, lift(Z) @ h) - omega(u, v, Z)))
        return errs, {}

    r.run("symplectic.vector_field_jet", 1e-10, jet)
    r.run("symplectic.poisson_realization", 1e-8, poisson)
    r.run("symplectic.cocycle_identity", 1e-10, cocycle_id)
    r.run("symplectic.cocycle_block_form", 1e-10, cocycle_forms)
    r.run("symplectic.hamiltonian_relation", 1e-8, hamiltonian)
    r.run("symplectic.origin_gram_rank", 0.5, gram)
    r.run("symplectic.homogeneity", 1e-8, homogeneity)
    r.run("symplectic.gauge_invariance", 1e-8, gauge)


# ----------------------------------------------------------------------------
# quantize
# ----------------------------------------------------------------------------

def _levels(r: Runner) -> List[int]:
    return sorted({1, 2, int(r.config.k)})


def determine_commutator_factor(r: Runner) -> complex:
    """lam in {+i, -i} for which [F^_u, F^_v] - (lam/k) F^_[u,v] is a multiplication operator."""
    u, v = r.lie("quantize.convention", 0, 0), r.lie("quantize.convention", 0, 1)
    s = random_monomial_section(r.rng("quantize.convention", 0, 2), r.shape, 2)
    pts = [r.point("quantize.convention", 0, 3 + j) for j in range(3)]
    one = constant_section()
    best = None
    for lam in (1j, -1j):
        d1 = commutator_defect(u, v, one, 1, lam)
        ds = commutator_defect(u, v, s, 1, lam)
        err = max(_err(ds(Z) - d1(Z) * s(Z)) for Z in pts)
        if best is None or err < best[1]:
            best = (lam, err)
    return best[0]


def _regular_points(r: Runner, name: str, trial: int, g: GroupElement, s, levels, want: int,
                    floor: float = 1e-6, tries: int = 50) -> List[DiscPoint]:
    """Sample points where (rho(g) s)(Z) has body above ``floor`` for every level."""
    pts = []
    for j in range(tries):
        Z = r.point(name, trial, 10 + j)
        if all(abs(rho(g, s, k)(Z).body()) > floor for k in levels):
            pts.append(Z)
            if len(pts) == want:
                return pts
    raise SingularityError(f"{name}: fewer than {want} sample points with a regular denominator")


def suite_quantize(r: Runner) -> None:
    levels = _levels(r)

    def polarization():
        errs = []
        for t in range(r.count(10)):
            s = random_monomial_section(r.rng("quantize.polarization", t), r.shape, 2)
            for k in levels:
                for j in range(5):
                    Z = r.point("quantize.polarization", t, 10 + j)
                    W = r.point("quantize.polarization", t, 20 + j).Z
                    errs.append(polarization_residual(s, Z, W, k))
        return errs, {"levels": levels}

    comm: Dict[str, object] = {}

    def commutator():
        lam = determine_commutator_factor(r)
        one = constant_section()
        variation, operator, samples = [], [], []
        for t in range(r.count(10)):
            u, v = r.lie("quantize.commutator", t, 0), r.lie("quantize.commutator", t, 1)
            s = random_monomial_section(r.rng("quantize.commutator", t, 2), r.shape, 2)
            sig = cocycle(u, v)
            for k in levels:
                d1 = commutator_defect(u, v, one, k, lam / k)
                ds = commutator_defect(u, v, s, k, lam / k)
                pts = [r.point("quantize.commutator", t, 10 + j) for j in range(5)]
                scalars = [d1(Z) for Z in pts]
                variation.append(max(_err(c - scalars[0]) for c in scalars))
                operator.append(max(_err(ds(Z) - c * s(Z)) for Z, c in zip(pts, scalars)))
                # the scalar in units of hbar = 1/k, compared with Sigma(u, v)
                samples.append((scalars[0].coeffs * k, sig.coeffs))
        # reference: the sample and coefficient where Sigma is largest
        a0, b0 = max(samples, key=lambda ab: float(np.max(np.abs(ab[1]))))
        top = int(np.argmax(np.abs(b0)))
        if b0[top] == 0:
            # Sigma vanishes identically (trivial off-diagonal blocks): the scalar must too
            ref = 0j
            spread = max(float(np.max(np.abs(a))) for a, _ in samples)
        else:
            ref = complex(a0[top] / b0[top])
            spread = max(float(np.max(np.abs(a - ref * b)) / np.max(np.abs(b0))) for a, b in samples)
        comm.update(operator=operator, spread=spread, constant=[ref.real, ref.imag])
        return variation, {"lambda_times_k": [lam.real, lam.imag], "levels": levels}

    r.run("quantize.commutator_scalar", 1e-7, commutator)
    if "operator" in comm:
        r.record("quantize.commutator_multiplication", comm["operator"], 1e-7)
        r.record("quantize.commutator_constant_spread", [comm["spread"]], 1e-6,
                 constant_times_k=comm["constant"])

    proj: Dict[str, object] = {}

    def projective():
        g1, g2 = r.group("quantize.convention", 1, 0), r.group("quantize.convention", 1, 1)
        s0 = random_monomial_section(r.rng("quantize.convention", 1, 2), r.shape, 2, constant=1.0)
        pts0 = _regular_points(r, "quantize.convention", 1, g2 @ g1, s0, [1], 3)
        order, expo, _ = rho_convention(g1, g2, s0, pts0)
        var, mis = [], []
        for t in range(r.count(10)):
            g1, g2 = r.group("quantize.projective", t, 0), r.group("quantize.projective", t, 1)
            s = random_monomial_section(r.rng("quantize.projective", t, 2), r.shape, 2, constant=1.0)
            prod = g1 @ g2 if order == "g1g2" else g2 @ g1
            pts = _regular_points(r, "quantize.projective", t, prod, s, levels, 5)
            for k in levels:
                v_, m_ = projective_residual(g1, g2, s, pts, k, order, expo)
                var.append(v_)
                mis.append(m_)
        proj["mismatch"] = mis
        return var, {"order": order, "exponent": expo, "levels": levels}

    r.run("quantize.projective_ratio_constant", 1e-7, projective)
    if "mismatch" in proj:
        r.record("quantize.projective_matches_central_term", proj["mismatch"], 1e-7)

    def c_cocycle():
        errs = []
        for t in range(r.count(10)):
            g1, g2, g3 = (r.group("quantize.central_term_cocycle", t, s) for s in range(3))
            for k in levels:
                errs.append(central_term_cocycle_residual(g1, g2, g3, k))
        return errs, {"relative": True}

    def holomorphy():
        errs = []
        for t in range(r.count(10)):
            u, g = r.lie("quantize.holomorphy", t, 0), r.group("quantize.holomorphy", t, 1)
            s = random_monomial_section(r.rng("quantize.holomorphy", t, 2), r.shape, 2)
            Z, W = r.point("quantize.holomorphy", t, 3), r.point("quantize.holomorphy", t, 4).Z
            k = r.config.k
            errs.append(max(holomorphic_derivative_residual(fhat(u, s, k), Z, W),
                            holomorphic_derivative_residual(rho(g, s, k), Z, W)))
        return errs, {}

    def hs_bound():
        errs, ratios = [], []
        C = hs_product_bound(r.shape.n_pairs)
        kinds = r.shape.kinds
        for t in range(r.count(25)):
            rng = r.rng("quantize.hs_product_bound", t)
            X = random_supermatrix(rng, kinds, kinds, r.shape.n_pairs, soul_scale=1.0)
            Y = random_supermatrix(rng, kinds, kinds, r.shape.n_pairs, soul_scale=1.0)
            lhs, rhs = hs_norm(X @ Y), C * hs_norm(X) * hs_norm(Y)
            errs.append(max(0.0, lhs - rhs))
            ratios.append(lhs / rhs)
            errs.append(abs(hs_inner(X, Y) - np.conj(hs_inner(Y, X))))
        return errs, {"bound_constant": C, "max_ratio_to_bound": float(max(ratios))}

    r.run("quantize.central_term_cocycle", 1e-7, c_cocycle)
    r.run("quantize.holomorphy", 1e-10, holomorphy)
    r.run("quantize.hs_product_bound", 1e-10, hs_bound)


SUITE_FUNCS = {
    "grassmann": suite_grassmann,
    "supermatrix": suite_supermatrix,
    "disc": suite_disc,
    "symplectic": suite_symplectic,
    "quantize": suite_quantize,
}


def run_suite(config: SuiteConfig) -> dict:
    """Run the configured suite and return the report dictionary."""
    config.validate()
    start = time.perf_counter()
    r = Runner(config)
    names = list(SUITE_FUNCS) if config.suite == "all" else [config.suite]
    for name in names:
        SUITE_FUNCS[name](r)
    return {
        "config": config.to_json(),
        "checks": [c.to_json() for c in r.checks],
        "pass": all(c.passed for c in r.checks),
        "wall_time": time.perf_counter() - start,
        "version": __version__,
    }
