"""Acceptance gate: one test per criterion at the stated sample counts and tolerances.

Each test prints a single ``PASS ACn ...`` or ``FAIL ACn ...`` line (outside
pytest's capture) and then asserts.  Defaults: dims (3,3|2), two generator
pairs, soul scale 0.1, radius 0.7, seed 42.
"""
import time

import numpy as np

from superdisc.cli import main
from superdisc.disc import (
    DiscPoint,
    GroupElement,
    check_pseudounitary,
    inverse_identity_residual,
    lift,
    moebius,
    phi,
    random_disc_point,
    random_group_element,
    random_lie_element,
    sqrt_identity_residual,
)
from superdisc.grassmann import g_exp
from superdisc.quantize import (
    Factor,
    MonomialSection,
    central_term,
    central_term_cocycle_residual,
    commutator_defect,
    constant_section,
    fhat,
    polarization_residual,
    projective_residual,
    random_monomial_section,
    rho,
    rho_convention,
    theta_s,
    weight,
)
from superdisc.supermatrix import (
    J_matrix,
    SpaceShape,
    SuperMatrix,
    identity_like,
    random_supermatrix,
    sm_exp,
    sm_inverse,
    sm_pow,
    sm_pow_resolvent,
    sm_sdet,
    sm_str,
)
from superdisc.symplectic import (
    TangentVector,
    cocycle,
    cocycle_identity_residual,
    determine_poisson_sign,
    moment_map,
    omega,
    origin_gram,
    poisson_realization_residual,
    vector_field,
)

import oracles

SEED = 42
SHAPE = SpaceShape(3, 3, 2, 2)
SOUL = 0.1
RADIUS = 0.7


def seed(ac, *idx):
    return np.random.SeedSequence([SEED, ac, *idx])


def point(ac, *idx):
    return random_disc_point(seed(ac, *idx), SHAPE, RADIUS, SOUL)


def lie(ac, *idx):
    return random_lie_element(seed(ac, *idx), SHAPE, soul_scale=SOUL)


def group(ac, *idx):
    return random_group_element(seed(ac, *idx), SHAPE, soul_scale=SOUL)


def err(x):
    return x.max_abs() if hasattr(x, "max_abs") else float(np.max(np.abs(x.coeffs)))


def rel(a, b):
    return err(a - b) / max(err(b), 1e-300)


def verdict(capsys, ac, ok, detail):
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {ac} {detail}")
    assert ok, f"{ac}: {detail}"


def test_ac01_phi_identities(capsys):
    start = time.perf_counter()
    J = J_matrix(SHAPE)
    worst = 0.0
    for t in range(50):
        P = phi(point(1, t))
        worst = max(worst, err(P @ P - identity_like(P)), err(J @ P.dagger() @ J - P))
    dt = time.perf_counter() - start
    verdict(capsys, "AC1", worst < 1e-9 and dt < 20, f"phi^2 = 1, J phi^+ J = phi: n=50 err={worst:.2e} (<1e-9) time={dt:.1f}s (<20s)")


def test_ac02_equivariance(capsys):
    start = time.perf_counter()
    worst = 0.0
    for t in range(25):
        g, Z = group(2, t, 0), point(2, t, 1)
        worst = max(worst, err(phi(moebius(g, Z)) - g.m @ phi(Z) @ sm_inverse(g.m)))
    dt = time.perf_counter() - start
    verdict(capsys, "AC2", worst < 1e-8 and dt < 30, f"phi(gZ) = g phi(Z) g^-1: n=25 err={worst:.2e} (<1e-8) time={dt:.1f}s (<30s)")


def test_ac03_coset_section(capsys):
    origin = DiscPoint.origin(SHAPE)
    J = J_matrix(SHAPE)
    e_orbit = e_pu = e_phi = 0.0
    for t in range(25):
        Z = point(3, t)
        g = lift(Z)
        e_orbit = max(e_orbit, err(moebius(g, origin).Z - Z.Z))
        e_pu = max(e_pu, check_pseudounitary(g))
        e_phi = max(e_phi, err(g.m @ J @ sm_inverse(g.m) - phi(Z)))
    ok = max(e_orbit, e_pu, e_phi) < 1e-9
    verdict(capsys, "AC3", ok, f"lift: n=25 orbit={e_orbit:.2e} pseudounitary={e_pu:.2e} phi={e_phi:.2e} (<1e-9)")


def test_ac04_group_closure(capsys):
    e_exp = max(check_pseudounitary(GroupElement(sm_exp(lie(4, t).u), SHAPE)) for t in range(25))
    e_prod = max(check_pseudounitary(group(4, t, 1) @ group(4, t, 2)) for t in range(25))
    ok = e_exp < 1e-9 and e_prod < 1e-8
    verdict(capsys, "AC4", ok, f"exp n=25 err={e_exp:.2e} (<1e-9); products n=25 err={e_prod:.2e} (<1e-8)")


def _invertible(ac, t, s):
    rng = np.random.default_rng(seed(ac, t, s))
    M = random_supermatrix(rng, SHAPE.kinds, SHAPE.kinds, SHAPE.n_pairs, body_scale=0.5, soul_scale=SOUL)
    return M + identity_like(M) * 2.0


def test_ac05_berezinian(capsys):
    e_mult = 0.0
    for t in range(25):
        M, N = _invertible(5, t, 0), _invertible(5, t, 1)
        e_mult = max(e_mult, rel(sm_sdet(M @ N), sm_sdet(M) * sm_sdet(N)))
    e_exp = 0.0
    for t in range(25):
        rng = np.random.default_rng(seed(5, t, 2))
        X = random_supermatrix(rng, SHAPE.kinds, SHAPE.kinds, SHAPE.n_pairs, body_scale=0.5, soul_scale=SOUL)
        e_exp = max(e_exp, err(sm_sdet(sm_exp(X)) - g_exp(sm_str(X))))
    ok = e_mult < 1e-8 and e_exp < 1e-8
    verdict(capsys, "AC5", ok, f"sdet(MN) rel n=25 err={e_mult:.2e} (<1e-8); sdet(exp X) n=25 err={e_exp:.2e} (<1e-8)")


def test_ac06_fractional_powers(capsys):
    e_sq = e_route = 0.0
    for t in range(25):
        Z = point(6, t)
        zd = Z.Z.dagger()
        S = identity_like(zd @ Z.Z) - zd @ Z.Z
        R = sm_pow(S, 0.5)
        e_sq = max(e_sq, err(R @ R - S))
        for alpha in (0.5, -0.5):
            e_route = max(e_route, err(sm_pow(S, alpha) - sm_pow_resolvent(S, alpha)))
    ok = e_sq < 1e-9 and e_route < 1e-7
    verdict(capsys, "AC6", ok, f"sqrt^2 n=25 err={e_sq:.2e} (<1e-9); Newton vs integral at +-1/2 err={e_route:.2e} (<1e-7)")


def test_ac07_poisson_realization(capsys):
    sign = determine_poisson_sign(lie(7, 0, 0), lie(7, 0, 1))
    e_p = 0.0
    for t in range(15):
        u, v = lie(7, 1, t, 0), lie(7, 1, t, 1)
        for j in range(5):
            e_p = max(e_p, poisson_realization_residual(u, v, point(7, 1, t, 2 + j), sign))
    e_c = max(cocycle_identity_residual(*(lie(7, 2, t, i) for i in range(3))) for t in range(15))
    gram = origin_gram(SHAPE)
    full = gram["rank"] == len(gram["labels"])
    ok = e_p < 1e-8 and e_c < 1e-10 and full
    verdict(capsys, "AC7", ok, f"Poisson sign={sign:+d} n=75 err={e_p:.2e} (<1e-8); cocycle identity n=15 err={e_c:.2e} "
                               f"(<1e-10); origin Gram rank {gram['rank']}/{len(gram['labels'])} sigma_min={gram['sigma_min']:.3g}")


def test_ac08_polarization(capsys):
    worst, n = 0.0, 0
    for t in range(10):
        s = random_monomial_section(np.random.default_rng(seed(8, t)), SHAPE, 2)
        for k in (1, 2):
            for j in range(5):
                Z, W = point(8, t, k, j, 0), point(8, t, k, j, 1).Z
                worst = max(worst, polarization_residual(s, Z, W, k))
                n += 1
    verdict(capsys, "AC8", worst < 1e-8, f"polarization n={n} err={worst:.2e} (<1e-8)")


def test_ac09_quantized_commutator(capsys):
    # fix the bracket factor once: the choice of lam making the defect a multiplication operator
    one = constant_section()
    u0, v0 = lie(9, 0, 0), lie(9, 0, 1)
    s0 = random_monomial_section(np.random.default_rng(seed(9, 0, 2)), SHAPE, 2)
    Z0 = point(9, 0, 3)
    lam = min((1j, -1j), key=lambda l: err(commutator_defect(u0, v0, s0, 1, l)(Z0)
                                           - commutator_defect(u0, v0, one, 1, l)(Z0) * s0(Z0)))
    variation = operator = 0.0
    samples = []
    for t in range(10):
        u, v = lie(9, 1, t, 0), lie(9, 1, t, 1)
        s = random_monomial_section(np.random.default_rng(seed(9, 1, t, 2)), SHAPE, 2)
        sig = cocycle(u, v)
        for k in (1, 2):
            d1 = commutator_defect(u, v, one, k, lam / k)
            ds = commutator_defect(u, v, s, k, lam / k)
            pts = [point(9, 1, t, 3 + j) for j in range(5)]
            scal = [d1(Z) for Z in pts]
            variation = max(variation, max(err(c - scal[0]) for c in scal))
            operator = max(operator, max(err(ds(Z) - c * s(Z)) for Z, c in zip(pts, scal)))
            samples.append((scal[0].coeffs * k, sig.coeffs))
    a0, b0 = max(samples, key=lambda ab: np.max(np.abs(ab[1])))
    top = int(np.argmax(np.abs(b0)))
    const = a0[top] / b0[top]
    spread = max(np.max(np.abs(a - const * b)) / np.max(np.abs(b0)) for a, b in samples)
    ok = variation < 1e-7 and operator < 1e-7 and spread < 1e-6
    verdict(capsys, "AC9", ok, f"bracket factor {'+' if lam == 1j else '-'}i/k; scalar Z-variation={variation:.2e} (<1e-7) "
                               f"multiplication={operator:.2e} (<1e-7); constant*k={const.real:+.6f}{const.imag:+.6f}i spread={spread:.2e} (<1e-6)")


def _regular(g, s, ac, t, want):
    pts = []
    for j in range(60):
        Z = point(ac, t, 100 + j)
        if all(abs(rho(g, s, k)(Z).body()) > 1e-6 for k in (1, 2)):
            pts.append(Z)
            if len(pts) == want:
                return pts
    raise AssertionError("no regular sample points")


def test_ac10_projective_representation(capsys):
    g1, g2 = group(10, 0, 0), group(10, 0, 1)
    s0 = random_monomial_section(np.random.default_rng(seed(10, 0, 2)), SHAPE, 2, constant=1.0)
    order, expo, _ = rho_convention(g1, g2, s0, _regular(g2 @ g1, s0, 10, 0, 3))
    var = mis = 0.0
    for t in range(10):
        g1, g2 = group(10, 1, t, 0), group(10, 1, t, 1)
        s = random_monomial_section(np.random.default_rng(seed(10, 1, t, 2)), SHAPE, 2, constant=1.0)
        prod = g1 @ g2 if order == "g1g2" else g2 @ g1
        pts = _regular(prod, s, 10, 1 + t, 5)
        for k in (1, 2):
            v_, m_ = projective_residual(g1, g2, s, pts, k, order, expo)
            var, mis = max(var, v_), max(mis, m_)
    coc = max(central_term_cocycle_residual(*(group(10, 2, t, i) for i in range(3)), k)
              for t in range(10) for k in (1, 2))
    ok = var < 1e-7 and mis < 1e-7 and coc < 1e-7
    verdict(capsys, "AC10", ok, f"convention rho(g1)rho(g2) ~ rho({order}) c^{expo:+d}; ratio variation={var:.2e} "
                                f"mismatch={mis:.2e} (<1e-7); cocycle rel={coc:.2e} (<1e-7)")


def test_ac11_classical_reduction(capsys):
    shape = SpaceShape(2, 3, 0, 0)
    rng = np.random.default_rng(seed(11))
    errs = {}

    def cmp(name, a, b):
        errs[name] = max(errs.get(name, 0.0), float(np.max(np.abs(np.asarray(a) - np.asarray(b)))))

    terms = [(1.5 - 0.5j, [(0, 1)]), (0.7j, [(1, 0), (1, 2)]), (2.0, []), (-0.3, [(0, 0), (0, 0)])]
    s = MonomialSection([(c, [Factor("w", r, col) for r, col in fs]) for c, fs in terms])
    for t in range(5):
        w = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        w *= RADIUS * rng.uniform(0.5, 1.0) / np.linalg.norm(w, 2)
        Z = DiscPoint(SuperMatrix.from_body(w, "--", "+++", 0), shape)
        g1 = random_group_element(seed(11, t, 0), shape)
        g2 = random_group_element(seed(11, t, 1), shape)
        u = random_lie_element(seed(11, t, 2), shape)
        v = random_lie_element(seed(11, t, 3), shape)
        ub, vb = u.u.body(), v.u.body()
        dw = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        dwbar = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        tv = lambda m: TangentVector(SuperMatrix.from_body(m, "--", "+++", 0))
        cmp("phi", phi(Z).body(), oracles.phi_c(w))
        cmp("lift", lift(Z).m.body(), oracles.lift_c(w))
        cmp("moebius", moebius(g1, Z).Z.body(), oracles.moebius_c(g1.m.body(), w))
        cmp("vector_field", vector_field(u, Z).dZ.body(), oracles.vector_field_c(ub, w))
        cmp("omega", omega(u, v, Z).body(), oracles.omega_c(ub, vb, w))
        cmp("moment_map", moment_map(u, Z).body(), oracles.moment_map_c(ub, w))
        cmp("cocycle", cocycle(u, v).body(), oracles.cocycle_c(ub, vb, 2))
        for k in (1, 2):
            cmp("theta_s", theta_s(Z, tv(dw), tv(dwbar), k).body(), oracles.theta_c(w, dw, dwbar, k))
            cmp("weight", weight(Z, k).body(), oracles.weight_c(w, k))
            cmp("fhat", fhat(u, s, k)(Z).body(), oracles.fhat_c(ub, terms, w, k))
            cmp("rho", rho(g1, s, k)(Z).body(), oracles.rho_c(g1.m.body(), terms, w, k))
            cmp("central_term", central_term(g1, g2, k).body(), oracles.central_term_c(g1.m.body(), g2.m.body(), 2, k))
    worst_name = max(errs, key=errs.get)
    ok = errs[worst_name] < 1e-10
    verdict(capsys, "AC11", ok, f"q=0, n=0 vs plain matrices: {len(errs)} quantities x 5 points, "
                                f"worst {worst_name} err={errs[worst_name]:.2e} (<1e-10)")


def test_ac12_inverse_and_square_root_identities(capsys):
    e_inv = max(inverse_identity_residual(point(12, t)) for t in range(25))
    e_sqrt = max(sqrt_identity_residual(point(12, t)) for t in range(25))
    ok = e_inv < 1e-10 and e_sqrt < 1e-6
    verdict(capsys, "AC12", ok, f"(1-Z+Z)^-1 identity n=25 err={e_inv:.2e} (<1e-10); "
                                f"square-root identity n=25 err={e_sqrt:.2e} (<1e-6)")


def test_full_suite_within_budget(capsys, tmp_path):
    start = time.perf_counter()
    code = main(["--suite", "all", "--seed", str(SEED), "--report", str(tmp_path / "all.json"), "--quiet"])
    dt = time.perf_counter() - start
    verdict(capsys, "SUITE", code == 0 and dt < 300, f"superdisc --suite all exit={code} time={dt:.1f}s (<300s)")
