import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from superdisc.errors import DimensionError, IllConditionedError, ParityError, SingularityError
from superdisc.grassmann import g_exp
from superdisc.supermatrix import (
    EVEN,
    ODD,
    J_matrix,
    SpaceShape,
    SuperMatrix,
    identity_like,
    random_supermatrix,
    sm_commutator_s,
    sm_dagger,
    sm_exp,
    sm_inverse,
    sm_jet_parts,
    sm_make_jet,
    sm_pow,
    sm_pow_resolvent,
    sm_pow_series,
    sm_sdet,
    sm_sqrt,
    sm_str,
    sm_str_J,
)

from helpers import coeff_err
from oracles import triple_loop_matmul

KINDS = "--++o"


def rand(rng, kinds=KINDS, n=1, dtype=EVEN, **kw):
    return random_supermatrix(rng, kinds, kinds, n, declared_type=dtype, **kw)


def positive(rng, kinds=KINDS, n=1, soul_scale=0.1):
    """Hermitian positive-definite body plus a soul."""
    X = rand(rng, kinds, n, soul_scale=soul_scale)
    B = X.body()
    M = X.soul() + SuperMatrix.from_body(B @ B.conj().T + np.eye(len(kinds)), kinds, kinds, n)
    return M


# --- products and types ---------------------------------------------------------

def test_identity_is_neutral(rng):
    M = rand(rng)
    one = identity_like(M)
    assert coeff_err(one @ M - M) == 0.0
    assert coeff_err(M @ one - M) == 0.0


@pytest.mark.parametrize("n", [1, 2])
def test_product_matches_triple_loop(rng, n):
    M, N = rand(rng, n=n, soul_scale=1.0), rand(rng, n=n, soul_scale=1.0)
    assert np.max(np.abs((M @ N).data - triple_loop_matmul(M.data, N.data))) < 1e-12


def test_associativity(rng):
    M, N, P = (rand(rng, n=2, soul_scale=0.5) for _ in range(3))
    assert coeff_err((M @ N) @ P - M @ (N @ P)) < 1e-12


def test_declared_types_compose(rng):
    E = rand(rng, dtype=EVEN)
    O = rand(rng, dtype=ODD)
    assert (E @ O).declared_type == ODD
    assert (O @ O).declared_type == EVEN
    assert (E @ O).parity_violation() == 0.0


def test_kind_mismatch():
    with pytest.raises(DimensionError):
        SuperMatrix.identity("-+", 1) @ SuperMatrix.identity("-o", 1)


# --- dagger --------------------------------------------------------------------

def test_dagger_properties(rng):
    J = J_matrix("--++o", 1)
    assert coeff_err(J.dagger() - J) == 0.0
    M, N = rand(rng, n=2), rand(rng, n=2)
    assert coeff_err((M @ N).dagger() - N.dagger() @ M.dagger()) < 1e-13
    assert coeff_err(M.dagger().dagger() - M) == 0.0
    B = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    assert np.array_equal(sm_dagger(SuperMatrix.from_body(B, KINDS, KINDS, 1)).body(), B.conj().T)


# --- supertraces ---------------------------------------------------------------

def test_str_examples():
    assert sm_str(J_matrix(SpaceShape(2, 2, 1, 1))).body() == 1.0
    assert sm_str(SuperMatrix.identity("---+++oo", 1)).body() == 3 + 3 - 2


@pytest.mark.parametrize("ta,tb", [(EVEN, EVEN), (EVEN, ODD), (ODD, ODD)])
def test_str_graded_cyclicity(rng, ta, tb):
    M, N = rand(rng, n=2, dtype=ta, soul_scale=1.0), rand(rng, n=2, dtype=tb, soul_scale=1.0)
    sign = -1.0 if ta == tb == ODD else 1.0
    assert coeff_err(sm_str(M @ N) - sm_str(N @ M) * sign) < 1e-12


@pytest.mark.parametrize("ta,tb", [(EVEN, EVEN), (EVEN, ODD), (ODD, ODD)])
def test_str_kills_supercommutators(rng, ta, tb):
    M, N = rand(rng, n=2, dtype=ta, soul_scale=1.0), rand(rng, n=2, dtype=tb, soul_scale=1.0)
    assert coeff_err(sm_str(sm_commutator_s(M, N))) < 1e-10


def test_conditional_supertrace(rng):
    J = J_matrix(KINDS, 1)
    assert coeff_err(sm_str_J(J) - sm_str(J)) == 0.0
    M = rand(rng, n=2)
    assert coeff_err(sm_str_J(M) - sm_str(M)) < 1e-13
    # disc split: the first two slots against the rest
    off = M.copy()
    off.data[:2, :2] = 0.0
    off.data[2:, 2:] = 0.0
    assert coeff_err(sm_str_J(off)) < 1e-14
    diag = M.copy()
    diag.data[:2, 2:] = 0.0
    diag.data[2:, :2] = 0.0
    assert coeff_err(sm_str_J(M) - sm_str(diag)) < 1e-13


def test_str_non_square():
    with pytest.raises(DimensionError):
        sm_str(SuperMatrix.zeros("-+", "-", 1))


# --- inverse -------------------------------------------------------------------

def test_inverse_of_unipotent(rng):
    N = rand(rng, n=2, soul_scale=1.0).soul()
    one = identity_like(N)
    series, term = one, one
    for _ in range(4):
        term = -(term @ N)
        series = series + term
    assert coeff_err(sm_inverse(one + N) - series) < 1e-12
    assert coeff_err(sm_inverse(one) - one) == 0.0


def test_inverse_multiply_back(rng):
    for _ in range(5):
        H = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        M = rand(rng, n=2).soul() + SuperMatrix.from_body(np.eye(5) + 0.1 * (H + H.conj().T), KINDS, KINDS, 2)
        Mi = sm_inverse(M)
        assert coeff_err(M @ Mi - 1.0) < 1e-10
        assert coeff_err(Mi @ M - 1.0) < 1e-10
        assert coeff_err(sm_inverse(Mi) - M) < 1e-10


def test_inverse_guards():
    with pytest.raises(SingularityError):
        sm_inverse(SuperMatrix.zeros("-+", "-+", 1))
    with pytest.raises(IllConditionedError):
        sm_inverse(SuperMatrix.from_body(np.diag([1.0, 1e-10]), "-+", "-+", 1))


# --- Berezinian ----------------------------------------------------------------

def test_sdet_examples():
    assert coeff_err(sm_sdet(SuperMatrix.identity(KINDS, 2)) - 1.0) == 0.0
    M = SuperMatrix.from_body(np.diag([2.0, 3.0]), "+o", "+o", 1)
    assert abs(sm_sdet(M).body() - 2 / 3) < 1e-15


def test_sdet_multiplicative(rng):
    for _ in range(5):
        M, N = positive(rng, n=2), positive(rng, n=2)
        lhs, rhs = sm_sdet(M @ N), sm_sdet(M) * sm_sdet(N)
        assert coeff_err(lhs - rhs) / abs(rhs.body()) < 1e-10


def test_sdet_exp_is_exp_str(rng):
    for _ in range(5):
        X = rand(rng, n=2, body_scale=0.5, soul_scale=0.3)
        assert coeff_err(sm_sdet(sm_exp(X)) - g_exp(sm_str(X))) < 1e-10


def test_sdet_rejects_odd():
    with pytest.raises(ParityError):
        sm_sdet(SuperMatrix.zeros("-o", "-o", 1, declared_type=ODD))


# --- exponential -----------------------------------------------------------------

def test_exp_basics(rng):
    Z = SuperMatrix.zeros(KINDS, KINDS, 2)
    assert coeff_err(sm_exp(Z) - 1.0) == 0.0
    X = rand(rng, n=2, soul_scale=0.5)
    assert coeff_err(sm_exp(X) @ sm_exp(-X) - 1.0) < 1e-10


def test_exp_body_is_classical(rng):
    X = rand(rng, n=2)
    assert np.max(np.abs(sm_exp(X).body() - scipy.linalg.expm(X.body()))) < 1e-12


def test_exp_jet_derivative(rng):
    X = rand(rng, n=2, soul_scale=0.3)
    # exp(eps X) read at first order in eps
    base, tan = sm_jet_parts(sm_exp(sm_make_jet(SuperMatrix.zeros(KINDS, KINDS, 2), X)))
    assert coeff_err(base - 1.0) < 1e-14
    assert coeff_err(tan - X) < 1e-13
    # d/dt exp((t0 + t) X) = X exp(t0 X)
    base, tan = sm_jet_parts(sm_exp(sm_make_jet(X * 0.7, X)))
    assert coeff_err(tan - X @ sm_exp(X * 0.7)) < 1e-11


# --- supercommutator -----------------------------------------------------------------

def test_supercommutator_properties(rng):
    X, Y, W = (rand(rng, n=2, soul_scale=0.5) for _ in range(3))
    assert coeff_err(sm_commutator_s(X, X)) < 1e-13
    O1, O2 = rand(rng, n=2, dtype=ODD), rand(rng, n=2, dtype=ODD)
    assert coeff_err(sm_commutator_s(O1, O2) - sm_commutator_s(O2, O1)) < 1e-13
    assert coeff_err(sm_commutator_s(X, O1) + sm_commutator_s(O1, X)) < 1e-13
    c = sm_commutator_s
    jac = c(X, c(Y, W)) + c(Y, c(W, X)) + c(W, c(X, Y))
    assert coeff_err(jac) < 1e-10
    with pytest.raises(ParityError):
        sm_commutator_s(X.with_type(None), Y)


# --- powers -----------------------------------------------------------------------

def test_pow_scalar_example():
    M = SuperMatrix.identity(KINDS, 1) * 4.0
    assert coeff_err(sm_pow(M, 0.5) - SuperMatrix.identity(KINDS, 1) * 2.0) < 1e-15


@pytest.mark.parametrize("seed", range(3))
def test_sqrt_squares_back(seed):
    rng = np.random.default_rng(seed)
    M = positive(rng, n=2)
    R = sm_pow(M, 0.5)
    assert coeff_err(R @ R - M) < 1e-10
    assert coeff_err(sm_pow(M, -0.5) @ R - 1.0) < 1e-10
    assert coeff_err(M @ R - R @ M) < 1e-10


@pytest.mark.parametrize("alpha", [0.5, -0.5, 0.3, -0.25, 1.5])
def test_pow_body_is_classical(rng, alpha):
    M = positive(rng, n=1)
    assert np.max(np.abs(sm_pow(M, alpha).body() - scipy.linalg.fractional_matrix_power(M.body(), alpha))) < 1e-10


@pytest.mark.parametrize("alpha", [0.5, -0.5])
def test_pow_routes_agree(rng, alpha):
    M = positive(rng, n=1)
    newton = sm_pow(M, alpha)
    assert coeff_err(newton - sm_pow_resolvent(M, alpha)) < 1e-9
    assert coeff_err(newton - sm_pow_series(M, alpha)) < 1e-9


def test_fractional_pow_composes(rng):
    M = positive(rng, "-+o", n=1)
    a = sm_pow(M, 0.3)
    assert coeff_err(a @ sm_pow(M, 0.2) - sm_sqrt(M)) < 1e-9
    assert coeff_err(a @ M - M @ a) < 1e-10


def test_integer_powers(rng):
    M = positive(rng, n=1)
    assert coeff_err(sm_pow(M, 2) - M @ M) < 1e-12
    assert coeff_err(sm_pow(M, -1) - sm_inverse(M)) < 1e-12


# --- classical reduction ----------------------------------------------------------

def test_no_generators_is_classical(rng):
    kinds = "--+++"
    A = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    B = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    M, N = SuperMatrix.from_body(A, kinds, kinds, 0), SuperMatrix.from_body(B, kinds, kinds, 0)
    assert np.array_equal((M @ N).body(), A @ B)
    assert np.allclose(sm_inverse(M).body(), np.linalg.inv(A), atol=1e-12)
    assert abs(sm_sdet(M).body() - np.linalg.det(A)) < 1e-10 * abs(np.linalg.det(A))
    assert sm_str(M).body() == np.trace(A)
    assert np.allclose(sm_exp(M * 0.3).body(), scipy.linalg.expm(0.3 * A), atol=1e-12)


# --- serialization ----------------------------------------------------------------

def test_json_round_trip(rng):
    M = rand(rng, n=2, dtype=ODD)
    back = SuperMatrix.from_json(M.to_json())
    assert coeff_err(back - M) == 0.0
    assert back.declared_type == ODD
    shape = SpaceShape(2, 2, 1, 2)
    obj = M.to_json(shape)
    assert obj["shape"] == {"p_minus": 2, "p_plus": 2, "q": 1, "n": 2}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_inverse_is_involution(seed):
    rng = np.random.default_rng(seed)
    M = positive(rng, "-+o", n=2, soul_scale=0.5)
    assert coeff_err(sm_inverse(sm_inverse(M)) - M) < 1e-9
