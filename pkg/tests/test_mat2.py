import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from crown_kernels import mat2 as M
from crown_kernels.errors import (DeterminantDrift, KernelSingularity, NonTraceless, OutOfDomain,
                                  SingularDecomposition)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def close(m, ref, tol=1e-12):
    return np.max(np.abs(np.asarray(m) - np.asarray(ref))) < tol


def test_hc_examples():
    z, mid, w = M.hc_decompose(M.IDENTITY)
    assert z == 0 and w == 0 and close(mid.array(), np.eye(2))
    z, mid, w = M.hc_decompose(M.Mat2C(2, 1, 1, 1))
    assert (z, w) == (1, 1) and close(mid.array(), np.eye(2))
    with pytest.raises(SingularDecomposition):
        M.hc_decompose(M.Mat2C(0, 1, -1, 0))


def test_gcp_examples():
    g, u, p = M.gcp_decompose(M.IDENTITY)
    for f in (g, u, p):
        assert close(f.array(), np.eye(2))
    g, u, p = M.gcp_decompose(M.Mat2C(1, 0, 1, 1))
    assert close(g.array(), np.eye(2)) and close(u.array(), np.eye(2))
    assert close(p.array(), [[1, 0], [1, 1]])
    with pytest.raises(SingularDecomposition):
        M.gcp_decompose(M.Mat2C(1, 1, 0, 1))


def test_mobius_examples():
    assert M.mobius(M.IDENTITY, 0.3 + 0.1j) == 0.3 + 0.1j
    t = 1.0
    boost = M.Mat2C(math.cosh(t), math.sinh(t), math.sinh(t), math.cosh(t))
    assert abs(M.mobius(boost, 0) - math.tanh(1)) < 1e-15
    phi = 0.7
    rot = M.diag(cmath.exp(1j * phi))
    z = 0.2 - 0.4j
    assert abs(M.mobius(rot, z) - cmath.exp(2j * phi) * z) < 1e-15
    assert abs(M.cocycle_J(boost, 0) - math.cosh(t)) < 1e-15
    assert M.cocycle_J(M.IDENTITY, 0.4j) == 1


def test_kernel_examples():
    assert M.kernel_K(0, 0.3 + 0.4j) == 1
    assert abs(M.kernel_K(0.5, 0.5) - 4 / 3) < 1e-15
    with pytest.raises(KernelSingularity):
        M.kernel_K(1, 1)


def test_u_G_examples():
    assert M.u_G_point(0) == 1
    assert abs(M.u_G_point(0.5j) - 1 / math.sqrt(1.25)) < 1e-15
    assert math.isfinite(abs(M.u_G_point(0.99999)))
    with pytest.raises(OutOfDomain):
        M.u_G_point(1)


def test_exp2_examples():
    assert close(M.exp2(np.zeros((2, 2))).array(), np.eye(2))
    t = 0.8
    assert close(M.exp2(t * M.H).array(), np.diag([math.exp(t), math.exp(-t)]))
    cay = M.exp2(1j * math.pi / 4 * M.FLIP).array()
    assert close(cay, np.array([[1, 1j], [1j, 1]]) / math.sqrt(2), 1e-15)
    with pytest.raises(NonTraceless):
        M.exp2(np.eye(2))


def test_exp2_nilpotent_branch():
    n = np.array([[0, 2.5 - 1j], [0, 0]])
    assert close(M.exp2(n).array(), np.eye(2) + n)
    tiny = 1e-10 * M.H + n
    assert close(M.exp2(tiny).array(), M.exp_series(tiny), 1e-13)


def test_generators_and_involutions():
    g = M.generators()
    assert close(M.tau_flip(g["Y0"]), g["Y0"])
    assert close(M.tau_flip(g["X0"]), -g["X0"])
    assert close(M.theta_cartan(g["X0"]), g["X0"])


def test_det_drift_is_an_error():
    with pytest.raises(DeterminantDrift):
        M.Mat2C(1, 1, 1, 1)


@given(seeds)
def test_decompositions_recompose(seed):
    rng = np.random.default_rng(seed)
    s = M.random_sl2c(rng, min_d=0.01)
    z, mid, w = M.hc_decompose(s)
    assert M.rel_residual(M.hc_recompose(z, mid, w), s) < 1e-10
    assume(abs(s.d ** 2 - s.b ** 2) > 0.01)
    g, u, p = M.gcp_decompose(s)
    assert M.rel_residual(g @ u @ p, s) < 1e-10
    assert M.rel_residual(M.tau_flip(g.array()), g.array()) < 1e-12


@given(seeds)
def test_cocycle_identity(seed):
    rng = np.random.default_rng(seed)
    g1, g2 = M.random_su11(rng), M.random_su11(rng)
    z = M.random_disc_point(rng)
    lhs = M.cocycle_J(g1 @ g2, z)
    rhs = M.cocycle_J(g1, M.mobius(g2, z)) * M.cocycle_J(g2, z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


@given(seeds)
def test_kernel_covariance(seed):
    # K(gz, gw) = J(g,z) K(z,w) conj(J(g,w)) with J(g,z) = cz + d
    rng = np.random.default_rng(seed)
    g = M.random_su11(rng)
    z, w = M.random_disc_point(rng), M.random_disc_point(rng)
    lhs = M.kernel_K(M.mobius(g, z), M.mobius(g, w))
    rhs = M.cocycle_J(g, z) * M.kernel_K(z, w) * M.cocycle_J(g, w).conjugate()
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(lhs))


@given(seeds)
def test_u_G_consistency_with_gcp(seed):
    rng = np.random.default_rng(seed)
    z = M.random_disc_point(rng, radius=0.9)
    _, u, _ = M.gcp_decompose(M.exp2(z * M.E_PLUS))
    # u = diag(1/q, q) with q = sqrt(1 - z^2), i.e. diag(u_G, 1/u_G)
    ref = M.diag(M.u_G_point(z))
    assert M.same_up_to_sign(u, ref)


@given(seeds)
def test_exp2_matches_series(seed):
    rng = np.random.default_rng(seed)
    a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
    X = np.array([[a, b], [c, -a]])
    assert close(M.exp2(X).array(), M.exp_series(X), 1e-10 * np.abs(M.exp_series(X)).max())


@settings(max_examples=50)
@given(seeds)
def test_random_su11_is_su11(seed):
    g = M.random_su11(np.random.default_rng(seed))
    assert M.is_su11(g)
    assert abs(g.det() - 1) < 1e-12
