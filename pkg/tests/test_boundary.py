import math
import os
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crown_kernels import _accel, _torus_py, boundary as B, mat2
from crown_kernels.errors import InvalidInput, InvalidSpec, OnSingularSet

Poly = B.BidiskPolynomial.parse


def test_gh_density_examples():
    assert abs(B.gh_density(math.pi, 0) - 0.25) < 1e-15
    assert abs(B.gh_density(math.pi / 2, 0) - 0.5) < 1e-15
    with pytest.raises(OnSingularSet):
        B.gh_density(1.0, 1.0)


def test_grid_validation_and_measure():
    with pytest.raises(InvalidInput):
        B.TorusGrid(4)
    with pytest.raises(InvalidInput):
        B.TorusGrid(64, -1)
    g = B.TorusGrid(64, 0.0)
    assert g.weight * 64 * 64 == pytest.approx(1.0)
    assert B.TorusGrid(64, 0.2).kept_measure() < 1


def test_parse():
    p = Poly("1+z^2*wbar")
    assert dict(p.coeffs) == {(0, 0): 1, (2, 1): 1}
    assert dict(Poly("3/2*z - z^0*wbar^4").coeffs) == {(1, 0): 1.5, (0, 4): -1}
    with pytest.raises(InvalidSpec):
        Poly("z^-1")


@pytest.mark.parametrize("p1,p2,expect", [("1", "1", 1), ("z^2*wbar", "z*wbar", 0)]
                         + [(f"z^{k}", f"z^{k}", 1) for k in range(9)])
def test_pairing_examples(p1, p2, expect):
    res = B.pairing_isometry_test(Poly(p1), Poly(p2), B.TorusGrid(512, 0.0))
    assert res.rhs == expect and res.residual < 1e-8


def test_pairing_matrix_is_identity():
    quad, exact = B.pairing_matrix(8, B.TorusGrid(512, 0.0))
    assert np.array_equal(exact, np.eye(len(exact)))
    assert np.abs(quad - exact).max() < 1e-8


def test_invariant_integral_examples():
    one = Poly("1")
    assert B.invariant_integral(B.PsiProduct(one, one), B.TorusGrid(512, 0.0)) == pytest.approx(1)
    delta = 0.05
    grid = B.TorusGrid(512, delta)
    sq = B.invariant_integral(lambda a, b: np.abs(1 - np.exp(1j * (a - b))) ** 2, grid)
    assert sq.real == pytest.approx(grid.kept_measure(), abs=1e-12)
    osc = B.invariant_integral(lambda a, b: np.abs(1 - np.exp(1j * (a - b))) ** 2 * np.exp(1j * (a - b)), grid)
    # full-torus integral is 0, so what remains is minus the excluded band (where cos ~ 1)
    assert abs(osc + (1 - grid.kept_measure())) < 1e-4 and abs(osc) < 2 * delta / math.pi
    assert abs(B.invariant_integral(B.PsiProduct(Poly("z*wbar"), one), B.TorusGrid(512, 0.0))) < 1e-15


def test_generic_callable_needs_band():
    with pytest.raises(OnSingularSet):
        B.invariant_integral(lambda a, b: np.ones_like(a), B.TorusGrid(64, 0.0))


def test_invariance_reference_value():
    ref = B.invariance_reference(B.TorusGrid(1024, 1e-2))
    assert abs(ref - (-1 / 16)) < 1e-6


@settings(max_examples=10, deadline=None)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_invariance_under_group(seed):
    rng = np.random.default_rng(seed)
    g = mat2.random_su11(rng)
    grid = B.TorusGrid(512, 1e-2)
    res = B.invariance_test(g, grid)
    assert res.residual < 1e-6


def test_richardson_doubling():
    one = Poly("1")
    for delta in (1e-2, 5e-2):
        prev = None
        for n in (256, 512, 1024):
            res = B.pairing_isometry_test(one, one, B.TorusGrid(n, delta))
            if prev is not None:
                assert abs(res.lhs - prev.lhs) < 10 * max(res.residual, prev.residual)
            prev = res


def test_hardy_norm_estimator():
    for poly in ("1", "z^3"):
        est = B.hardy_norm_estimator(B.psi_times(Poly(poly)), "ray_lim", s_values=(0.1, 0.05, 0.025, 0.0125),
                                     n=1024)
        vals = [t["value"] for t in est.trace]
        assert all(b > a for a, b in zip(vals, vals[1:]))
        assert abs(est.value - 1) < 0.03
    for mode in ("ray_sup", "ray_lim"):
        assert B.hardy_norm_estimator(lambda z, w: 0 * z, mode, n=64).value == 0
    with pytest.raises(InvalidInput):
        B.hardy_norm_estimator(lambda z, w: z, "sup")


def test_probe_examples():
    assert B.l2_probe(B.ProbeSpec((F(-6),), (1,))).verdict == "converges"
    spec = B.ProbeSpec.from_root_labels((F(-6),), {"2t1": 1})
    assert spec.lambda_on_coroots() == (-4,) and spec.rho_on_coroots() == (1,)
    assert B.l2_probe(B.ProbeSpec((F(4),), (1,))).verdict == "diverges"
    assert B.l2_probe(B.ProbeSpec((F(0),), (1,))).verdict == "diverges"
    assert B.l2_probe(B.ProbeSpec((F(0),), (0,))).verdict == "diverges"


def test_probe_spec_validation():
    with pytest.raises(InvalidSpec):
        B.ProbeSpec((F(-1),), (1, 2))
    with pytest.raises(InvalidSpec):
        B.ProbeSpec((F(-1),), (-1,))
    with pytest.raises(InvalidSpec):
        B.ProbeSpec((F(-1),), (1,), (4.0, 1.0))
    with pytest.raises(InvalidSpec):
        B.ProbeSpec.from_root_labels((F(-1),), {"t1+t2": 1})


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-8, max_value=8, max_denominator=4).filter(lambda e: abs(e) >= F(1, 4)
                                                                                  or e == 0),
                min_size=1, max_size=3), st.data())
def test_probe_matches_sign(exps, data):
    mults = data.draw(st.lists(st.integers(0, 3), min_size=len(exps), max_size=len(exps)))
    spec = B.ProbeSpec(tuple(exps), tuple(mults))
    assert B.l2_probe(spec).verdict == B.sign_criterion(spec)


def _kernel_args(n, seed):
    rng = np.random.default_rng(seed)
    x, y, u, v = (np.sort(rng.uniform(0, 2 * np.pi, n)) for _ in range(4))
    jx, jy = rng.uniform(0.5, 2, n), rng.uniform(0.5, 2, n)
    return x, y, u, v, jx, jy


@pytest.mark.skipif(_accel.BACKEND != "compiled", reason="compiled extension not built")
def test_backends_agree():
    py, comp = _accel.kernels()["python"], _accel.kernels()["compiled"]
    args = _kernel_args(128, 3)
    x = np.linspace(0, 2 * np.pi, 128, endpoint=False)
    args = (x, x, x, x) + args[4:]
    for rows in ((0, 64), (64, 128)):
        a = py(*args, 3, 1, 1, 0.05, *rows)
        b = comp(*args, 3, 1, 1, 0.05, *rows)
        assert abs(a - b) <= 1e-12 * max(1, abs(a))


def test_band_mask_is_circular():
    m = _torus_py.band_mask(16, slice(0, 16), 2 * np.pi / 16 * 1.5)
    assert not m[0, 15] and not m[0, 1] and m[0, 2] and not m[0, 0]


def test_worker_count_determinism(monkeypatch):
    grid = B.TorusGrid(512, 1e-2)
    g = mat2.random_su11(np.random.default_rng(5))
    out = []
    for threads in ("1", "3"):
        monkeypatch.setenv("CROWN_KERNELS_THREADS", threads)
        assert B.worker_count() == int(threads)
        res = B.invariance_test(g, grid)
        out.append((res.substituted, res.composed))
    assert out[0] == out[1]
    monkeypatch.setenv("CROWN_KERNELS_THREADS", "zero")
    assert B.worker_count() == 1
    assert os.environ["CROWN_KERNELS_THREADS"] == "zero"


def test_fallback_selected_by_env():
    import subprocess
    import sys
    code = ("from crown_kernels import _accel, boundary as B, mat2; import numpy as np;"
            "g = mat2.random_su11(np.random.default_rng(2));"
            "r = B.invariance_test(g, B.TorusGrid(256, 1e-2));"
            "print(_accel.BACKEND, repr(r.substituted))")
    env = dict(os.environ, CROWN_KERNELS_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    backend, value = out.stdout.split(maxsplit=1)
    assert backend == "python"
    here = B.invariance_test(mat2.random_su11(np.random.default_rng(2)), B.TorusGrid(256, 1e-2)).substituted
    assert abs(complex(eval(value)) - here) < 1e-12
