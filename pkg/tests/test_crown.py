import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crown_kernels import crown as C
from crown_kernels import mat2
from crown_kernels.errors import CompressionViolation, InvalidInput

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_base_point():
    assert C.base_point(1).coords == (1j,)
    p = C.base_point(3)
    assert p.coords == (1j, 1j, 1j) and p.boundary
    assert all(abs(abs(c) - 1) < 1e-15 for c in p.coords)


def test_semigroup_identity_and_rank_one():
    p = C.base_point(2)
    ident = C.SemigroupElement((mat2.IDENTITY,) * 2, (0.0, 0.0))
    assert C.semigroup_act(ident, p, check=False).coords == p.coords
    dragged = C.SemigroupElement((mat2.IDENTITY, mat2.diag(1.5)), (0.2, 0.0))
    with pytest.raises(CompressionViolation):
        C.semigroup_act(dragged, C.PolydiscPoint((0.1j, 0.9)))
    t = 0.7
    gamma = C.SemigroupElement((mat2.IDENTITY,), (t,))
    out = C.semigroup_act(gamma, C.base_point(1)).coords[0]
    assert abs(out - 1j * math.exp(-C.KAPPA * t)) < 1e-14


def test_boundary_to_boundary_needs_interior():
    gamma = C.SemigroupElement((mat2.IDENTITY,), (0.0,))
    with pytest.raises(InvalidInput):
        C.semigroup_act(gamma, C.base_point(1))


def test_kappa_calibration():
    assert C.calibrate_kappa() == C.KAPPA == 1
    assert C.orbit_relation_check(1.0, kappa=2) > 1e-3


@pytest.mark.parametrize("t", [k / 10 for k in range(51)])
def test_orbit_relation_grid(t):
    assert C.orbit_relation_check(t) < 1e-12


def test_orbit_large_t_stays_off_real_axis():
    out = C.semigroup_act(C.SemigroupElement((mat2.IDENTITY,), (8.0,)), C.base_point(1)).coords[0]
    assert abs(out) < 1e-3 and out.imag > 0 and abs(out.real) < 1e-14


def test_dense_orbit_examples():
    assert C.dense_orbit_membership(C.PolydiscPoint((0.5j, 1j / 3)))
    assert not C.dense_orbit_membership(C.PolydiscPoint((0.5, 0.5j)))


@settings(max_examples=200)
@given(seeds, st.integers(min_value=1, max_value=4))
def test_compression(seed, r):
    rng = np.random.default_rng(seed)
    gamma = C.random_semigroup_element(rng, r)
    out = C.semigroup_act(gamma, C.random_torus_point(rng, r))
    assert max(abs(c) for c in out.coords) < 1


@given(st.lists(st.floats(0, 4), min_size=1, max_size=4), st.data())
def test_semigroup_law_t_only(t1, data):
    r = len(t1)
    t2 = data.draw(st.lists(st.floats(0, 4), min_size=r, max_size=r))
    ident = (mat2.IDENTITY,) * r
    g1, g2 = C.SemigroupElement(ident, tuple(t1)), C.SemigroupElement(ident, tuple(t2))
    p = C.PolydiscPoint(tuple(0.5j * (k + 1) / (r + 1) for k in range(r)))
    lhs = C.semigroup_act(g1, C.semigroup_act(g2, p)).coords
    rhs = C.semigroup_act(g1.compose(g2), p).coords
    assert max(abs(a - b) for a, b in zip(lhs, rhs)) < 1e-12


@given(st.lists(st.complex_numbers(max_magnitude=0.95), min_size=1, max_size=4), st.permutations(range(4)),
       st.lists(st.sampled_from([1, -1]), min_size=4, max_size=4))
def test_dense_orbit_weyl_invariant(coords, perm, signs):
    r = len(coords)
    order = [k for k in perm if k < r]
    moved = tuple(signs[k] * coords[order[k]] for k in range(r))
    assert C.dense_orbit_membership(C.PolydiscPoint(tuple(coords))) == \
        C.dense_orbit_membership(C.PolydiscPoint(moved))
