from fractions import Fraction as F
import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, strategies as st

from crown_kernels import rootsys, triples as T
from crown_kernels.errors import InvalidSpec, UnknownTriple

ranks = st.integers(min_value=1, max_value=8)


def test_registry_shape():
    reg = T.load_registry()
    assert reg["version"] == T.registry_version() == 1
    assert len(T.families()) == 8
    assert T.calibration() == {"orbit_exponent_kappa": 1, "compression_sign": -1}
    raw = json.loads(resources.files("crown_kernels").joinpath("data/registry.json").read_text())
    assert raw == reg


def test_examples():
    d = T.registry_lookup("sp_n_R", 3)
    assert d.s_name == "sp(3,R)+sp(3,R)" and d.h_name == "gl(3,R)"
    assert d.cayley_type and d.group_case
    d = T.registry_lookup("sp(n,n)", 2)
    assert d.s_name == "su(4,4)" and d.h_name == "sp(2,C)" and d.m_min == 1
    d = T.registry_lookup("so_1_n", 5)
    assert d.s_name == "so(2,5)" and d.m_min == 2


def test_lookup_errors():
    with pytest.raises(UnknownTriple):
        T.registry_lookup("nope", 1)
    with pytest.raises((UnknownTriple, InvalidSpec)):
        T.registry_lookup("so_1_n", 1)


def test_slugs():
    assert T.family_slugs() == ["sp_n_R", "su_n_n", "so_star_4n", "so_2_n", "e7_m25",
                                "so_1_n", "sp_n_n", "sp_n_C"]


def test_every_row_rank_identity_and_m():
    for desc in T.all_descriptors(8):
        assert T.check_rank_identity(desc), desc
        assert desc.m_min == T.minimal_m(desc), desc


@pytest.mark.parametrize("n", range(1, 9))
def test_integrality_examples(n):
    assert T.integrality_m(2, 2 * n) == 1
    assert T.integrality_m(1, 2 * n) == 2
    if n >= 3:
        assert T.integrality_m(n - 2, 2) == (1 if n % 2 == 0 else 2)


def test_so_2_n_hardy_pairing():
    for n in range(3, 9):
        desc = T.registry_lookup("so_1_n", n)
        chk = rootsys.check_hardy_conditions(desc.factor_system, T.rho_G_c(desc))
        assert chk.l2_value == F(-1, 4)


@given(ranks)
def test_brackets_exact(r):
    fam = T.build_su11_family(r)
    for j in range(r):
        basis = {"X": fam.X[j], "Y": fam.Y[j], "Z": fam.Z[j]}
        for (a, b), (c, e) in T.BRACKETS.items():
            assert np.array_equal(basis[a] @ basis[b] - basis[b] @ basis[a], c * basis[e])
        split = fam.split(j)
        for (a, b), (c, e) in T.SPLIT_BRACKETS.items():
            assert np.array_equal(split[a] @ split[b] - split[b] @ split[a], c * split[e])


def test_disjoint_blocks_commute():
    fam = T.build_su11_family(2)
    assert not np.any(fam.X[0] @ fam.Y[1] - fam.Y[1] @ fam.X[0])


@given(ranks)
def test_cayley_relations(r):
    fam = T.build_su11_family(r)
    for j in range(r):
        assert np.abs(T.cayley_apply(fam, fam.H[j]) - fam.Z[j]).max() < 1e-12
        assert np.abs(T.cayley_apply(fam, fam.Z[j]) + fam.H[j]).max() < 1e-12
        assert np.abs(T.cayley_apply(fam, fam.Y[j]) - fam.Y[j]).max() < 1e-12


@given(ranks)
def test_sigma_involution(r):
    fam = T.build_su11_family(r)
    for B in T.block_basis(fam):
        s2 = T.sigma_involution(fam, T.sigma_involution(fam, B))
        assert np.abs(s2 - B).max() < 1e-12
        st_ = T.sigma_involution(fam, T.tau(fam, B))
        ts = T.tau(fam, T.sigma_involution(fam, B))
        assert np.abs(st_ - ts).max() < 1e-12


def test_sigma_signs_from_oracle():
    fam = T.build_su11_family(3)
    for j in range(3):
        assert np.abs(T.sigma_involution(fam, fam.X[j]) + fam.X[j]).max() < 1e-12
        assert np.abs(T.sigma_involution(fam, fam.Y[j]) + fam.Y[j]).max() < 1e-12
        assert np.abs(T.sigma_involution(fam, fam.Z[j]) - fam.Z[j]).max() < 1e-12


def test_ad_spectrum_of_half_sums():
    fam = T.build_su11_family(3)
    basis = T.block_basis(fam)
    for A in (fam.Y0, fam.Z0):
        ev = T.ad_spectrum(A, basis)
        assert np.allclose(ev.imag, 0, atol=1e-12)
        assert set(np.round(ev.real, 12)) <= {-1.0, 0.0, 1.0}
