"""Acceptance checks shared by ``crown-kernels selftest`` and the test suite."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction as Q
from typing import Callable

import numpy as np

from . import boundary, crown, kernels, mat2, rootsys, triples
from .rootsys import Membership, RestrictedRootSystem

C, D, N = Membership.CONTINUOUS, Membership.DISCRETE, Membership.NOT_MEMBER


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:>2} {self.name} ({self.elapsed:.2f}s)"


# ------------------------------------------------------------------ 1

def root_pairings() -> dict:
    pairings_ok = True
    for r in range(1, 9):
        for d in (1, 2, 4, 6, 8):
            rs = RestrictedRootSystem(r, d)
            beta = rootsys.highest_root(rs)
            if rootsys.pair(rs, rootsys.rho(rs), beta) != Q(1 + d * (r - 1), 2):
                pairings_ok = False
            lam = -rootsys.rho_n(rs)
            if rootsys.pair(rs, 2 * lam + rootsys.rho(rs), beta) != Q(-1, 2):
                pairings_ok = False
    so_rows, sp_rows = {}, {}
    for n in triples.valid_parameters("so(1,n)"):
        desc = triples.registry_lookup("so(1,n)", n)
        chk = rootsys.check_hardy_conditions(desc.factor_system, triples.rho_G_c(desc))
        so_rows[n] = chk.l2_value
    for n in triples.valid_parameters("sp(n,n)"):
        desc = triples.registry_lookup("sp(n,n)", n)
        rs = desc.factor_system
        chk = rootsys.check_hardy_conditions(rs, triples.rho_G_c(desc))
        gc = rootsys.pair(rs, triples.rho_G_c(desc), rootsys.highest_root(rs))
        sp_rows[n] = {"rho_gc_on_beta": gc, "lambda_h_on_beta": chk.l2_value - gc,
                      "sum": chk.l2_value}
    return {
        "pairings_exact": pairings_ok,
        "so_2_n_values": so_rows,
        "so_2_n_ok": all(v == Q(-1, 4) for v in so_rows.values()),
        "su_2n_2n_values": sp_rows,
        "su_2n_2n_rho_gc_ok": all(v["rho_gc_on_beta"] == Q(n, 2) - Q(1, 4) for n, v in sp_rows.items()),
        "su_2n_2n_ok": all(v["sum"] == Q(-1, 2) for v in sp_rows.values()),
        "su_2n_2n_negative": all(v["sum"] < 0 for v in sp_rows.values()),
    }


def criterion_1() -> CheckResult:
    t0 = time.perf_counter()
    det = root_pairings()
    el = time.perf_counter() - t0
    ok = det["pairings_exact"] and det["so_2_n_ok"] and det["su_2n_2n_ok"] and el < 1.0
    return CheckResult(1, "root_pairings", ok, el, det)


# ------------------------------------------------------------------ 2

WALLACH_TABLE = [
    (1, 1, "0", D, False), (1, 1, "-1/2", C, True), (1, 1, "1/2", N, False),
    (1, 2, "-3", C, True), (1, 8, "0", D, False),
    (2, 1, "0", D, False), (2, 1, "-1/2", D, False), (2, 1, "-1/4", N, False),
    (2, 1, "-1", C, True), (2, 1, "-51/100", C, True), (2, 1, "1", N, False),
    (2, 2, "-2", C, True), (2, 2, "-1/2", N, False), (2, 2, "-1", D, False),
    (2, 2, "0", D, False), (2, 2, "-3/2", C, True), (2, 2, "-101/100", C, True),
    (2, 2, "-99/100", N, False),
    (3, 1, "-1", D, False), (3, 1, "-1/2", D, False), (3, 1, "0", D, False),
    (3, 1, "-3/4", N, False), (3, 1, "-5/4", C, True), (3, 1, "-1/4", N, False),
    (3, 2, "-2", D, False), (3, 2, "-1", D, False), (3, 2, "-3/2", N, False),
    (3, 2, "-5/2", C, True), (3, 2, "0", D, False), (3, 2, "1/3", N, False),
    (3, 4, "-4", D, False), (3, 4, "-2", D, False), (3, 4, "-3", N, False),
    (3, 4, "-1", N, False), (3, 4, "-9/2", C, True), (3, 4, "0", D, False),
    (3, 8, "-8", D, False), (3, 8, "-4", D, False), (3, 8, "-6", N, False),
    (3, 8, "-17/2", C, True),
    (4, 1, "-3/2", D, False), (4, 1, "-1", D, False), (4, 1, "-1/2", D, False),
    (4, 1, "0", D, False), (4, 1, "-5/4", N, False), (4, 1, "-2", C, True),
    (4, 6, "-9", D, False), (4, 6, "-3", D, False), (4, 6, "-15/2", N, False),
    (4, 6, "-10", C, True),
]


def criterion_2() -> CheckResult:
    t0 = time.perf_counter()
    bad = []
    for r, d, z, member, regular in WALLACH_TABLE:
        rs = RestrictedRootSystem(r, d)
        got = (rootsys.wallach_contains(rs, Q(z)), rootsys.is_regular(rs, Q(z)))
        if got != (member, regular):
            bad.append((r, d, z, got[0].value, got[1]))
    return CheckResult(2, "wallach_table", not bad and len(WALLACH_TABLE) == 50,
                       time.perf_counter() - t0, {"cases": len(WALLACH_TABLE), "mismatches": bad})


# ------------------------------------------------------------------ 3

def criterion_3() -> CheckResult:
    t0 = time.perf_counter()
    bad, count, fams = [], 0, set()
    for desc in triples.all_descriptors(8):
        count += 1
        fams.add(triples.descriptor_family_slug(desc))
        if triples.integrality_m(desc.d_s, desc.r_s) != desc.m_min:
            bad.append(desc.s_name)
        triples.check_rank_identity(desc)
    return CheckResult(3, "m_values", not bad and len(fams) == 8, time.perf_counter() - t0,
                       {"descriptors": count, "families": len(fams), "mismatches": bad})


# ------------------------------------------------------------------ 4

def decomposition_residuals(samples: int = 10_000, seed: int = 4) -> dict:
    rng = np.random.default_rng(seed)
    hc = gcp = tau = 0.0
    done_hc = done_gcp = 0
    while done_hc < samples:
        s = mat2.random_sl2c(rng, min_d=0.01)
        z, mid, w = mat2.hc_decompose(s)
        hc = max(hc, mat2.rel_residual(mat2.hc_recompose(z, mid, w), s))
        done_hc += 1
    while done_gcp < samples:
        s = mat2.random_sl2c(rng)
        if abs(s.d * s.d - s.b * s.b) <= 0.01:
            continue
        g, u, p = mat2.gcp_decompose(s)
        gcp = max(gcp, mat2.rel_residual(g @ u @ p, s))
        tau = max(tau, mat2.frob(mat2.tau_flip(g.array()) - g.array()))
        done_gcp += 1
    return {"hc_residual": hc, "gcp_residual": gcp, "tau_residual": tau, "samples": samples}


def criterion_4() -> CheckResult:
    t0 = time.perf_counter()
    det = decomposition_residuals()
    el = time.perf_counter() - t0
    ok = det["hc_residual"] < 1e-10 and det["gcp_residual"] < 1e-10 and det["tau_residual"] < 1e-12 and el < 5
    return CheckResult(4, "decompositions", ok, el, det)


# ------------------------------------------------------------------ 5

def _table_holds(trip: dict, table: dict) -> bool:
    for (a, b), (coef, c) in table.items():
        if not np.array_equal(mat2.bracket(trip[a], trip[b]), coef * trip[c]):
            return False
    return True


def algebra_residuals(max_rank: int = 8) -> dict:
    brackets_exact = split_exact = True
    cayley = sigma_sq = sigma_tau = commute = 0.0
    sigma_signs = {}
    for r in range(1, max_rank + 1):
        fam = triples.build_su11_family(r)
        basis = triples.block_basis(fam)
        for j in range(r):
            trip = {"X": fam.X[j], "Y": fam.Y[j], "Z": fam.Z[j]}
            brackets_exact &= _table_holds(trip, triples.BRACKETS)
            split_exact &= _table_holds(fam.split(j), triples.SPLIT_BRACKETS)
            brackets_exact &= np.array_equal(mat2.bracket(fam.E_plus[j], fam.E_minus[j]), fam.H[j])
            for k in range(r):
                if k != j:
                    commute = max(commute, float(np.abs(mat2.bracket(fam.X[j], fam.Y[k])).max()))
            cayley = max(
                cayley,
                float(np.abs(triples.cayley_apply(fam, fam.H[j]) - fam.Z[j]).max()),
                float(np.abs(triples.cayley_apply(fam, fam.Z[j]) + fam.H[j]).max()),
                float(np.abs(triples.cayley_apply(fam, fam.Y[j]) - fam.Y[j]).max()),
            )
        for B in basis:
            s = triples.sigma_involution(fam, B)
            sigma_sq = max(sigma_sq, float(np.abs(triples.sigma_involution(fam, s) - B).max()))
            st = triples.sigma_involution(fam, triples.tau(fam, B))
            ts = triples.tau(fam, s)
            sigma_tau = max(sigma_tau, float(np.abs(st - ts).max()))
        if r == 1:
            for name in "XYZ":
                M = getattr(fam, name)[0]
                img = triples.sigma_involution(fam, M)
                sigma_signs[name] = 1 if np.allclose(img, M) else (-1 if np.allclose(img, -M) else 0)
    return {
        "brackets_exact": bool(brackets_exact),
        "split_table_exact": bool(split_exact),
        "blocks_commute": commute,
        "cayley_residual": cayley,
        "sigma_squared_residual": sigma_sq,
        "sigma_tau_residual": sigma_tau,
        "sigma_signs": sigma_signs,
    }


def criterion_5() -> CheckResult:
    t0 = time.perf_counter()
    det = algebra_residuals()
    ok = (det["brackets_exact"] and det["split_table_exact"] and det["blocks_commute"] == 0
          and det["cayley_residual"] < 1e-12 and det["sigma_squared_residual"] < 1e-12
          and det["sigma_tau_residual"] < 1e-12)
    return CheckResult(5, "algebraic_identities", ok, time.perf_counter() - t0, det)


# ------------------------------------------------------------------ 6

def _rel(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def cocycle_residuals(samples: int = 1000, seed: int = 6) -> dict:
    rng = np.random.default_rng(seed)
    j_res = jh_res = psi_res = 0.0
    for _ in range(samples):
        g1, g2 = mat2.random_su11(rng), mat2.random_su11(rng)
        z = mat2.random_disc_point(rng)
        lhs = mat2.cocycle_J(g1 @ g2, z)
        rhs = mat2.cocycle_J(g1, mat2.mobius(g2, z)) * mat2.cocycle_J(g2, z)
        j_res = max(j_res, _rel(lhs, rhs))
        p = kernels.random_bidisk_point(rng)
        lhs = kernels.jh_group(g1 @ g2, p)
        rhs = kernels.jh_group(g1, kernels.act(g2, p)) * kernels.jh_group(g2, p)
        jh_res = max(jh_res, _rel(lhs, rhs))
        psi_res = max(psi_res, _rel(kernels.psi(kernels.act(g1, p)) * kernels.jh_group(g1, p), kernels.psi(p)))
    return {"J_cocycle": j_res, "Jh_cocycle": jh_res, "psi_covariance": psi_res, "samples": samples}


def criterion_6() -> CheckResult:
    t0 = time.perf_counter()
    det = cocycle_residuals()
    ok = max(det["J_cocycle"], det["Jh_cocycle"], det["psi_covariance"]) < 1e-10
    return CheckResult(6, "cocycles", ok, time.perf_counter() - t0, det)


# ------------------------------------------------------------------ 7

def kernel_residuals(pairs: int = 10_000, group: int = 1000, seeds: int = 50, seed: int = 7) -> dict:
    rng = np.random.default_rng(seed)
    dual = 0.0
    for _ in range(pairs):
        p, q = kernels.random_bidisk_point(rng), kernels.random_bidisk_point(rng)
        dual = max(dual, _rel(kernels.k_xi_factorized(p, q), kernels.k_xi_closed(p, q)))
    inv = 0.0
    for _ in range(group):
        g = mat2.random_su11(rng)
        p, q = kernels.random_bidisk_point(rng), kernels.random_bidisk_point(rng)
        ref = kernels.k_xi(p, q).value
        inv = max(inv, abs(kernels.k_xi(kernels.act(g, p), kernels.act(g, q)).value - ref) / max(1.0, abs(ref)))
    worst = np.inf
    for s in range(seeds):
        r = np.random.default_rng(s)
        pts = [kernels.random_bidisk_point(r) for _ in range(20)]
        for kid in (kernels.KernelId.CLASSICAL, kernels.KernelId.XI):
            lo, tr = kernels.gram_min_eigenvalue(pts, kid)
            worst = min(worst, lo / tr)
    return {"dual_path_relative": dual, "g_invariance": inv, "gram_min_over_trace": float(worst)}


def criterion_7() -> CheckResult:
    t0 = time.perf_counter()
    det = kernel_residuals()
    ok = det["dual_path_relative"] < 1e-12 and det["g_invariance"] < 1e-10 and det["gram_min_over_trace"] >= -1e-10
    return CheckResult(7, "kernel_identities", ok, time.perf_counter() - t0, det)


# ------------------------------------------------------------------ 8

def orbit_residuals(samples: int = 1000, seed: int = 8) -> dict:
    kappa = crown.calibrate_kappa()
    grid = [round(0.1 * k, 10) for k in range(51)]
    orbit = max(crown.orbit_relation_check(t, kappa) for t in grid)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        r = int(rng.integers(1, 5))
        gamma = crown.random_semigroup_element(rng, r)
        p = crown.random_torus_point(rng, r)
        img = crown.semigroup_act(gamma, p, check=False)
        worst = max(worst, max(abs(z) for z in img.coords))
    return {"kappa": kappa, "kappa_registry": crown.KAPPA, "orbit_residual": orbit, "max_image_modulus": worst}


def criterion_8() -> CheckResult:
    t0 = time.perf_counter()
    det = orbit_residuals()
    ok = det["kappa"] == det["kappa_registry"] and det["orbit_residual"] < 1e-12 and det["max_image_modulus"] < 1
    return CheckResult(8, "orbit_relation", ok, time.perf_counter() - t0, det)


# ------------------------------------------------------------------ 9

def boundary_residuals(elements: int = 100, seed: int = 9) -> dict:
    quad, exact = boundary.pairing_matrix(8, boundary.TorusGrid(512, 0.0))
    grid = boundary.TorusGrid(1024, 1e-2)
    ref = boundary.invariance_reference(grid)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(elements):
        worst = max(worst, boundary.invariance_test(mat2.random_su11(rng, 3.0), grid, reference=ref).residual)
    return {"pairing_residual": float(np.abs(quad - exact).max()), "monomials": quad.shape[0],
            "invariance_residual": worst, "reference": ref}


def criterion_9() -> CheckResult:
    t0 = time.perf_counter()
    det = boundary_residuals()
    el = time.perf_counter() - t0
    ok = det["pairing_residual"] < 1e-8 and det["invariance_residual"] < 1e-6 and el < 60
    return CheckResult(9, "boundary_pairing", ok, el, det)


# ------------------------------------------------------------------ 10

PROBE_SWEEP = [
    ((-6,), (1,)), ((-4,), (0,)), ((-2,), (2,)), ((-1,), (1,)), (("-1/2",), (3,)),
    ((0,), (1,)), ((0,), (0,)), (("1/2",), (1,)), ((1,), (0,)), ((2,), (2,)),
    ((-2, -1), (1, 1)), (("-1/2", -3), (2, 0)), ((0, -2), (1, 1)), ((-2, 0), (0, 2)),
    ((1, -4), (1, 1)), ((-4, 1), (2, 1)), (("1/2", "1/2"), (1, 1)), ((-1, -1), (0, 0)),
    ((0, 0), (1, 1)), ((-6, "-1/2"), (1, 3)),
]


def probe_sweep() -> list[dict]:
    out = []
    for exps, mults in PROBE_SWEEP:
        spec = boundary.ProbeSpec(tuple(Q(e) for e in exps), mults)
        res = boundary.l2_probe(spec)
        out.append({"exponents": [str(e) for e in spec.exponents], "mults": list(mults),
                    "verdict": res.verdict, "expected": boundary.sign_criterion(spec)})
    return out


def criterion_10() -> CheckResult:
    t0 = time.perf_counter()
    rows = probe_sweep()
    el = time.perf_counter() - t0
    ok = (len(rows) == 20 and all(r["verdict"] == r["expected"] for r in rows)
          and any(max(Q(e) for e in r["exponents"]) == 0 for r in rows) and el < 30)
    return CheckResult(10, "l2_probe", ok, el, {"cases": rows})


CRITERIA: dict[int, Callable[[], CheckResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}

NAMES = {
    1: "root_pairings", 2: "wallach_table", 3: "m_values", 4: "decompositions",
    5: "algebraic_identities", 6: "cocycles", 7: "kernel_identities", 8: "orbit_relation",
    9: "boundary_pairing", 10: "l2_probe",
}


def select(filter_name: str | None) -> list[int]:
    if not filter_name:
        return list(CRITERIA)
    out = [k for k, name in NAMES.items() if filter_name == str(k) or filter_name in name]
    return out


def run(filter_name: str | None = None) -> list[CheckResult]:
    return [CRITERIA[k]() for k in select(filter_name)]
