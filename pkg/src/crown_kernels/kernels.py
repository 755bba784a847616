"""Group-case kernels on the bidisk D x D^opp for G = SU(1,1)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from . import mat2
from .errors import InvalidInput, KernelSingularity, OracleMismatch

DUAL_PATH_TOL = 1e-12


class KernelId(str, Enum):
    CLASSICAL = "classical_hardy"
    PSI = "psi"
    XI = "szego_xi"


CLI_KERNEL_NAMES = {"psi": KernelId.PSI, "classical": KernelId.CLASSICAL, "xi": KernelId.XI}


@dataclass(frozen=True)
class BidiskPoint:
    z: complex
    w: complex
    boundary: bool = False

    def __post_init__(self):
        object.__setattr__(self, "z", complex(self.z))
        object.__setattr__(self, "w", complex(self.w))
        mods = (abs(self.z), abs(self.w))
        if self.boundary:
            if any(abs(m - 1) > 1e-12 for m in mods):
                raise InvalidInput("boundary point needs |z| = |w| = 1")
        elif any(m >= 1 for m in mods):
            raise InvalidInput("interior point needs |z|, |w| < 1")


@dataclass(frozen=True)
class KernelValue:
    value: complex
    kernel_id: KernelId

    def __post_init__(self):
        if not np.isfinite(self.value):
            raise KernelSingularity(f"{self.kernel_id.value} is not finite")


def act(g: mat2.Mat2C, p: BidiskPoint) -> BidiskPoint:
    """Diagonal action (g, g)."""
    return BidiskPoint(mat2.mobius(g, p.z), mat2.mobius(g, p.w), p.boundary)


def psi(p: BidiskPoint) -> complex:
    return 1 - p.z * p.w.conjugate()


def jh_group(g: mat2.Mat2C, p: BidiskPoint) -> complex:
    return mat2.cocycle_J(g, p.z) * mat2.cocycle_J(g, p.w).conjugate()


def k_classical(p: BidiskPoint, q: BidiskPoint) -> KernelValue:
    val = mat2.kernel_K(p.z, q.z) * mat2.kernel_K(p.w, q.w).conjugate()
    return KernelValue(val, KernelId.CLASSICAL)


def k_xi_factorized(p: BidiskPoint, q: BidiskPoint) -> complex:
    """psi(p) conj(psi(q)) K_h(p, q)."""
    return psi(p) * psi(q).conjugate() * k_classical(p, q).value


def k_xi_closed(p: BidiskPoint, q: BidiskPoint) -> complex:
    z1, w1, z2, w2 = p.z, p.w, q.z, q.w
    den = (1 - z1 * z2.conjugate()) * (1 - w1.conjugate() * w2)
    if abs(den) <= mat2.EPS_SING:
        raise KernelSingularity("denominator vanishes")
    return (1 - z1 * w1.conjugate()) * (1 - z2.conjugate() * w2) / den


def k_xi(p: BidiskPoint, q: BidiskPoint, tol: float = DUAL_PATH_TOL) -> KernelValue:
    a = k_xi_factorized(p, q)
    b = k_xi_closed(p, q)
    if abs(a - b) > tol * max(abs(a), abs(b), 1e-300):
        raise OracleMismatch(f"factorized {a} vs closed form {b}")
    return KernelValue(b, KernelId.XI)


def kernel_value(kernel_id: KernelId, p: BidiskPoint, q: BidiskPoint | None = None) -> KernelValue:
    if kernel_id is KernelId.PSI:
        return KernelValue(psi(p), KernelId.PSI)
    if q is None:
        raise InvalidInput(f"{kernel_id.value} needs two points")
    if kernel_id is KernelId.CLASSICAL:
        return k_classical(p, q)
    return k_xi(p, q)


def gram_matrix(points: Sequence[BidiskPoint], kernel_id: KernelId) -> np.ndarray:
    if kernel_id is KernelId.PSI:
        raise InvalidInput("psi is not a two-point kernel")
    n = len(points)
    if not 1 <= n <= 64:
        raise InvalidInput("need 1 <= N <= 64 points")
    M = np.empty((n, n), dtype=complex)
    for i, p in enumerate(points):
        for j, q in enumerate(points):
            M[i, j] = kernel_value(kernel_id, p, q).value
    return M


def gram_min_eigenvalue(points: Sequence[BidiskPoint], kernel_id: KernelId) -> tuple[float, float]:
    """(minimum eigenvalue, trace) of the symmetrized Gram matrix."""
    M = gram_matrix(points, kernel_id)
    asym = np.abs(M - M.conj().T).max()
    if asym > 1e-14 * max(1.0, np.abs(M).max()):
        raise OracleMismatch(f"Gram matrix not Hermitian: {asym:.3e}")
    M = 0.5 * (M + M.conj().T)
    return float(np.linalg.eigvalsh(M)[0]), float(np.trace(M).real)


def random_bidisk_point(rng: np.random.Generator, radius: float = 0.95) -> BidiskPoint:
    return BidiskPoint(mat2.random_disc_point(rng, radius), mat2.random_disc_point(rng, radius))


def psi_rank1_from_gcp(z: complex) -> complex:
    """1 - z^2 through the u-component of exp(z E+) = g u p.

    Squaring removes the sign ambiguity of the coset representative.
    """
    g, u, p = mat2.gcp_decompose(mat2.upper(z))
    return 1 / (u.a * u.a)


def psi_rank1_from_formula(z: complex) -> complex:
    """psi on the slice w = conj(z), where the group-case psi reads 1 - z^2."""
    return psi(BidiskPoint(z, complex(z).conjugate()))

