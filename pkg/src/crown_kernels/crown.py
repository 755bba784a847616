"""Polydisc model of the crown: base point, compression semigroup, orbit relation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import mat2
from .errors import CompressionViolation, InvalidInput, RankMismatch
from .triples import calibration

BOUNDARY_TOL = 1e-12
REAL_AXIS_TOL = 1e-14
KAPPA = calibration()["orbit_exponent_kappa"]
# t >= 0 along C_min acts by exp(-t H): the inverse semigroup compresses.
COMPRESSION_SIGN = calibration()["compression_sign"]


@dataclass(frozen=True)
class PolydiscPoint:
    coords: tuple[complex, ...]
    boundary: bool = False

    def __post_init__(self):
        coords = tuple(complex(z) for z in self.coords)
        object.__setattr__(self, "coords", coords)
        mods = [abs(z) for z in coords]
        if self.boundary:
            if any(abs(m - 1) > BOUNDARY_TOL for m in mods):
                raise InvalidInput("boundary point must have all |z_j| = 1")
        elif any(m >= 1 for m in mods):
            raise InvalidInput("interior point must have all |z_j| < 1")

    @property
    def rank(self) -> int:
        return len(self.coords)


@dataclass(frozen=True)
class SemigroupElement:
    g: tuple[mat2.Mat2C, ...]
    t: tuple[float, ...]

    def __post_init__(self):
        if len(self.g) != len(self.t):
            raise RankMismatch("g and t must have the same length")
        if any(x < 0 for x in self.t):
            raise InvalidInput("t must be non-negative")

    @property
    def nontrivial(self) -> bool:
        return any(x > 0 for x in self.t)

    @property
    def interior(self) -> bool:
        """t in the open cone; only then is the closed polydisc compressed."""
        return all(x > 0 for x in self.t)

    @classmethod
    def scaling(cls, t) -> "SemigroupElement":
        t = tuple(float(x) for x in t)
        return cls(tuple(mat2.IDENTITY for _ in t), t)

    def compose(self, other: "SemigroupElement") -> "SemigroupElement":
        """Product for elements with trivial g-part."""
        if any(g != mat2.IDENTITY for g in self.g + other.g):
            raise InvalidInput("composition is only defined for t-only elements")
        return SemigroupElement.scaling(a + b for a, b in zip(self.t, other.t))


def base_point(r: int) -> PolydiscPoint:
    return PolydiscPoint((1j,) * r, boundary=True)


def scaling_matrix(t: float, kappa: int = KAPPA) -> mat2.Mat2C:
    """exp(-t H^j) in the 2x2 model; kappa = 2 is the raw diag(1,-1) normalization."""
    return mat2.exp2(COMPRESSION_SIGN * 0.5 * kappa * t * mat2.H)


def semigroup_act(gamma: SemigroupElement, p: PolydiscPoint, check: bool = True) -> PolydiscPoint:
    if len(gamma.t) != p.rank:
        raise RankMismatch("rank mismatch")
    if check and not (gamma.interior or not p.boundary):
        raise InvalidInput("need an interior element or an interior point")
    out = []
    for g, t, z in zip(gamma.g, gamma.t, p.coords):
        out.append(mat2.mobius(g, mat2.mobius(scaling_matrix(t), z)))
    if check and max(abs(z) for z in out) >= 1:
        raise CompressionViolation(f"image moduli {[abs(z) for z in out]}")
    on_torus = all(abs(abs(z) - 1) <= BOUNDARY_TOL for z in out)
    return PolydiscPoint(tuple(out), boundary=on_torus)


def _orbit_sides(t: float, kappa: int) -> tuple[complex, complex]:
    left = mat2.mobius(scaling_matrix(t, kappa), 1j)
    theta = math.atan(math.exp(-t))
    right = mat2.mobius(mat2.exp2(1j * theta * mat2.generators()["Y"]), 0)
    return left, right


def orbit_relation_check(t: float, kappa: int = KAPPA) -> float:
    if t < 0:
        raise InvalidInput("t must be non-negative")
    left, right = _orbit_sides(t, kappa)
    return abs(left - right)


def calibrate_kappa(t: float = 1.0) -> int:
    return min((1, 2), key=lambda k: orbit_relation_check(t, k))


def weyl_normal_form(p: PolydiscPoint) -> tuple[complex, ...]:
    """Representative under coordinate permutations and sign changes."""
    folded = [z if (z.imag, z.real) >= (0.0, 0.0) else -z for z in p.coords]
    return tuple(sorted(folded, key=lambda z: (z.imag, z.real)))


def dense_orbit_membership(p: PolydiscPoint) -> bool:
    if p.boundary:
        raise InvalidInput("expects an interior point")
    return all(abs(z.imag) > REAL_AXIS_TOL for z in weyl_normal_form(p))


def random_semigroup_element(rng: np.random.Generator, r: int, t_max: float = 3.0) -> SemigroupElement:
    g = tuple(mat2.random_su11(rng) for _ in range(r))
    t = rng.uniform(1e-3, t_max, size=r)
    return SemigroupElement(g, tuple(float(x) for x in t))


def random_torus_point(rng: np.random.Generator, r: int) -> PolydiscPoint:
    phases = rng.uniform(0, 2 * np.pi, size=r)
    return PolydiscPoint(tuple(np.exp(1j * phases)), boundary=True)
