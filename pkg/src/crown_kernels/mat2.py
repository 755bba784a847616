"""SL(2,C) engine for the SU(1,1) reduction.

Group elements are ``Mat2C`` (unit determinant, checked on construction).
Lie algebra elements are plain 2x2 complex numpy arrays.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import (DeterminantDrift, InvalidInput, KernelSingularity, NonTraceless, OutOfDomain,
                     PoleAtPoint, SingularDecomposition)

EPS_SING = 1e-12
DET_TOL = 1e-12
NILPOTENT_TOL = 1e-8


@dataclass(frozen=True)
class Mat2C:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        drift = abs(self.a * self.d - self.b * self.c - 1.0)
        scale = max(1.0, abs(self.a * self.d), abs(self.b * self.c))
        if drift > DET_TOL * scale:
            raise DeterminantDrift(f"|det - 1| = {drift:.3e}")

    @classmethod
    def from_array(cls, m) -> "Mat2C":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def array(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def __matmul__(self, other: "Mat2C") -> "Mat2C":
        return Mat2C(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "Mat2C":
        return Mat2C(self.d, -self.b, -self.c, self.a)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c


IDENTITY = Mat2C(1, 0, 0, 1)
FLIP = np.array([[0, 1], [1, 0]], dtype=complex)


def frob(m) -> float:
    return float(np.linalg.norm(np.asarray(m, dtype=complex)))


def rel_residual(m, ref) -> float:
    m = m.array() if isinstance(m, Mat2C) else np.asarray(m)
    ref = ref.array() if isinstance(ref, Mat2C) else np.asarray(ref)
    return frob(m - ref) / max(frob(ref), 1e-300)


# decompositions

def upper(z: complex) -> Mat2C:
    return Mat2C(1, z, 0, 1)


def lower(w: complex) -> Mat2C:
    return Mat2C(1, 0, w, 1)


def diag(x: complex) -> Mat2C:
    return Mat2C(x, 0, 0, 1 / x)


def hc_decompose(s: Mat2C, eps: float = EPS_SING) -> tuple[complex, Mat2C, complex]:
    """s = [1 z; 0 1] diag(1/d, d) [1 0; w 1]. Returns (z, middle, w)."""
    if abs(s.d) <= eps:
        raise SingularDecomposition(f"|d| = {abs(s.d):.3e} is below {eps:g}")
    return s.b / s.d, diag(1 / s.d), s.c / s.d


def hc_recompose(z: complex, middle: Mat2C, w: complex) -> Mat2C:
    return upper(z) @ middle @ lower(w)


def gcp_decompose(s: Mat2C, eps: float = EPS_SING) -> tuple[Mat2C, Mat2C, Mat2C]:
    """s = g u p with g flip-fixed, u diagonal, p lower unitriangular.

    u is only meaningful up to sign (principal square root is used).
    """
    disc = s.d * s.d - s.b * s.b
    if abs(disc) <= eps:
        raise SingularDecomposition(f"|d^2 - b^2| = {abs(disc):.3e} is below {eps:g}")
    q = cmath.sqrt(disc)
    g = Mat2C(s.d / q, s.b / q, s.b / q, s.d / q)
    u = Mat2C(1 / q, 0, 0, q)
    p = lower((s.c * s.d - s.a * s.b) / disc)
    return g, u, p


def same_up_to_sign(m: Mat2C, ref: Mat2C, tol: float = 1e-10) -> bool:
    return min(rel_residual(m, ref), rel_residual(m.array(), -ref.array())) < tol


# actions, cocycle, kernel

def mobius(g: Mat2C, z: complex, eps: float = EPS_SING) -> complex:
    den = g.c * z + g.d
    if abs(den) <= eps:
        raise PoleAtPoint(f"|cz + d| = {abs(den):.3e} at z = {z}")
    return (g.a * z + g.b) / den


def cocycle_J(g: Mat2C, z: complex, eps: float = EPS_SING) -> complex:
    val = g.c * z + g.d
    if abs(val) <= eps:
        raise PoleAtPoint(f"J(g, z) = {val} vanishes")
    return val


def kernel_K(z: complex, w: complex, eps: float = EPS_SING) -> complex:
    den = 1 - z * complex(w).conjugate()
    if abs(den) <= eps:
        raise KernelSingularity(f"1 - z conj(w) = {den}")
    return 1 / den


def u_G_point(z: complex) -> complex:
    if abs(z) >= 1:
        raise OutOfDomain(f"|z| = {abs(z)} >= 1")
    return 1 / cmath.sqrt(1 - z * z)


# exponential

def _as_traceless(X) -> np.ndarray:
    X = np.asarray(X, dtype=complex)
    if X.shape != (2, 2):
        raise InvalidInput("expected a 2x2 matrix")
    scale = max(1.0, frob(X))
    if abs(X[0, 0] + X[1, 1]) > 1e-12 * scale:
        raise NonTraceless(f"trace = {X[0, 0] + X[1, 1]}")
    return X


def exp2(X) -> Mat2C:
    """exp of a traceless 2x2 matrix, using X^2 = delta I with delta = -det X."""
    X = _as_traceless(X)
    delta = -(X[0, 0] * X[1, 1] - X[0, 1] * X[1, 0])
    if abs(delta) < NILPOTENT_TOL:
        ch = 1 + delta / 2 + delta**2 / 24 + delta**3 / 720
        sh = 1 + delta / 6 + delta**2 / 120 + delta**3 / 5040
    else:
        s = cmath.sqrt(delta)
        ch = cmath.cosh(s)
        sh = cmath.sinh(s) / s
    m = ch * np.eye(2) + sh * X
    return Mat2C.from_array(m)


def exp_series(X, terms: int = 30) -> np.ndarray:
    """Scaling-and-squaring Taylor oracle, independent of the closed form."""
    X = np.asarray(X, dtype=complex)
    k = max(0, int(np.ceil(np.log2(max(frob(X), 1e-300)))) + 1)
    Y = X / 2**k
    out = np.eye(2, dtype=complex)
    term = np.eye(2, dtype=complex)
    for n in range(1, terms):
        term = term @ Y / n
        out = out + term
    for _ in range(k):
        out = out @ out
    return out


# generators and involutions

def bracket(A, B) -> np.ndarray:
    A = np.asarray(A)
    B = np.asarray(B)
    return A @ B - B @ A


H = np.array([[1, 0], [0, -1]], dtype=complex)
E_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
E_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


def generators() -> dict[str, np.ndarray]:
    """X0, Y0, Z0 and the coroot H, plus the full-size triple X, Y, Z."""
    Y = E_PLUS + E_MINUS
    Z = -1j * (E_PLUS - E_MINUS)
    X = -1j * H
    return {
        "H": H.copy(),
        "X0": -0.5j * H,
        "Y0": 0.5 * Y,
        "Z0": 0.5 * Z,
        "X": X,
        "Y": Y,
        "Z": Z,
    }


def tau_flip(X) -> np.ndarray:
    return FLIP @ np.asarray(X, dtype=complex) @ FLIP


def theta_cartan(X) -> np.ndarray:
    return -np.asarray(X, dtype=complex).conj().T


# random elements

def random_sl2c(rng: np.random.Generator, min_d: float = 0.0) -> Mat2C:
    while True:
        a, b, c = rng.normal(size=3) + 1j * rng.normal(size=3)
        if abs(a) < 0.05:
            continue
        d = (1 + b * c) / a
        if abs(d) > min_d:
            return Mat2C(a, b, c, d)


def random_su11(rng: np.random.Generator, max_norm: float = 3.0) -> Mat2C:
    """[[alpha, beta], [conj beta, conj alpha]] with operator norm at most max_norm."""
    r = rng.uniform(0, np.log(max_norm))
    chi, phi = rng.uniform(0, 2 * np.pi, size=2)
    alpha = np.cosh(r) * cmath.exp(1j * chi)
    beta = np.sinh(r) * cmath.exp(1j * phi)
    return Mat2C(alpha, beta, beta.conjugate(), alpha.conjugate())


def random_disc_point(rng: np.random.Generator, radius: float = 0.95) -> complex:
    rad = radius * np.sqrt(rng.uniform())
    return complex(rad * cmath.exp(1j * rng.uniform(0, 2 * np.pi)))


def is_su11(g: Mat2C, tol: float = 1e-10) -> bool:
    return abs(g.d - g.a.conjugate()) < tol and abs(g.c - g.b.conjugate()) < tol
