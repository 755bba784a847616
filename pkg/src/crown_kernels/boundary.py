"""Quadrature on the Shilov boundary torus of the bidisk.

The G-invariant measure on G/H is |psi|^{-2} times the normalized torus
measure; psi vanishes on the diagonal, so integrals of generic functions drop
a band |alpha - beta| < delta.
"""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _accel, mat2
from .errors import InvalidInput, InvalidSpec, OnSingularSet

DEFAULT_DELTA = 1e-2
CHUNK_ROWS = 64


def worker_count() -> int:
    raw = os.environ.get("CROWN_KERNELS_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        val = 1
    return max(1, min(val, 64))


def _reduce_chunks(fn: Callable[[int, int], complex], n: int) -> complex:
    """Evaluate fn on fixed row chunks and reduce them in order.

    The chunk layout does not depend on the worker count, so results are
    identical for any CROWN_KERNELS_THREADS setting.
    """
    bounds = [(s, min(s + CHUNK_ROWS, n)) for s in range(0, n, CHUNK_ROWS)]
    workers = worker_count()
    if workers == 1 or len(bounds) == 1:
        parts = [fn(a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda ab: fn(*ab), bounds))
    return complex(math.fsum(p.real for p in parts), math.fsum(p.imag for p in parts))


@dataclass(frozen=True)
class TorusGrid:
    n: int
    exclusion_band: float = DEFAULT_DELTA

    def __post_init__(self):
        if self.n < 8:
            raise InvalidInput("grid needs n >= 8")
        if self.exclusion_band < 0:
            raise InvalidInput("exclusion band must be >= 0")

    @property
    def nodes(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n) / self.n

    @property
    def weight(self) -> float:
        """Normalized weight of one node; the full torus has measure 1."""
        return 1.0 / (self.n * self.n)

    def kept_mask(self, rows: slice = slice(None)) -> np.ndarray:
        return _accel._torus_py.band_mask(self.n, rows, self.exclusion_band)

    def kept_measure(self) -> float:
        return float(self.kept_mask().sum()) * self.weight


def gh_density(alpha, beta, eps: float = 1e-12):
    """1 / |1 - e^{i(alpha - beta)}|^2 = 1 / (4 sin^2((alpha - beta)/2))."""
    s = np.sin(0.5 * (np.asarray(alpha, dtype=float) - np.asarray(beta, dtype=float)))
    if np.any(np.abs(s) <= eps):
        raise OnSingularSet("density evaluated on the diagonal alpha = beta")
    out = 1.0 / (4 * s * s)
    return float(out) if np.ndim(out) == 0 else out


# --------------------------------------------------------- polynomials

@dataclass(frozen=True)
class BidiskPolynomial:
    """sum of c_ab z^a conj(w)^b."""
    coeffs: Mapping[tuple[int, int], complex] = field(default_factory=dict)

    @classmethod
    def monomial(cls, a: int, b: int, c: complex = 1.0) -> "BidiskPolynomial":
        return cls({(a, b): complex(c)})

    @classmethod
    def parse(cls, spec: str) -> "BidiskPolynomial":
        """Parse sums like '1+z^2*wbar' or '2*z-3/2*wbar^3'."""
        text = spec.replace(" ", "")
        if not text:
            raise InvalidSpec("empty polynomial")
        terms = re.findall(r"[+-]?[^+-]+", text)
        out: dict[tuple[int, int], complex] = {}
        for term in terms:
            sign = -1.0 if term.startswith("-") else 1.0
            body = term.lstrip("+-")
            coef = 1.0
            a = b = 0
            for factor in body.split("*"):
                m_z = re.fullmatch(r"z(?:\^(\d+))?", factor)
                m_w = re.fullmatch(r"wbar(?:\^(\d+))?", factor)
                if m_z:
                    a += int(m_z.group(1) or 1)
                elif m_w:
                    b += int(m_w.group(1) or 1)
                else:
                    try:
                        coef *= float(Fraction(factor))
                    except (ValueError, ZeroDivisionError):
                        raise InvalidSpec(f"cannot parse factor {factor!r} in {spec!r}") from None
            out[(a, b)] = out.get((a, b), 0) + sign * coef
        return cls(out)

    def torus_factors(self, alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
        """Values on the product grid alpha x beta (outer product per term)."""
        total = np.zeros((len(alpha), len(beta)), dtype=complex)
        for (a, b), c in self.coeffs.items():
            total += c * np.outer(np.exp(1j * a * alpha), np.exp(-1j * b * beta))
        return total

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for (a, b), c in self.coeffs.items():
            out = out + c * z**a * np.conj(w) ** b
        return out


def hardy_pairing(p1: BidiskPolynomial, p2: BidiskPolynomial) -> complex:
    """Exact pairing: monomials z^a conj(w)^b are orthonormal."""
    return complex(sum(c * np.conj(p2.coeffs.get(key, 0)) for key, c in p1.coeffs.items()))


@dataclass(frozen=True)
class PsiProduct:
    """(psi p1) * conj(psi p2), kept symbolic so |psi|^2 cancels the density."""
    p1: BidiskPolynomial
    p2: BidiskPolynomial


# --------------------------------------------------------- integrals

def invariant_integral(f, grid: TorusGrid) -> complex:
    """Integral of f against the G-invariant measure, normalized torus weights."""
    alpha = grid.nodes
    n = grid.n
    if isinstance(f, PsiProduct):
        if grid.exclusion_band == 0:
            # no band: the grid sum of separable terms factors into 1-d sums
            acc = []
            for (a1, b1), c1 in sorted(f.p1.coeffs.items()):
                for (a2, b2), c2 in sorted(f.p2.coeffs.items()):
                    sa = np.exp(1j * (a1 - a2) * alpha).sum()
                    sb = np.exp(-1j * (b1 - b2) * alpha).sum()
                    acc.append(c1 * np.conj(c2) * sa * sb)
            return complex(math.fsum(v.real for v in acc), math.fsum(v.imag for v in acc)) * grid.weight

        def chunk(a, b):
            rows = slice(a, b)
            vals = f.p1.torus_factors(alpha[rows], alpha) * np.conj(f.p2.torus_factors(alpha[rows], alpha))
            return complex(np.where(grid.kept_mask(rows), vals, 0).sum())
        return _reduce_chunks(chunk, n) * grid.weight

    if grid.exclusion_band <= 0:
        raise OnSingularSet("the density needs a positive exclusion band")

    def chunk(a, b):
        rows = slice(a, b)
        A, B = np.meshgrid(alpha[rows], alpha, indexing="ij")
        keep = grid.kept_mask(rows)
        vals = np.asarray(f(A, B), dtype=complex)
        dens = np.zeros_like(A)
        dens[keep] = gh_density(A[keep], B[keep])
        return complex(np.where(keep, vals * dens, 0).sum())

    return _reduce_chunks(chunk, n) * grid.weight


def boundary_map(g: mat2.Mat2C, alpha: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Angles of g e^{i alpha} and the derivative |c e^{i alpha} + d|^{-2}."""
    e = np.exp(1j * np.asarray(alpha))
    den = g.c * e + g.d
    img = (g.a * e + g.b) / den
    return np.mod(np.angle(img), 2 * np.pi), 1.0 / np.abs(den) ** 2


def bump_mode_sum(grid: TorusGrid, x, y, u, v, jx, jy, k: int, p: int, q: int,
                  kernel=None) -> complex:
    if grid.exclusion_band <= 0:
        raise OnSingularSet("the density needs a positive exclusion band")
    kernel = kernel or _accel.density_band_sum
    arrs = [np.ascontiguousarray(a, dtype=float) for a in (x, y, u, v, jx, jy)]

    def chunk(a, b):
        return kernel(*arrs, k, p, q, grid.exclusion_band, a, b)

    return _reduce_chunks(chunk, grid.n) * grid.weight


@dataclass(frozen=True)
class InvarianceResult:
    reference: complex
    substituted: complex
    composed: complex

    @property
    def residual(self) -> float:
        scale = max(1.0, abs(self.reference))
        return max(abs(self.substituted - self.reference), abs(self.composed - self.reference)) / scale


def invariance_reference(grid: TorusGrid, k: int = 3, p: int = 1, q: int = 1, kernel=None) -> complex:
    alpha = grid.nodes
    ones = np.ones_like(alpha)
    return bump_mode_sum(grid, alpha, alpha, alpha, alpha, ones, ones, k, p, q, kernel)


def invariance_test(g: mat2.Mat2C, grid: TorusGrid, k: int = 3, p: int = 1, q: int = 1,
                    kernel=None, reference: complex | None = None) -> InvarianceResult:
    """Compare three quadratures of f rho for f = sin^{2k}((a-b)/2) e^{i(pa - qb)}.

    reference: f rho directly. substituted: (f rho)(g.) times the boundary
    Jacobians. composed: (f o g) times rho, i.e. invariance of the measure.
    """
    alpha = grid.nodes
    ones = np.ones_like(alpha)
    phi, jac = boundary_map(g, alpha)
    if reference is None:
        reference = invariance_reference(grid, k, p, q, kernel)
    sub = bump_mode_sum(grid, phi, phi, phi, phi, jac, jac, k, p, q, kernel)
    comp = bump_mode_sum(grid, phi, phi, alpha, alpha, ones, ones, k, p, q, kernel)
    return InvarianceResult(reference, sub, comp)


@dataclass(frozen=True)
class PairingResult:
    lhs: complex
    rhs: complex
    residual: float
    n: int
    delta: float


def pairing_isometry_test(p1: BidiskPolynomial, p2: BidiskPolynomial, grid: TorusGrid) -> PairingResult:
    lhs = invariant_integral(PsiProduct(p1, p2), grid)
    rhs = hardy_pairing(p1, p2)
    return PairingResult(lhs, rhs, abs(lhs - rhs), grid.n, grid.exclusion_band)


def monomials_up_to(total: int) -> list[tuple[int, int]]:
    return [(a, s - a) for s in range(total + 1) for a in range(s + 1)]


def pairing_matrix(total: int, grid: TorusGrid) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature and exact pairing matrices over monomials with a + b <= total."""
    monos = monomials_up_to(total)
    polys = [BidiskPolynomial.monomial(a, b) for a, b in monos]
    m = len(polys)
    quad = np.empty((m, m), dtype=complex)
    exact = np.empty((m, m), dtype=complex)
    for i, p in enumerate(polys):
        for j, q in enumerate(polys):
            res = pairing_isometry_test(p, q, grid)
            quad[i, j] = res.lhs
            exact[i, j] = res.rhs
    return quad, exact


# --------------------------------------------------------- Hardy norm along the ray

@dataclass
class NormEstimate:
    mode: str
    value: float
    trace: list[dict]
    diverged: bool = False


def hardy_norm_estimator(f: Callable, mode: str = "ray_lim", s_values: Sequence[float] = (0.2, 0.1, 0.05, 0.025),
                         n: int = 1024, band: Callable[[float], float] | None = None) -> NormEstimate:
    """Ray integrals I(r) of |f(r.)|^2 against the invariant measure, r = e^{-s}.

    The exclusion band shrinks with s (default delta = s). ray_sup reports the
    largest I(r); ray_lim extrapolates the last two points linearly in s to 0.
    The two modes are reported separately and never assumed equal.
    """
    if mode not in ("ray_sup", "ray_lim"):
        raise InvalidInput("mode must be ray_sup or ray_lim")
    band = band or (lambda s: s)
    trace = []
    for s in s_values:
        r = math.exp(-s)
        grid = TorusGrid(n, band(s))
        val = invariant_integral(
            lambda A, B: np.abs(f(r * np.exp(1j * A), r * np.exp(1j * B))) ** 2, grid)
        trace.append({"s": s, "r": r, "delta": grid.exclusion_band, "n": n, "value": val.real})
    vals = [t["value"] for t in trace]
    if not all(np.isfinite(vals)):
        return NormEstimate(mode, math.inf, trace, diverged=True)
    if mode == "ray_sup":
        return NormEstimate(mode, max(vals), trace)
    if len(trace) == 1:
        return NormEstimate(mode, vals[0], trace)
    (s1, v1), (s2, v2) = (trace[-2]["s"], vals[-2]), (trace[-1]["s"], vals[-1])
    slope = (v2 - v1) / (s2 - s1)
    return NormEstimate(mode, v2 - slope * s2, trace)


def psi_times(poly: BidiskPolynomial) -> Callable:
    return lambda z, w: (1 - z * np.conj(w)) * poly(z, w)


# --------------------------------------------------------- L^2 probe

DEFAULT_LADDER = (1.0, 4.0, 16.0, 64.0, 256.0)
CAUCHY_TOL = 1e-9
GROWTH_FACTOR = 2.0
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)
PANEL = 0.25


@dataclass(frozen=True)
class ProbeSpec:
    """exponents[j] = 2<lambda + rho_G^c, H^j>; multiplicities[j] on the root 2 t_j."""
    exponents: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]
    truncation: tuple[float, ...] = DEFAULT_LADDER

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(Fraction(e) for e in self.exponents))
        object.__setattr__(self, "multiplicities", tuple(int(m) for m in self.multiplicities))
        object.__setattr__(self, "truncation", tuple(float(t) for t in self.truncation))
        if len(self.exponents) != len(self.multiplicities):
            raise InvalidSpec("one multiplicity per exponent is required")
        if any(m < 0 for m in self.multiplicities):
            raise InvalidSpec("multiplicities must be non-negative")
        tr = self.truncation
        if len(tr) < 2 or any(b <= a for a, b in zip(tr, tr[1:])) or tr[0] <= 0:
            raise InvalidSpec("truncation ladder must be positive and strictly increasing")

    @classmethod
    def from_root_labels(cls, exponents, mults: Mapping[str, int], truncation=DEFAULT_LADDER) -> "ProbeSpec":
        """Labels '2t1', '2t2', ... name the long roots; others are rejected."""
        r = len(exponents)
        m = [0] * r
        for label, val in mults.items():
            hit = re.fullmatch(r"2t(\d+)", label)
            if not hit or not 1 <= int(hit.group(1)) <= r:
                raise InvalidSpec(f"unsupported root label {label!r}")
            m[int(hit.group(1)) - 1] = int(val)
        return cls(tuple(exponents), tuple(m), truncation)

    def rho_on_coroots(self) -> tuple[int, ...]:
        """rho_G^c(H^j) = m_j since the root 2 t_j takes the value 2 on H^j."""
        return self.multiplicities

    def lambda_on_coroots(self) -> tuple[Fraction, ...]:
        return tuple(e / 2 - m for e, m in zip(self.exponents, self.multiplicities))


def _log_integrand(t: np.ndarray, lam: float, m: int) -> np.ndarray:
    two_t = 2 * t
    log_cosh = two_t + np.log1p(np.exp(-2 * two_t)) - math.log(2)
    out = lam * log_cosh
    if m:
        log_sinh = two_t + np.log(-np.expm1(-2 * two_t)) - math.log(2)
        out = out + m * log_sinh
    return out


def _log_integral_1d(T: float, lam: float, m: int) -> float:
    panels = max(1, int(math.ceil(T / PANEL)))
    edges = np.linspace(0.0, T, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    t = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    logw = np.log((half[:, None] * _GL_WEIGHTS[None, :]).ravel())
    return float(np.logaddexp.reduce(logw + _log_integrand(t, lam, m)))


@dataclass
class ProbeResult:
    verdict: str
    log_trace: list[float]
    truncation: tuple[float, ...]

    @property
    def trace(self) -> list[float]:
        return [math.exp(v) if v < 700 else math.inf for v in self.log_trace]


def l2_probe(spec: ProbeSpec) -> ProbeResult:
    """Truncated integrals of prod cosh(2t_j)^{lambda(H^j)} sinh(2t_j)^{m_j} over [0,T]^r."""
    lams = [float(x) for x in spec.lambda_on_coroots()]
    logs = []
    for T in spec.truncation:
        logs.append(sum(_log_integral_1d(T, lam, m) for lam, m in zip(lams, spec.multiplicities)))
    last, prev = logs[-1], logs[-2]
    # I(T) is increasing in T, so last >= prev up to rounding
    if abs(last - prev) <= CAUCHY_TOL:
        verdict = "converges"
    elif last - prev > math.log(GROWTH_FACTOR):
        verdict = "diverges"
    else:
        verdict = "indeterminate"
    return ProbeResult(verdict, logs, spec.truncation)


def sign_criterion(spec: ProbeSpec) -> str:
    return "converges" if max(spec.exponents) < 0 else "diverges"
