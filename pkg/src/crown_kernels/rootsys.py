"""Restricted root systems of type C_r / BC_r in the strongly orthogonal basis.

Weights are stored as exact rational coordinates in the basis gamma_1..gamma_r,
with the pairing <gamma_i, gamma_j> = delta_ij.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import IndexOutOfRange, InvalidInput, NonTubeSystem, RankMismatch

Rational = Fraction | int


@dataclass(frozen=True)
class RestrictedRootSystem:
    rank: int
    d: int
    b: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("rank must be >= 1")
        if self.d < 1:
            raise InvalidInput("d must be >= 1")
        if self.b < 0:
            raise InvalidInput("b must be >= 0")

    @property
    def is_tube(self) -> bool:
        return self.b == 0

    @property
    def type_label(self) -> str:
        return f"C{self.rank}" if self.is_tube else f"BC{self.rank}"


@dataclass(frozen=True)
class Weight:
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if any(isinstance(c, float) for c in self.coeffs):
            raise TypeError("weight coefficients must be exact rationals, not floats")
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))

    @property
    def rank(self) -> int:
        return len(self.coeffs)

    def _check(self, other: "Weight"):
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")

    def __add__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(x + y for x, y in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Weight") -> "Weight":
        self._check(other)
        return Weight(tuple(x - y for x, y in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-x for x in self.coeffs))

    def __mul__(self, s: Rational) -> "Weight":
        if isinstance(s, float):
            raise TypeError("weights only accept exact scalars")
        s = Fraction(s)
        return Weight(tuple(s * x for x in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)


def weight(rs: RestrictedRootSystem, coeffs: Iterable[Rational]) -> Weight:
    w = Weight(tuple(coeffs))
    if w.rank != rs.rank:
        raise RankMismatch(f"expected {rs.rank} coefficients, got {w.rank}")
    return w


def zero(rs: RestrictedRootSystem) -> Weight:
    return Weight((Fraction(0),) * rs.rank)


def basis(rs: RestrictedRootSystem, i: int) -> Weight:
    """gamma_i, 1-based."""
    if not 1 <= i <= rs.rank:
        raise IndexOutOfRange(f"index {i} not in 1..{rs.rank}")
    return Weight(tuple(Fraction(int(k == i - 1)) for k in range(rs.rank)))


def zeta(rs: RestrictedRootSystem) -> Weight:
    return Weight((Fraction(1, 2),) * rs.rank)


def highest_root(rs: RestrictedRootSystem) -> Weight:
    return basis(rs, 1)


def noncompact_positive_roots(rs: RestrictedRootSystem) -> list[tuple[Weight, int]]:
    """(gamma_i + gamma_j)/2 for i < j with multiplicity d, and gamma_i with multiplicity 1."""
    out = []
    r = rs.rank
    for i in range(1, r + 1):
        out.append((basis(rs, i), 1))
        for j in range(i + 1, r + 1):
            out.append((Fraction(1, 2) * (basis(rs, i) + basis(rs, j)), rs.d))
    return out


def compact_positive_roots(rs: RestrictedRootSystem) -> list[tuple[Weight, int]]:
    out = []
    r = rs.rank
    for i in range(1, r + 1):
        for j in range(i + 1, r + 1):
            out.append((Fraction(1, 2) * (basis(rs, i) - basis(rs, j)), rs.d))
        if rs.b:
            out.append((Fraction(1, 2) * basis(rs, i), 2 * rs.b))
    return out


def _half_sum(rs: RestrictedRootSystem, roots: list[tuple[Weight, int]]) -> Weight:
    acc = zero(rs)
    for root, mult in roots:
        acc = acc + mult * root
    return Fraction(1, 2) * acc


def rho_n_from_roots(rs: RestrictedRootSystem) -> Weight:
    return _half_sum(rs, noncompact_positive_roots(rs))


def rho_n(rs: RestrictedRootSystem) -> Weight:
    """(1 + d(r-1)/2) zeta, checked against the root half-sum for tube type."""
    val = (1 + Fraction(rs.d * (rs.rank - 1), 2)) * zeta(rs)
    if rs.is_tube:
        other = rho_n_from_roots(rs)
        if other != val:
            raise AssertionError(f"rho_n paths disagree: {val} vs {other}")
    return val


def rho_c(rs: RestrictedRootSystem) -> Weight:
    return _half_sum(rs, compact_positive_roots(rs))


def rho(rs: RestrictedRootSystem) -> Weight:
    return rho_n(rs) + rho_c(rs)


def pair(rs: RestrictedRootSystem, lam: Weight, mu: Weight) -> Fraction:
    if lam.rank != rs.rank or mu.rank != rs.rank:
        raise RankMismatch(f"weights of rank {lam.rank}, {mu.rank} in a rank {rs.rank} system")
    return sum((x * y for x, y in zip(lam.coeffs, mu.coeffs)), Fraction(0))


def lambda_on_coroot(rs: RestrictedRootSystem, lam: Weight, j: int) -> Fraction:
    """lam(H^j) with gamma_i(H^j) = 2 delta_ij; j is 1-based."""
    if lam.rank != rs.rank:
        raise RankMismatch(f"weight rank {lam.rank} in a rank {rs.rank} system")
    if not 1 <= j <= rs.rank:
        raise IndexOutOfRange(f"index {j} not in 1..{rs.rank}")
    return 2 * lam.coeffs[j - 1]


class Membership(str, Enum):
    CONTINUOUS = "continuous_part"
    DISCRETE = "discrete_point"
    NOT_MEMBER = "not_member"


def _require_tube(rs: RestrictedRootSystem):
    if not rs.is_tube:
        raise NonTubeSystem(f"{rs.type_label} (b={rs.b}) is not of tube type")


def wallach_threshold(rs: RestrictedRootSystem) -> Fraction:
    return -Fraction(rs.d * (rs.rank - 1), 2)


def wallach_points(rs: RestrictedRootSystem) -> list[Fraction]:
    _require_tube(rs)
    return [-Fraction(rs.d * k, 2) for k in range(rs.rank)]


def wallach_contains(rs: RestrictedRootSystem, z: Rational) -> Membership:
    _require_tube(rs)
    z = Fraction(z)
    if z < wallach_threshold(rs):
        return Membership.CONTINUOUS
    if z in wallach_points(rs):
        return Membership.DISCRETE
    return Membership.NOT_MEMBER


def is_regular(rs: RestrictedRootSystem, z: Rational) -> bool:
    _require_tube(rs)
    return Fraction(z) < wallach_threshold(rs)


@dataclass(frozen=True)
class HardyCheck:
    lambda_h: Weight
    square_integrable_value: Fraction  # <2 lambda_h + rho, beta>
    square_integrable: bool
    l2_value: Fraction  # <lambda_h + rho_G^c, beta>
    l2: bool
    regular: bool

    def as_dict(self) -> dict:
        return {
            "lambda_h": [str(c) for c in self.lambda_h.coeffs],
            "two_lambda_plus_rho_on_beta": str(self.square_integrable_value),
            "square_integrable": self.square_integrable,
            "lambda_plus_rho_gc_on_beta": str(self.l2_value),
            "l2_condition": self.l2,
            "regular": self.regular,
        }


def check_hardy_conditions(rs: RestrictedRootSystem, rho_gc: Weight) -> HardyCheck:
    _require_tube(rs)
    if rho_gc.rank != rs.rank:
        raise RankMismatch(f"rho_G^c has rank {rho_gc.rank}, system has rank {rs.rank}")
    beta = highest_root(rs)
    lam = -rho_n(rs)
    v1 = pair(rs, 2 * lam + rho(rs), beta)
    v2 = pair(rs, lam + rho_gc, beta)
    # lambda_h is a multiple of zeta; its scalar is twice any coefficient
    z = 2 * lam.coeffs[0]
    reg = is_regular(rs, z) and wallach_contains(rs, z) is Membership.CONTINUOUS
    return HardyCheck(lam, v1, v1 < 0, v2, v2 < 0, reg)
