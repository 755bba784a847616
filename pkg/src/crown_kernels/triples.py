"""Registry of causally symmetric triples and the block su(1,1)-triple family."""

from __future__ import annotations

import ast
import json
import operator
import re
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import numpy as np

from . import mat2
from .errors import InvalidInput, OracleMismatch, UnknownTriple
from .rootsys import RestrictedRootSystem, Weight, rho, zeta

# ---------------------------------------------------------------- registry

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.FloorDiv: operator.floordiv,
    ast.Mod: operator.mod,
}


def _eval_expr(expr: str, n: int | None) -> int:
    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return node.value
        if isinstance(node, ast.Name) and node.id == "n":
            if n is None:
                raise UnknownTriple("this family takes no parameter n")
            return n
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise ValueError(f"unsupported registry expression {expr!r}")

    return ev(ast.parse(expr, mode="eval"))


def _format_name(template: str, n: int | None) -> str:
    if n is None:
        return template

    def sub(m):
        coef = int(m.group(1) or 1)
        off = int(m.group(2) or 0)
        return str(coef * n - off)

    return re.sub(r"(\d*)n(?:-(\d+))?", sub, template)


def slug(name: str) -> str:
    s = name.replace("*", "_star").replace("-", "m").replace("+", "_plus_")
    s = re.sub(r"[^A-Za-z0-9]+", "_", s)
    return s.strip("_")


@lru_cache(maxsize=1)
def load_registry() -> dict:
    text = resources.files("crown_kernels").joinpath("data/registry.json").read_text()
    return json.loads(text)


def registry_version() -> int:
    return load_registry()["version"]


def calibration() -> dict:
    return dict(load_registry()["calibration"])


def families() -> list[dict]:
    return list(load_registry()["triples"])


def family_slugs() -> list[str]:
    return [slug(f["g_name"]) for f in families()]


def _find_family(g_name: str) -> dict:
    key = slug(g_name)
    for fam in families():
        if slug(fam["g_name"]) == key:
            return fam
    raise UnknownTriple(f"no registry family for g = {g_name!r}")


def valid_parameters(g_name: str, upto: int = 8) -> list[int | None]:
    fam = _find_family(g_name)
    if fam["n"] is None:
        return [None]
    return list(range(fam["n"]["min"], upto + 1))


def registry_rows() -> list[dict]:
    """Raw registry rows."""
    return families()


@dataclass(frozen=True)
class TripleDescriptor:
    s_name: str
    g_name: str
    h_name: str
    n: int | None
    rank_s: int
    rank_g: int
    rank_h: int
    d_s: int
    r_s: int
    m_min: int
    cayley_type: bool
    group_case: bool

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def factor_system(self) -> RestrictedRootSystem:
        """Root system of s, or of one factor g in the group case."""
        return RestrictedRootSystem(self.r_s, self.d_s)


def registry_lookup(g_name: str, n: int | None = None) -> TripleDescriptor:
    fam = _find_family(g_name)
    if fam["n"] is None:
        if n is not None:
            raise UnknownTriple(f"{fam['g_name']} takes no parameter n")
    else:
        if n is None or n < fam["n"]["min"]:
            raise UnknownTriple(f"{fam['g_name']} needs n >= {fam['n']['min']}, got {n}")
    desc = TripleDescriptor(
        s_name=_format_name(fam["s_name"], n),
        g_name=_format_name(fam["g_name"], n),
        h_name=_format_name(fam["h_name"], n),
        n=n,
        rank_s=_eval_expr(fam["rank_s"], n),
        rank_g=_eval_expr(fam["rank_g"], n),
        rank_h=_eval_expr(fam["rank_h"], n),
        d_s=_eval_expr(fam["d_s"], n),
        r_s=_eval_expr(fam["r_s"], n),
        m_min=_eval_expr(fam["m_min"], n),
        cayley_type=bool(fam["cayley_type"]),
        group_case=bool(fam["group_case"]),
    )
    check_rank_identity(desc)
    return desc


def check_rank_identity(desc: TripleDescriptor) -> bool:
    if not (desc.rank_h == desc.rank_g and 2 * desc.rank_g == desc.rank_s):
        raise OracleMismatch(f"rank identity fails for {desc.s_name}")
    return True


def all_descriptors(upto: int = 8) -> list[TripleDescriptor]:
    out = []
    for fam in families():
        for n in valid_parameters(fam["g_name"], upto):
            out.append(registry_lookup(fam["g_name"], n))
    return out


def integrality_m(d: int, r: int) -> int:
    """Least m in {1, 2} with m (1 + d(r-1)/2) integral."""
    val = 1 + Fraction(d * (r - 1), 2)
    for m in (1, 2):
        if (m * val).denominator == 1:
            return m
    raise OracleMismatch(f"no m in {{1, 2}} for d={d}, r={r}")


def minimal_m(desc: TripleDescriptor) -> int:
    oracle = integrality_m(desc.d_s, desc.r_s)
    if oracle != desc.m_min:
        raise OracleMismatch(f"{desc.s_name}: registry m={desc.m_min}, oracle m={oracle}")
    return desc.m_min


def rho_G_c(desc: TripleDescriptor) -> Weight:
    """rho_G^c as a weight of the (factor) system of s.

    Group case: half of rho of the factor. For the three simple cases only
    the pairing with the highest root is pinned down, so the weight is a
    multiple of 2*zeta carrying that value in every coordinate, except
    sp(2n,R) where it is half of rho of s.
    """
    rs = desc.factor_system
    if desc.group_case:
        return Fraction(1, 2) * rho(rs)
    key = descriptor_family_slug(desc)
    n = desc.n
    if key == "sp_n_C":
        return Fraction(1, 2) * rho(rs)
    if key == "sp_n_n":
        value = Fraction(1, 2) * Fraction(1 + 2 * (n - 1), 2)
    elif key == "so_1_n":
        value = Fraction(n - 1, 4)
    else:
        raise UnknownTriple(f"no rho_G^c rule for {desc.g_name}")
    return 2 * value * zeta(rs)


def _find_family_by_desc(desc: TripleDescriptor) -> dict:
    for fam in families():
        if _format_name(fam["g_name"], desc.n) == desc.g_name and \
                _format_name(fam["s_name"], desc.n) == desc.s_name:
            return fam
    raise UnknownTriple(desc.g_name)


def descriptor_family_slug(desc: TripleDescriptor) -> str:
    return slug(_find_family_by_desc(desc)["g_name"])


# ------------------------------------------------------- su(1,1) families

# Bracket table realized by X = -iH, Y = E+ + E-, Z = -i(E+ - E-) in su(1,1).
# The matrix oracle fixes [X, Z] = -2Y; the table with +2Y holds exactly for
# the split triple (H, Y, iZ), see SPLIT_BRACKETS.
BRACKETS = {("X", "Y"): (2, "Z"), ("X", "Z"): (-2, "Y"), ("Y", "Z"): (-2, "X")}
SPLIT_BRACKETS = {("X", "Y"): (2, "Z"), ("X", "Z"): (2, "Y"), ("Y", "Z"): (-2, "X")}


def _embed(block: np.ndarray, j: int, r: int) -> np.ndarray:
    out = np.zeros((2 * r, 2 * r), dtype=complex)
    out[2 * j:2 * j + 2, 2 * j:2 * j + 2] = block
    return out


@dataclass(frozen=True)
class SU11TripleFamily:
    r: int
    X: tuple[np.ndarray, ...]
    Y: tuple[np.ndarray, ...]
    Z: tuple[np.ndarray, ...]
    H: tuple[np.ndarray, ...]
    E_plus: tuple[np.ndarray, ...]
    E_minus: tuple[np.ndarray, ...]
    X0: np.ndarray
    Y0: np.ndarray
    Z0: np.ndarray

    def split(self, j: int) -> dict[str, np.ndarray]:
        """(H_j, Y_j, iZ_j): the split triple, on which SPLIT_BRACKETS is exact."""
        return {"X": self.H[j], "Y": self.Y[j], "Z": 1j * self.Z[j]}


def build_su11_family(r: int) -> SU11TripleFamily:
    if r < 1:
        raise InvalidInput("r must be >= 1")
    gen = mat2.generators()
    X = tuple(_embed(gen["X"], j, r) for j in range(r))
    Y = tuple(_embed(gen["Y"], j, r) for j in range(r))
    Z = tuple(_embed(gen["Z"], j, r) for j in range(r))
    H = tuple(_embed(gen["H"], j, r) for j in range(r))
    Ep = tuple(_embed(mat2.E_PLUS, j, r) for j in range(r))
    Em = tuple(_embed(mat2.E_MINUS, j, r) for j in range(r))
    return SU11TripleFamily(
        r=r, X=X, Y=Y, Z=Z, H=H, E_plus=Ep, E_minus=Em,
        X0=-0.5j * sum(H), Y0=0.5 * sum(Y), Z0=0.5 * sum(Z),
    )


def _block_exp(fam: SU11TripleFamily, A: np.ndarray) -> np.ndarray:
    out = np.zeros_like(A, dtype=complex)
    for j in range(fam.r):
        sl = slice(2 * j, 2 * j + 2)
        out[sl, sl] = mat2.exp2(A[sl, sl]).array()
    return out


def _block_inv(M: np.ndarray) -> np.ndarray:
    out = np.zeros_like(M)
    for j in range(M.shape[0] // 2):
        sl = slice(2 * j, 2 * j + 2)
        out[sl, sl] = mat2.Mat2C.from_array(M[sl, sl]).inv().array()
    return out


def cayley_element(fam: SU11TripleFamily) -> np.ndarray:
    return _block_exp(fam, 0.5j * np.pi * fam.Y0)


def cayley_apply(fam: SU11TripleFamily, X: np.ndarray) -> np.ndarray:
    C = cayley_element(fam)
    return C @ X @ _block_inv(C)


def flip_matrix(r: int) -> np.ndarray:
    return np.kron(np.eye(r), mat2.FLIP)


def tau(fam: SU11TripleFamily, X: np.ndarray) -> np.ndarray:
    F = flip_matrix(fam.r)
    return F @ X @ F


def theta(X: np.ndarray) -> np.ndarray:
    return -np.asarray(X).conj().T


def sigma_involution(fam: SU11TripleFamily, X: np.ndarray) -> np.ndarray:
    S = _block_exp(fam, 1j * np.pi * fam.Y0)
    return S @ theta(X) @ _block_inv(S)


def ad_spectrum(A: np.ndarray, basis: list[np.ndarray]) -> np.ndarray:
    """Eigenvalues of ad A restricted to span(basis), assumed ad-invariant."""
    B = np.array([b.ravel() for b in basis]).T
    cols = [np.linalg.lstsq(B, mat2.bracket(A, b).ravel(), rcond=None)[0] for b in basis]
    return np.linalg.eigvals(np.array(cols).T)


def block_basis(fam: SU11TripleFamily) -> list[np.ndarray]:
    out = []
    for j in range(fam.r):
        out.extend([fam.X[j], fam.Y[j], fam.Z[j]])
    return out
