"""Command-line front end. Every result is printed as one JSON document."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Iterator

import numpy as np

from . import acceptance, boundary, kernels, rootsys, triples
from .errors import CrownKernelsError

EXIT_OK, EXIT_OP, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def to_json(obj: Any) -> Any:
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [to_json(x) for x in obj.tolist()]
    if isinstance(obj, dict):
        return {str(k): to_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json(x) for x in obj]
    if hasattr(obj, "value") and hasattr(obj, "name") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


def result(command: str, inputs: dict, outputs: dict, ref: str, tolerance=None, seed=None,
           grid=None, status: dict | None = None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "outputs": outputs,
        "provenance": {"ref": ref, "tolerance": tolerance, "seed": seed, "grid": grid},
        "status": status or {"ok": True},
    }


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise UsageError(f"complex value must be [re, im], got {v}")
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def _points(text: str) -> list[kernels.BidiskPoint]:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"--points is not valid JSON: {exc}") from None
    if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
        raise UsageError("--points must be a list of [z, w] pairs")
    try:
        coords = [(_complex(p[0]), _complex(p[1])) for p in raw]
    except (TypeError, ValueError) as exc:
        raise UsageError(f"--points: {exc}") from None
    return [kernels.BidiskPoint(z, w) for z, w in coords]


def _list(text: str, conv, flag: str) -> list:
    try:
        return [conv(x) for x in text.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"{flag}: cannot parse list {text!r}") from None


# ------------------------------------------------------------ commands

def cmd_classify(args) -> Iterator[dict]:
    if args.all:
        reg = triples.load_registry()
        yield result("classify", {"all": True}, {"registry": reg}, "triples.registry")
        return
    if args.g is None:
        raise UsageError("classify needs --g NAME (with --n INT) or --all")
    desc = triples.registry_lookup(args.g, args.n)
    yield result("classify", {"g": args.g, "n": args.n},
                 {"descriptor": desc.as_dict(), "registry_version": triples.registry_version()},
                 "triples.registry_lookup")


def cmd_params(args) -> Iterator[dict]:
    desc = triples.registry_lookup(args.g, args.n)
    rs = desc.factor_system
    beta = rootsys.highest_root(rs)
    rgc = triples.rho_G_c(desc)
    chk = rootsys.check_hardy_conditions(rs, rgc)
    out = {
        "descriptor": desc.as_dict(),
        "m_min": triples.minimal_m(desc),
        "root_system": {"rank": rs.rank, "d": rs.d, "type": rs.type_label},
        "zeta": list(rootsys.zeta(rs).coeffs),
        "rho_n": list(rootsys.rho_n(rs).coeffs),
        "rho_c": list(rootsys.rho_c(rs).coeffs),
        "rho": list(rootsys.rho(rs).coeffs),
        "rho_on_beta": rootsys.pair(rs, rootsys.rho(rs), beta),
        "rho_G_c": list(rgc.coeffs),
        "wallach_threshold": rootsys.wallach_threshold(rs),
        "hardy": chk.as_dict(),
        "calibration": triples.calibration(),
    }
    yield result("params", {"g": args.g, "n": args.n}, out, "rootsys.check_hardy_conditions", tolerance=0)


def cmd_wallach(args) -> Iterator[dict]:
    try:
        z = Fraction(args.z)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--z must be a rational, got {args.z!r}") from None
    if args.r < 1 or args.d < 1:
        raise UsageError("--r and --d must be positive")
    rs = rootsys.RestrictedRootSystem(args.r, args.d)
    out = {"membership": rootsys.wallach_contains(rs, z), "regular": rootsys.is_regular(rs, z),
           "threshold": rootsys.wallach_threshold(rs), "discrete_points": rootsys.wallach_points(rs)}
    yield result("wallach", {"r": args.r, "d": args.d, "z": z}, out, "rootsys.wallach_contains", tolerance=0)


def cmd_kernel(args) -> Iterator[dict]:
    kid = kernels.CLI_KERNEL_NAMES[args.which]
    pts = _points(args.points)
    inputs = {"which": args.which, "points": [[p.z, p.w] for p in pts]}
    if kid is kernels.KernelId.PSI:
        for p in pts:
            val = kernels.kernel_value(kid, p)
            yield result("kernel", {"which": args.which, "point": [p.z, p.w]},
                         {"value": val.value, "kernel_id": val.kernel_id}, "kernels.psi")
        return
    if len(pts) != 2:
        raise UsageError(f"--which {args.which} needs exactly two points")
    val = kernels.kernel_value(kid, pts[0], pts[1])
    tol = kernels.DUAL_PATH_TOL if kid is kernels.KernelId.XI else None
    yield result("kernel", inputs, {"value": val.value, "kernel_id": val.kernel_id},
                 f"kernels.{'k_xi' if kid is kernels.KernelId.XI else 'k_classical'}", tolerance=tol)


def cmd_gram(args) -> Iterator[dict]:
    names = {"classical": kernels.KernelId.CLASSICAL, "xi": kernels.KernelId.XI}
    if args.which not in names:
        raise UsageError("--which must be classical or xi")
    if not 1 <= args.n <= 64:
        raise UsageError("--n must be in 1..64")
    rng = np.random.default_rng(args.seed)
    pts = [kernels.random_bidisk_point(rng) for _ in range(args.n)]
    lo, tr = kernels.gram_min_eigenvalue(pts, names[args.which])
    out = {"min_eigenvalue": lo, "trace": tr, "ratio": lo / tr, "psd": lo >= -1e-10 * tr}
    yield result("gram", {"which": args.which, "n": args.n, "seed": args.seed}, out,
                 "kernels.gram_min_eigenvalue", tolerance=1e-10, seed=args.seed)


def cmd_boundary_pair(args) -> Iterator[dict]:
    p1 = boundary.BidiskPolynomial.parse(args.p1)
    p2 = boundary.BidiskPolynomial.parse(args.p2)
    if args.grid < 8:
        raise UsageError("--grid must be >= 8")
    if args.delta < 0:
        raise UsageError("--delta must be >= 0")
    grid = boundary.TorusGrid(args.grid, args.delta)
    res = boundary.pairing_isometry_test(p1, p2, grid)
    out = {"lhs": res.lhs, "rhs": res.rhs, "residual": res.residual, "n": res.n, "delta": res.delta,
           "seed": None}
    yield result("boundary-pair", {"p1": args.p1, "p2": args.p2, "grid": args.grid, "delta": args.delta},
                 out, "boundary.pairing_isometry_test", tolerance=1e-8,
                 grid={"n": args.grid, "delta": args.delta})


def cmd_probe_l2(args) -> Iterator[dict]:
    exps = _list(args.exponents, Fraction, "--exponents")
    mults = _list(args.mults, int, "--mults")
    truncs = _list(args.truncations, float, "--truncations") if args.truncations else list(boundary.DEFAULT_LADDER)
    spec = boundary.ProbeSpec(tuple(exps), tuple(mults), tuple(truncs))
    res = boundary.l2_probe(spec)
    out = {"verdict": res.verdict, "sign_criterion": boundary.sign_criterion(spec),
           "lambda_on_coroots": list(spec.lambda_on_coroots()),
           "log_trace": res.log_trace, "truncation": list(res.truncation)}
    yield result("probe-l2", {"exponents": exps, "mults": mults, "truncations": truncs}, out,
                 "boundary.l2_probe", tolerance=boundary.CAUCHY_TOL)


def cmd_selftest(args) -> Iterator[dict]:
    chosen = acceptance.select(args.filter)
    if not chosen:
        raise UsageError(f"--filter {args.filter!r} matches no criterion")
    for k in chosen:
        r = acceptance.CRITERIA[k]()
        status = {"ok": True} if r.passed else {"error": {"code": "CriterionFailed", "message": r.line()}}
        yield result("selftest", {"filter": args.filter, "criterion": k},
                     {"name": r.name, "passed": r.passed, "details": r.details},
                     f"acceptance.criterion_{k}", status=status)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crown-kernels", description="Hardy space kernel and parameter checks.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("classify", help="registry descriptors")
    s.add_argument("--g")
    s.add_argument("--n", type=int)
    s.add_argument("--all", action="store_true")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("params", help="root system data and Hardy conditions")
    s.add_argument("--g", required=True)
    s.add_argument("--n", type=int)
    s.set_defaults(func=cmd_params)

    s = sub.add_parser("wallach", help="Wallach set membership")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--z", required=True)
    s.set_defaults(func=cmd_wallach)

    s = sub.add_parser("kernel", help="evaluate psi, the classical or the crown kernel")
    s.add_argument("--which", choices=sorted(kernels.CLI_KERNEL_NAMES), required=True)
    s.add_argument("--points", required=True)
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("gram", help="Gram matrix minimum eigenvalue on random points")
    s.add_argument("--which", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gram)

    s = sub.add_parser("boundary-pair", help="boundary pairing of two bidisk polynomials")
    s.add_argument("--p1", required=True)
    s.add_argument("--p2", required=True)
    s.add_argument("--grid", type=int, default=512)
    s.add_argument("--delta", type=float, default=0.0)
    s.set_defaults(func=cmd_boundary_pair)

    s = sub.add_parser("probe-l2", help="truncated L2 integrability probe")
    s.add_argument("--exponents", required=True)
    s.add_argument("--mults", required=True)
    s.add_argument("--truncations")
    s.set_defaults(func=cmd_probe_l2)

    s = sub.add_parser("selftest", help="run the acceptance checks")
    s.add_argument("--filter")
    s.set_defaults(func=cmd_selftest)
    return p


def _emit(doc: dict, stream) -> None:
    stream.write(json.dumps(to_json(doc), sort_keys=True) + "\n")


def run(argv: list[str] | None = None, stream=None) -> int:
    stream = stream or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv else None
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a subcommand is required")
        code = EXIT_OK
        for doc in args.func(args):
            _emit(doc, stream)
            if "error" in doc["status"]:
                code = EXIT_OP
        return code
    except UsageError as exc:
        _emit(result(command or "", {"argv": argv}, {}, "cli.run",
                     status={"error": {"code": "UsageError", "message": str(exc)}}), stream)
        return EXIT_USAGE
    except CrownKernelsError as exc:
        _emit(result(command or "", {"argv": argv}, {}, "cli.run",
                     status={"error": {"code": exc.code, "message": str(exc)}}), stream)
        return EXIT_OP


def main() -> None:
    sys.exit(run())
