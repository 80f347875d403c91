"""Command-line interface: ``qlrc build | certify | bounds | validate | selftest``.

Exit codes: 0 success, 1 input error, 2 precondition or guard failure,
3 inconclusive (budget), 4 verification failure.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import certificate as certs
from .asymptotic import asym_bounds, crossover_delta, curves_csv, delta_grid, emit_curves
from .css import q_cm_bound, q_singleton_bound, q_singleton_dim_bound, q_singleton_rhs, css_compose, quantum_locality_certificate
from .errors import BudgetExceeded, OracleInfeasible, PreconditionError, VerificationError
from .families import css_grs_pair_build, cyclic_family_one, cyclic_family_two
from .galois import FieldSpec, field_for_order
from .locality import LocalityRefused, cm_bound, locality_certificate, singleton_like_bound
from .matcode import DEFAULT_BUDGET, LinearCode, certify_distance

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3, 4


class InputError(Exception):
    pass


def read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ("budget", "threads"):
            raise InputError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = value
    return out


def _settings(args) -> tuple[int, int | None]:
    cfg = read_config(getattr(args, "config", None))
    try:
        budget = int(args.budget if getattr(args, "budget", None) is not None else cfg.get("budget", DEFAULT_BUDGET))
        threads = args.threads if getattr(args, "threads", None) is not None else cfg.get("threads")
        threads = int(threads) if threads is not None else None
    except ValueError as exc:
        raise InputError(f"bad numeric setting: {exc}") from None
    if budget < 1 or (threads is not None and threads < 1):
        raise InputError("budget and threads must be positive")
    if threads is not None:
        os.environ["QLRC_THREADS"] = str(threads)
    return budget, threads


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# -- build -----------------------------------------------------------------------------------

BUILDERS = {
    "grs-pair": (css_grs_pair_build, ("q", "d", "u", "r")),
    "cyclic-1": (cyclic_family_one, ("q", "u", "r", "l")),
    "cyclic-2": (cyclic_family_two, ("q", "u", "r")),
}


def cmd_build(args) -> int:
    budget, _ = _settings(args)
    fn, names = BUILDERS[args.family]
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"{args.family} needs --{' --'.join(missing)}")
    t0 = time.perf_counter()
    build = fn(*(getattr(args, n) for n in names), budget=budget, search_check=not args.no_search_check)
    run = {"wall_clock_s": round(time.perf_counter() - t0, 6), "budget": budget}
    cert = certs.build_certificate(build, run)
    _emit(certs.dump(cert), args.out)
    n, kappa, delta = build.parameters
    print(f"[[{n}, {kappa}, {delta}]]_{build.quantum.q} locality {build.r}: {cert['body']['status']}", file=sys.stderr)
    return EXIT_OK if cert["body"]["status"] == "ok" else EXIT_VERIFY


# -- certify ------------------------------------------------------------------------------------

def load_code(path: str) -> LinearCode:
    """Accept either a serialised code or ``{"q": q, "generator": [[...], ...]}``."""
    try:
        obj = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None
    try:
        if "field" in obj:
            return LinearCode.from_json(obj)
        F = FieldSpec.from_json(obj["field_spec"]) if "field_spec" in obj else field_for_order(int(obj["q"]))
        G = np.array(obj["generator"], dtype=np.int64)
        return LinearCode.from_generator(F, G, G.shape[1] if G.ndim == 2 else None)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a code description ({exc})") from None


def cmd_certify(args) -> int:
    budget, threads = _settings(args)
    codes = [load_code(p) for p in args.codes]
    if len(codes) == 2 and not args.quantum:
        raise InputError("two codes form a CSS pair: pass --quantum")
    t0 = time.perf_counter()
    try:
        if args.quantum:
            C1, C2 = (codes[0], codes[0]) if len(codes) == 1 else codes
            Q = css_compose(C1, C2, budget, threads)
            if not Q.certified:
                raise BudgetExceeded("relative weight", budget + 1, budget)
            Q = Q.with_locality(quantum_locality_certificate(Q, args.r, budget))
            cert = certs.quantum_certificate(Q, args.r, construction={"id": "user-pair", "params": {"codes": len(codes)}})
        else:
            C = certify_distance(codes[0], budget, threads=threads)
            cert = certs.classical_certificate(C, locality_certificate(C, args.r, budget))
    except (BudgetExceeded, OracleInfeasible) as exc:
        partial = {"body": {"status": "inconclusive", "reason": str(exc)}, "run": {"budget": budget}}
        _emit(certs.dump(partial), args.out)
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    cert["run"] = {"wall_clock_s": round(time.perf_counter() - t0, 6), "budget": budget}
    _emit(certs.dump(cert), args.out)
    return EXIT_OK if cert["body"]["status"] == "ok" else EXIT_VERIFY


def cmd_validate(args) -> int:
    try:
        cert = certs.load(Path(args.certificate).read_text())
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        raise InputError(str(exc)) from None
    try:
        certs.revalidate(cert)
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed certificate: {exc}") from None
    print("certificate re-validated", file=sys.stderr)
    return EXIT_OK


# -- bounds -------------------------------------------------------------------------------------

def cmd_bounds(args) -> int:
    if args.kind == "asymptotic":
        step, stop = Fraction(args.step), Fraction(args.max)
        text = curves_csv(emit_curves(args.r, args.q, delta_grid(step, stop)))
        _emit(text, args.out)
        return EXIT_OK
    lines = ["bound,statement"]
    n, r = args.n, args.r
    if n is None or r is None:
        raise InputError("bounds eval needs --n and --r")
    if args.kappa is not None:
        rhs = q_singleton_rhs(n, args.kappa, r)
        lines.append(f"Q-Singleton,2*delta <= {rhs} (delta <= {q_singleton_bound(n, args.kappa, r)})")
    if args.delta is not None:
        lines.append(f"Q-Singleton-dim,kappa <= {q_singleton_dim_bound(n, args.delta, r)}")
    elif args.kappa is not None:
        for delta in range(1, n + 1):
            kmax = q_singleton_dim_bound(n, delta, r)
            if kmax < 1:
                break
            lines.append(f"Q-Singleton-dim,delta={delta}: kappa <= {kmax}")
    if None not in (args.k1, args.k2, args.delta, args.q):
        lines.append(f"Q-CM,kappa <= {q_cm_bound(args.k1, args.k2, args.delta, r, args.q)}")
    if args.k is not None:
        lines.append(f"C-Singleton,d <= {singleton_like_bound(n, args.k, r)}")
    if args.d is not None and args.q is not None:
        lines.append(f"C-CM,k <= {cm_bound(n, args.d, r, args.q)}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


# -- selftest --------------------------------------------------------------------------------------

SELFTEST_BUILDS = [
    ("grs-pair", {"q": 4, "d": 2, "u": 1, "r": 3}, (4, 2, 2)),
    ("grs-pair", {"q": 7, "d": 3, "u": 1, "r": 4}, (5, 1, 3)),
    ("cyclic-1", {"q": 13, "u": 1, "r": 3, "l": 1}, (4, 2, 2)),
    ("cyclic-1", {"q": 29, "u": 4, "r": 6, "l": 1}, (28, 20, 2)),
    ("cyclic-2", {"q": 13, "u": 2, "r": 5}, (12, 6, 3)),
]


def cmd_selftest(args) -> int:
    budget, _ = _settings(args)
    failures = 0
    for family, params, expected in SELFTEST_BUILDS:
        fn, names = BUILDERS[family]
        try:
            build = fn(*(params[n] for n in names), budget=budget)
            cert = certs.load(certs.dump(certs.build_certificate(build)))
            certs.revalidate(cert)
            ok = build.parameters == expected and build.verdict.optimal
        except Exception as exc:  # report and keep going
            ok = False
            print(f"  {type(exc).__name__}: {exc}")
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'} {family} {params} -> {expected}")
    point = asym_bounds(2, 2, crossover_delta(2, 2))
    ok = point.r_dim == point.r_cm
    failures += not ok
    print(f"{'PASS' if ok else 'FAIL'} asymptotic crossover r=2 q=2")
    return EXIT_OK if not failures else EXIT_VERIFY


# -- entry point -------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="maximum enumeration size (default 2^28)")
    common.add_argument("--config", default=argparse.SUPPRESS, help="key=value file with budget/threads")
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads (env QLRC_THREADS)")

    p = argparse.ArgumentParser(prog="qlrc", description=__doc__.splitlines()[0], parents=[common])
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", parents=[common], help="build and certify a code family")
    b.add_argument("family", choices=sorted(BUILDERS))
    for name in ("q", "d", "u", "r", "l"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--out")
    b.add_argument("--no-search-check", action="store_true", help="skip the search-based locality cross-check")
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("certify", parents=[common], help="certify user-supplied codes")
    c.add_argument("codes", nargs="+")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--quantum", action="store_true")
    c.add_argument("--out")
    c.set_defaults(func=cmd_certify)

    v = sub.add_parser("validate", parents=[common], help="re-check a certificate file")
    v.add_argument("certificate")
    v.set_defaults(func=cmd_validate)

    bo = sub.add_parser("bounds", parents=[common], help="evaluate bounds or emit asymptotic curves")
    bo.add_argument("kind", choices=["eval", "asymptotic"])
    for name in ("n", "k", "kappa", "d", "delta", "k1", "k2"):
        bo.add_argument(f"--{name}", type=int)
    bo.add_argument("--r", type=int)
    bo.add_argument("--q", type=int)
    bo.add_argument("--step", default="1/100")
    bo.add_argument("--max", default="1/2")
    bo.add_argument("--out")
    bo.set_defaults(func=cmd_bounds)

    s = sub.add_parser("selftest", parents=[common], help="build and re-validate the reference instances")
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.command == "bounds" and args.kind == "asymptotic" and (args.r is None or args.q is None):
        args.r = 2 if args.r is None else args.r
        args.q = 2 if args.q is None else args.q
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionError, LocalityRefused) as exc:
        print(f"precondition failed: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (BudgetExceeded, OracleInfeasible) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (ValueError, ArithmeticError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
