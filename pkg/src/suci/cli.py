"""Command-line front end.

Exit status: 0 success, 1 domain error (integrity failure, unknown scheme or
key id, unreadable keys, ...), 2 usage error (bad arguments, malformed SUPI,
SUCI, policy or scenario text).  Diagnostics go to stderr as one line;
stdout carries only the result.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import ecies, toy_curve
from .ecies import EciesProfile
from .errors import MissingHomeKey, SuciError, UsageError
from .identifiers import parse_suci, parse_supi, serialize_suci, serialize_supi
from .protection import conceal_supi, deconceal_suci, load_key_store, load_policy, write_keypair

PROG = "suci"


class _Fail(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    """Usage errors as one diagnostic line, exit 2."""

    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _warn(message: str) -> None:
    print(f"{PROG}: warning: {message}", file=sys.stderr)


def cmd_keygen(args) -> int:
    profile = EciesProfile.from_label(args.profile)
    pair = ecies.generate_keypair(profile)
    try:
        write_keypair(args.out, pair)
    except OSError as exc:
        raise _Fail(f"cannot write key files for {args.out}: {exc.strerror or exc}", 1) from None
    print(pair.public_key.hex())
    return 0


def cmd_conceal(args) -> int:
    supi = parse_supi(args.supi)
    policy, key_path = load_policy(args.policy)
    ephemeral = None
    if args.insecure_fixed_ephemeral:
        scheme = policy.effective_scheme()
        if scheme is not None:
            try:
                ephemeral = ecies.keypair_from_private(scheme, bytes.fromhex(args.insecure_fixed_ephemeral))
            except ValueError as exc:
                raise _Fail(f"bad fixed ephemeral key: {exc}", 2) from None
    try:
        result = conceal_supi(supi, policy, ephemeral=ephemeral)
    except MissingHomeKey as exc:
        where = f" (key file {key_path} not found)" if key_path else ""
        raise _Fail(f"{exc}{where}", 1) from None
    if result.downgraded:
        where = f" (key file {key_path} not found)" if key_path and policy.suci_enabled else ""
        _warn(f"{result.note}{where}")
    print(serialize_suci(result.suci))
    return 0


def cmd_deconceal(args) -> int:
    suci = parse_suci(args.suci)
    if suci.is_null:
        store = {}
    else:
        store = load_key_store(args.key, args.key_id)
    print(serialize_supi(deconceal_suci(suci, store)))
    return 0


def _curve(args) -> toy_curve.ToyCurve:
    try:
        return toy_curve.ToyCurve(args.p, args.a, args.b)
    except ValueError as exc:
        raise _Fail(str(exc), 2) from None


def cmd_curve(args) -> int:
    curve = _curve(args)
    if args.action == "points":
        sys.stdout.write(toy_curve.points_csv(curve))
        return 0

    points = curve.affine_points()
    if args.gx is not None and args.gy is not None:
        try:
            G = curve.point(args.gx, args.gy)
        except ValueError as exc:
            raise _Fail(str(exc), 2) from None
    else:
        G = max(points, key=lambda pt: (curve.order(pt), -pt.x, -pt.y))
    n = curve.order(G)
    t0 = time.perf_counter()
    P = curve.scalar_mul(args.k, G)
    forward = time.perf_counter() - t0
    t0 = time.perf_counter()
    k = curve.ecdlp_brute_force(G, P, n)
    backward = time.perf_counter() - t0
    print(f"curve: {curve}")
    print(f"points: {len(points) + 1}")
    print(f"generator: ({G.x}, {G.y}) order {n}")
    print(f"public: {P if P is toy_curve.INFINITY else f'({P.x}, {P.y})'} = {args.k} * G")
    print(f"recovered_k: {k}")
    print(f"forward_seconds: {forward:.6f}")
    print(f"brute_force_seconds: {backward:.6f}")
    return 0


def cmd_sim(args) -> int:
    from .netsim import bundled_scenarios, load_scenario, run_registration
    from .netsim.geometry import distance

    if args.list:
        print("\n".join(bundled_scenarios()))
        return 0
    if not args.scenario:
        raise _Fail("a scenario file or bundled scenario name is required", 2)
    scenario = load_scenario(args.scenario)
    trace = run_registration(scenario)
    if args.trace:
        try:
            with open(args.trace, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(trace.export())
        except OSError as exc:
            raise _Fail(f"cannot write trace {args.trace}: {exc.strerror or exc}", 1) from None

    captures = trace.sorted_captures()
    print(f"final_state: {trace.final_state.value}")
    print(f"serving_cell: {trace.serving_cell or '-'}")
    print(f"captures: {len(captures)}")
    print(f"identifying_captures: {sum(c.identifying for c in captures)}")
    for c in captures:
        label = "identity" if c.identifying else "opaque"
        print(f"captured: {c.adversary} {label} {c.identity}")
        if c.position is not None:
            err = distance(c.position, trace.ue_true_position)
            print(f"position_estimate: {c.adversary} {c.position[0]:.6f},{c.position[1]:.6f} error_m={err:.3e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a home network key pair")
    p.add_argument("--profile", choices=["profile-a", "profile-b"], default="profile-a")
    p.add_argument("--out", required=True, metavar="PREFIX", help="writes PREFIX.pub and PREFIX.priv")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("conceal", help="turn a SUPI into a SUCI under an operator policy")
    p.add_argument("supi", help="e.g. 24201-534567890")
    p.add_argument("--policy", required=True, help="policy file (key = value lines)")
    p.add_argument("--insecure-fixed-ephemeral", metavar="HEX", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_conceal)

    p = sub.add_parser("deconceal", help="recover the SUPI from a SUCI (SIDF)")
    p.add_argument("suci")
    p.add_argument("--key", help="home network private key file")
    p.add_argument("--key-id", type=int, help="key id of a single-key file (default: line number, from 0)")
    p.set_defaults(func=cmd_deconceal)

    p = sub.add_parser("curve", help="toy elliptic curve demonstrations")
    p.add_argument("action", choices=["points", "ecdlp"])
    p.add_argument("--p", type=int, default=89)
    p.add_argument("--a", type=int, default=-1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--k", type=int, default=7, help="secret scalar for the ecdlp demo")
    p.add_argument("--gx", type=int)
    p.add_argument("--gy", type=int)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("sim", help="run a registration scenario")
    p.add_argument("scenario", nargs="?", help="scenario file or bundled scenario name")
    p.add_argument("--trace", metavar="OUT", help="write the JSON-lines trace here")
    p.add_argument("--list", action="store_true", help="list bundled scenarios")
    p.set_defaults(func=cmd_sim)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "deconceal" and args.key is None:
        # null-scheme SUCIs need no key; anything else does
        try:
            needs_key = not parse_suci(args.suci).is_null
        except SuciError:
            needs_key = False
        if needs_key:
            parser.error("deconceal: --key is required for ECIES SUCIs")
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return exc.code
    except UsageError as exc:
        print(f"{PROG}: error: {exc}", file=sys.stderr)
        return 2
    except SuciError as exc:
        print(f"{PROG}: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
