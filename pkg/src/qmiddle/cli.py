"""Command line front end.

Thin client over the service handlers; every subcommand runs in
process. Exit codes: 0 success / verified, 1 certificate rejected,
2 usage or parse problem, 3 construction failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (CertificateFormatError, ConstructionError,
                     InvariantViolation, UsageError)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_CONSTRUCTION = 3


def _parse_poly(text: str) -> list[int]:
    try:
        coeffs = [int(part) for part in text.split(",")]
    except ValueError:
        raise UsageError(f"bad --poly value: {text!r}")
    if len(coeffs) < 2:
        raise UsageError("--poly needs at least two coefficients")
    return coeffs


def _cmd_build(args: argparse.Namespace) -> int:
    from .service import handle_build
    poly = _parse_poly(args.poly) if args.poly else None
    cert, summary = handle_build(args.q, args.k, args.seed, args.ell,
                                 poly, args.require_g1, args.retry_cap)
    text = json.dumps(cert, separators=(",", ":")) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(f"built q={summary['q']} k={summary['k']} "
          f"vertices={summary['vertices']} seed={summary['seed']} "
          f"ell={summary['ell']} g={summary['g']} flips={summary['flips']} "
          f"({summary['elapsed_s']}s)", file=sys.stderr)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    from . import certio
    from .service import handle_verify
    cert_doc = certio.load_raw(args.path)
    out = handle_verify(cert_doc)
    if out.get("violation"):
        v = out["violation"]
        where = "" if v["index"] is None else f" at vertex {v['index']}"
        print(f"INVALID: {v['check']}{where}: {v['detail']}")
        return EXIT_INVALID
    print(f"VALID: cycle certificate with {out['vertices']} vertices")
    return EXIT_OK


def _cmd_props(args: argparse.Namespace) -> int:
    from .service import handle_props
    mode = "exhaustive" if args.exhaustive else (
        "sampled" if args.sampled else "auto")
    out = handle_props(args.q, mode)
    for check in out["checks"]:
        status = "pass" if check["passed"] else "FAIL"
        line = f"{status}  {check['name']}"
        if check["witness"]:
            line += f"  ({check['witness']})"
        print(line)
    print(f"{'all checks passed' if out['passed'] else 'CHECKS FAILED'} "
          f"for q={out['q']} ({out['mode']})")
    return EXIT_OK if out["passed"] else EXIT_INVALID


def _cmd_stats(args: argparse.Namespace) -> int:
    from .service import handle_stats
    out = handle_stats(args.q)
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmiddle",
        description="Build and verify alternating subspace cycles")
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a cycle certificate")
    b.add_argument("--q", type=int, required=True, help="field size")
    b.add_argument("--k", type=int, default=2, choices=(1, 2))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--ell", type=int, default=None,
                   help="step size (k = 1 only)")
    b.add_argument("--poly", type=str, default=None,
                   help="comma separated modulus coefficients, ascending")
    b.add_argument("--out", type=str, default=None)
    b.add_argument("--require-g1", action="store_true",
                   help="retry seeds until the forced shift is coprime to s")
    b.add_argument("--retry-cap", type=int, default=64)
    b.set_defaults(func=_cmd_build)

    v = sub.add_parser("verify", help="independently check a certificate")
    v.add_argument("path")
    v.set_defaults(func=_cmd_verify)

    pr = sub.add_parser("props", help="run the structural property suite")
    pr.add_argument("--q", type=int, required=True)
    group = pr.add_mutually_exclusive_group()
    group.add_argument("--exhaustive", action="store_true")
    group.add_argument("--sampled", action="store_true")
    pr.set_defaults(func=_cmd_props)

    st = sub.add_parser("stats", help="orbit census for a field size")
    st.add_argument("--q", type=int, required=True)
    st.set_defaults(func=_cmd_stats)

    sv = sub.add_parser("serve", help="run the HTTP service")
    sv.add_argument("--host", type=str, default="127.0.0.1")
    sv.add_argument("--port", type=int, default=8000)
    sv.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage already; normalize anything else
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except CertificateFormatError as exc:
        print(f"MALFORMED: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, InvariantViolation) as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
