"""Command-line entry point.

Exit codes: 0 success, 1 verification or lemma failure, 2 usage or input
error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from typing import Optional, Sequence

from . import certify, families, oracle
from .algebra import BiquadForm, DimensionError, verify_decomposition
from .decompose import Case3SearchExhausted, VerificationError, decompose_auto
from .serialize import dumps_decomposition, dumps_form, loads_decomposition, loads_form

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _write(text: str, path: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _ints(params: Sequence[str], count: int, family: str) -> list[int]:
    if len(params) != count:
        raise UsageError(f"gen {family} takes {count} integer parameter(s), got {len(params)}")
    try:
        return [int(p) for p in params]
    except ValueError as exc:
        raise UsageError(f"gen {family}: {exc}") from exc


def build_family(family: str, params: Sequence[str]) -> BiquadForm:
    """Resolve ``gen`` arguments such as ``P 3 3 6`` or ``W 2 3 1 1 1 2 1 2``."""
    if family == "P":
        return families.gen_P(*_ints(params, 3, family))
    if family == "cyclic":
        return families.gen_cyclic(*_ints(params, 1, family))
    if family == "Q":
        m, n = _ints(params, 2, family)
        return families.gen_Q(m, n) if n >= m else families.gen_Q(n, m).transpose()
    if family == "T":
        return families.gen_T(*_ints(params, 4, family))
    if family == "W":
        if len(params) != 8:
            raise UsageError("gen W takes a_ik a_jl a_il a_jk i j k l")
        coeffs = [Fraction(p) for p in params[:4]]
        return families.gen_W(*coeffs, *_ints(params[4:], 4, family))
    if family in ("Pplus", "P+"):
        _ints(params, 0, family)
        return families.gen_P_plus()
    if family == "full":
        return families.gen_full(*_ints(params, 2, family))
    if family == "diag":
        if len(params) < 2:
            raise UsageError("gen diag takes m n followed by m*n coefficients (row-major)")
        m, n = _ints(params[:2], 2, family)
        if len(params) != 2 + m * n:
            raise UsageError(f"gen diag {m} {n} needs {m * n} coefficients")
        vals = [Fraction(p) for p in params[2:]]
        return BiquadForm.diagonal(m, n, {(a // n + 1, a % n + 1): v for a, v in enumerate(vals)})
    raise UsageError(f"unknown family {family!r} (P, cyclic, Q, T, W, Pplus, full, diag)")


def cmd_gen(args) -> int:
    _write(dumps_form(build_family(args.family, args.params)), args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    f = loads_form(_read(args.input))
    d, method = decompose_auto(f)
    _write(dumps_decomposition(d), args.out)
    print(f"squares={len(d)} verified=true method={method}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = loads_form(_read(args.form))
    d = loads_decomposition(_read(args.decomp))
    ok = verify_decomposition(f, d)
    print("VERIFIED" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_certify(args) -> int:
    cert = certify.lower_bound(loads_form(_read(args.input)))
    print(json.dumps(cert.to_dict()))
    return EXIT_OK


def cmd_scan(args) -> int:
    report = certify.scan_all_3x3_supports()
    if args.out:
        _write(report.to_csv(), args.out)
        print(report.summary())
    else:
        sys.stdout.write(report.to_csv())
        print(report.summary(), file=sys.stderr)
    return EXIT_OK if report.max_upper == 6 and report.tight_at_max else EXIT_FAIL


def cmd_oracle(args) -> int:
    f = loads_form(_read(args.input))
    seed = None if args.random_seed else args.seed
    res = oracle.search(f, args.rank, restarts=args.restarts, max_iters=args.iters, tol=args.tol, seed=seed)
    print(json.dumps(res.to_dict(include_factor=res.success)))
    return EXIT_OK


def cmd_table(args) -> int:
    print("Known bounds on BSR(m,n)")
    sys.stdout.write(certify.summary_text(args.max_m, args.max_n))
    print()
    sys.stdout.write(certify.summary_csv(args.max_m, args.max_n))
    print()
    sys.stdout.write(certify.bounds_csv(certify.bsr_bounds_table(args.max_m, args.max_n)))
    return EXIT_OK


def cmd_lemmas(args) -> int:
    failed = False
    report = certify.check_rectangle_lemma()
    for size in (7, 8):
        subsets = [s for s in report.rectangles if len(s) == size]
        bad = [s for s in report.failures if len(s) == size]
        ok = not bad and len(subsets) == report.sizes[size]
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} rectangle lemma: {len(subsets)}/{report.sizes[size]} {size}-cell supports contain a rectangle")
        bound = size - 2
        ok = report.max_squares.get(size) == bound
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} {size}-term simple forms: at most {report.max_squares.get(size)} squares (bound {bound})")
    for m in range(3, args.max_m + 1):
        s = certify.support(families.gen_cyclic(m))
        ok, _ = certify.check_rectangle_compat(s)
        failed |= not ok
        print(f"{'PASS' if ok else 'FAIL'} cyclic support m={m}: rectangle-compatible, |S|={len(s)}")
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="biquad-sos", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="emit a named form as JSON")
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("decompose", help="decompose a form read as JSON")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="exactly check a decomposition against a form")
    p.add_argument("--form", required=True)
    p.add_argument("--decomp", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("certify", help="lower-bound certificate for a simple/diagonal form")
    p.add_argument("--in", dest="input")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("scan", help="bounds for all 512 simple 3x3 supports (CSV)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("oracle", help="numeric local search for an R-square decomposition")
    p.add_argument("--in", dest="input")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--restarts", type=int, default=50)
    p.add_argument("--iters", type=int, default=5000)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--random-seed", action="store_true", help="ignore --seed and draw fresh entropy")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("table", help="known bounds on BSR(m,n)")
    p.add_argument("--max-m", type=int, default=8)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("lemmas", help="exhaustive support lemmas")
    p.add_argument("--max-m", type=int, default=12)
    p.set_defaults(func=cmd_lemmas)
    return ap


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (VerificationError, Case3SearchExhausted) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except (UsageError, ValueError, DimensionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
