"""Command-line front end; every command prints one JSON report.

Exit codes: 0 success, 1 usage or resource-limit error, 2 counterexample found.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

import mpmath

from . import __version__
from .balls import ball_size_profile, optimal_ball_pairs
from .bounds import (
    lemma2_applies,
    theorem1_bound,
    theorem5_bound,
    theorem6_count_check,
    theorem6_filter,
    theorem7_classify,
    trivial_product,
)
from .commgame import build_matrix, max_all_ones_rectangle
from .core import ResourceLimitError, SizeVector, ValidationError, domain_size, normalize
from .families import are_r_cross_intersecting, check_mutual_duality
from .search import Mode, full_max, monotone_max
from .verify import DEFAULT_SEED, DEFAULT_TRIALS, SUITES, run_suite

EXIT_OK, EXIT_ERROR, EXIT_COUNTEREXAMPLE = 0, 1, 2


class UsageError(Exception):
    pass


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _num(value) -> str:
    """Exact numbers as decimal strings; rationals as 'a/b' unless integral."""
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, mpmath.mpf):
        return mpmath.nstr(value, 20)
    return str(value)


def _search_payload(result, args) -> dict:
    witnesses = []
    families = result.witness_families() if domain_size(result.p) <= args.max_domain_explicit else None
    for idx, pair in enumerate(result.witnesses):
        if families is not None:
            fa, fb = families[idx]
            # re-validate before emitting
            if not (are_r_cross_intersecting(fa, fb, result.r) and check_mutual_duality(fa, fb, result.r)):
                raise RuntimeError("internal error: witness failed re-validation")
        if result.mode is Mode.MONOTONE:
            a, b = pair
            entry = {"S_A": a.sorted_masks(), "S_B": b.sorted_masks()}
            shape_a, shape_b = a.ball_shape(), b.ball_shape()
            entry["balls"] = None if shape_a is None or shape_b is None else {
                "A": {"T": list(shape_a[0]), "radius": shape_a[1]},
                "B": {"T": list(shape_b[0]), "radius": shape_b[1]},
            }
        else:
            a, b = pair
            entry = {"A": a.to_json(), "B": b.to_json()}
        entry["size_A"] = _num(families[idx][0].cardinality if families else _support_size(result.p, pair[0]))
        entry["size_B"] = _num(families[idx][1].cardinality if families else _support_size(result.p, pair[1]))
        witnesses.append(entry)
    return {
        "mode": result.mode.value,
        "max_product": _num(result.max_product),
        "optima": len(result.witnesses),
        "witnesses": witnesses,
        "stats": {"nodes": result.stats.nodes, "pruned": result.stats.pruned},
    }


def _support_size(p, system) -> int:
    from .compress import size_from_support

    return size_from_support(p, system)


def cmd_search(args, p: SizeVector, r: int) -> tuple[dict, int]:
    if args.mode == "full":
        result = full_max(p, r, max_domain=args.max_domain)
    else:
        result = monotone_max(p, r, prune=not args.no_pruning, max_n=args.max_n)
    payload = _search_payload(result, args)
    if not args.enumerate_optima:
        payload["witnesses"] = payload["witnesses"][:1]
    return payload, EXIT_OK


def cmd_balls(args, p: SizeVector, r: int) -> tuple[dict, int]:
    if r == 0:
        raise UsageError("ball pairs need r >= 1 after normalization")
    product, specs = optimal_ball_pairs(p, r)
    best = specs[0]
    return {
        "best": best.to_json(),
        "product": _num(product),
        "all_optimal": [s.to_json() for s in specs],
        "ball_sizes": [_num(v) for v in ball_size_profile(p, best.coords)],
    }, EXIT_OK


def cmd_bounds(args, p: SizeVector, r: int) -> tuple[dict, int]:
    out = {"theorem1": _num(theorem1_bound(p))}
    if r >= 1:
        out["trivial_product"] = _num(trivial_product(p, r))
        rep = theorem7_classify(p, r)
        out["theorem7_regime"] = rep.theorem7_regime.value
        out["n_bound"] = None if rep.n_bound is None else _num(rep.n_bound)
        out["predicted_product"] = None if rep.predicted_product is None else _num(rep.predicted_product)
        out["predicted_shapes"] = list(rep.predicted_shapes)
        out["sorted_permutation"] = [i + 1 for i in rep.permutation]
        if r < p.n:
            l2 = lemma2_applies(p, r)
            out["lemma2"] = {"holds": l2.holds, "with_equality": l2.with_equality,
                             "lhs": _num(l2.lhs), "reason": l2.reason}
    if args.T is not None:
        t = args.T
        out["theorem5"] = _num(theorem5_bound(p, t))
        if r >= 1:
            out["theorem6_admissible"] = theorem6_filter(p, r, t)
            out["theorem6_count_ok"] = theorem6_count_check(p, r, t)
    return out, EXIT_OK


def cmd_verify(args, p: SizeVector | None, r: int | None) -> tuple[dict, int]:
    rep = run_suite(args.suite, p=p, r=r, trials=args.trials, seed=args.seed)
    payload = {
        "suite": rep.suite,
        "trials": rep.trials,
        "failures": rep.failures,
        "passed": rep.passed,
        "seed": args.seed,
        "details": {k: (_num(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                    for k, v in rep.details.items()},
        "certificate": rep.certificate,
    }
    return payload, EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE


def cmd_commgame(args, p: SizeVector, r: int) -> tuple[dict, int]:
    m = build_matrix(p, r, max_domain=args.max_domain_matrix)
    rect = max_all_ones_rectangle(m)
    out = {
        "size": m.size,
        "ones": m.ones(),
        "max_area": _num(rect.area),
        "rows": sorted(rect.rows),
        "cols": sorted(rect.cols),
    }
    if args.dump:
        with open(args.dump, "w") as fh:
            fh.write(m.to_text())
        out["dump"] = args.dump
    return out, EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xintersect", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_int_list, help="size vector, e.g. 3,3,3,3,3")
    common.add_argument("--r", type=int, help="intersection parameter r >= 1")
    common.add_argument("--pretty", action="store_true", help="key/value table instead of JSON")
    common.add_argument("--max-n", type=int, default=6, help="cap on n for monotone search")
    common.add_argument("--max-domain", type=int, default=16, help="cap on |S_p| for full search")
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("search", parents=[common], help="exact maximum of |A|*|B|")
    s.add_argument("--mode", choices=["monotone", "full"], default="monotone")
    s.add_argument("--enumerate-optima", action="store_true", help="list every optimal pair")
    s.add_argument("--no-pruning", action="store_true", help="disable the product-filter pruning")

    sub.add_parser("balls", parents=[common], help="best Hamming-ball pair")

    b = sub.add_parser("bounds", parents=[common], help="closed-form bounds and regime")
    b.add_argument("--T", type=_int_list, default=None, help="coordinate set, 1-based")

    v = sub.add_parser("verify", parents=[common], help="property suites")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)

    c = sub.add_parser("commgame", parents=[common], help="largest all-1 submatrix")
    c.add_argument("--dump", help="write the matrix as 0/1 text to this file")
    return parser


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    args.max_domain_explicit = 1 << 16
    args.max_domain_matrix = max(args.max_domain, 512)
    start = time.perf_counter()
    envelope = {"command": args.command, "p": args.p, "r": args.r}
    try:
        if args.p is None or args.r is None:
            if args.command != "verify":
                raise UsageError("--p and --r are required")
            p = r = None
            if args.p is not None:
                p = SizeVector(tuple(args.p))
            if args.r is not None:
                r = args.r
        else:
            p, r = normalize(args.p, args.r)
        envelope["normalized_p"] = None if p is None else list(p)
        envelope["normalized_r"] = r
        handler = {"search": cmd_search, "balls": cmd_balls, "bounds": cmd_bounds,
                   "verify": cmd_verify, "commgame": cmd_commgame}[args.command]
        result, code = handler(args, p, r)
        envelope["result"] = result
    except (UsageError, ValidationError, ResourceLimitError, ValueError) as exc:
        envelope["error"] = {"type": type(exc).__name__, "message": str(exc)}
        code = EXIT_ERROR
    envelope["elapsed_ms"] = int((time.perf_counter() - start) * 1000)
    envelope["version"] = __version__
    if getattr(args, "pretty", False):
        stdout.write(render_table(envelope))
    else:
        json.dump(envelope, stdout)
        stdout.write("\n")
    return code


def _flatten(prefix: str, value, rows: list[tuple[str, str]]) -> None:
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, rows)
    elif isinstance(value, list) and value and isinstance(value[0], dict):
        for idx, item in enumerate(value):
            _flatten(f"{prefix}[{idx}]", item, rows)
    else:
        rows.append((prefix, json.dumps(value) if not isinstance(value, str) else value))


def render_table(envelope: dict) -> str:
    rows: list[tuple[str, str]] = []
    _flatten("", envelope, rows)
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def main() -> None:
    sys.exit(run())
