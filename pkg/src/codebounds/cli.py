"""Command-line front end.

Subcommands mirror the library: delsarte, theta, ball, projective,
triple, scan (a (n, w) grid at fixed d), and validate-kernel. Results
print as short human tables or as one JSON record per line.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import bounds
from .blockdiag import validate_kernel_small
from .schemes import Graph, SpaceSpec


def _parse_int_list(text: str) -> List[int]:
    """Accept "8", "8,12,16" and "18..24" forms."""
    out: List[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty integer list: {text!r}")
    return out


def _weights(args) -> Optional[List[int]]:
    if getattr(args, "weight_set", None):
        return _parse_int_list(args.weight_set)
    if getattr(args, "w", None) is not None:
        return list(range(args.w + 1))
    return None


def _emit(result: bounds.BoundResult, fmt: str) -> int:
    if fmt == "json":
        print(result.to_json())
    else:
        print(f"bound {result.bound}")
        cert = "" if result.certified is None \
            else f"  (certified {float(result.certified):.9f})"
        print(f"value {result.dual:.6f}{cert}")
        print(f"status {result.status}  time {result.wall_time_ms:.0f} ms")
        for w in result.warnings:
            print(f"warning: {w}")
    ok = result.status == "optimal" or result.certified is not None
    return 0 if ok else 2


def _cmd_delsarte(args) -> int:
    return _emit(bounds.delsarte_lp_bound(args.n, args.d), args.format)


def _cmd_theta(args) -> int:
    with open(args.graph) as fh:
        graph = Graph.from_json(fh.read())
    variant = "theta" if args.variant == "plain" else "theta_prime"
    return _emit(bounds.theta_bound(graph, variant, tol=args.tol), args.format)


def _cmd_ball(args) -> int:
    res = bounds.ball_sdp_bound(args.n, args.d, _weights(args),
                                tol=args.tol, cache_dir=args.cache_dir)
    return _emit(res, args.format)


def _cmd_projective(args) -> int:
    res = bounds.projective_sdp_bound(args.n, args.q, args.d,
                                      tol=args.tol, cache_dir=args.cache_dir)
    return _emit(res, args.format)


def _cmd_triple(args) -> int:
    res = bounds.triple_sdp_bound(args.n, args.f, Fraction(args.m),
                                  tol=args.tol, cache_dir=args.cache_dir)
    return _emit(res, args.format)


def _scan_cell(task: Tuple[int, int, int, float, Optional[str]]) -> Dict[str, object]:
    n, w, d, tol, cache_dir = task
    try:
        res = bounds.ball_sdp_bound(n, d, range(w + 1), tol=tol,
                                    cache_dir=cache_dir)
        rec = res.to_record()
        rec["n"], rec["w"] = n, w
        return rec
    except Exception as exc:  # cell failures must not kill the grid
        return {"n": n, "w": w, "error": str(exc)}


def _cmd_scan(args) -> int:
    ns = _parse_int_list(args.n)
    ws = _parse_int_list(args.w)
    tasks = [(n, w, args.d, args.tol, args.cache_dir)
             for n in ns for w in ws if w <= n]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            cells = list(pool.map(_scan_cell, tasks))
    else:
        cells = [_scan_cell(t) for t in tasks]
    by_pos = {(c["n"], c["w"]): c for c in cells}
    failed = [c for c in cells if "error" in c]

    if args.format == "json":
        for c in cells:
            print(json.dumps(c))
    else:
        head = "n\\w " + "".join(f"{w:>8d}" for w in ws)
        print(f"d={args.d}")
        print(head)
        for n in ns:
            row = [f"{n:>4d}"]
            for w in ws:
                c = by_pos.get((n, w))
                if c is None:
                    row.append(f"{'-':>8s}")
                elif "error" in c:
                    row.append(f"{'x':>8s}")
                else:
                    row.append(f"{c['bound']:>8d}")
            print("".join(row))
        for c in failed:
            print(f"failed ({c['n']},{c['w']}): {c['error']}", file=sys.stderr)
    return 2 if failed else 0


def _cmd_validate_kernel(args) -> int:
    if args.q is not None:
        spec = SpaceSpec.projective(args.n, args.q)
    else:
        spec = SpaceSpec.hamming(args.n, _weights(args))
    try:
        rep = validate_kernel_small(spec, seed=args.seed, theta_d=args.d)
    except AssertionError as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        print(json.dumps(rep))
    else:
        for key, val in rep.items():
            print(f"{key}: {val}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="bounds",
        description="Upper bounds for codes via symmetry-reduced LPs and SDPs")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, cache=True):
        p.add_argument("--tol", type=float, default=1e-8,
                       help="solver tolerance (default 1e-8)")
        p.add_argument("--format", choices=("table", "json"), default="table")
        if cache:
            p.add_argument("--cache-dir",
                           default=os.environ.get("BOUNDS_CACHE_DIR"),
                           help="kernel cache directory (env BOUNDS_CACHE_DIR)")

    p = sub.add_parser("delsarte", help="exact distance-distribution LP bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    common(p, cache=False)
    p.set_defaults(func=_cmd_delsarte)

    p = sub.add_parser("theta", help="Lovasz theta of an explicit graph")
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--variant", choices=("plain", "prime"), default="plain")
    common(p, cache=False)
    p.set_defaults(func=_cmd_theta)

    p = sub.add_parser("ball", help="SDP bound for codes in a Hamming ball")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--w", type=int, help="ball radius (weights 0..w)")
    p.add_argument("--weight-set", help="explicit weight list, e.g. 0,2,4")
    common(p)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("projective", help="SDP bound for subspace codes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    common(p)
    p.set_defaults(func=_cmd_projective)

    p = sub.add_parser("triple", help="three-point pseudo-distance bound")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", choices=("ghd", "radial", "avg_radial"),
                   required=True)
    p.add_argument("--m", required=True,
                   help="pseudo-distance threshold (fraction allowed)")
    common(p)
    p.set_defaults(func=_cmd_triple)

    p = sub.add_parser("scan", help="grid of ball bounds at fixed d")
    p.add_argument("--n", required=True, help="lengths, e.g. 18..24 or 18,20")
    p.add_argument("--w", required=True, help="radii, e.g. 8..10 or 8,12,16")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    common(p)
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("validate-kernel", help="self-check of the block kernels")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, help="projective space order")
    p.add_argument("--w", type=int, help="ball radius")
    p.add_argument("--weight-set")
    p.add_argument("--d", type=int, help="distance for the theta cross-check")
    p.add_argument("--seed", type=int, default=0)
    common(p, cache=False)
    p.set_defaults(func=_cmd_validate_kernel)
    return top


def _validate_ranges(args) -> None:
    n = getattr(args, "n", None)
    if isinstance(n, int) and n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    d = getattr(args, "d", None)
    if d is not None:
        if d < 1:
            raise ValueError(f"d must be at least 1, got {d}")
        if isinstance(n, int) and d > n:
            raise ValueError(f"d={d} exceeds n={n}")
    w = getattr(args, "w", None)
    if isinstance(w, int) and isinstance(n, int) and not 0 <= w <= n:
        raise ValueError(f"w={w} outside 0..{n}")
    q = getattr(args, "q", None)
    if q is not None and q < 2:
        raise ValueError(f"q must be at least 2, got {q}")
    if getattr(args, "m", None) is not None and Fraction(args.m) < 1:
        raise ValueError(f"m must be at least 1, got {args.m}")
    if args.tol <= 0:
        raise ValueError(f"tol must be positive, got {args.tol}")
    if getattr(args, "jobs", 1) < 1:
        raise ValueError(f"jobs must be at least 1, got {args.jobs}")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        _validate_ranges(args)
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
