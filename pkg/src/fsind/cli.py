"""Command-line interface: verify, indicator, statesum, equivariance-check."""
from __future__ import annotations

import argparse
import concurrent.futures
import os
import sys

import numpy as np

from . import files
from .category import FusionData, builtin_category
from .center import CenterData, GrothendieckVector, builtin_center, \
    verify_half_braiding
from .equivariance import SL2ZElement, act_indices, verify_equivariance
from .indicators import IndicatorQuery, nu, nu_table
from .statesum import evaluate, torus_skeleton


_BUILTINS = ("pointed:", "fibonacci", "ising")


def _is_builtin(source: str) -> bool:
    return source in ("fibonacci", "ising") or source.startswith("pointed:")


def load_sources(args):
    """Resolve --category/--center into data, applying a tolerance override."""
    tol = args.tol if args.tol is not None else \
        float(os.environ.get("FSIND_TOL", "1e-9"))
    if _is_builtin(args.category):
        cat = builtin_category(args.category, tolerance=tol)
    else:
        cat = files.load_category(args.category)
        cat.tolerance = tol if args.tol is not None else cat.tolerance
    center = None
    checks = {}
    if getattr(args, "center", None):
        center, checks = files.load_center(cat, args.center)
    elif _is_builtin(args.category):
        center = builtin_center(args.category, cat)
    return cat, center, checks


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _resolve_v(cat: FusionData, name: str):
    return list(range(cat.rank)) if name == "all" else [cat.label(name)]


def _resolve_x(center: CenterData, name: str):
    if name == "all":
        return list(range(len(center.simples)))
    return [center.index(name)]


def cmd_verify(args) -> int:
    cat, center, checks = load_sources(args)
    report = cat.verify()
    rows = [("pentagon", report.max_pentagon_residual),
            ("unit", report.max_unit_residual),
            ("duality", report.max_duality_residual),
            ("dimension", report.max_dimension_residual),
            ("pivotal", report.max_pivotal_residual)]
    failed = not report.ok
    if center is not None:
        hb = 0.0
        for X in center.simples:
            rep = verify_half_braiding(cat, X)
            hb = max(hb, rep.max_residual)
            failed = failed or not rep.ok
        rows.append(("half_braiding", hb))
        rel = center.verify()
        for key, val in rel.items():
            rows.append((f"modular_{key}", val))
            failed = failed or val > max(cat.tolerance, 1e-8)
        for mname, mat in checks.items():
            ref = center.s_matrix() if mname == "S" else center.t_matrix()
            res = float(np.max(np.abs(mat - ref)))
            rows.append((f"file_{mname}", res))
            failed = failed or res > max(cat.tolerance, 1e-8)
    lines = [f"{name}: {val:.3e} {'FAIL' if val > max(cat.tolerance, 1e-8) else 'ok'}"
             for name, val in rows]
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


def _indicator_cell(source, center_path, n, r, xi, v, tol):
    cat, center, _ = load_sources(argparse.Namespace(
        category=source, center=center_path, tol=tol))
    return nu(cat, center, IndicatorQuery(n, r, center.simples[xi], v))


def cmd_indicator(args) -> int:
    cat, center, _ = load_sources(args)
    if center is None:
        raise SystemExit("indicator needs center data (--center or a built-in)")
    xs = _resolve_x(center, args.X)
    vs = _resolve_v(cat, args.V)
    cells = [(xi, v) for xi in xs for v in vs]
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            futs = [pool.submit(_indicator_cell, args.category, args.center,
                                args.n, args.r, xi, v, args.tol)
                    for xi, v in cells]
            values = [f.result() for f in futs]
    else:
        values = [nu(cat, center, IndicatorQuery(args.n, args.r,
                                                 center.simples[xi], v))
                  for xi, v in cells]
    table = np.array(values, dtype=np.complex128).reshape(len(xs), len(vs))
    text = files.format_table([center.simples[xi].name for xi in xs],
                              [cat.names[v] for v in vs], table,
                              corner=f"nu[n={args.n},r={args.r}]")
    _emit(args, text)
    return 0


def cmd_statesum(args) -> int:
    cat, center, _ = load_sources(args)
    if args.skeleton:
        skel = files.load_skeleton(args.skeleton)
    else:
        skel = torus_skeleton(args.n, args.r)
    if "X" in skel.decorations:
        if center is None:
            raise SystemExit("decorated skeleton needs center data")
        skel.decorations["X"] = center.simples[center.index(args.X)]
    if "V" in skel.decorations:
        skel.decorations["V"] = 0 if args.V is None else cat.label(args.V)
    trace_log = [] if args.trace else None
    value = evaluate(cat, skel, center, trace_log=trace_log)
    lines = [f"statesum {files.format_complex(value)}"]
    if args.trace and trace_log is not None:
        for coloring, weight, term in trace_log:
            cstr = ",".join(f"{f}={cat.names[c]}"
                            for f, c in sorted(coloring.items()))
            lines.append(f"  {cstr} dim {files.format_complex(weight)} "
                         f"value {files.format_complex(term)}")
    status = 0
    if args.compare:
        if center is None or "X" not in skel.decorations:
            raise SystemExit("--compare needs a decorated torus skeleton")
        want = nu(cat, center, IndicatorQuery(
            args.n, args.r, skel.decorations["X"], skel.decorations["V"]))
        residual = abs(value - want)
        lines.append(f"indicator {files.format_complex(want)}")
        lines.append(f"residual {residual:.3e}")
        status = 0 if residual <= max(cat.tolerance, 1e-7) else 1
    _emit(args, "\n".join(lines) + "\n")
    return status


def _equiv_cell(source, center_path, word, n, r, xi, tol, rank):
    cat, center, _ = load_sources(argparse.Namespace(
        category=source, center=center_path, tol=tol))
    g = SL2ZElement.from_word(word)
    worst = 0.0
    xi_vec = GrothendieckVector.basis_vector(center, xi)
    for v in range(cat.rank):
        worst = max(worst, verify_equivariance(cat, center, v, (n, r), g, xi_vec))
    return worst


def cmd_equivariance(args) -> int:
    cat, center, _ = load_sources(args)
    if center is None:
        raise SystemExit("equivariance-check needs center data")
    for ch in args.word:
        if ch not in "stST":
            raise SystemExit(f"invalid word character {ch!r}; use s, t, S, T")
    g = SL2ZElement.from_word(args.word)
    cells = [(n, r) for n in range(1, args.nmax + 1) for r in range(0, n + 1)]
    rows = []
    worst = 0.0
    if args.jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(args.jobs) as pool:
            futs = {}
            for (n, r) in cells:
                for xi in range(len(center.simples)):
                    futs[(n, r, xi)] = pool.submit(
                        _equiv_cell, args.category, args.center, args.word,
                        n, r, xi, args.tol, cat.rank)
            for (n, r) in cells:
                res = max(futs[(n, r, xi)].result()
                          for xi in range(len(center.simples)))
                rows.append(((n, r), res))
                worst = max(worst, res)
    else:
        for (n, r) in cells:
            res = 0.0
            for xi in range(len(center.simples)):
                xv = GrothendieckVector.basis_vector(center, xi)
                for v in range(cat.rank):
                    res = max(res, verify_equivariance(
                        cat, center, v, (n, r), g, xv))
            rows.append(((n, r), res))
            worst = max(worst, res)
    tol = max(cat.tolerance, 1e-7)
    lines = [f"word {args.word or '(identity)'}"]
    for (n, r), res in rows:
        lines.append(f"n={n} r={r} residual {res:.3e}")
    lines.append(f"max {worst:.3e} {'FAIL' if worst > tol else 'ok'}")
    _emit(args, "\n".join(lines) + "\n")
    return 0 if worst <= tol else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fsind",
        description="Frobenius-Schur indicators of spherical fusion categories, "
                    "by rotation traces and by a solid-torus state sum")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--category", required=True,
                       help="built-in name (pointed:N[:m], fibonacci, ising) or file")
        p.add_argument("--center", default=None, help="center data file")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override (env FSIND_TOL)")
        p.add_argument("--jobs", type=int, default=1)
        p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("verify", help="run all validators")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("indicator", help="indicator tables")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--X", default="all")
    p.add_argument("--V", default="all")
    p.set_defaults(fn=cmd_indicator)

    p = sub.add_parser("statesum", help="solid-torus or file-skeleton state sum")
    common(p)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--X", default="unit")
    p.add_argument("--V", default=None)
    p.add_argument("--skeleton", default=None, help="skeleton file")
    p.add_argument("--compare", action="store_true",
                   help="also compute the indicator and the residual")
    p.add_argument("--trace", action="store_true",
                   help="dump per-coloring contributions")
    p.set_defaults(fn=cmd_statesum)

    p = sub.add_parser("equivariance-check", help="Prop. 5.1 residual table")
    common(p)
    p.add_argument("--word", default="s", help="word over s,t,S,T ('' = identity)")
    p.add_argument("--nmax", type=int, default=3)
    p.set_defaults(fn=cmd_equivariance)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
