"""Command-line front end.

Subcommands: enumerate, betti, flow, gkm, twin. Every output file starts
with a header block echoing the parsed configuration, so runs are
reproducible from their artifacts alone. Exit codes: 0 pass, 2 numerical
tolerance failure, 3 resource limit, 4 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, hessfn
from ._kernels import BACKEND
from .errors import (DegenerateSpectrum, IsoflowError, NotConverged,
                     NotHessenberg, ResourceLimit)

EXIT_OK = 0
EXIT_TOLERANCE = 2
EXIT_RESOURCE = 3
EXIT_BAD_INPUT = 4


def _default_seed() -> int:
    return int(os.environ.get("ISOFLOW_SEED", "0"))


def _parse_h(text: str) -> hessfn.HessenbergFunction:
    try:
        return hessfn.validate([int(x) for x in text.split(",")])
    except ValueError as exc:
        raise NotHessenberg(str(exc)) from exc


def _header(args: argparse.Namespace, comment: str = "#") -> str:
    items = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    lines = [f"{comment} isoflow {__version__} backend={BACKEND}"]
    for k, v in items.items():
        lines.append(f"{comment} {k} = {v}")
    return "\n".join(lines) + "\n"


def _config_echo(args: argparse.Namespace) -> dict:
    return {"version": __version__, "backend": BACKEND,
            **{k: (list(v.values) if isinstance(v, hessfn.HessenbergFunction)
                   else v)
               for k, v in sorted(vars(args).items()) if k != "func"}}


def _emit(args: argparse.Namespace, text: str, header: str) -> None:
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(header)
            f.write(text)
    else:
        sys.stdout.write(header)
        sys.stdout.write(text)


def cmd_enumerate(args: argparse.Namespace) -> int:
    n = args.n
    rows = []
    total = indec = 0
    for h in hessfn.enumerate_all(n):
        total += 1
        ind = hessfn.is_indecomposable(h)
        indec += ind
        rows.append((h.values, hessfn.complex_dimension(h), ind))
    cat = hessfn.catalan(n)
    if args.format == "json":
        body = json.dumps({
            "config": _config_echo(args),
            "count": total, "indecomposable_count": indec, "catalan": cat,
            "functions": [{"h": list(v), "d": d, "indecomposable": i}
                          for v, d, i in rows],
        }, indent=2) + "\n"
        _emit(args, body, "")
    else:
        lines = ["h,d,indecomposable"]
        lines += [f"\"{','.join(map(str, v))}\",{d},{int(i)}"
                  for v, d, i in rows]
        lines.append(f"# total = {total} (C_{n} = {cat}), "
                     f"indecomposable = {indec}")
        _emit(args, "\n".join(lines) + "\n", _header(args))
    return EXIT_OK


def cmd_betti(args: argparse.Namespace) -> int:
    table = hessfn.betti_table(args.h)
    series = hessfn.equivariant_series(args.h, args.cutoff)
    if args.format == "json":
        body = json.dumps({
            "config": _config_echo(args),
            "betti_even": list(table.betti),
            "total": table.total(),
            "equivariant_series": series,
        }, indent=2) + "\n"
        _emit(args, body, "")
    else:
        lines = ["degree,betti,equivariant_series"]
        for k in range(args.cutoff // 2 + 1):
            b = table.betti[k] if k < len(table.betti) else 0
            lines.append(f"{2 * k},{b},{series[k]}")
        _emit(args, "\n".join(lines) + "\n", _header(args))
    return EXIT_OK


def cmd_flow(args: argparse.Namespace) -> int:
    from . import toda
    from .matcore import random_staircase
    L0 = random_staircase(args.h, args.seed, real_mode=args.real)
    at_equilibrium = toda.offdiag_norm(L0.matrix) == 0.0
    traj = toda.integrate(L0, args.t_end, step=args.step,
                          adaptive=args.adaptive)
    report = {
        "config": _config_echo(args),
        "at_equilibrium": at_equilibrium,
        "max_drift": max(traj.spectrum_drift),
        "max_leakage": max(traj.leakage),
        "max_F_increase": traj.max_F_increase,
        "final_offdiag": traj.offdiag[-1],
    }
    if args.oracle:
        oracle = toda.qr_solution(L0, args.t_end)
        import numpy as np
        dist = float(np.linalg.norm(oracle.matrix - traj.final))
        report["oracle_frobenius_distance"] = dist
        report["oracle_pass"] = dist < args.oracle_tol
    try:
        limits = toda.classify_limits(L0)
        report["sigma_minus"] = list(limits.sigma_minus)
        report["sigma_plus"] = list(limits.sigma_plus)
        report["morse_index_plus"] = limits.forward.morse_index
        report["morse_index_minus"] = limits.backward.morse_index
        converged = True
    except NotConverged as exc:
        report["not_converged"] = str(exc)
        converged = False
    base = args.out or f"flow_{args.seed}"
    with open(base + ".csv", "w") as f:
        f.write(_header(args))
        f.write(traj.to_csv())
    with open(base + ".json", "w") as f:
        json.dump(report, f, indent=2)
    print(json.dumps(report, indent=2))
    if not converged:
        return EXIT_TOLERANCE
    if args.oracle and not report["oracle_pass"]:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_gkm(args: argparse.Namespace) -> int:
    from . import gkm
    modes = ["X", "Y"] if args.mode == "both" else [args.mode]
    out = {"config": _config_echo(args), "tables": []}
    for mode in modes:
        graph = gkm.build_graph(args.h, mode)
        if args.dot:
            with open(f"{args.dot}.{mode}.dot", "w") as f:
                f.write(graph.to_dot())
        table = gkm.ordinary_ranks(graph, cutoff=args.cutoff)
        out["tables"].append(json.loads(table.to_json()))
    body = json.dumps(out, indent=2) + "\n"
    _emit(args, body, "")
    if len(out["tables"]) == 2 and \
            out["tables"][0]["equivariant"] != out["tables"][1]["equivariant"]:
        return EXIT_TOLERANCE
    return EXIT_OK


def cmd_twin(args: argparse.Namespace) -> int:
    from .matcore import random_staircase
    from .twin import (double_quotient_invariants, hessenberg_flag_residual,
                       twin_flag)
    worst_zh = worst_flag = 0.0
    reports = []
    for k in range(args.seeds):
        L = random_staircase(args.h, args.seed + k, real_mode=args.real)
        frame, spec = twin_flag(L)
        from .twin import in_Z_h
        _ok, zres = in_Z_h(frame.U, spec, args.h)
        fres = hessenberg_flag_residual(frame, spec, args.h)
        worst_zh = max(worst_zh, zres)
        worst_flag = max(worst_flag, fres)
        if k == 0:
            reports.append(double_quotient_invariants(
                frame.U, spec, args.h, seed=args.seed))
    body = json.dumps({
        "config": _config_echo(args),
        "max_membership_residual": worst_zh,
        "max_flag_residual": worst_flag,
        "invariance": reports[0] if reports else None,
        "pass": worst_zh <= args.tol and worst_flag <= args.tol,
    }, indent=2) + "\n"
    _emit(args, body, "")
    return EXIT_OK if worst_zh <= args.tol and worst_flag <= args.tol \
        else EXIT_TOLERANCE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="isoflow")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("enumerate", help="list Hessenberg functions")
    pe.add_argument("-n", type=int, required=True)
    pe.add_argument("--format", choices=["csv", "json"], default="csv")
    pe.add_argument("--out")
    pe.set_defaults(func=cmd_enumerate)

    pb = sub.add_parser("betti", help="Betti and Poincare tables")
    pb.add_argument("--h", type=_parse_h, required=True)
    pb.add_argument("--cutoff", type=int, default=8)
    pb.add_argument("--format", choices=["csv", "json"], default="csv")
    pb.add_argument("--out")
    pb.set_defaults(func=cmd_betti)

    pf = sub.add_parser("flow", help="integrate the generalized Toda flow")
    pf.add_argument("--h", type=_parse_h, required=True)
    pf.add_argument("--seed", type=int, default=_default_seed())
    pf.add_argument("--t-end", type=float, default=30.0)
    pf.add_argument("--step", type=float, default=None)
    pf.add_argument("--adaptive", action="store_true")
    pf.add_argument("--real", action="store_true")
    pf.add_argument("--oracle", action="store_true")
    pf.add_argument("--oracle-tol", type=float, default=1e-6)
    pf.add_argument("--out")
    pf.set_defaults(func=cmd_flow)

    pg = sub.add_parser("gkm", help="GKM rank tables and DOT export")
    pg.add_argument("--h", type=_parse_h, required=True)
    pg.add_argument("--mode", choices=["X", "Y", "both"], default="both")
    pg.add_argument("--cutoff", type=int, default=None)
    pg.add_argument("--dot")
    pg.add_argument("--out")
    pg.set_defaults(func=cmd_gkm)

    pt = sub.add_parser("twin", help="twin correspondence residual report")
    pt.add_argument("--h", type=_parse_h, required=True)
    pt.add_argument("--seeds", type=int, default=20)
    pt.add_argument("--seed", type=int, default=_default_seed())
    pt.add_argument("--real", action="store_true")
    pt.add_argument("--tol", type=float, default=1e-8)
    pt.add_argument("--out")
    pt.set_defaults(func=cmd_twin)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (NotHessenberg, DegenerateSpectrum) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NotConverged as exc:
        print(f"not converged: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except IsoflowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
