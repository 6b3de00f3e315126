"""Command-line front end: analyze, plot, oracle, design, refine-check."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cst import parse_cst
from .design import CLASSES, Objective, extreme_plausible_actions, solve_cdp
from .equilibria import equilibrium_report
from .errors import BadParams, CommitmentError
from .families import make_family
from .game import GameSpec, Tolerances, gamma, leader_value, phi
from .intervals import IntervalUnion
from .oracle import (Grid, GridGame, certified_cutoff, certified_interval_cover, certify, project)
from .plausibility import (check_rc, i_plausible_set, lower_bound_diagnostics, p_plausible_set,
                           plausibility_report, simply_plausible_set)
from .refinement import is_finer, is_richer, is_worse, worse_refinement_exists
from .svg import Chart

SCHEMA_VERSION = "1.0"
EXIT_OK, EXIT_ERROR, EXIT_GATED = 0, 1, 2


def worker_count() -> int:
    raw = os.environ.get("COMMITMENT_LIMITS_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def _clean(obj):
    """Round floats to 12 significant digits; non-finite values become strings."""
    if isinstance(obj, float | np.floating):
        v = float(obj)
        if not math.isfinite(v):
            return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
        return float("%.12g" % v)
    if isinstance(obj, bool | np.bool_):
        return bool(obj)
    if isinstance(obj, int | np.integer):
        return int(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple | np.ndarray):
        return [_clean(v) for v in obj]
    return obj


def dumps(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, sort_keys=True) + "\n"


def _emit(report: dict, out: str | None) -> None:
    text = dumps(report)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _spec(args) -> GameSpec:
    tol = Tolerances(grid_n=args.analysis_n) if getattr(args, "analysis_n", None) else None
    return make_family(args.family, r=args.r, d=args.d, a=args.a, table=args.table,
                       table_v=args.table_v, tol=tol)


def _header(cmd: str, spec: GameSpec) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": cmd, "version": __version__,
            "game": spec.describe()}


def _no_tabulated(spec: GameSpec, cmd: str) -> None:
    if spec.name == "tabulated":
        raise BadParams(f"tabulated games support the oracle command only, not {cmd}")


# analyze ------------------------------------------------------------------------

def curve_rows(spec: GameSpec, n: int = 401) -> list[dict]:
    xs = spec.leader_space.linspace(n)
    U = np.asarray(leader_value(spec, xs))
    ph = np.asarray(phi(spec, xs))
    rc = check_rc(spec)
    gm = np.asarray(gamma(spec, xs, rc.cournot)) if rc.holds else np.full(n, np.nan)
    return [{"x": x, "U": u, "phi": p, "gamma": g} for x, u, p, g in zip(xs, U, ph, gm)]


def write_csv(rows: list[dict], path: str) -> None:
    lines = ["x,U,phi,gamma"]
    for r in rows:
        g = "" if not math.isfinite(r["gamma"]) else "%.12g" % r["gamma"]
        lines.append("%.12g,%.12g,%.12g,%s" % (r["x"], r["U"], r["phi"], g))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def cmd_analyze(args) -> int:
    spec = _spec(args)
    _no_tabulated(spec, "analyze")
    rep = _header("analyze", spec)
    rep["equilibria"] = equilibrium_report(spec).to_json()
    pr = plausibility_report(spec)
    rep["rc"] = pr.rc.to_json()
    rep["plausibility"] = pr.to_json()
    rep["diagnostics"] = lower_bound_diagnostics(spec, pr.rc).to_json()
    rep["omitted"] = [] if pr.rc.holds else ["p_plausible"]
    _emit(rep, args.out)
    if args.csv:
        write_csv(curve_rows(spec), args.csv)
    return EXIT_OK if pr.rc.holds else EXIT_GATED


# plot -------------------------------------------------------------------------------

def _spans(s: IntervalUnion) -> list[tuple[float, float]]:
    return [(p.lo, p.hi) for p in s]


def build_charts(spec: GameSpec) -> dict[str, Chart]:
    X = spec.leader_space
    xs = X.linspace(401)
    U = np.asarray(leader_value(spec, xs))
    eq = equilibrium_report(spec)
    pr = plausibility_report(spec)
    name = f"{spec.name} " + ", ".join(f"{k}={v:g}" for k, v in spec.params)
    charts = {}

    c = Chart(f"U(x), {name}", (X.lo, X.hi)).line("U(x)", xs, U)
    c.band("simply plausible", _spans(pr.simple)).band("I-plausible", _spans(pr.i_plausible))
    if pr.p_plausible is not None:
        c.band("P-plausible", _spans(pr.p_plausible))
    for p in eq.cournot:
        if p.is_point:
            c.mark("C %.4g" % p.lo, p.lo, float(leader_value(spec, p.lo)))
    for p in eq.stackelberg:
        if p.is_point:
            c.mark("S %.4g" % p.lo, p.lo, float(leader_value(spec, p.lo)))
    charts["U"] = c

    c = Chart(f"phi(x) and the diagonal, {name}", (X.lo, X.hi))
    c.line("phi(x)", xs, np.asarray(phi(spec, xs))).line("45 degrees", xs, xs, dashed=True)
    for p in eq.cournot:
        for x in ([p.lo] if p.is_point else [p.lo, p.hi]):
            c.mark("%.4g" % x, x, x)
    charts["phi"] = c

    if pr.rc.holds:
        xc = pr.rc.cournot
        c = Chart(f"gamma(x), {name}", (X.lo, X.hi))
        c.line("gamma(x)", xs, np.asarray(gamma(spec, xs, xc))).line("45 degrees", xs, xs, dashed=True)
        c.band("S", _spans(pr.s_set))
        c.mark("gamma(S) low end %.4g" % pr.gamma_hat, pr.x_hat, pr.gamma_hat)
        charts["gamma"] = c
    return charts


def cmd_plot(args) -> int:
    spec = _spec(args)
    _no_tabulated(spec, "plot")
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    stem = spec.name + "".join(f"_{k}{v:g}" for k, v in spec.params)
    written = []
    for key, chart in build_charts(spec).items():
        path = out / f"{stem}_{key}.svg"
        path.write_text(chart.render(), encoding="utf-8")
        written.append(str(path))
    if args.csv:
        write_csv(curve_rows(spec), args.csv)
    sys.stdout.write("\n".join(written) + "\n")
    return EXIT_OK


# oracle --------------------------------------------------------------------------------

def _endpoints(sym) -> list[float]:
    pts = []
    for e in list(sym.elements) + [sym.singletons]:
        for p in e:
            pts += [p.lo, p.hi]
    return pts


def oracle_campaign(spec: GameSpec, grid: Grid) -> dict:
    game = GridGame(spec, grid)
    game.reach()
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        f_cut = pool.submit(certified_cutoff, game, 2)
        f_ic = pool.submit(certified_interval_cover, game)
        f_s = pool.submit(simply_plausible_set, spec)
        f_i = pool.submit(i_plausible_set, spec)
        cut, ic, S, I = f_cut.result(), f_ic.result(), f_s.result(), f_i.result()
    pts, h = grid.points, grid.h
    disc = []
    for x in pts[cut]:
        if S.distance_to(x) > h:
            disc.append({"suite": "simple", "x": x, "kind": "certified but not simply plausible"})
    for x in pts:
        if S.contains(x) and not np.any(np.abs(pts[cut] - x) <= h):
            disc.append({"suite": "simple", "x": x, "kind": "simply plausible but not certified"})
    for x in pts[ic]:
        if I.distance_to(x) > spec.tol.merge_tol:
            disc.append({"suite": "interval_cover", "x": x, "kind": "certified outside I-plausible set"})
    for x in pts:
        if I.contains(x) and not np.any(np.abs(pts[ic] - x) <= h):
            disc.append({"suite": "interval_cover", "x": x, "kind": "I-plausible but not certified"})
    return {
        "grid": {"n": grid.n, "h": h},
        "simple": {"certified": IntervalUnion.points(spec.leader_space, pts[cut]).to_json(),
                   "theory": S.to_json()},
        "interval_cover": {"certified": IntervalUnion.points(spec.leader_space, pts[ic]).to_json(),
                           "theory": I.to_json()},
        "discrepancies": disc,
    }


def cmd_oracle(args) -> int:
    spec = _spec(args)
    rep = _header("oracle", spec)
    n = args.grid_n or 201
    extra = []
    sym = None
    if args.cst:
        sym = parse_cst(args.cst, spec.leader_space)
        extra += _endpoints(sym)
    if args.x_star is not None:
        extra.append(args.x_star)
    grid = Grid.for_spec(spec, n, extra)
    game = GridGame(spec, grid)
    status = EXIT_OK
    if sym is not None:
        cst = project(sym, grid)
        res = game.spe_outcomes(cst)
        pref = game.spe_outcomes_leader_preferred(cst)
        rep["cst"] = {"literal": args.cst, "spe": res.to_json(), "leader_preferred": pref.to_json(),
                      "leader_actions": sorted(res.leader_actions)}
        if args.verbose:
            rep["cst"]["finite"] = cst.to_json(grid)
            rep["cst"]["admissible"] = [[float(grid.points[i]) for i in b] for b in res.admissible]
    if args.x_star is not None:
        fams = [f for f in args.families.split(",") if f]
        w = certify(spec, grid, grid.points[grid.nearest(args.x_star)], fams, game, max_cuts=args.max_cuts)
        rep["certificate"] = {"x_star": args.x_star, "families": fams,
                              "witness": w.to_json(grid) if w is not None else None}
    if sym is None and args.x_star is None:
        camp = oracle_campaign(spec, grid)
        rep["campaign"] = camp
        if camp["discrepancies"]:
            status = EXIT_GATED
    _emit(rep, args.out)
    return status


# design / refine-check -----------------------------------------------------------------

def cmd_design(args) -> int:
    spec = _spec(args)
    _no_tabulated(spec, "design")
    sol = solve_cdp(spec, Objective(args.objective), args.cst_class)
    rep = _header("design", spec)
    rep["design"] = {"objective": Objective(args.objective).kind, "class": args.cst_class, **sol.to_json()}
    lo, hi = extreme_plausible_actions(spec, args.cst_class)
    rep["design"]["extreme_actions"] = [lo, hi]
    _emit(rep, args.out)
    return EXIT_OK


def cmd_refine_check(args) -> int:
    spec = _spec(args)
    _no_tabulated(spec, "refine-check")
    if not args.cst:
        raise BadParams("refine-check needs --cst")
    k = parse_cst(args.cst, spec.leader_space)
    rep = _header("refine-check", spec)
    w = worse_refinement_exists(spec, k)
    out = {"cst": args.cst, "worse_refinement_exists": w is not None,
           "witness": w.to_json() if w is not None else None}
    if args.cst_prime:
        kp = parse_cst(args.cst_prime, spec.leader_space)
        grid = Grid.for_spec(spec, args.grid_n or 201, _endpoints(k) + _endpoints(kp))
        out["comparison"] = {"cst_prime": args.cst_prime, "is_finer": is_finer(kp, k),
                             "is_richer": is_richer(kp, k),
                             "is_worse": is_worse(spec, grid, kp, k).to_json()}
    rep["refinement"] = out
    _emit(rep, args.out)
    return EXIT_OK


# entry point -------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="commitment-limits",
                                description="Plausible leader actions under partial commitment.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--family", required=True, choices=["duopoly", "coordination", "tabulated"])
        sp.add_argument("--r", type=float)
        sp.add_argument("--d", type=float)
        sp.add_argument("--a", type=float)
        sp.add_argument("--table", help="CSV matrix of leader payoffs (tabulated family)")
        sp.add_argument("--table-v", dest="table_v", help="CSV matrix of follower payoffs")
        sp.add_argument("--analysis-n", dest="analysis_n", type=int, help="sampling grid for set predicates")
        sp.add_argument("--out", help="output file (JSON) or directory (plot)")
        return sp

    a = common(sub.add_parser("analyze", help="equilibria, regularity checks and plausible sets"))
    a.add_argument("--csv", help="also write sampled x, U, phi, gamma curves")
    a.set_defaults(func=cmd_analyze)

    pl = common(sub.add_parser("plot", help="SVG charts of U, phi and gamma"))
    pl.add_argument("--csv")
    pl.set_defaults(func=cmd_plot)

    o = common(sub.add_parser("oracle", help="brute-force SPE checks on a grid"))
    o.add_argument("--grid-n", dest="grid_n", type=int, default=201)
    o.add_argument("--cst", help="CST literal, e.g. '[0,3/2)|[3/2,5/3]'")
    o.add_argument("--x-star", dest="x_star", type=float)
    o.add_argument("--families", default="cutoff_partitions,interval_plus_complement,quasi_simple_witness")
    o.add_argument("--max-cuts", dest="max_cuts", type=int, default=1,
                   help="cuts per partition when searching cutoff witnesses")
    o.add_argument("--verbose", action="store_true", help="include the projected index sets")
    o.set_defaults(func=cmd_oracle)

    d = common(sub.add_parser("design", help="commitment design problem"))
    d.add_argument("--objective", default="leader",
                   help="leader, follower, cs, ps, welfare (long names accepted)")
    d.add_argument("--class", dest="cst_class", default="all", choices=CLASSES)
    d.set_defaults(func=cmd_design)

    r = common(sub.add_parser("refine-check", help="worse-refinement test for a simple CST"))
    r.add_argument("--cst")
    r.add_argument("--cst-prime", dest="cst_prime", help="compare against this refinement")
    r.add_argument("--grid-n", dest="grid_n", type=int, default=201)
    r.set_defaults(func=cmd_refine_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CommitmentError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
