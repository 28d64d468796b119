"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (a JSON record on stderr),
2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import io as lio
from .errors import LinkflexError
from .dquat import Isometry


def _floats(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated numbers: %r" % text) from exc


def _ints(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError("expected comma-separated integers: %r" % text) from exc


def _emit(args, obj) -> None:
    """Print JSON to stdout and to ``--out`` when given."""
    text = lio.dumps(obj)
    sys.stdout.write(text)
    if getattr(args, "out", None):
        lio.atomic_write(args.out, text)


def _emit_csv(args, header, rows) -> None:
    """Write CSV to ``--out``, or to stdout when no file is given."""
    if args.out:
        lio.write_csv(args.out, header, rows)
    else:
        sys.stdout.write(lio.csv_text(header, rows))


def _report(args, obj) -> None:
    """JSON summary of a CSV-producing command; goes to stderr when the CSV occupies stdout."""
    (sys.stdout if args.out else sys.stderr).write(lio.dumps(obj))


# ---------------------------------------------------------------------------
# factor
# ---------------------------------------------------------------------------

def cmd_factor(args) -> int:
    from .ncpoly import MotionPoly, all_factorizations, factorize

    P = lio.read_motion_poly(args.poly)
    lead = np.asarray(P.leading.c)
    if lead[0] != 0 and not np.any(lead[1:]):
        P = MotionPoly(P.coeffs / lead[0])
    out = {"coeffs": P.coeffs}
    if args.all:
        facs = all_factorizations(P, tol=args.tol)
        out["count"] = len(facs)
        out["factorizations"] = [[(-f.coeffs[0]).tolist() for f in fs] for fs in facs]
    else:
        fs = factorize(P, tol=args.tol)
        out["factors"] = [(-f.coeffs[0]).tolist() for f in fs]
    _emit(args, out)
    return 0


# ---------------------------------------------------------------------------
# synth
# ---------------------------------------------------------------------------

def cmd_synth_draw(args) -> int:
    from .synth import (build_drawer, curve_motion, default_spare, sample_grid, trace,
                        trace_path_spread)
    from .errors import NotRealizable

    C = lio.read_curve(args.curve)
    cm = curve_motion(C, choices=[None, None, (0.0, -args.c, 0.0)], tol=args.tol)
    if len(cm.factors) != 3:
        raise NotRealizable("the drawer needs a cubic motion polynomial, got degree %d" % len(cm.factors))
    linkage = build_drawer(cm.factors, default_spare(args.d), args.tol)
    ts = sample_grid(args.samples)
    pts = trace(linkage, 4, 1, ts)
    _emit_csv(args, ["t", "x", "y", "z"], [[t, *p] for t, p in zip(ts, pts)])
    if args.svg:
        lio.write_svg(args.svg, pts[np.argsort(np.arctan(ts))])
    ref = C(ts)
    report = {"samples": len(ts), "path_spread": trace_path_spread(linkage, 4, 1, ts),
              "curve_deviation": float(np.max(np.abs(pts - ref))),
              "premultiplier": cm.premultiplier,
              "h": {str(k): np.asarray(v.c).tolist() for k, v in sorted(linkage.h.items())}}
    _report(args, report)
    return 0


def cmd_synth_bennett(args) -> int:
    from .synth import bennett_from_conic, random_bennett_poly

    P = lio.read_motion_poly(args.poly) if args.poly else random_bennett_poly(np.random.default_rng(args.seed))
    B = bennett_from_conic(P, tol=args.tol)
    out = {"d": np.asarray(B.d).tolist(), "alpha": np.asarray(B.alpha).tolist(), "s": np.asarray(B.s).tolist(),
           "axes": [{"direction": L.direction.tolist(), "moment": L.moment.tolist()} for L in B.axes],
           "bennett_residuals": B.bennett_residuals().tolist(),
           "poly": lio.motion_poly_json(P)}
    _emit(args, out)
    return 0


# ---------------------------------------------------------------------------
# rigidity
# ---------------------------------------------------------------------------

def _graph(args):
    return lio.read_graph(args.graph)


def cmd_rigidity_cgk(args) -> int:
    from .rigidity import cgk_estimate

    G, _ = _graph(args)
    _emit(args, {"dimension": args.dim, "cgk": cgk_estimate(G, args.dim)})
    return 0


def cmd_rigidity_laman(args) -> int:
    from .rigidity import laman_check

    G, _ = _graph(args)
    r = laman_check(G)
    _emit(args, {"is_laman": r.is_laman, "reason": r.reason,
                 "witness_vertices": list(r.witness_vertices or []),
                 "witness_edges": [list(e) for e in (r.witness_edges or [])]})
    return 0


def cmd_rigidity_nac(args) -> int:
    from .rigidity import nac_enumerate

    G, _ = _graph(args)
    cols = nac_enumerate(G, max_edges=args.max_edges)
    _emit(args, {"count": len(cols), "colorings": [c.to_json() for c in cols]})
    return 0


def cmd_rigidity_motion(args) -> int:
    from .rigidity import nac_enumerate, nac_motion

    G, _ = _graph(args)
    cols = nac_enumerate(G, max_edges=args.max_edges)
    if not cols:
        from .errors import NotRealizable
        raise NotRealizable("graph has no NAC coloring, hence no flexible labeling from this construction")
    if not 0 <= args.coloring < len(cols):
        raise ValueError("coloring index out of range (0..%d)" % (len(cols) - 1))
    c = cols[args.coloring]
    ts = np.linspace(0.0, 2 * np.pi, args.samples, endpoint=False)
    rows = []
    for t in ts:
        pl = nac_motion(G, c, t, seed=args.seed)
        rows.append([t] + [x for v in G.vertices for x in pl[v]])
    header = ["t"] + ["%s%d" % (ax, v) for v in G.vertices for ax in ("x", "y")]
    _emit_csv(args, header, rows)
    return 0


def cmd_rigidity_matrix(args) -> int:
    from .rigidity import generic_placement, rigidity_matrix

    G, _ = _graph(args)
    pl = lio.read_placement(args.placement) if args.placement else generic_placement(G, args.dim, args.seed)
    r = rigidity_matrix(G, pl)
    out = {"rank": r.rank, "trivial": r.trivial, "flex_count": r.flex_count,
           "singular_values": np.asarray(r.singular_values).tolist()}
    _emit(args, out)
    return 0


def cmd_rigidity_dixon(args) -> int:
    from .rigidity import dixon1_data, dixon1_motion, dixon2_config, rigidity_matrix
    from .rigidity.graph import max_length_residual

    if args.rects:
        p, q, r, s = args.rects
        cfg = dixon2_config((p, q), (r, s))
        m = rigidity_matrix(cfg.graph, cfg.placement)
        _emit(args, {"kind": "dixon2", "flex_count": m.flex_count,
                     "placement": {str(v): x.tolist() for v, x in cfg.placement.items()}})
        return 0
    G, lengths = _graph(args)
    if lengths is None:
        raise ValueError("graph JSON needs edge lengths for Dixon I")
    data = dixon1_data(G, lengths, tol=args.tol)
    lo, hi = data.domain
    taus = np.linspace(lo, hi, args.samples)
    rows, worst = [], 0.0
    for tau in taus:
        pl = dixon1_motion(G, lengths, tau, data=data)
        worst = max(worst, max_length_residual(G, pl, lengths))
        rows.append([tau] + [x for v in G.vertices for x in pl[v]])
    if args.csv:
        lio.write_csv(args.csv, ["tau"] + ["%s%d" % (ax, v) for v in G.vertices for ax in ("x", "y")], rows)
    _emit(args, {"kind": "dixon1", "domain": [lo, hi], "max_edge_residual": worst})
    return 0


# ---------------------------------------------------------------------------
# loops
# ---------------------------------------------------------------------------

def cmd_loop_closure(args) -> int:
    from .loops import closure_residual_angles

    loop = lio.read_loop(args.loop)
    if len(args.angles) != loop.n:
        raise ValueError("need %d angles" % loop.n)
    _emit(args, {"residual": closure_residual_angles(loop, np.asarray(args.angles))})
    return 0


def cmd_loop_trace(args) -> int:
    from .loops import best_drive, closure_residual_angles, find_configuration, trace_mobility

    loop = lio.read_loop(args.loop)
    if args.start:
        start = np.asarray(args.start, dtype=float)
        if len(start) != loop.n:
            raise ValueError("need %d start angles" % loop.n)
    else:
        start = find_configuration(loop, seed=args.seed)
    drive = best_drive(loop, start) if args.drive is None else args.drive
    sweep = start[drive] + np.linspace(-args.span, args.span, args.samples)
    # sweep outwards from the start in both directions
    mid = args.samples // 2
    up = trace_mobility(loop, start, drive, sweep[mid:])
    down = trace_mobility(loop, start, drive, sweep[:mid][::-1])
    configs = list(reversed(down.configurations)) + up.configurations
    rows = []
    for phi in configs:
        rest = [phi[r] for r in range(loop.n) if r != drive]
        rows.append([phi[drive], *rest, closure_residual_angles(loop, phi)])
    header = ["driven"] + ["phi%d" % r for r in range(loop.n) if r != drive] + ["residual"]
    _emit_csv(args, header, rows)
    _report(args, {"drive": drive, "samples": len(rows), "max_residual": max(r[-1] for r in rows)})
    return 0


def cmd_loop_classify4r(args) -> int:
    from .loops import classify_4r

    loop = lio.read_loop(args.loop)
    print(classify_4r(loop, tol=args.tol4r))
    return 0


def cmd_loop_bonds(args) -> int:
    from .loops import bond_quadratics, common_root

    loop = lio.read_loop(args.loop)
    out = []
    for s1 in (1, -1):
        for s4 in (1, -1):
            q1, q4 = bond_quadratics(loop, args.pair, (s1, s4))
            found, roots = common_root(q1, q4, tol=args.tol_root)
            out.append({"signs": [s1, s4], "Q1": q1, "Q4": q4, "common_root": found, "roots": roots})
    _emit(args, {"pair": [args.pair, (args.pair + 3) % 6], "cases": out})
    return 0


def cmd_loop_bricard(args) -> int:
    from . import loops as L

    if args.family == "orthogonal":
        b = list(args.b or [])
        if len(b) == 5:
            b.append(L.bricard_orthogonal_b5(b))
        loop = L.bricard_orthogonal(b)
    elif args.family == "line":
        rng = np.random.default_rng(args.seed)
        loop = L.bricard_line_symmetric(rng.standard_normal(3), rng.uniform(0.3, 2.8, 3), rng.standard_normal(3))
    else:
        loop, _ = L.random_plane_symmetric(args.seed)
    _emit(args, loop.to_json())
    return 0


# ---------------------------------------------------------------------------
# pods
# ---------------------------------------------------------------------------

def _isometry(path) -> Isometry:
    obj = lio.read_json(path)
    return Isometry(np.asarray(obj["rotation"], dtype=float), np.asarray(obj["translation"], dtype=float))


def cmd_pod_pair(args) -> int:
    from .pods import group_point, leg_point, pairing

    _, _, legs = lio.read_multipod(args.multipod)
    if legs is None:
        raise ValueError("multipod JSON needs lengths")
    iso = _isometry(args.isometry)
    g = group_point(iso)
    vals = [float(pairing(g, leg_point(leg))) for leg in legs]
    _emit(args, {"pairings": vals, "realized": [abs(v) < args.tol for v in vals]})
    return 0


def cmd_pod_duporcq(args) -> int:
    from .pods import Leg, duporcq_sixth_point

    _, _, legs = lio.read_multipod(args.multipod)
    if legs is None:
        raise ValueError("multipod JSON needs lengths")
    pt = duporcq_sixth_point(legs, seed=args.seed)
    out = {"sixth": pt.to_json()}
    d2 = complex(pt.d_squared)
    if pt.is_real and d2.real > 0:
        six = list(legs) + [Leg(np.real(pt.a), np.real(pt.b), float(np.sqrt(d2.real)))]
        out.update(lio.multipod_json(six))
    _emit(args, out)
    return 0


def cmd_pod_borel(args) -> int:
    from .pods import borel_domain, borel_leg, borel_motion

    pts = np.asarray(lio.read_json(args.base), dtype=float) if args.base else np.atleast_2d(args.a)
    legs = [borel_leg(a, args.alpha, args.beta) for a in pts]
    lo, hi = borel_domain(args.alpha, args.beta)
    worst = 0.0
    for th in np.linspace(lo, hi, args.samples):
        for branch in (1, -1):
            m = borel_motion(args.alpha, args.beta, th, branch)
            worst = max(worst, max(abs(g.length_under(m) - g.d) for g in legs))
    out = lio.multipod_json(legs)
    out["theta_domain"] = [lo, hi]
    out["max_length_deviation"] = worst
    _emit(args, out)
    return 0


def _complex_vector(obj) -> np.ndarray:
    return np.array([complex(v[0], v[1]) if isinstance(v, list) else complex(v) for v in obj])


def cmd_pod_classify(args) -> int:
    from .pods import GroupSpacePoint, classify_bond

    g = GroupSpacePoint.from_vector(_complex_vector(lio.read_json(args.point)))
    _emit(args, {"stratum": classify_bond(g, tol=args.tol).value})
    return 0


def cmd_pod_icosapod(args) -> int:
    from .pods import TwinPair, icosapod_complete, icosapod_span_residual

    _, _, legs = lio.read_multipod(args.multipod)
    if legs is None or len(legs) != 3:
        raise ValueError("icosapod needs exactly three legs with lengths (one per twin pair)")
    pairs = [TwinPair.from_leg(g) for g in legs]
    found = icosapod_complete(pairs, seed=args.seed)
    _emit(args, {"found": len(found), "real": sum(p.is_real for p in found),
                 "pairs": [dict(p.to_json(), span_residual=icosapod_span_residual(pairs, p)) for p in found]})
    return 0


def cmd_pod_hilbert(args) -> int:
    from .pods import hilbert_expand

    _emit(args, {"coefficients": hilbert_expand(args.numerator, args.pole, args.terms)})
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-9, help="numerical tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="random seed")
    common.add_argument("--out", help="output file")

    p = argparse.ArgumentParser(prog="linkflex", description="Paradoxically mobile linkages toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("factor", parents=[common], help="factor a motion polynomial")
    f.add_argument("--poly", required=True, help='JSON {"coeffs": [[8 numbers], ...]}, lowest degree first')
    f.add_argument("--all", action="store_true", help="enumerate all factorizations")
    f.set_defaults(func=cmd_factor)

    syn = sub.add_parser("synth", help="linkage synthesis").add_subparsers(dest="sub", required=True)
    d = syn.add_parser("draw", parents=[common], help="trace a rational curve with the eight-link drawer")
    d.add_argument("--curve", required=True)
    d.add_argument("--samples", type=int, default=100)
    d.add_argument("--c", type=float, default=1.0, help="free constant of the zero-divisor factor")
    d.add_argument("--d", type=float, default=1.0, help="free constant of the spare factor")
    d.add_argument("--svg", help="optional SVG polyline output")
    d.set_defaults(func=cmd_synth_draw)
    b = syn.add_parser("bennett", parents=[common], help="Bennett linkage from a conic motion")
    b.add_argument("--poly", help="quadratic motion polynomial JSON (random if omitted)")
    b.set_defaults(func=cmd_synth_bennett)

    rig = sub.add_parser("rigidity", help="graphs and frameworks").add_subparsers(dest="sub", required=True)
    for name, func, helptext in (("cgk", cmd_rigidity_cgk, "CGK mobility estimate"),
                                 ("laman", cmd_rigidity_laman, "pebble-game Laman test"),
                                 ("nac", cmd_rigidity_nac, "enumerate NAC colorings"),
                                 ("motion", cmd_rigidity_motion, "sample the motion of a NAC coloring"),
                                 ("matrix", cmd_rigidity_matrix, "rigidity matrix rank and flexes"),
                                 ("dixon", cmd_rigidity_dixon, "Dixon I motion or Dixon II placement")):
        r = rig.add_parser(name, parents=[common], help=helptext)
        r.add_argument("--graph", required=(name != "dixon"))
        r.set_defaults(func=func)
        if name == "cgk":
            r.add_argument("--dim", type=int, default=2)
        if name in ("nac", "motion"):
            r.add_argument("--max-edges", type=int, default=30)
        if name == "motion":
            r.add_argument("--coloring", type=int, default=0)
            r.add_argument("--samples", type=int, default=50)
        if name == "matrix":
            r.add_argument("--placement")
            r.add_argument("--dim", type=int, default=2)
        if name == "dixon":
            r.add_argument("--rects", type=_floats, help="p,q,r,s for the Dixon II placement")
            r.add_argument("--samples", type=int, default=50)
            r.add_argument("--csv", help="CSV of the sampled Dixon I motion")

    lp = sub.add_parser("loop", help="revolute loops").add_subparsers(dest="sub", required=True)
    c = lp.add_parser("closure", parents=[common], help="closure residual")
    c.add_argument("--loop", required=True)
    c.add_argument("--angles", type=_floats, required=True)
    c.set_defaults(func=cmd_loop_closure)
    t = lp.add_parser("trace", parents=[common], help="numeric mobility trace")
    t.add_argument("--loop", required=True)
    t.add_argument("--start", type=_floats)
    t.add_argument("--drive", type=int)
    t.add_argument("--span", type=float, default=0.2, help="half width of the driven-angle window (rad)")
    t.add_argument("--samples", type=int, default=21)
    t.set_defaults(func=cmd_loop_trace)
    k = lp.add_parser("classify4r", parents=[common], help="classify a 4R loop")
    k.add_argument("--loop", required=True)
    k.add_argument("--tol4r", type=float, default=1e-8)
    k.set_defaults(func=cmd_loop_classify4r)
    bo = lp.add_parser("bonds", parents=[common], help="opposite-joint bond quadratics of a 6R loop")
    bo.add_argument("--loop", required=True)
    bo.add_argument("--pair", type=int, default=1)
    bo.add_argument("--tol-root", type=float, default=1e-8)
    bo.set_defaults(func=cmd_loop_bonds)
    br = lp.add_parser("bricard", parents=[common], help="generate a Bricard 6R loop")
    br.add_argument("--family", choices=("orthogonal", "line", "plane"), default="orthogonal")
    br.add_argument("--b", type=_floats, help="five or six values for the orthogonal family")
    br.set_defaults(func=cmd_loop_bricard)

    pod = sub.add_parser("pod", help="multipods").add_subparsers(dest="sub", required=True)
    pp = pod.add_parser("pair", parents=[common], help="pairing of an isometry with each leg")
    pp.add_argument("--multipod", required=True)
    pp.add_argument("--isometry", required=True, help='JSON {"rotation": 3x3, "translation": 3}')
    pp.set_defaults(func=cmd_pod_pair)
    du = pod.add_parser("duporcq", parents=[common], help="sixth leg of a planar pentapod")
    du.add_argument("--multipod", required=True)
    du.set_defaults(func=cmd_pod_duporcq)
    bl = pod.add_parser("borel", parents=[common], help="Bricard-Borel legs")
    bl.add_argument("--alpha", type=float, required=True)
    bl.add_argument("--beta", type=float, required=True)
    g = bl.add_mutually_exclusive_group(required=True)
    g.add_argument("--a", type=_floats, help="one base point x,y,z")
    g.add_argument("--base", help="JSON list of base points")
    bl.add_argument("--samples", type=int, default=50)
    bl.set_defaults(func=cmd_pod_borel)
    cl = pod.add_parser("classify", parents=[common], help="boundary stratum of a group-space point")
    cl.add_argument("--point", required=True, help="JSON list of 17 numbers or [re, im] pairs")
    cl.set_defaults(func=cmd_pod_classify)
    ic = pod.add_parser("icosapod", parents=[common], help="complete three twin pairs")
    ic.add_argument("--multipod", required=True)
    ic.set_defaults(func=cmd_pod_icosapod)
    hi = pod.add_parser("hilbert", parents=[common], help="expand numerator / (1 - t)^pole")
    hi.add_argument("--numerator", type=_ints, required=True)
    hi.add_argument("--pole", type=int, required=True)
    hi.add_argument("--terms", type=int, default=10)
    hi.set_defaults(func=cmd_pod_hilbert)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except LinkflexError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        sys.stderr.write("linkflex: error: %s\n" % exc)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
