"""Command-line front end.

Subcommands:

  limit   classify the eps -> 0 limit of the variation of one function
  scan    reproduce the power-law limit tables over an (alpha, beta, x) grid
  delta   delta-sequence shell scaling / smooth s-eps scan
  comb    scan an interval for delta-comb divergences

Exit codes: 0 success, 1 assertion or table mismatch, 2 usage/parse error.
All emitted CSV/JSON is byte-reproducible for identical flags; grids can
fan out over a process pool without changing output order.
"""

import argparse
import math
import multiprocessing
import os
import sys

from . import deltalab, report, singular
from .expr import ParseError, parse_function
from .limits import BadSchedule, classify, make_schedule, trace

USAGE_ERROR = 2
CHECK_ERROR = 1


def _schedule(args):
    return make_schedule(args.eps0, args.ratio, args.steps)


def _add_schedule_flags(sub):
    sub.add_argument("--eps0", type=float, default=2.0 ** -4,
                     help="largest step, a power of two (default 2^-4)")
    sub.add_argument("--ratio", type=float, default=0.5,
                     help="step ratio, a power of two in (0,1) (default 1/2)")
    sub.add_argument("--steps", type=int, default=30,
                     help="number of steps (default 30)")


def _floats(text):
    return [float(tok) for tok in text.split(",") if tok.strip()]


# ------------------------------------------------------------------ limit

def cmd_limit(args):
    f = parse_function(args.fn)
    sched = _schedule(args)
    t = trace(f, args.x, args.beta, args.side, sched)
    verdict = classify(t)
    payload = report.verdict_dict(verdict)
    sys.stdout.write(report.json_text(payload))
    if args.out:
        report.write_csv(args.out + ".trace.csv", ["eps", "value"],
                         list(zip(t.eps, t.values)))
        report.write_json(args.out + ".verdict.json", payload)
    return 0


# ------------------------------------------------------------------ scan

def _scan_cell(cell):
    family, alpha, beta, x, eps0, ratio, steps = cell
    from .exponents import verify_power_table
    rep = verify_power_table(family, [alpha], [beta], [x],
                             make_schedule(eps0, ratio, steps))
    return rep.rows[0]


def cmd_scan(args):
    alphas = _floats(args.alphas)
    betas = _floats(args.betas)
    xs = _floats(args.xs)
    if not (alphas and betas and xs):
        sys.stderr.write("error: empty grid\n")
        return USAGE_ERROR
    _schedule(args)  # validate early
    cells = [(args.family, a, b, x, args.eps0, args.ratio, args.steps)
             for a in alphas for b in betas for x in xs]
    if args.jobs > 1:
        with multiprocessing.Pool(args.jobs) as pool:
            rows = pool.map(_scan_cell, cells)  # map preserves grid order
    else:
        rows = [_scan_cell(c) for c in cells]
    header = ["alpha", "beta", "x", "predicted", "observed", "value", "slope"]
    data = [(r.alpha, r.beta, r.x, r.predicted, r.observed, r.value, r.slope)
            for r in rows]
    text = report.csv_text(header, data)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        _write_scan_svg(args.svg, rows)
    bad = [r for r in rows if not r.match]
    for r in bad:
        sys.stderr.write(f"mismatch: alpha={r.alpha} beta={r.beta} x={r.x} "
                         f"predicted={r.predicted} observed={r.observed}\n")
    return CHECK_ERROR if bad else 0


_TAG_COLOR = {"Zero": "#4477aa", "Finite": "#228833", "DivergesPlus": "#ee6677",
              "DivergesMinus": "#aa3377", "Indeterminate": "#bbbbbb"}


def _write_scan_svg(path, rows):
    """Minimal phase-diagram scatter: alpha vs beta, colored by verdict."""
    xs0 = sorted({r.x for r in rows})
    pane_w, pane_h, pad = 220, 220, 40
    alphas = sorted({r.alpha for r in rows})
    betas = sorted({r.beta for r in rows})
    a_span = max(alphas) - min(alphas) or 1.0
    b_span = max(betas) - min(betas) or 1.0
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" '
             f'width="{len(xs0) * (pane_w + pad) + pad}" height="{pane_h + 2 * pad}">']
    for i, x0 in enumerate(xs0):
        ox = pad + i * (pane_w + pad)
        parts.append(f'<text x="{ox}" y="{pad - 10}" font-size="12">x = {x0}</text>')
        parts.append(f'<rect x="{ox}" y="{pad}" width="{pane_w}" height="{pane_h}" '
                     f'fill="none" stroke="#333"/>')
        for r in rows:
            if r.x != x0:
                continue
            px = ox + (r.alpha - min(alphas)) / a_span * (pane_w - 20) + 10
            py = pad + pane_h - ((r.beta - min(betas)) / b_span * (pane_h - 20) + 10)
            color = _TAG_COLOR.get(r.observed, "#000")
            shape = "circle" if r.match else "rect"
            if shape == "circle":
                parts.append(f'<circle cx="{px:.1f}" cy="{py:.1f}" r="6" fill="{color}"/>')
            else:
                parts.append(f'<rect x="{px - 6:.1f}" y="{py - 6:.1f}" width="12" '
                             f'height="12" fill="{color}"/>')
    parts.append("</svg>")
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(parts) + "\n")


# ------------------------------------------------------------------ delta

def cmd_delta(args):
    kind = {"rect": "rectangular", "tri": "triangular",
            "smooth": "smooth"}[args.kind]
    if kind == "smooth":
        proto = deltalab.cauchy_prototype()
        sub = deltalab.ScaleSubstitution(args.p, args.k, args.beta)
        sched = _schedule(args)
        try:
            slope, admissible = deltalab.s_eps_scan(proto, sub, sched)
        except deltalab.DeltaCheckError as exc:
            sys.stderr.write(f"check failed: {exc}\n")
            return CHECK_ERROR
        rows = [(e, sub.k * math.pow(e, sub.p),
                 deltalab.seps_expansion_value(proto, sub, e))
                for e in sched.values()]
        summary = {"slope": slope, "admissible": admissible}
        csv_rows = (["eps", "s", "upsilon"], rows)
    else:
        ns = range(4, args.nmax + 1)
        try:
            slope = deltalab.delta_scaling_check(kind, args.beta, ns, args.u0)
        except deltalab.DeltaCheckError as exc:
            sys.stderr.write(f"check failed: {exc}\n")
            return CHECK_ERROR
        rows = []
        for n in ns:
            spec = deltalab.DeltaSeqSpec(kind, n, args.u0)
            eps = spec.scale()
            x = eps / 2.0
            rows.append((n, eps, x, deltalab.fracvar_delta_exact(spec, x, args.beta)))
        summary = {"slope": slope, "expected_slope": -(1.0 + args.beta)}
        csv_rows = (["n", "eps", "x", "value"], rows)
    sys.stdout.write(report.json_text(summary))
    if args.out:
        report.write_csv(args.out + ".csv", *csv_rows)
        report.write_json(args.out + ".json", summary)
    return 0


# ------------------------------------------------------------------ comb

def cmd_comb(args):
    f = parse_function(args.fn)
    if not args.lo < args.hi:
        sys.stderr.write(f"error: bad interval [{args.lo}, {args.hi}]\n")
        return USAGE_ERROR
    rep = singular.comb_scan(f, args.lo, args.hi, args.pitch, args.beta,
                             _schedule(args))
    payload = {"points": list(rep.points),
               "point_verdicts": list(rep.point_verdicts),
               "background_zero_fraction": rep.background_zero_fraction}
    sys.stdout.write(report.json_text(payload))
    if args.out:
        report.write_json(args.out + ".json", payload)
        report.write_csv(args.out + ".grid.csv",
                         ["x", "probe_x", "tag", "slope", "tail_mag"],
                         [(g.x, g.probe_x, g.tag, g.slope, g.tail_mag)
                          for g in rep.grid])
    return 0


# ------------------------------------------------------------------ main

def build_parser():
    ap = argparse.ArgumentParser(
        prog="fracvarlab",
        description="fractal variation laboratory (see README for the "
                    "expression grammar)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("limit", help="classify one variation limit")
    p.add_argument("--fn", required=True, help='expression, e.g. "powabs(x,0.5)"')
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--side", choices=["forward", "backward", "second"],
                   default="forward")
    p.add_argument("--out", help="prefix for .trace.csv / .verdict.json")
    _add_schedule_flags(p)
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("scan", help="reproduce the power-law limit tables")
    p.add_argument("--family", choices=["pow", "powneg"], default="pow")
    p.add_argument("--alphas", default="0.3,0.5,0.7,1.0,1.5")
    p.add_argument("--betas", default="0.3,0.5,0.7,1.0")
    p.add_argument("--xs", default="0,0.5,-0.5")
    p.add_argument("--out", help="CSV path (stdout when omitted)")
    p.add_argument("--svg", help="optional phase-diagram SVG path")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    _add_schedule_flags(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("delta", help="delta-sequence scaling checks")
    p.add_argument("--kind", choices=["rect", "tri", "smooth"], required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--nmax", type=int, default=20)
    p.add_argument("--u0", type=float, default=1.0)
    p.add_argument("--p", type=float, default=1.0, help="s = k*eps^p (smooth)")
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--out", help="prefix for .csv / .json")
    _add_schedule_flags(p)
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("comb", help="detect delta-comb divergences")
    p.add_argument("--fn", required=True)
    p.add_argument("--lo", type=float, required=True)
    p.add_argument("--hi", type=float, required=True)
    p.add_argument("--pitch", type=float, default=math.pi / 64)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--out", help="prefix for .json / .grid.csv")
    _add_schedule_flags(p)
    p.set_defaults(func=cmd_comb)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ParseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except (BadSchedule, deltalab.BadSpec, deltalab.BadOrder,
            singular.BadPitch, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
