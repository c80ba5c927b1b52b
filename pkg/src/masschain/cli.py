"""Command-line front end.

    masschain <subcommand> --config run.json [--out PREFIX] [--format csv|json|svg|all]
              [--workers N] [--n-max N]

Exit codes: 0 success, 2 config error, 3 instability, 4 bound hypotheses
unmet, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import plotting
from .analysis.bounds import global_bound
from .analysis.contours import Metric, contour_grid, evaluate_metric
from .analysis.response import (default_omegas, max_over_chain, nyquist_locus,
                                refined_sup)
from .analysis.stability import natural_frequency, stability_check
from .chain_core import d_seq
from .config import FORMATS, RunConfig, load_config, parse_config
from .devices import h_of_s
from .errors import (ConfigError, HypothesesUnmetError, InstabilityError,
                     MassChainError)
from .mobius import (abs_F_fixed_i, fixed_points, mobius_data, sup_F_over_N,
                     zeta)
from .report import dumps, write_csv, write_json

log = logging.getLogger("masschain")


class Outputs:
    """Resolves artifact paths and which of them get written."""

    def __init__(self, prefix, fmt):
        self.prefix = str(prefix)
        self.fmt = fmt
        self._tmp = None

    def want(self, kind):
        return self.fmt in ("all", kind)

    def data_path(self, suffix, kind):
        # SVG-only runs still need the data files to render from
        if self.want(kind):
            return Path(f"{self.prefix}_{suffix}")
        if self._tmp is None:
            self._tmp = tempfile.TemporaryDirectory()
        return Path(self._tmp.name) / suffix

    def svg_path(self, suffix):
        return Path(f"{self.prefix}_{suffix}") if self.want("svg") else None

    def close(self):
        if self._tmp is not None:
            self._tmp.cleanup()


def _omegas(cfg: RunConfig, dev, m):
    if cfg.freq_range is None:
        return default_omegas(dev, m, cfg.freq_points)
    lo, hi = cfg.freq_range
    scale = natural_frequency(dev, m) if cfg.freq_relative else 1.0
    return np.geomspace(lo * scale, hi * scale, cfg.freq_points)


def _require_stable(dev, m):
    rep = stability_check(dev, m)
    if not rep.stable:
        w = ", ".join(f"{c[0]:.6g}" for c in rep.crossings[:3])
        raise InstabilityError(f"{dev.label}: h(jw) enters (-4,0) at w = {w or '?'} ({rep.status})")


# --- subcommands ---------------------------------------------------------------

def cmd_response(cfg: RunConfig, out: Outputs, args):
    dev, m = cfg.device, cfg.require_mass()
    if not cfg.N_list:
        raise ConfigError("response needs a non-empty chain.N list")
    _require_stable(dev, m)
    omegas = _omegas(cfg, dev, m)
    table = max_over_chain(dev, m, omegas, cfg.N_list)
    sups = {}
    for k, N in enumerate(cfg.N_list):
        peak = refined_sup(lambda w, N=N: max_over_chain(dev, m, w, [N])[..., 0], omegas)
        sups[str(N)] = {"sup": peak.value, "omega": peak.omega}
    overall = max(v["sup"] for v in sups.values())
    csv_path = write_csv(out.data_path("response.csv", "csv"),
                         ["omega"] + [f"N={N}" for N in cfg.N_list],
                         [omegas] + [table[:, k] for k in range(len(cfg.N_list))])
    meta = {
        "kind": "FrequencyResponse",
        "title": f"{dev.label}: max_i |F_N^(i)|",
        "device": dev.label,
        "mass": m,
        "N": cfg.N_list,
        "sup": sups,
        "max_sup": overall,
        "all_le_one": overall <= 1.0,
        "config": cfg.raw,
    }
    json_path = write_json(out.data_path("response.json", "json"), meta)
    if (svg := out.svg_path("response.svg")) is not None:
        plotting.render_response(csv_path, json_path, svg)
    for N in cfg.N_list:
        print(f"N={N:<5d} sup_w max_i |F| = {sups[str(N)]['sup']:.9f}")
    print(f"overall {overall:.9f}  ({'<= 1' if overall <= 1 else '> 1'})")
    return 0


def _grid_runs(g):
    if g.metric is Metric.MAX_F_I1:
        return g.i_list
    return [1]


def cmd_contour(cfg: RunConfig, out: Outputs, args):
    g = cfg.grid
    if g is None:
        raise ConfigError("contour needs a grid block")
    n_max = args.n_max or g.n_max
    levels = g.level_list()
    results = [contour_grid(g.region, g.resolution, g.metric, n_max, levels, i=i,
                            workers=args.workers) for i in _grid_runs(g)]
    first = results[0]
    G = first.g.reshape(-1)
    cols = [G.real, G.imag] + [r.values.reshape(-1) for r in results]
    names = ["re_g", "im_g"] + (["value"] if len(results) == 1
                                 else [f"value_i={r.i}" for r in results])
    write_csv(out.data_path("grid.csv", "csv"), names, cols)

    contours = []
    for r in results:
        for lv, lines in r.contours:
            contours.append({"i": r.i, "ln_gamma": lv, "gamma": math.exp(lv),
                             "polylines": [ln.tolist() for ln in lines]})
    meta = {
        "kind": "ContourMap",
        "title": g.metric.value + (f" (N <= {n_max})" if g.metric in (Metric.MAX_F_I1, Metric.MAX_F_ALL_I) else ""),
        "metric": g.metric.value,
        "region": g.region.as_list(),
        "resolution": list(g.resolution),
        "n_max": n_max,
        "levels": levels,
        "contours": contours,
        "nyquist": [],
        "config": cfg.raw,
    }
    if cfg.devices:
        m = cfg.require_mass()
        for dev in cfg.devices:
            w = _omegas(cfg, dev, m)
            loc = nyquist_locus(dev, m, w)
            along = evaluate_metric(loc, Metric.MAX_F_ALL_I, n_max)
            meta["nyquist"].append({
                "device": dev.label, "omega": w.tolist(),
                "re": loc.real.tolist(), "im": loc.imag.tolist(),
                "max_F_along_locus": float(np.nanmax(along)),
                "enters_gamma_1_region": bool(np.nanmax(along) > 1.0),
            })
            log.info("%s: max metric along locus %.6f", dev.label, np.nanmax(along))
    json_path = write_json(out.data_path("contours.json", "json"), meta)
    if (svg := out.svg_path("contour.svg")) is not None:
        plotting.render_contour(json_path, svg)
    print(f"{g.metric.value}: grid {g.resolution[0]}x{g.resolution[1]}, "
          f"{sum(len(c['polylines']) for c in contours)} polylines over {len(levels)} levels")
    for loc in meta["nyquist"]:
        print(f"  {loc['device']}: max F along locus {loc['max_F_along_locus']:.6f}"
              f" ({'enters' if loc['enters_gamma_1_region'] else 'avoids'} gamma=1 region)")
    return 0


def cmd_nyquist(cfg: RunConfig, out: Outputs, args):
    if not cfg.devices:
        raise ConfigError("nyquist needs at least one device")
    m = cfg.require_mass()
    w = _omegas(cfg, cfg.devices[0], m)
    header, cols = ["omega"], [w]
    for dev in cfg.devices:
        loc = nyquist_locus(dev, m, w)
        header += [f"{dev.label} re", f"{dev.label} im"]
        cols += [loc.real, loc.imag]
    csv_path = write_csv(out.data_path("nyquist.csv", "csv"), header, cols)
    meta = {"kind": "NyquistOverlay", "title": "Nyquist diagram of g(s) = Y(s)/(sm)",
            "devices": [d.label for d in cfg.devices], "mass": m, "config": cfg.raw}
    if cfg.grid is not None:
        meta["view"] = cfg.grid.region.as_list()
    json_path = write_json(out.data_path("nyquist.json", "json"), meta)
    if (svg := out.svg_path("nyquist.svg")) is not None:
        plotting.render_nyquist(csv_path, json_path, svg)
    for dev, (re, im) in zip(cfg.devices, zip(cols[1::2], cols[2::2])):
        print(f"{dev.label}: g(jw) from {re[0]:.4g}{im[0]:+.4g}j to {re[-1]:.4g}{im[-1]:+.4g}j")
    return 0


def cmd_stability(cfg: RunConfig, out: Outputs, args):
    if not cfg.devices:
        raise ConfigError("stability needs at least one device")
    m = cfg.require_mass()
    reports = []
    for dev in cfg.devices:
        rep = stability_check(dev, m).to_dict()
        rep["device"] = dev.label
        reports.append(rep)
    doc = {"kind": "StabilityReport", "mass": m, "reports": reports, "config": cfg.raw}
    if out.want("json"):
        write_json(out.data_path("stability.json", "json"), doc)
    sys.stdout.write(dumps(reports))
    return 0 if all(r["stable"] for r in reports) else InstabilityError.exit_code


def cmd_bound(cfg: RunConfig, out: Outputs, args):
    if not cfg.devices:
        raise ConfigError("bound needs at least one device")
    m = cfg.require_mass()
    n_max = args.n_max or 200
    entries, rows, failed = [], [], []
    for k, dev in enumerate(cfg.devices, start=1):
        try:
            rep = global_bound(dev, m, cfg.omega1, i_max=5, n_max=n_max)
        except HypothesesUnmetError as exc:
            failed.append((dev.label, exc.reason))
            entries.append({"device": dev.label, "hypotheses_met": False, "reason": exc.reason})
            continue
        d = rep.to_dict()
        entries.append({"device": dev.label, "hypotheses_met": True, "report": d,
                        "verdict": "PASS" if rep.sound else "FAIL"})
        t = rep.taylor
        rows.append([k, t.c1, t.c2, t.c3, t.c4, t.omega0, t.omega1, rep.low_freq_bound,
                     rep.A0, rep.zeta0_mod, rep.high_freq_bound, rep.global_bound,
                     rep.empirical_sup])
        w = default_omegas(dev, m)
        z = zeta(h_of_s(dev, m, 1j * w))
        sweep = [abs_F_fixed_i(z, i, n_max).max(axis=-1) for i in range(1, 6)]
        csv_path = write_csv(out.data_path(f"bound_sweep_{k}.csv", "csv"),
                             ["omega"] + [f"i={i}" for i in range(1, 6)], [w] + sweep)
        meta_path = write_json(out.data_path(f"bound_sweep_{k}.json", "json"),
                               {"title": f"{dev.label}: sup over N <= {n_max}", "report": d})
        if (svg := out.svg_path(f"bound_{k}.svg")) is not None:
            plotting.render_bound(csv_path, meta_path, svg)
    if rows:
        write_csv(out.data_path("bound.csv", "csv"),
                  ["device", "c1", "c2", "c3", "c4", "omega0", "omega1", "low_freq_bound",
                   "A0", "zeta0_mod", "high_freq_bound", "global_bound", "empirical_sup"],
                  list(np.array(rows, dtype=float).T))
    write_json(out.data_path("bound.json", "json"),
               {"kind": "BoundTable", "mass": m, "n_max": n_max, "entries": entries, "config": cfg.raw})

    print(f"{'device':<12}{'low band':>14}{'high band':>14}{'global':>14}{'empirical':>12}  verdict")
    for e in entries:
        if not e["hypotheses_met"]:
            print(f"{e['device']:<12}  hypotheses unmet: {e['reason']}")
            continue
        r = e["report"]
        print(f"{e['device']:<12}{r['low_freq_bound']:>14.6g}{r['high_freq_bound']:>14.6g}"
              f"{r['global_bound']:>14.6g}{r['empirical_sup']:>12.6f}  {e['verdict']}")
    if failed:
        for name, reason in failed:
            print(f"error: {name}: {reason}", file=sys.stderr)
        return HypothesesUnmetError.exit_code
    return 0


def _points(cfg, args):
    pts = list(cfg.h_points) if cfg else []
    for s in args.h or []:
        try:
            pts.append(complex(s.replace(" ", "")))
        except ValueError:
            raise ConfigError(f"--h {s!r} is not a complex number") from None
    if not pts:
        raise ConfigError("no h values given (config points.h / points.g or --h)")
    return pts


def cmd_fixed_point(cfg: RunConfig, out: Outputs, args):
    pts = _points(cfg, args)
    i_list = cfg.i_list if cfg else [1]
    i_max = args.i_max or (cfg.i_max if cfg else 10)
    n_max = args.n_max or 200
    docs = []
    for h in pts:
        md = mobius_data(h, i_max).to_dict()
        fps = []
        for i in i_list:
            fp = fixed_points(i, h)
            sup = sup_F_over_N(i, h, max(n_max, i))
            fps.append({"i": i, "mu_plus": fp.mu_plus, "mu_minus": fp.mu_minus,
                        "abs_mu_plus": abs(fp.mu_plus),
                        "sup_F": sup.value, "argmax_N": sup.argmax_N,
                        "at_n_max": sup.at_n_max, "converges": sup.converges})
        md["fixed_points"] = fps
        docs.append(md)
    if out.want("json"):
        write_json(out.data_path("fixed_point.json", "json"), docs)
    sys.stdout.write(dumps(docs))
    return 0


def cmd_dseq(cfg: RunConfig, out: Outputs, args):
    pts = _points(cfg, args)
    i_max = args.i_max or (cfg.i_max if cfg else 10)
    idx = np.arange(-1, i_max + 1)
    header, cols = ["i"], [idx]
    for h in pts:
        vals = d_seq(h, i_max).as_array()
        header += [f"re d(h={h})", f"im d(h={h})"]
        cols += [vals.real, vals.imag]
    if out.want("csv"):
        write_csv(out.data_path("dseq.csv", "csv"), header, cols)
    print(",".join(header))
    for row in np.column_stack(cols):
        print(",".join(["%d" % row[0]] + ["%.15e" % v for v in row[1:]]))
    return 0


COMMANDS = {
    "response": cmd_response,
    "contour": cmd_contour,
    "nyquist": cmd_nyquist,
    "stability": cmd_stability,
    "bound": cmd_bound,
    "fixed-point": cmd_fixed_point,
    "dseq": cmd_dseq,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="masschain", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="output path prefix (overrides output.prefix)")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--n-max", type=int, default=None)
        p.add_argument("--format", choices=FORMATS, default=None)
        if name in ("fixed-point", "dseq"):
            p.add_argument("--h", action="append", help="complex h, e.g. 1+0.5j (repeatable)")
            p.add_argument("--i-max", type=int, default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = None
    try:
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if args.n_max is not None and args.n_max < 1:
            raise ConfigError("--n-max must be >= 1")
        if args.config:
            cfg = load_config(args.config)
        elif args.command in ("fixed-point", "dseq"):
            cfg = parse_config({})
        else:
            raise ConfigError(f"{args.command} needs --config")
        out = Outputs(args.out or cfg.prefix, args.format or cfg.out_format)
        return COMMANDS[args.command](cfg, out, args)
    except MassChainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    finally:
        if out is not None:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
