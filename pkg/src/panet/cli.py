"""Command-line interface.

Subcommands:
  generate    grow one graph and write its edge list
  metrics     degree/clustering statistics of an edge list, as CSV
  theory      closed-form curve table, as CSV
  oracle      recurrence integration vs closed form, as CSV
  experiment  run a scenario file or a named figure preset

Exit codes: 0 success, 2 invalid parameters, 3 check failure (--check).
Worker count for experiment runs comes from the PANET_WORKERS env var.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .experiments import (
    PRESETS,
    Scenario,
    ScenarioResult,
    fit_power_exponent,
    make_preset,
    run_scenario,
    theory_tables,
)
from .graphgen import export_edge_list, generate, import_edge_list
from .metrics import clustering, degree_profile, pearson_assortativity
from .oracle import compare_closed_form, integrate_S
from .params import (
    GeneratorParams,
    derive_generator_params,
    derive_model_params,
    make_model_params,
)
from .theory import (
    build_theory_curve,
    dnn_hypothesis_critical,
    dnn_hypothesis_supercritical,
    dnn_theory,
)

_EXIT_OK = 0
_EXIT_INVALID = 2
_EXIT_CHECK_FAILED = 3


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        return format(x, ".10g")
    return str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])


def _resolve_generator(args) -> GeneratorParams:
    by_model = args.A is not None or args.D is not None
    by_knobs = args.beta is not None or args.c is not None
    if by_model == by_knobs:
        raise ValueError("give either --A and --D, or --beta and --c")
    if by_model:
        if args.A is None or args.D is None:
            raise ValueError("--A and --D must be given together")
        return derive_generator_params(args.m, args.A, args.D)
    if args.beta is None or args.c is None:
        raise ValueError("--beta and --c must be given together")
    return GeneratorParams(m=args.m, beta=args.beta, c=args.c)


def _cmd_generate(args) -> int:
    gp = _resolve_generator(args)
    g = generate(gp, args.n, args.seed)
    export_edge_list(g, args.out)
    p = derive_model_params(gp)
    print(
        f"wrote {g.num_edges} edges ({g.n} vertices) to {args.out} "
        f"[m={p.m} A={p.A:.6g} B={p.B:.6g} D={p.D:.6g}]"
    )
    return _EXIT_OK


def _cmd_metrics(args) -> int:
    g = import_edge_list(getattr(args, "in"))
    prof = degree_profile(g)
    cp = clustering(g)
    rows = [
        (d, prof.N[d], prof.S[d], prof.S[d] / (prof.N[d] * d), cp.C_by_degree.get(d, 0.0))
        for d in sorted(prof.N)
    ]
    _write_csv(Path(args.out), ["d", "N", "S", "dnn", "C_of_d"], rows)
    r = pearson_assortativity(g)
    print(f"n={prof.n} edges={prof.num_edges} W={prof.W}")
    print(f"C1={cp.C1:.6g} C2={cp.C2:.6g} pearson={r:.6g}")
    print(f"wrote per-degree table to {args.out}")
    return _EXIT_OK


def _cmd_theory(args) -> int:
    p = make_model_params(args.m, args.A, args.D)
    rows = theory_tables(p, args.d_max, n_list=args.n or ())
    if p.A < 0.5:
        header = ["d", "c_exact", "c_asym", "M", "dnn_theory", "dnn_asym"]
        out = [
            (r["d"], r["c_exact"], r["c_asym"], r["M"], r["dnn_theory"], r["dnn_asym"])
            for r in rows
        ]
    else:
        header = ["d", "n", "c_exact", "dnn_hyp", "dnn_hyp_asym"]
        out = [(r["d"], r["n"], r["c_exact"], r["dnn_hyp"], r["dnn_hyp_asym"]) for r in rows]
    _write_csv(Path(args.out), header, out)
    print(f"wrote {len(out)} theory rows to {args.out}")
    return _EXIT_OK


def _cmd_oracle(args) -> int:
    p = make_model_params(args.m, args.A, args.D)
    table = integrate_S(p, args.n_end, args.d_max)
    report = compare_closed_form(table)
    rows = [
        (int(r["n"]), d, r["S_over_n"], r["M_closed"], r["rel_err_S"])
        for d, r in report.items()
    ]
    _write_csv(Path(args.out), ["n", "d", "S_over_n", "M_closed", "rel_err"], rows)
    worst = max(r["rel_err_S"] for r in report.values())
    print(f"wrote {len(rows)} oracle rows to {args.out} (max rel err {worst:.3e})")
    return _EXIT_OK


# ---------------------------------------------------------------------------
# Experiment output writers.


def _dnn_vs_d_rows(res: ScenarioResult, n: int):
    s = res.scenario
    p = s.model
    ds = res.populated_degrees(n)
    subcritical = p.A < 0.5
    if subcritical:
        curve = build_theory_curve(p, ds)
    rows = []
    for i, d in enumerate(ds):
        emp = res.dnn_pooled(n, d)
        if subcritical:
            theory = float(curve.dnn_exact[i])
        elif p.A > 0.5:
            theory = dnn_hypothesis_supercritical(p, d, n, res.fitted_constant or 1.0)
        else:
            theory = dnn_hypothesis_critical(s.m, n, res.fitted_constant or 1.0, d=d)
        rows.append((d, res.pooled_N[n][d], emp, theory))
    return rows


def _write_scenario_outputs(res: ScenarioResult, out_dir: Path) -> list[Path]:
    s = res.scenario
    written = []
    for n in s.n_list:
        path = out_dir / f"{s.name}_dnn_vs_d_n{n}.csv"
        _write_csv(path, ["d", "N_pooled", "dnn_mean", "dnn_theory"], _dnn_vs_d_rows(res, n))
        written.append(path)
    if len(s.n_list) > 1 or "dnn_vs_n" in s.outputs or "err_vs_n" in s.outputs:
        d0 = s.probe_degree
        rows = []
        for n in s.n_list:
            mean = res.probe_mean(n)
            stderr = res.probe_stderr(n)
            if s.A < 0.5:
                overlay = dnn_theory(s.model, d0)
                err = abs(mean - overlay)
            elif s.A > 0.5:
                overlay = dnn_hypothesis_supercritical(
                    s.model, d0, n, res.fitted_constant or 1.0
                )
                err = abs(mean - overlay)
            else:
                overlay = dnn_hypothesis_critical(s.m, n, res.fitted_constant or 1.0, d=d0)
                err = abs(mean - overlay)
            rows.append((n, d0, mean, stderr, overlay, err))
        path = out_dir / f"{s.name}_dnn_vs_n.csv"
        _write_csv(path, ["n", "d0", "dnn_mean", "dnn_stderr", "overlay", "err"], rows)
        written.append(path)
    return written


def _write_sweep_csv(results: list[ScenarioResult], out_dir: Path, preset: str) -> Path | None:
    """fig4: one row per D value at the probe degree."""
    if preset != "fig4":
        return None
    rows = []
    for res in results:
        s = res.scenario
        n = s.n_list[-1]
        rows.append((s.D, s.probe_degree, res.probe_mean(n), res.probe_stderr(n)))
    path = out_dir / "fig4_dnn_vs_D.csv"
    _write_csv(path, ["D", "d0", "dnn_mean", "dnn_stderr"], rows)
    return path


_GNUPLOT_TEMPLATES = {
    "dnn_vs_d": (
        'set logscale x\nset xlabel "d"\nset ylabel "d_nn(d)"\n'
        'plot "{csv}" using 1:3 with points title "simulation", '
        '"{csv}" using 1:4 with lines title "theory"\n'
    ),
    "dnn_vs_n": (
        'set logscale x\nset xlabel "n"\nset ylabel "d_nn(d0)"\n'
        'plot "{csv}" using 1:3:4 with yerrorbars title "simulation", '
        '"{csv}" using 1:5 with lines title "overlay"\n'
    ),
    "dnn_vs_D": (
        'set xlabel "D"\nset ylabel "d_nn(d0)"\n'
        'plot "{csv}" using 1:3:4 with yerrorbars title "simulation"\n'
    ),
}


def _emit_gnuplot(csv_paths: list[Path], out_dir: Path, preset: str) -> Path:
    lines = ["set terminal pngcairo size 800,600", ""]
    for p in csv_paths:
        for kind, tpl in _GNUPLOT_TEMPLATES.items():
            if kind in p.name:
                lines.append(f'set output "{p.stem}.png"')
                lines.append(tpl.format(csv=p.name))
                break
    path = out_dir / f"{preset}.gp"
    path.write_text("\n".join(lines) + "\n")
    return path


# ---------------------------------------------------------------------------
# Preset --check rules (the invariants each figure is meant to exhibit).


def _check_preset(preset: str, results: list[ScenarioResult]) -> list[str]:
    """Return a list of failure messages (empty = pass)."""
    fails: list[str] = []

    def expect(ok: bool, msg: str) -> None:
        if not ok:
            fails.append(msg)

    if preset == "fig1a":
        res = results[0]
        s = res.scenario
        n = s.n_list[-1]
        ds = [d for d in res.populated_degrees(n, threshold=500)]
        curve = build_theory_curve(s.model, ds)
        for i, d in enumerate(ds):
            rel = abs(res.dnn_pooled(n, d) / curve.dnn_exact[i] - 1.0)
            expect(rel <= 0.10, f"d={d}: dnn off theory by {rel:.1%} (> 10%)")
    elif preset == "fig1b":
        res = results[0]
        s = res.scenario
        n = s.n_list[-1]
        ds = res.populated_degrees(n)
        curve = build_theory_curve(s.model, ds)
        below = sum(
            1 for i, d in enumerate(ds) if res.dnn_pooled(n, d) <= curve.dnn_exact[i]
        )
        frac = below / len(ds)
        expect(frac >= 0.90, f"only {frac:.0%} of bins below theory (< 90%)")
    elif preset == "fig2":
        final_errs = {}
        for res in results:
            s = res.scenario
            t = dnn_theory(s.model, s.probe_degree)
            errs = [abs(res.probe_mean(n) - t) for n in s.n_list]
            expect(
                all(a > b for a, b in zip(errs, errs[1:])),
                f"{s.name}: err(m+1) not strictly decreasing: {errs}",
            )
            final_errs[s.A] = errs[-1]
        if 0.2 in final_errs and 0.4 in final_errs:
            expect(
                final_errs[0.4] > final_errs[0.2],
                "A=0.4 error not above A=0.2 error at the largest n",
            )
    elif preset == "fig4":
        n = results[0].scenario.n_list[-1]
        pts = [(res.scenario.D, res.probe_mean(n)) for res in results]
        vals = [y for _, y in pts]
        rel_var = (max(vals) - min(vals)) / min(vals)
        expect(rel_var <= 0.15, f"dnn(d0) varies {rel_var:.1%} across D (> 15%)")
        slope = np.polyfit([x for x, _ in pts], vals, 1)[0]
        expect(abs(slope) <= 1.0, f"dnn(d0)-vs-D slope {slope:.3f} not small")
    elif preset in ("fig5a", "fig6a"):
        res = results[0]
        s = res.scenario
        if preset == "fig5a":
            n = s.n_list[-1]
            pts = [
                (d, res.dnn_pooled(n, d))
                for d in res.populated_degrees(n)
                if 15 <= d <= 150
            ]
            slope, _, _ = fit_power_exponent(pts)
            expect(abs(slope) <= 0.08, f"critical d-slope {slope:.3f} (|.| > 0.08)")
        else:
            xs = np.log(np.asarray(s.n_list, dtype=float))
            ys = np.array([res.probe_mean(n) for n in s.n_list])
            corr = float(np.corrcoef(xs, ys)[0, 1])
            expect(corr >= 0.99, f"corr(dnn, ln n) = {corr:.4f} (< 0.99)")
    elif preset in ("fig5b", "fig6b"):
        res = results[0]
        s = res.scenario
        if preset == "fig5b":
            n = s.n_list[-1]
            pts = [
                (d, res.dnn_pooled(n, d))
                for d in res.populated_degrees(n)
                if 4 <= d <= 100
            ]
            slope, _, _ = fit_power_exponent(pts)
            target = 1.0 / s.A - 2.0
            expect(
                abs(slope - target) <= 0.15,
                f"supercritical d-slope {slope:.3f} vs {target:.3f} +/- 0.15",
            )
        else:
            pts = [(n, res.probe_mean(n)) for n in s.n_list]
            slope, _, _ = fit_power_exponent(pts)
            target = 2.0 * s.A - 1.0
            expect(
                abs(slope - target) <= 0.1,
                f"supercritical n-slope {slope:.3f} vs {target:.3f} +/- 0.1",
            )
    # fig1a also doubles as the CCDF sanity figure; fig3 is theory-only.
    return fails


def _cmd_experiment(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.mode == "run":
        text = Path(args.scenario).read_text()
        import json as _json

        payload = _json.loads(text)
        payload = payload if isinstance(payload, list) else [payload]
        scenarios = [Scenario.from_json(_json.dumps(p)) for p in payload]
        preset = None
    else:
        scenarios = make_preset(args.name, full=args.full, n=args.n, seeds=args.seeds)
        preset = args.name

    results: list[ScenarioResult] = []
    written: list[Path] = []
    for s in scenarios:
        if "theory_only" in s.outputs:
            rows = theory_tables(s.model, d_max=10**4 if s.A < 0.5 else 100)
            path = out_dir / f"{s.name}_theory.csv"
            if s.A < 0.5:
                _write_csv(
                    path,
                    ["d", "c_exact", "c_asym", "M", "dnn_theory", "dnn_asym"],
                    [
                        (r["d"], r["c_exact"], r["c_asym"], r["M"], r["dnn_theory"], r["dnn_asym"])
                        for r in rows
                    ],
                )
            written.append(path)
            print(f"{s.name}: wrote {path}")
            continue
        res = run_scenario(s)
        results.append(res)
        paths = _write_scenario_outputs(res, out_dir)
        written.extend(paths)
        extra = ""
        if res.fitted_constant is not None:
            extra = f" (fitted constant {res.fitted_constant:.4g})"
        print(f"{s.name}: wrote {', '.join(p.name for p in paths)}{extra}")

    if preset:
        sweep = _write_sweep_csv(results, out_dir, preset)
        if sweep:
            written.append(sweep)
            print(f"wrote {sweep}")
    if args.gnuplot:
        gp = _emit_gnuplot(written, out_dir, preset or "scenario")
        print(f"wrote {gp}")

    if args.check:
        if not preset:
            print("--check requires a named preset", file=sys.stderr)
            return _EXIT_INVALID
        fails = _check_preset(preset, results)
        if fails:
            for msg in fails:
                print(f"CHECK FAIL [{preset}]: {msg}", file=sys.stderr)
            return _EXIT_CHECK_FAILED
        print(f"CHECK PASS [{preset}]")
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="panet",
        description="Preferential-attachment multigraph simulator with "
        "triangle steps: generation, metrics, closed-form theory and "
        "figure-reproduction experiments.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="grow a graph, write an edge list")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--A", type=float)
    g.add_argument("--D", type=float)
    g.add_argument("--beta", type=float)
    g.add_argument("--c", type=float)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(func=_cmd_generate)

    mt = sub.add_parser("metrics", help="per-degree statistics of an edge list")
    mt.add_argument("--in", dest="in", required=True)
    mt.add_argument("--out", required=True)
    mt.set_defaults(func=_cmd_metrics)

    th = sub.add_parser("theory", help="closed-form curve table")
    th.add_argument("--m", type=int, required=True)
    th.add_argument("--A", type=float, required=True)
    th.add_argument("--D", type=float, required=True)
    th.add_argument("--d-max", type=int, required=True)
    th.add_argument("--n", type=int, nargs="*", help="sizes for hypothesis columns (A >= 1/2)")
    th.add_argument("--out", required=True)
    th.set_defaults(func=_cmd_theory)

    orc = sub.add_parser("oracle", help="recurrence integration vs closed form")
    orc.add_argument("--m", type=int, required=True)
    orc.add_argument("--A", type=float, required=True)
    orc.add_argument("--D", type=float, required=True)
    orc.add_argument("--n-end", type=int, required=True)
    orc.add_argument("--d-max", type=int, required=True)
    orc.add_argument("--out", required=True)
    orc.set_defaults(func=_cmd_oracle)

    ex = sub.add_parser("experiment", help="run scenarios / figure presets")
    exsub = ex.add_subparsers(dest="mode", required=True)
    run_p = exsub.add_parser("run", help="run a scenario JSON file")
    run_p.add_argument("scenario")
    pre_p = exsub.add_parser("preset", help="run a named figure preset")
    pre_p.add_argument("name", choices=PRESETS)
    pre_p.add_argument("--full", action="store_true", help="reference sizes (n = 1e6)")
    pre_p.add_argument("--n", type=int, help="override every size (desk testing)")
    pre_p.add_argument("--seeds", type=int, help="override seed count")
    for p in (run_p, pre_p):
        p.add_argument("--out-dir", default=".")
        p.add_argument("--gnuplot", action="store_true", help="emit a gnuplot script")
        p.add_argument("--check", action="store_true", help="verify figure invariants")
    run_p.set_defaults(func=_cmd_experiment, full=False, n=None, seeds=None)
    pre_p.set_defaults(func=_cmd_experiment)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
