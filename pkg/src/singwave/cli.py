"""Command-line entry point: scenarios in, plain-text artifacts out.

Outputs are reproducible: CSV columns are fixed-order with %.12e floats, JSON
matrices are nested [re, im] pairs, and sweeps combine results in fixed index
order.  SINGWAVE_THREADS caps the worker count for sweep commands.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import assembly, coefficients, hyperbolic, oracle, singular, wavepacket, zones
from .errors import SingwaveError, ZoneError
from .mat2 import mnorm

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully serializable record of one CLI invocation; replaying it is
    byte-identical because sweeps run in fixed index order."""

    scenario: str
    command: str
    params: dict
    seed: int = 0
    out: str | None = None


_NON_PARAM_KEYS = {"scenario", "config", "out", "seed", "fn", "cmd", "zcmd",
                   "kind", "wcmd"}


def _experiment_config(args, command: str) -> ExperimentConfig:
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in _NON_PARAM_KEYS and not callable(v)}
    return ExperimentConfig(scenario=str(args.scenario), command=command,
                            params=params, seed=getattr(args, "seed", 0),
                            out=getattr(args, "out", None))


def _pmap(fn, items):
    """Map preserving input order; SINGWAVE_THREADS > 1 enables a thread pool."""
    workers = int(os.environ.get("SINGWAVE_THREADS", "1"))
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _matrix_json(mat):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(mat)]


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(header)
        for row in rows:
            wr.writerow(
                ["%.12e" % v if isinstance(v, float) else v for v in row]
            )


def _emit_json(payload, out):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out in (None, "-"):
        print(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _build_ev(args):
    overrides = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            overrides = coefficients.parse_scenario_text(fh.read())
    return coefficients.scenario_from_config(args.scenario, **overrides)


def _add_common(p):
    p.add_argument("--scenario", default="default",
                   help="builtin name (default, nojump, curved) or config file path")
    p.add_argument("--config", default=None, help="key = value file overriding the scenario")
    p.add_argument("--out", default=None, help="output path or prefix ('-' = stdout)")
    p.add_argument("--seed", type=int, default=0)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_coeff_check(args):
    ev = _build_ev(args)
    moll, coeff = ev.moll, ev.coeff
    eps_list = _parse_eps(args.eps_list or "0.125,0.0625,0.03125,0.015625,0.0078125")
    grid = np.linspace(-moll.K, moll.K, 2001)
    checks = {
        "psi_mass": abs(moll._psi_integral(-moll.K, moll.K) - 1.0) < 1e-12,
        "psi_symmetric": bool(np.max(np.abs(moll.psi(grid) - moll.psi(-grid))) < 1e-12),
        "psi_below_phi": bool(np.all(moll.psi(grid) <= moll.c_psi_phi * moll.phi(grid) + 1e-12)),
        "positivity": all(
            ev.mollified_coeff(t, e, 0) >= coeff.b0 - 1e-12
            for e in eps_list for t in np.linspace(0.0, 2.0, 41)
        ),
    }
    report = coefficients.uniform_bound_report(ev, args.k_max, eps_list)
    ok = all(checks.values()) and all(
        report.bin_ratio(k, "b") <= 2.0 and report.bin_ratio(k, "d") <= 2.0
        for k in range(args.k_max + 1)
    )
    prefix = args.out or "coeff_check"
    paths = report.write_csv(prefix)
    print(f"coeff-check: {'ok' if ok else 'FAIL'} "
          f"(h={coeff.h:.6g}, H={coeff.H:.6g}, b0={coeff.b0:.6g}); wrote {', '.join(paths)}")
    return EXIT_OK if ok else EXIT_VALIDATION


def _cmd_zones_dump(args):
    ev = _build_ev(args)
    N = args.N if args.N is not None else ev.zone_constant().N
    table = zones.boundary_polyline(ev.moll, args.eps, N)
    path = (args.out or "zones") + ".csv"
    _write_csv(path, ["t", "xi", "tau", "lambda"],
               [tuple(float(v) for v in row) for row in table])
    print(f"zones dump: N={N:.6g}, eps={args.eps:g}; wrote {path}")
    return EXIT_OK


def _cmd_propagator(args):
    ev = _build_ev(args)
    payload = {"config": asdict(_experiment_config(args, f"propagator {args.kind}"))}
    if args.kind == "hyp":
        hp = hyperbolic.e_hyp(ev, args.t, args.s, args.xi, args.eps, tol=args.tol)
        if args.series_check:
            q, stats = hyperbolic.q_matrix(ev, args.t, args.s, args.xi, args.eps,
                                           args.tol, series_check=True)
            payload["series_discrepancy"] = stats.series_discrepancy
        payload.update(matrix=_matrix_json(hp.matrix),
                       stats={"steps": hp.q_stats.steps,
                              "est_error": hp.q_stats.est_error})
    elif args.kind == "sing":
        sp = singular.e_sing(ev, args.tau, args.theta, args.lam, args.eps, tol=args.tol)
        payload.update(matrix=_matrix_json(sp.matrix),
                       truncation_order=sp.truncation_order,
                       tail_bound=sp.tail_bound)
    elif args.kind == "full":
        if args.method == "direct":
            mat = oracle.direct_propagator(ev, args.t1, args.t2, args.xi, args.eps)
            payload.update(matrix=_matrix_json(mat), path=[["direct", [args.t1, args.t2]]])
        else:
            fp = assembly.full_propagator(ev, args.t1, args.t2, args.xi, args.eps,
                                          tol=args.tol)
            payload.update(matrix=_matrix_json(fp.matrix),
                           path=[[label.value, [a, b]] for label, (a, b) in fp.path])
    else:  # direct
        mat = oracle.direct_propagator(ev, args.t1, args.t2, args.xi, args.eps)
        payload.update(matrix=_matrix_json(mat))
    _emit_json(payload, args.out)
    return EXIT_OK


def _parse_eps(text):
    return [float(x) for x in text.split(",") if x.strip()]


_CONVERGE_DEFAULTS = {
    # per-quantity dyadic ranges inside each asymptotic regime
    "transfer": "0.0078125,0.00390625,0.001953125,0.0009765625,0.00048828125",
    "limit-sandwich": "0.03125,0.015625,0.0078125,0.00390625,0.001953125",
    "beta": "0.03125,0.015625,0.0078125,0.00390625,0.001953125",
}


def _cmd_converge(args):
    ev = _build_ev(args)
    coeff, moll = ev.coeff, ev.moll
    eps_list = _parse_eps(args.eps_list or _CONVERGE_DEFAULTS[args.quantity])
    thresholds = {"limit-sandwich": 0.8, "transfer": 0.8, "beta": 0.9}

    def one_error(eps):
        if args.quantity == "transfer":
            N = ev.zone_constant()
            lam = 64.0 * eps
            taus = zones.sing_boundary_taus(moll, lam, eps, N)
            if taus is None:
                raise ZoneError(
                    f"Lambda = 64*eps = {lam:g} lies above the zone apex; "
                    "use smaller eps"
                )
            sp = singular.e_sing(ev, taus[1], taus[0], lam, eps)
            return mnorm(sp.matrix - singular.transfer_limit(coeff))
        if args.quantity == "limit-sandwich":
            fp = assembly.full_propagator(ev, args.t1, args.t2, args.xi, eps)
            lim = assembly.limit_propagator(coeff, args.t1, args.t2, args.xi)
            return mnorm(fp.matrix - lim)
        taus = np.linspace(-(moll.K + 1.5), moll.K + 1.5, 301)
        return float(max(abs(ev.beta_eps(tv, eps)
                             - coefficients.beta_zero(coeff, moll, tv)) for tv in taus))

    errors = _pmap(one_error, eps_list)
    fit = oracle.fit_rate(list(zip(eps_list, errors)))
    path = (args.out or f"converge_{args.quantity}") + ".csv"
    _write_csv(path, ["eps", "error", "fitted_slope"],
               [(e, d, fit.slope) for e, d in zip(eps_list, errors)])
    need = args.min_slope if args.min_slope is not None else thresholds[args.quantity]
    ok = fit.slope >= need
    print(f"converge {args.quantity}: slope={fit.slope:.3f} "
          f"(threshold {need}); wrote {path}")
    return EXIT_OK if ok else EXIT_VALIDATION


def _cmd_wavepacket(args):
    ev = _build_ev(args)
    spec = wavepacket.PacketSpec(delta=args.delta, grid_size=args.grid)
    incident = wavepacket.evolve_packet(spec, ev, 0.0, args.eps, method=args.method)
    field = wavepacket.evolve_packet(spec, ev, args.t2, args.eps, method=args.method)
    report = wavepacket.measure_reflection(field, spec, incident_field=incident)
    prefix = args.out or "wavepacket"
    for name, f in (("t0", incident), (f"t{args.t2:g}", field)):
        _write_csv(f"{prefix}_field_{name}.csv", ["x", "re_u", "im_u", "abs_u"],
                   [(float(x), float(u.real), float(u.imag), float(abs(u)))
                    for x, u in zip(f.x, f.u)])
    xi = spec.xi_grid()
    u0_hat, u1_hat = wavepacket.build_packet(spec)
    mask = spec.active_modes()
    _write_csv(f"{prefix}_spectrum.csv", ["xi", "abs_u0_hat", "abs_u1_hat"],
               [(float(xi[j]), float(abs(u0_hat[j])), float(abs(u1_hat[j])))
                for j in np.nonzero(mask)[0]])
    payload = {
        "transmitted_ratio": report.transmitted_ratio,
        "reflected_ratio": report.reflected_ratio,
        "reflected_over_transmitted": report.reflected_over_transmitted,
        "l2": {"incident": report.incident_l2, "transmitted": report.transmitted_l2,
               "reflected": report.reflected_l2},
        "windows": asdict(report.windows),
        "config": asdict(_experiment_config(args, "wavepacket run")),
    }
    _emit_json(payload, f"{prefix}_report.json")
    print(f"wavepacket: transmitted/incident={report.transmitted_ratio:.4f}, "
          f"reflected/incident={report.reflected_ratio:.4f}; wrote {prefix}_report.json")
    return EXIT_OK


def _cmd_delta_model(args):
    mat = assembly.delta_model_transfer(args.eps, args.xi)
    e = np.e
    target = (1.0 / (2.0 * e)) * np.array([[1 + e, 1 - e], [1 - e, 1 + e]])
    err = float(np.max(np.abs(mat - target)))
    _emit_json({"matrix": _matrix_json(mat), "closed_form_error": err}, args.out)
    if args.check and err > 1e-2:
        print(f"delta-model: error {err:.3e} exceeds 1e-2", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument wiring


def build_parser() -> _Parser:
    parser = _Parser(prog="singwave",
                     description="Propagators and reflection experiments for a "
                                 "wave equation with a dissipation jump")
    sub = parser.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("coeff-check", help="mollifier/coefficient invariants + bound report")
    _add_common(p)
    p.add_argument("--k-max", type=int, default=3)
    p.add_argument("--eps-list", default=None)
    p.set_defaults(fn=_cmd_coeff_check)

    p = sub.add_parser("zones", help="zone geometry")
    zsub = p.add_subparsers(dest="zcmd", required=True)
    pd = zsub.add_parser("dump", help="boundary polyline as CSV")
    _add_common(pd)
    pd.add_argument("--eps", type=float, required=True)
    pd.add_argument("--N", type=float, default=None)
    pd.set_defaults(fn=_cmd_zones_dump)

    p = sub.add_parser("propagator", help="2x2 propagators as JSON")
    psub = p.add_subparsers(dest="kind", required=True)
    ph = psub.add_parser("hyp")
    _add_common(ph)
    ph.add_argument("--s", type=float, required=True)
    ph.add_argument("--t", type=float, required=True)
    ph.add_argument("--xi", type=float, required=True)
    ph.add_argument("--eps", type=float, required=True)
    ph.add_argument("--tol", type=float, default=1e-9)
    ph.add_argument("--series-check", action="store_true")
    ps = psub.add_parser("sing")
    _add_common(ps)
    ps.add_argument("--theta", type=float, required=True)
    ps.add_argument("--tau", type=float, required=True)
    ps.add_argument("--lambda", dest="lam", type=float, required=True)
    ps.add_argument("--eps", type=float, required=True)
    ps.add_argument("--tol", type=float, default=1e-10)
    pf = psub.add_parser("full")
    _add_common(pf)
    pf.add_argument("--t1", type=float, required=True)
    pf.add_argument("--t2", type=float, required=True)
    pf.add_argument("--xi", type=float, required=True)
    pf.add_argument("--eps", type=float, required=True)
    pf.add_argument("--tol", type=float, default=1e-9)
    pf.add_argument("--method", choices=["assembled", "direct"], default="assembled")
    pp = psub.add_parser("direct")
    _add_common(pp)
    pp.add_argument("--t1", type=float, required=True)
    pp.add_argument("--t2", type=float, required=True)
    pp.add_argument("--xi", type=float, required=True)
    pp.add_argument("--eps", type=float, required=True)
    for q in (ph, ps, pf, pp):
        q.set_defaults(fn=_cmd_propagator)

    p = sub.add_parser("converge", help="dyadic eps sweep with fitted rate")
    _add_common(p)
    p.add_argument("--quantity", choices=["limit-sandwich", "transfer", "beta"],
                   required=True)
    p.add_argument("--eps-list", default=None,
                   help="comma list; defaults to a per-quantity dyadic range")
    p.add_argument("--xi", type=float, default=16.0)
    p.add_argument("--t1", type=float, default=0.5)
    p.add_argument("--t2", type=float, default=1.5)
    p.add_argument("--min-slope", type=float, default=None)
    p.set_defaults(fn=_cmd_converge)

    p = sub.add_parser("wavepacket", help="reflection experiment")
    wsub = p.add_subparsers(dest="wcmd", required=True)
    pw = wsub.add_parser("run")
    _add_common(pw)
    pw.add_argument("--eps", type=float, default=0.01)
    pw.add_argument("--delta", type=float, default=1.0 / 16.0)
    pw.add_argument("--t2", type=float, default=1.75)
    pw.add_argument("--grid", type=int, default=4096)
    pw.add_argument("--method", choices=["direct", "assembled", "limit"],
                    default="direct")
    pw.set_defaults(fn=_cmd_wavepacket)

    p = sub.add_parser("delta-model", help="delta-dissipation transfer matrix")
    _add_common(p)
    p.add_argument("--eps", type=float, default=1e-3)
    p.add_argument("--xi", type=float, default=1.0)
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_delta_model)

    return parser


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except SingwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
