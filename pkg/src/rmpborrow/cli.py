"""Command-line front end.

Exit codes: 0 success, 1 property or tolerance failure, 2 usage or config
error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import theorems
from .borrowing import ElicitationSpec, elicit_prior_weight, level_set
from .config import ConfigError, load_config
from .montecarlo import McConfig, mc_estimate
from .numerics import DEFAULT_QUAD, NumericalError, QuadratureSpec
from .oc import mean_posterior_weight, oc_curve, power, type_one_error
from .rmp import NormalComponent, RobustMixturePrior, SamplingModel, posterior_weight, predictive_spec
from .scenarios import ILLUSTRATIVE, TABLE1_N0, Table1Row, anchor_strength, table1

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MIN_MC_REPS = 10_000


class UsageError(Exception):
    pass


def fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.10g" % float(v)


def write_csv(header, rows, out: str | None) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="")


def _quad(args, cfg=None) -> QuadratureSpec:
    if cfg is not None:
        return cfg.quad_spec(args.quad_tol)
    if args.quad_tol is None:
        return DEFAULT_QUAD
    return QuadratureSpec(abs_tol=args.quad_tol)


def _oc_job(job):
    sc, grid, delta_star, quad = job
    return oc_curve(sc.design, grid, delta_star, quad)


def cmd_oc(args) -> int:
    cfg = load_config(args.config)
    quad = _quad(args, cfg)
    grid = cfg.sweep.grid()
    scenarios = cfg.scenarios()
    jobs = [(sc, grid, cfg.trial.delta_star, quad) for sc in scenarios]
    if args.threads > 1:
        with ProcessPoolExecutor(max_workers=args.threads) as pool:
            curves = list(pool.map(_oc_job, jobs))
    else:
        curves = [_oc_job(j) for j in jobs]
    rows = []
    for sc, curve in zip(scenarios, curves):
        for r in curve:
            rows.append((sc.name, sc.omega, sc.n0, sc.mu_rob, r.D, r.alpha, r.power, r.mean_posterior_weight))
    out = args.out if args.out is not None else cfg.output.get("path")
    write_csv(("scenario", "omega", "n0", "mu_rob", "D", "alpha", "power", "mean_posterior_weight"), rows, out)
    return EXIT_OK


def cmd_table1(args) -> int:
    if not args.vag_lo < args.vag_hi:
        raise UsageError("--vag-lo must be below --vag-hi")
    quad = _quad(args)
    rows = table1(ILLUSTRATIVE, quad, (args.vag_lo, args.vag_hi), workers=args.threads)
    B0 = anchor_strength(ILLUSTRATIVE).B
    note = f"range-dependent: flat on [{args.vag_lo:g}, {args.vag_hi:g}]"
    out_rows = []
    for r in rows:
        dev = r.B - B0 if math.isfinite(r.B) else math.nan
        out_rows.append(r.values() + (dev, note))
    write_csv(Table1Row.COLUMNS + ("B_deviation", "alpha_avg_vag_note"), out_rows, args.out)
    return EXIT_OK


def _informative_sampling(args):
    if args.config is None:
        t = ILLUSTRATIVE
        return NormalComponent(t.mu_inf, t.s ** 2 / t.n_inf), SamplingModel.from_arm(t.s, t.n_c), t.s
    cfg = load_config(args.config)
    p = cfg.control_priors[0]
    s = cfg.trial.s
    var = p.sigma2_inf if p.sigma2_inf is not None else s * s / p.n_inf
    return NormalComponent(p.mu_inf, var), SamplingModel.from_arm(s, cfg.trial.n_c), s


def cmd_elicit(args) -> int:
    if not math.isfinite(args.d_star):
        raise UsageError("--d-star must be finite")
    if not args.sigma_rob_multiple > 0:
        raise UsageError("--sigma-rob-multiple must be positive")
    informative, sampling, s = _informative_sampling(args)
    spec = ElicitationSpec(args.d_star, args.sigma_rob_multiple * s, args.mu_rob)
    omega, strength = elicit_prior_weight(spec, informative, sampling)
    mu_rob = informative.mean if args.mu_rob is None else args.mu_rob
    robust = NormalComponent(mu_rob, spec.sigma_rob ** 2)
    rmp = RobustMixturePrior(omega, informative, robust)
    R = predictive_spec(rmp, sampling).ratio
    x_star = informative.mean + args.d_star
    check = float(posterior_weight(rmp, x_star, sampling))
    header = ("d_star", "sigma_rob", "mu_rob", "omega", "Omega", "R", "B", "paper_beta", "verification_weight")
    row = (args.d_star, spec.sigma_rob, mu_rob, omega, strength.B / R, R, strength.B, strength.paper_beta, check)
    if args.out is not None:
        write_csv(header, [row], args.out)
    print(f"omega            = {omega:.10g}")
    print(f"Omega            = {strength.B / R:.10g}")
    print(f"B                = {strength.B:.10g}")
    print(f"paper_beta (1/B) = {strength.paper_beta:.10g}")
    print(f"verification: posterior weight at mu_inf + d_star = {check:.10f}")
    return EXIT_OK if abs(check - 0.5) <= 1e-10 else EXIT_FAIL


def cmd_theorem_check(args) -> int:
    which = sorted(set(args.theorem or [1, 2, 3]))
    results = theorems.run(which, ILLUSTRATIVE, _quad(args))
    text = "".join(r.line() + "\n" for r in results)
    if args.out is not None:
        Path(args.out).write_text(text, newline="")
    sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _row_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def cmd_mc_check(args) -> int:
    if args.reps < MIN_MC_REPS:
        raise UsageError(f"--reps must be at least {MIN_MC_REPS}")
    cfg = load_config(args.config)
    quad = _quad(args, cfg)
    cases = []
    for sc in cfg.scenarios():
        for D in cfg.sweep.mc_drift:
            cases.append((sc, float(D), "alpha", 0.0))
        cases.append((sc, 0.0, "power", cfg.trial.delta_star))
    rows, bad = [], 0
    for i, (sc, D, what, delta) in enumerate(cases):
        q = float(type_one_error(sc.design, D, quad) if what == "alpha" else power(sc.design, D, delta, quad))
        est = mc_estimate(sc.design, D, delta, McConfig(args.reps, _row_seed(args.seed, i)), workers=args.threads)
        se = est.se
        if se > 0:
            z = (est.estimate - q) / se
        else:
            # all-or-nothing outcome: use the binomial SE implied by the quadrature value
            se = math.sqrt(q * (1 - q) / args.reps)
            z = (est.estimate - q) / se if se > 0 else 0.0
        ok = abs(z) <= 3.0
        bad += not ok
        rows.append((sc.name, D, what, q, est.estimate, se, z, "OK" if ok else "FAIL"))
    write_csv(("scenario", "D", "quantity", "quadrature", "mc", "se", "z", "status"), rows, args.out)
    return EXIT_OK if bad == 0 else EXIT_FAIL


def cmd_levelset(args) -> int:
    t = ILLUSTRATIVE
    informative = NormalComponent(t.mu_inf, t.s ** 2 / t.n_inf)
    sampling = SamplingModel.from_arm(t.s, t.n_c)
    B = anchor_strength(t).B if args.B is None else args.B
    n0_list = args.n0 or list(TABLE1_N0)
    pairs = level_set(B, n0_list, informative, sampling, t.s)
    if args.profiles:
        x = t.mu_inf + np.linspace(-args.x_max, args.x_max, args.x_points)
        rows = []
        for w, n0 in pairs:
            rmp = RobustMixturePrior(w, informative, NormalComponent(t.mu_inf, t.s ** 2 / n0))
            pw = posterior_weight(rmp, x, sampling)
            rows.extend((w, n0, xi, wi) for xi, wi in zip(x, pw))
        write_csv(("omega", "n0", "x_c", "posterior_weight"), rows, args.out)
    else:
        write_csv(("omega", "n0", "sigma2_rob", "B", "paper_beta"),
                  [(w, n0, t.s ** 2 / n0, B, 1 / B) for w, n0 in pairs], args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="scenario YAML (default: shipped illustrative trial)")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--threads", metavar="N", type=int, help="worker processes")
    common.add_argument("--quad-tol", metavar="FLOAT", type=float, help="absolute tolerance of adaptive quadrature")

    # Subparsers must not overwrite values given before the subcommand.
    sub_common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    for a in common._actions:
        sub_common.add_argument(*a.option_strings, metavar=a.metavar, type=a.type, help=a.help)

    p = argparse.ArgumentParser(prog="rmpborrow", parents=[common],
                                description="Robust mixture prior borrowing for hybrid-control trials.")
    p.set_defaults(threads=1)
    sp = p.add_subparsers(dest="command", required=True)

    s = sp.add_parser("oc", parents=[sub_common], help="type I error, power and mean posterior weight over a drift grid")
    s.set_defaults(func=cmd_oc)

    s = sp.add_parser("table1", parents=[sub_common], help="level-set operating characteristics table")
    s.add_argument("--vag-lo", type=float, default=-50.0, help="lower end of the flat design prior")
    s.add_argument("--vag-hi", type=float, default=50.0, help="upper end of the flat design prior")
    s.set_defaults(func=cmd_table1)

    s = sp.add_parser("elicit", parents=[sub_common], help="prior weight from an equipoise drift")
    s.add_argument("--d-star", type=float, required=True, help="drift at which the posterior weight is 0.5")
    s.add_argument("--sigma-rob-multiple", type=float, default=1000.0, help="robust SD as a multiple of s")
    s.add_argument("--mu-rob", type=float, default=None, help="robust location (default mu_inf)")
    s.set_defaults(func=cmd_elicit)

    s = sp.add_parser("theorem-check", parents=[sub_common], help="run the asymptotic property suites")
    s.add_argument("--theorem", type=int, choices=(1, 2, 3), action="append")
    s.set_defaults(func=cmd_theorem_check)

    s = sp.add_parser("mc-check", parents=[sub_common], help="compare quadrature against Monte Carlo")
    s.add_argument("--reps", type=lambda v: int(float(v)), default=1_000_000)
    s.add_argument("--seed", type=int, default=McConfig.seed)
    s.set_defaults(func=cmd_mc_check)

    s = sp.add_parser("levelset", parents=[sub_common], help="weights sharing one borrowing strength")
    s.add_argument("--B", type=float, default=None, help="borrowing strength (default: UIP prior with weight 0.5)")
    s.add_argument("--n0", type=float, action="append", help="robust effective sample size (repeatable)")
    s.add_argument("--profiles", action="store_true", help="emit posterior-weight profiles over x_c")
    s.add_argument("--x-max", type=float, default=1.0)
    s.add_argument("--x-points", type=int, default=201)
    s.set_defaults(func=cmd_levelset)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.threads is None or args.threads < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
