"""Command-line interface.

    fracheat <eval|estimate|verify|sample|residual|selftest> [--config PATH] [flags]

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
non-convergence.  All output is CSV on stdout (or --out), with the schema
version in a leading comment line.
"""

from __future__ import annotations

import argparse
import contextlib
import os
import sys

import numpy as np

from . import harness, solution
from .bernstein import parse_exponent
from .errors import BracketError, DomainError, FracheatError, QuadratureError
from .harness import CSV_HEADER_COMMENT, VerifyConfig
from .numerics import DEFAULT_QUADRATURE
from .rng import RngStream
from .subordinator import SubordinatorModel


def _add_model_flags(p):
    p.add_argument("--subordinator", help="stable:BETA or mixture:a,b;a,b")
    p.add_argument("--beta", type=float, help="shorthand for --subordinator stable:BETA")
    p.add_argument("--kernel", help="gaussian:D | cauchy:D | jump | diffusion")
    p.add_argument("--phi-scale", dest="phi_scale", help="power:A | power2:LO,HI,BREAK")
    p.add_argument("--volume", help="power:D | power2:LO,HI,BREAK")


def _build_parser():
    parser = argparse.ArgumentParser(prog="fracheat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate p(t, z)")
    _add_model_flags(p_eval)
    p_eval.add_argument("--t", type=float, required=True)
    p_eval.add_argument("--z", type=float, required=True)
    p_eval.add_argument("--method", choices=("quad", "mc", "fourier"), default="quad")
    p_eval.add_argument("--alpha", type=int, default=2,
                        help="spatial order for --method fourier")
    p_eval.add_argument("--n", type=int, default=100_000, help="Monte Carlo samples")
    p_eval.add_argument("--seed", type=int, default=0)
    p_eval.add_argument("--out")

    p_est = sub.add_parser("estimate", help="closed-form estimate at (t, z)")
    _add_model_flags(p_est)
    p_est.add_argument("--t", type=float, required=True)
    p_est.add_argument("--z", type=float, required=True)
    p_est.add_argument("--out")

    p_ver = sub.add_parser("verify", help="run a sandwich campaign")
    p_ver.add_argument("--config", help="flat key = value file")
    _add_model_flags(p_ver)
    for key in ("t-lo", "t-hi", "z-lo", "z-hi"):
        p_ver.add_argument(f"--{key}", type=float, dest=key.replace("-", "_"))
    for key in ("t-n", "z-n", "mc-samples", "seed"):
        p_ver.add_argument(f"--{key}", type=int, dest=key.replace("-", "_"))
    p_ver.add_argument("--z-mode", choices=("regime", "absolute"), dest="z_mode")
    p_ver.add_argument("--method", choices=("quad", "mc"))
    p_ver.add_argument("--out")

    p_sam = sub.add_parser("sample", help="draw subordinator or inverse samples")
    _add_model_flags(p_sam)
    p_sam.add_argument("--dist", choices=("s", "e"), required=True,
                       help="s: subordinator S_r; e: inverse E_t")
    p_sam.add_argument("--r", type=float, help="elapsed time for S_r")
    p_sam.add_argument("--t", type=float, help="inverse level for E_t")
    p_sam.add_argument("--n", type=int, default=1000)
    p_sam.add_argument("--seed", type=int, default=0)
    p_sam.add_argument("--out")

    p_res = sub.add_parser("residual", help="weak-form residual check")
    p_res.add_argument("--beta", type=float, default=0.5)
    p_res.add_argument("--t-lo", type=float, default=0.2, dest="t_lo")
    p_res.add_argument("--t-hi", type=float, default=2.0, dest="t_hi")
    p_res.add_argument("--t-n", type=int, default=10, dest="t_n")
    p_res.add_argument("--x-half", type=float, default=8.0, dest="x_half")
    p_res.add_argument("--x-n", type=int, default=257, dest="x_n")
    p_res.add_argument("--out")

    sub.add_parser("selftest", help="quick invariant battery")
    return parser


def _exponent_from_args(args):
    if getattr(args, "subordinator", None):
        return parse_exponent(args.subordinator)
    beta = getattr(args, "beta", None)
    return parse_exponent(f"stable:{beta if beta is not None else 0.5}")


@contextlib.contextmanager
def _out_stream(path):
    if path:
        with open(path, "w") as fh:
            yield fh
    else:
        yield sys.stdout


def _cmd_eval(args):
    cfg = harness.config_from_mapping({
        k: getattr(args, k) for k in ("kernel", "phi_scale", "volume") if getattr(args, k)
    })
    exponent = _exponent_from_args(args)
    kernel, model = harness.build_kernel_and_model(
        harness.config_from_mapping({"subordinator": _key_of(exponent)}, base=cfg))
    if args.method == "fourier":
        alpha = args.alpha
        beta = getattr(exponent, "beta", None)
        if beta is None:
            raise DomainError("the Fourier oracle needs a stable subordinator")
        value, err, method = solution.density_fourier(beta, alpha, args.t, args.z), 1e-8, "fourier"
    elif args.method == "mc":
        est = solution.density_monte_carlo(kernel, model, args.t, args.z,
                                           args.n, RngStream(args.seed, 0))
        value, err, method = est.value, est.error, est.method
    else:
        est = solution.density_quadrature(kernel, model, args.t, args.z)
        if not est.converged:
            raise QuadratureError("eval did not converge", est.value, est.error)
        value, err, method = est.value, est.error, est.method
    with _out_stream(args.out) as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        fh.write("t,z,p,err,method\n")
        fh.write(f"{args.t!r},{args.z!r},{float(value)!r},{float(err)!r},{method}\n")
    return 0


def _key_of(exponent):
    from .bernstein import Stable, StableMixture
    if isinstance(exponent, Stable):
        return f"stable:{exponent.beta}"
    if isinstance(exponent, StableMixture):
        return "mixture:" + ";".join(f"{a},{b}" for a, b in exponent.terms)
    raise DomainError("constructed exponents have no CLI key")


def _cmd_estimate(args):
    cfg = harness.config_from_mapping({
        k: getattr(args, k) for k in ("kernel", "phi_scale", "volume") if getattr(args, k)
    })
    cfg = harness.config_from_mapping({"subordinator": _key_of(_exponent_from_args(args))},
                                      base=cfg)
    _, _, emodel = harness.build_models(cfg)
    shape = emodel.estimate(args.t, args.z)
    with _out_stream(args.out) as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        fh.write("t,z,regime,estimate,n\n")
        est = shape.value if shape.value is not None else shape.prefactor
        n = "" if shape.exponent_arg is None else repr(float(shape.exponent_arg))
        fh.write(f"{args.t!r},{args.z!r},{shape.regime.regime.value},{float(est)!r},{n}\n")
    return 0


def _cmd_verify(args):
    base = VerifyConfig()
    if args.config:
        if not os.path.exists(args.config):
            print(f"fracheat: config file not found: {args.config}", file=sys.stderr)
            return 2
        base = harness.config_from_mapping(harness.read_config(args.config))
    overrides = {k: getattr(args, k) for k in (
        "subordinator", "kernel", "phi_scale", "volume", "t_lo", "t_hi", "t_n",
        "z_lo", "z_hi", "z_n", "z_mode", "method", "mc_samples", "seed", "out")
        if getattr(args, k, None) is not None}
    if getattr(args, "beta", None) is not None and "subordinator" not in overrides:
        overrides["subordinator"] = f"stable:{args.beta}"
    cfg = harness.config_from_mapping(overrides, base=base)
    report = harness.verify_sandwich(cfg)
    with _out_stream(cfg.out) as fh:
        harness.write_report_csv(fh, report)
    print(f"near: n={report.near_summary.count} spread={report.near_summary.spread!r}; "
          f"off: n={report.off_summary.count} spread={report.off_summary.spread!r}; "
          f"off log-ratio: [{report.off_log_lo!r}, {report.off_log_hi!r}]; "
          f"all_finite={report.all_finite}", file=sys.stderr)
    return 0 if report.all_finite else 1


def _cmd_sample(args):
    exponent = _exponent_from_args(args)
    model = SubordinatorModel(exponent, DEFAULT_QUADRATURE)
    rng = RngStream(args.seed, 0)
    if args.dist == "s":
        if args.r is None:
            print("fracheat sample --dist s needs --r", file=sys.stderr)
            return 2
        values = model.sample_subordinator(args.r, rng, args.n)
    else:
        if args.t is None:
            print("fracheat sample --dist e needs --t", file=sys.stderr)
            return 2
        values = model.sample_inverse(args.t, rng, args.n)
    with _out_stream(args.out) as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        fh.write("index,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{float(v)!r}\n")
    return 0


def _cmd_residual(args):
    f = solution.GaussianBump()
    g = solution.GaussianBump()
    t_grid = np.linspace(args.t_lo, args.t_hi, args.t_n)
    x_grid = np.linspace(-args.x_half, args.x_half, args.x_n)
    report = solution.caputo_weak_residual(args.beta, f, g, t_grid, x_grid)
    with _out_stream(args.out) as fh:
        fh.write(CSV_HEADER_COMMENT + "\n")
        fh.write("t,lhs,rhs,residual\n")
        for t, lhs, rhs in report.rows:
            res = abs(lhs - rhs) / max(abs(rhs), 1e-8)
            fh.write(f"{t!r},{lhs!r},{rhs!r},{res!r}\n")
    print(f"max residual: {report.residual!r}; initial error: {report.initial_error!r}; "
          f"richardson_warning={report.richardson_warning}", file=sys.stderr)
    return 0


def _cmd_selftest(args):
    import math

    from scipy import special

    from .bernstein import Stable
    from .kernels import ExactGaussian
    from .scale import PowerLaw, subgaussian_exponent, subordinated_exponent

    checks = []
    s5 = Stable(0.5)
    model = SubordinatorModel(s5, DEFAULT_QUADRATURE)
    checks.append(("phi round-trip", abs(s5.phi_inverse(s5.phi(3.7)) - 3.7) < 1e-9))
    checks.append(("cdf closed form",
                   abs(model.cdf(2.0, 4.0) - special.erfc(0.5)) < 1e-10))
    checks.append(("scale solver m", abs(subgaussian_exponent(PowerLaw(2.0), 1.0, 2.0) - 4.0) < 1e-12))
    checks.append(("scale solver n",
                   abs(subordinated_exponent(PowerLaw(2.0), s5, 1.0, 2.0) - 2.0 ** (4 / 3)) < 1e-12))
    checks.append(("mittag-leffler identity",
                   abs(solution.mittag_leffler(0.5, 1.0) - math.e * special.erfc(1.0)) < 1e-11))
    target = math.gamma(0.25) / (4.0 ** 0.75 * math.pi)
    est = solution.density_quadrature(ExactGaussian(1), model, 1.0, 0.0)
    checks.append(("fundamental value", abs(est.value - target) < 1e-6))
    ok = True
    for name, passed in checks:
        print(f"{'PASS' if passed else 'FAIL'}  {name}")
        ok = ok and passed
    return 0 if ok else 1


_HANDLERS = {
    "eval": _cmd_eval,
    "estimate": _cmd_estimate,
    "verify": _cmd_verify,
    "sample": _cmd_sample,
    "residual": _cmd_residual,
    "selftest": _cmd_selftest,
}


def run_cli(argv=None):
    """Parse argv and dispatch; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return _HANDLERS[args.command](args)
    except (QuadratureError, BracketError) as exc:
        print(f"fracheat: numerical non-convergence: {exc}", file=sys.stderr)
        return 3
    except FracheatError as exc:
        print(f"fracheat: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run_cli())
