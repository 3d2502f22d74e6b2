"""Command-line surface.

Subcommands: certify | propagate | norm | solve | rates | holder | verify |
gallery.  Problems come from a file (--problem) or the built-in gallery
(--gallery).  All outputs are deterministic for a fixed config and seed:
exit code 0 means every check passed, 1 means a bound or invariant check
failed, 2 means a usage or parse error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from .certify import certify_pair, validate_certificate
from .config import DEFAULT_CONFIG, RunConfig, load_config
from .contour import propagate as _propagate
from .errors import (
    DegevError, GateRejected, ParseError, UnknownEntry, ValidationError,
)
from .evolve import constants_ledger, solve
from .gallery import build_gallery, gallery_names, GALLERY
from .interp import InterpEvaluator, InterpolationIndex
from .operators import vec_norm
from .problem_io import (
    format_float, load_problem, load_vector, save_problem, save_report,
    save_vector, write_csv,
)
from .regularity import (
    blowup_fit, estimate_interp_constant, estimate_tilde_c, holder_seminorm,
    pick_gate_params, theorem_harness,
)

_VERIFY_REGIMES = ("Lem4.1", "Lem4.4", "Lem4.5", "Thm5.1", "Thm5.4")


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="degev",
        description="contour-quadrature calculus for degenerate evolution "
                    "systems D_t(Mv) = Lv + f")
    p.add_argument("--config", help="JSON run-config file")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--out-dir", default=".", help="directory for output files")
    sub = p.add_subparsers(dest="command", required=True)

    def add_problem_source(sp):
        g = sp.add_mutually_exclusive_group(required=True)
        g.add_argument("--problem", help="problem file (JSON)")
        g.add_argument("--gallery", help="gallery entry, e.g. degenerate-heat-16")

    sp = sub.add_parser("gallery", help="list entries or export one to a file")
    sp.add_argument("--name", help="entry to export")
    sp.add_argument("--out", help="path for the exported problem file")

    sp = sub.add_parser("certify", help="probe and fit the decay certificate")
    add_problem_source(sp)

    sp = sub.add_parser("propagate", help="apply A^n e^{tA} to a vector")
    add_problem_source(sp)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--x-file", required=True, help="CSV vector file (re,im)")

    sp = sub.add_parser("norm", help="intermediate-space norm of a vector")
    add_problem_source(sp)
    sp.add_argument("--gamma", type=float, required=True)
    sp.add_argument("--p", default="inf", help="p in [1, inf); 'inf' for sup")
    sp.add_argument("--x-file", required=True)

    sp = sub.add_parser("solve", help="assemble the solution trace")
    add_problem_source(sp)
    sp.add_argument("--grid", default="uniform:9",
                    help="'uniform:K' or 'log:K:tmin'")
    sp.add_argument("--with-derivative", action="store_true")

    sp = sub.add_parser("rates", help="fit the blow-up exponent of the family")
    add_problem_source(sp)
    sp.add_argument("--n", type=int, default=0)
    sp.add_argument("--gamma", type=float, help="surrogate norm index")
    sp.add_argument("--p", default="inf")
    sp.add_argument("--t-lo", type=float, default=1e-2)
    sp.add_argument("--t-hi", type=float, default=1.0)
    sp.add_argument("--points", type=int, default=10)

    sp = sub.add_parser("holder", help="Hölder seminorm of the solution trace")
    add_problem_source(sp)
    sp.add_argument("--delta", type=float, required=True)
    sp.add_argument("--grid", default="uniform:17")
    sp.add_argument("--gamma", type=float, help="measure in the surrogate norm")
    sp.add_argument("--p", default="inf")
    sp.add_argument("--derivative", action="store_true",
                    help="measure the derivative trace instead")

    sp = sub.add_parser("verify", help="run the full check battery")
    add_problem_source(sp)
    sp.add_argument("--grid", default="uniform:9")

    return p


def _config_from(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else DEFAULT_CONFIG
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    return cfg


def _problem_from(args, cfg: RunConfig):
    if getattr(args, "problem", None):
        prob = load_problem(args.problem)
    else:
        prob = build_gallery(args.gallery)
    if prob.pair.norm != cfg.norm:
        # problem files own their norm convention; config applies elsewhere
        pass
    return prob


def _parse_grid(spec: str, T: float) -> np.ndarray:
    parts = spec.split(":")
    try:
        if parts[0] == "uniform" and len(parts) == 2:
            k = int(parts[1])
            if k < 2:
                raise ValueError
            return np.linspace(0.0, T, k)
        if parts[0] == "log" and len(parts) == 3:
            k, tmin = int(parts[1]), float(parts[2])
            if k < 2 or not (0.0 < tmin < T):
                raise ValueError
            return np.concatenate([[0.0],
                                   np.logspace(math.log10(tmin),
                                               math.log10(T), k - 1)])
    except ValueError:
        pass
    raise ParseError(f"bad grid spec {spec!r}; use 'uniform:K' or 'log:K:tmin'")


def _parse_p(text: str) -> float:
    if str(text).lower() in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return float(text)
    except ValueError as exc:
        raise ParseError(f"bad p value {text!r}") from exc


def _out(args, name: str) -> str:
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, name)


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------

def _cmd_gallery(args, cfg) -> int:
    if args.name is None:
        for name in gallery_names():
            e = GALLERY[name]
            print(f"{name}-{e.default_size}: {e.notes}")
        return 0
    prob = build_gallery(args.name)
    out = args.out or _out(args, f"{args.name}.json")
    save_problem(out, prob)
    print(f"wrote {out}")
    return 0


def _cmd_certify(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    cert = certify_pair(prob.pair, config=cfg)
    record = {
        "alpha": cert.alpha, "beta": cert.beta, "c": cert.c, "C": cert.C,
        "residual": cert.residual, "n_samples": len(cert.samples),
        "revalidated_residual": validate_certificate(cert),
    }
    save_report(_out(args, "certificate.json"), record)
    write_csv(_out(args, "certificate_samples.csv"),
              ["re_lambda", "im_lambda", "norm"],
              [[lam.real, lam.imag, nm] for lam, nm in cert.samples])
    print(f"alpha={cert.alpha:g} beta={cert.beta:.6g} c={cert.c:g} "
          f"C={cert.C:.6g} residual={cert.residual:g}")
    return 0


def _cmd_propagate(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    x = load_vector(args.x_file)
    cert = certify_pair(prob.pair, config=cfg)
    res = _propagate(prob.pair, cert, args.t, args.n, x, cfg)
    rows = [[k, z.real, z.imag] for k, z in enumerate(res.value)]
    write_csv(_out(args, "propagate.csv"), ["index", "re", "im"], rows)
    print(f"t={args.t:g} n={args.n} est_quad_error="
          f"{format_float(res.est_quad_error)}")
    return 0


def _cmd_norm(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    x = load_vector(args.x_file)
    idx = InterpolationIndex(gamma=args.gamma, p=_parse_p(args.p))
    rep = InterpEvaluator(prob.pair, idx, cfg).norm(x)
    write_csv(_out(args, "norm.csv"),
              ["gamma", "p", "x_norm", "seminorm", "total", "xi_min",
               "xi_max", "tail_estimate", "converged"],
              [[idx.gamma, idx.p, rep.x_norm, rep.seminorm, rep.total,
                rep.xi_min, rep.xi_max, rep.tail_estimate,
                int(rep.converged)]])
    print(f"total={format_float(rep.total)} seminorm={format_float(rep.seminorm)}"
          f" converged={rep.converged}")
    return 0


def _cmd_solve(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    cert = certify_pair(prob.pair, config=cfg)
    grid = _parse_grid(args.grid, prob.T)
    trace = solve(prob, cert, grid, with_derivative=args.with_derivative,
                  config=cfg)
    rows = []
    for k, t in enumerate(trace.grid):
        dt_n = (vec_norm(trace.dt_mv[k], prob.pair.norm)
                if trace.dt_mv is not None else math.nan)
        rows.append([t, vec_norm(trace.mv[k], prob.pair.norm), dt_n,
                     trace.residual[k], trace.quad_error[k]])
    write_csv(_out(args, "trace.csv"),
              ["t", "norm_mv", "norm_dtmv", "residual", "quad_error"], rows)
    with open(_out(args, "trace_vectors.txt"), "w", encoding="utf-8",
              newline="\n") as fh:
        for k, t in enumerate(trace.grid):
            fh.write(f"t {format_float(t)}\n")
            for z in trace.mv[k]:
                fh.write(f"mv {format_float(z.real)} {format_float(z.imag)}\n")
            if trace.dt_mv is not None:
                for z in trace.dt_mv[k]:
                    fh.write(f"dtmv {format_float(z.real)} "
                             f"{format_float(z.imag)}\n")
    bad = np.nanmax(trace.residual) if trace.dt_mv is not None else 0.0
    print(f"points={len(grid)} max_residual={format_float(bad)} "
          f"max_quad_error={format_float(trace.quad_error.max())}")
    return 0 if not (trace.dt_mv is not None and bad > cfg.resid_tol) else 1


def _cmd_rates(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    cert = certify_pair(prob.pair, config=cfg)
    idx = (InterpolationIndex(gamma=args.gamma, p=_parse_p(args.p))
           if args.gamma is not None else None)
    fit = blowup_fit(prob.pair, cert, args.n, idx, (args.t_lo, args.t_hi),
                     args.points, cfg)
    write_csv(_out(args, "rates.csv"), ["t", "norm"],
              [[t, nm] for t, nm in fit.points])
    gamma = idx.gamma if idx else 0.0
    predicted = (cert.beta - args.n - 1.0 - gamma) / cert.alpha
    save_report(_out(args, "rates_summary.json"), {
        "exponent": fit.exponent, "prefactor": fit.prefactor, "r2": fit.r2,
        "window": list(fit.window), "n": fit.n, "gamma": gamma,
        "predicted_exponent": predicted,
    })
    print(f"exponent={fit.exponent:.4f} predicted>={predicted:.4f} r2={fit.r2:.4f}")
    return 0


def _cmd_holder(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    cert = certify_pair(prob.pair, config=cfg)
    grid = _parse_grid(args.grid, prob.T)
    trace = solve(prob, cert, grid, with_derivative=args.derivative, config=cfg)
    values = trace.dt_mv if args.derivative else trace.mv
    if args.gamma is not None:
        idx = InterpolationIndex(gamma=args.gamma, p=_parse_p(args.p))
        ev = InterpEvaluator(prob.pair, idx, cfg)
        rep = holder_seminorm(grid, values, args.delta,
                              norm=lambda v: ev.norm(v).total,
                              norm_many=ev.norm_many)
    else:
        rep = holder_seminorm(grid, values, args.delta,
                              norm=lambda v: vec_norm(v, prob.pair.norm))
    write_csv(_out(args, "holder.csv"),
              ["delta", "seminorm", "sup_norm", "total", "argmax_s", "argmax_t"],
              [[rep.delta, rep.seminorm, rep.sup_norm, rep.total,
                rep.argmax_pair[0], rep.argmax_pair[1]]])
    print(f"seminorm={format_float(rep.seminorm)} total={format_float(rep.total)}")
    return 0


def _cmd_verify(args, cfg) -> int:
    prob = _problem_from(args, cfg)
    pair = prob.pair
    cert = certify_pair(pair, config=cfg)
    grid = _parse_grid(args.grid, prob.T)
    checks: list[dict] = []

    def record(name: str, measured: float, bound: float, extra: str = ""):
        checks.append({"check": name, "measured": measured, "bound": bound,
                       "margin": bound - measured,
                       "status": "pass" if measured <= bound else "fail",
                       "detail": extra})

    record("certificate-residual", validate_certificate(cert), cfg.fit_tol)

    rng = np.random.default_rng(cfg.seed)
    x = rng.standard_normal(pair.dim)
    from .operators import resolvent_apply
    lam, mu_ = 2.0, 3.0 + 1.0j
    lhs = resolvent_apply(pair, lam, x, cfg) - resolvent_apply(pair, mu_, x, cfg)
    rhs = (mu_ - lam) * resolvent_apply(pair, lam,
                                        resolvent_apply(pair, mu_, x, cfg), cfg)
    scale = max(float(np.linalg.norm(lhs)), 1e-30)
    record("resolvent-identity", float(np.linalg.norm(lhs - rhs)) / scale, 1e-8)

    for (t, s) in ((0.1, 0.5), (0.5, 1.0), (0.1, 1.0)):
        both = _propagate(pair, cert, t + s, 0, x, cfg).value
        comp = _propagate(pair, cert, t, 0,
                          _propagate(pair, cert, s, 0, x, cfg).value, cfg).value
        record(f"semigroup-law-t{t:g}-s{s:g}",
               float(np.linalg.norm(both - comp)),
               1e-6 * float(np.linalg.norm(x)))

    fit = blowup_fit(pair, cert, 0, None, (prob.T / 100.0, prob.T), 10, cfg)
    predicted = (cert.beta - 1.0) / cert.alpha
    record("blowup-exponent-plain", predicted - 0.15, fit.exponent,
           extra=f"r2={fit.r2:.4f}")

    window = (prob.T / 50.0, prob.T)
    tilde = estimate_tilde_c(pair, cert, window, config=cfg)
    for regime in _VERIFY_REGIMES:
        name = f"harness-{regime}"
        if regime == "Thm5.4" and not prob.has_consistency_data:
            checks.append({"check": name, "measured": math.nan,
                           "bound": math.nan, "margin": math.nan,
                           "status": "skip", "detail": "no (v0, g0) data"})
            continue
        try:
            gamma, sigma = pick_gate_params(regime, cert.alpha, cert.beta,
                                            prob.f.mu, frac=0.4)
        except GateRejected as exc:
            checks.append({"check": name, "measured": math.nan,
                           "bound": math.nan, "margin": math.nan,
                           "status": "skip", "detail": str(exc)})
            continue
        idx = InterpolationIndex(gamma=gamma, p=math.inf)
        cgp = estimate_interp_constant(pair, idx, cert, cfg)
        ledger = constants_ledger(cert, idx, prob.T, sigma, prob.f.mu, 1,
                                  tilde, cgp, require=())
        verdict = theorem_harness(prob, cert, regime, idx, sigma, grid, cfg,
                                  ledger=ledger)
        record(name, verdict["measured"]["total"], verdict["bound"],
               extra=f"gamma={gamma:.4g} sigma={sigma:.4g}")

    write_csv(_out(args, "checks.csv"),
              ["check", "status", "measured", "bound", "margin", "detail"],
              [[c["check"], c["status"], c["measured"], c["bound"],
                c["margin"], c["detail"]] for c in checks])
    save_report(_out(args, "verify_summary.json"), {
        "certificate": {"alpha": cert.alpha, "beta": cert.beta,
                        "c": cert.c, "C": cert.C},
        "checks": checks,
        "all_passed": all(c["status"] != "fail" for c in checks),
    })
    for c in checks:
        print(f"[{c['status']:>4}] {c['check']}: measured="
              f"{format_float(c['measured'])} bound={format_float(c['bound'])}")
    return 0 if all(c["status"] != "fail" for c in checks) else 1


_DISPATCH = {
    "gallery": _cmd_gallery,
    "certify": _cmd_certify,
    "propagate": _cmd_propagate,
    "norm": _cmd_norm,
    "solve": _cmd_solve,
    "rates": _cmd_rates,
    "holder": _cmd_holder,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from(args)
        return _DISPATCH[args.command](args, cfg)
    except (ParseError, ValidationError, UnknownEntry) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegevError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
