"""Command-line workbench: ``suppression <subcommand> --config run.ini``.

Exit codes: 0 success, 1 usage or configuration error, 2 symbolic refusal
(divergent integral or ill-defined Gaussian mode), 3 numerical convergence
failure.
"""
from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import special

from . import operators as ops
from . import quadrature as quad
from . import regulator as reg
from . import rg_flow as flow
from . import weighted_measure as wm
from .config import ConfigError, load_config
from .errors import (
    ConvergenceFailure,
    DivergentIntegral,
    DomainError,
    IllDefinedGaussianMode,
    UsageError,
)
from .serialization import csv_text, dumps, fmt_float

EXIT_OK, EXIT_USAGE, EXIT_DIVERGENT, EXIT_NUMERICAL = 0, 1, 2, 3

SUBCOMMANDS = ("eval", "admissibility", "integrate", "mass", "norm", "hsnorm",
               "spectrum", "gap", "flow", "ricci", "partition", "report")


@dataclass
class Output:
    command: str
    summary: dict = field(default_factory=dict)
    columns: list = field(default_factory=list)
    rows: list = field(default_factory=list)
    table_fmt: str = ".10g"
    table_rows: int | None = None

    def as_document(self):
        doc = {"command": self.command, "summary": self.summary}
        if self.columns:
            doc["columns"] = self.columns
            doc["rows"] = self.rows
        return doc


def _fmt(v, spec):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return format(float(v), spec)
    if hasattr(v, "value"):
        return str(v.value)
    return str(v)


def render_table(out):
    lines = [f"# {out.command}"]
    for key, value in out.summary.items():
        if isinstance(value, (dict, list)):
            continue
        lines.append(f"{key} = {_fmt(value, out.table_fmt)}")
    if out.columns:
        rows = out.rows if out.table_rows is None else out.rows[: out.table_rows]
        cells = [[_fmt(r[c], out.table_fmt) for c in out.columns] for r in rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(out.columns)]
        lines.append("  ".join(c.rjust(w) for c, w in zip(out.columns, widths)))
        lines += ["  ".join(v.rjust(w) for v, w in zip(row, widths)) for row in cells]
        if len(rows) < len(out.rows):
            lines.append(f"... ({len(out.rows) - len(rows)} more rows; use --format csv)")
    return "\n".join(lines) + "\n"


def _weight(section, params):
    if section["mode"] == "gaussian":
        return reg.GaussianWeight(gamma=section["gamma"], dim=params.dim)
    return params


def cmd_eval(cfg):
    p = cfg.regulator
    rows = []
    for k in cfg["eval"]["k"]:
        rows.append({
            "k": k,
            "omega": reg.omega_eval(k, p),
            "epsilon": reg.epsilon_eval(k * k, p),
            "uv_asymptote": reg.omega_uv_asymptote(k, p) if k > 0 else math.nan,
            "regime": reg.classify_regime(k, p).value,
        })
    summary = {"Ω": rows[0]["omega"]} if len(rows) == 1 else {}
    return Output("eval", summary, ["k", "omega", "epsilon", "uv_asymptote", "regime"], rows)


def cmd_admissibility(cfg):
    p, s = cfg.regulator, cfg["admissibility"]
    grid = reg.default_grid(p, s["points"], s["k_min"], s["k_max"])
    r = reg.check_admissibility(p, grid)
    return Output("admissibility", {"holds": r.holds, "worst_k": r.worst_k,
                                    "margin": r.margin, "monotone": r.monotone})


def _quad_summary(res, verdict):
    return {
        "status": verdict.status.value,
        "deciding_inequality": verdict.deciding_inequality,
        "margin": verdict.margin,
        "value": res.value,
        "abs_error_estimate": res.abs_error_estimate,
        "subdivisions": res.subdivisions,
        "converged": res.converged,
    }


def cmd_integrate(cfg):
    p, s = cfg.regulator, cfg["integral"]
    verdict = quad.classify_convergence(p.dim, s["alpha_growth"], p)
    res = quad.regulated_loop_integral(s["alpha_growth"], p, s["tol"], tail=s["tail"])
    return Output("integrate", _quad_summary(res, verdict))


def cmd_mass(cfg):
    p = cfg.regulator
    verdict = quad.classify_convergence(p.dim, 0.0, p)
    res = wm.total_mass(p, cfg["integral"]["tol"])
    return Output("mass", _quad_summary(res, verdict))


def _function(s):
    if s["function"] == "bump":
        return wm.compact_bump(s["width"], s["amplitude"])
    return wm.gaussian_bump(s["width"], s["amplitude"])


def cmd_norm(cfg):
    p, s = cfg.regulator, cfg["norms"]
    f = _function(s)
    lp = wm.weighted_lp_norm(f, s["p"], p, s["tol"])
    diag = wm.embedding_diagnostics(f, p, s["cutoffs"], s["tol"])
    summary = {
        "function": f.description,
        "p": s["p"],
        "weighted_lp_norm": lp,
        "norm_l2": diag.norm_l2,
        "norm_weighted": diag.norm_weighted,
        "ratio": diag.ratio,
    }
    rows = [{"cutoff": K, "tail_mass": m} for K, m in diag.tail_mass.items()]
    return Output("norm", summary, ["cutoff", "tail_mass"], rows)


def cmd_hsnorm(cfg):
    p, s = cfg.regulator, cfg["hsnorm"]
    kernel = ops.KernelSpec(s["alpha_kernel"], _weight(s, p))
    res = ops.hs_norm_direct(kernel, s["tol"])
    return Output("hsnorm", {"hs_norm_squared": res.value, "hs_norm": math.sqrt(res.value),
                             "abs_error_estimate": res.abs_error_estimate,
                             "converged": res.converged})


def cmd_spectrum(cfg):
    p, s = cfg.regulator, cfg["spectrum"]
    kernel = ops.KernelSpec(s["alpha_kernel"], _weight(s, p))
    k_max = s["k_max"] if s["k_max"] > 0 else None
    opr = ops.nystrom_discretize(kernel, s["n"], k_max)
    rep = ops.eigen_spectrum(opr)
    summary = {
        "n": s["n"],
        "k_max": float(abs(opr.nodes).max()) if k_max is None else k_max,
        "frobenius_norm": opr.frobenius_norm,
        "trace": float(np.trace(opr.matrix)),
        "trace_norm_estimate": rep.trace_norm_estimate,
        "hs_norm_estimate": rep.hs_norm_estimate,
        "p_summability": {fmt_float(k): v for k, v in rep.p_summability.items()},
    }
    rows = [{"index": i, "eigenvalue": float(v)} for i, v in enumerate(rep.eigenvalues)]
    return Output("spectrum", summary, ["index", "eigenvalue"], rows, table_rows=s["top"])


def cmd_gap(cfg):
    gamma = cfg["gap"]["gamma"]
    k_star, lam_max = ops.spectral_gap(gamma)
    return Output("gap", {"gamma": gamma, "k*": k_star, "λ_max": lam_max}, table_fmt=".6f")


def cmd_flow(cfg):
    p, s = cfg.regulator, cfg["flow"]
    tr = flow.flow_trajectory(s["k"], p, s["lambda_start"], s["lambda_end"], s["steps"])
    rows = [{"lambda": x.lam, "omega": x.omega, "dOmega_dlogLambda": x.domega_dlog_lambda,
             "ricci_proxy": x.ricci_proxy} for x in tr.samples]
    summary = {"k": s["k"], "integrated_change": tr.integrated_change,
               "endpoint_change": tr.endpoint_change, "relative_error": tr.relative_error}
    return Output("flow", summary, ["lambda", "omega", "dOmega_dlogLambda", "ricci_proxy"],
                  rows, table_rows=10)


def cmd_ricci(cfg):
    p, k = cfg.regulator, cfg["ricci"]["k"]
    return Output("ricci", {"k": k, "lambda": p.lam, "lambda_dR_dlambda": flow.ricci_flow_eval(k, p)})


def cmd_partition(cfg):
    p, s = cfg.regulator, cfg["partition"]
    r = flow.log_partition(p, s["uv_cutoff"], s["tol"])
    r2 = flow.log_partition(p, 2.0 * s["uv_cutoff"], s["tol"])
    return Output("partition", {
        "ln_z_density": r.ln_z_density,
        "ln_z_relative": r.ln_z_relative,
        "uv_cutoff": r.uv_cutoff,
        "integrand_min_argument": r.integrand_min_argument,
        "integrand_at_origin": flow.log_partition_integrand(0.0, p),
        "doubling_change_relative": r2.ln_z_relative - r.ln_z_relative,
        "abs_error_estimate": r.abs_error_estimate,
    })


def _guarded(fn, *args, **kwargs):
    """Run one battery item, turning refusals into data."""
    try:
        return fn(*args, **kwargs)
    except DivergentIntegral as exc:
        return {"refused": "divergent", "deciding_inequality": exc.verdict.deciding_inequality,
                "margin": exc.verdict.margin}
    except IllDefinedGaussianMode as exc:
        return {"refused": "ill-defined Gaussian mode", "k": exc.k}
    except ConvergenceFailure as exc:
        return {"refused": "numerical", "message": str(exc)}


def _report_findings(p):
    """Internal-consistency findings about the suppression function itself."""
    eps0 = reg.epsilon_eval(0.0, p)
    plus_at_origin = 1.0 + p.eta / eps0
    d = p.dim
    findings = {
        "sign_convention": {
            "omega_minus_at_origin": reg.omega_eval(0.0, p),
            "omega_plus_at_origin": plus_at_origin,
            "complement_plus_at_origin": 1.0 - plus_at_origin,
            "plus_sign_breaks_gaussian_mode": bool(p.eta > 0),
        },
        "derivative_mismatch": [flow.derivative_discrepancy(x * p.lam, p) for x in (0.5, 1.0, 2.0)],
        "moment_identity": {
            "radial_measure_k^(d-1)": 0.5 * special.gamma(d / 2.0),
            "printed_measure_k^(d/2-1)": 0.5 * special.gamma(d / 4.0),
            "claimed_value": 0.5 * special.gamma(d / 2.0),
        },
        "hs_condition": {
            "printed_condition": "α > d/2",
            "diagonal_integrability": "2α < d",
            "jointly_satisfiable": False,
        },
    }
    return findings


def _property_sweep(p, samples, seed):
    rng = np.random.default_rng(seed)
    flat = reg.UnitWeight(dim=p.dim)
    norm_ok = cs_ok = tri_ok = 0
    for _ in range(samples):
        fs = [wm.gaussian_bump(rng.uniform(0.3, 3.0), rng.uniform(-2, 2), rng.uniform(0, 3))
              for _ in range(3)]
        nw = wm.weighted_lp_norm(fs[0], 2, p)
        nl = wm.weighted_lp_norm(fs[0], 2, flat)
        norm_ok += nw <= nl * (1 + 1e-9)
        ip = wm.weighted_inner_product(fs[0], fs[1], p)
        cs_ok += abs(ip) <= nw * wm.weighted_lp_norm(fs[1], 2, p) * (1 + 1e-9) + 1e-12
        d01 = wm.weighted_distance(fs[0], fs[1], p)
        d12 = wm.weighted_distance(fs[1], fs[2], p)
        d02 = wm.weighted_distance(fs[0], fs[2], p)
        tri_ok += d02 <= d01 + d12 + 1e-12
    return {"seed": seed, "samples": samples, "weighted_le_unweighted": norm_ok,
            "cauchy_schwarz": cs_ok, "triangle": tri_ok}


def cmd_report(cfg, seed=0):
    p = cfg.regulator
    adm = reg.check_admissibility(p)
    ks = [0.0, 0.1 * p.lam, p.lam, 10 * p.lam, 100 * p.lam]
    doc = {
        "regulator": {"beta": p.beta, "eta": p.eta, "alpha_eps": p.alpha_eps,
                      "k_c": p.k_c, "lambda": p.lam, "dim": p.dim},
        "admissibility": {"holds": adm.holds, "worst_k": adm.worst_k, "margin": adm.margin,
                          "monotone": adm.monotone},
        "omega": [{"k": k, "omega": reg.omega_eval(k, p), "regime": reg.classify_regime(k, p).value}
                  for k in ks],
        "mass_verdict": quad.classify_convergence(p.dim, 0.0, p).status.value,
        "mass": _guarded(lambda: wm.total_mass(p).value),
        "ricci_negative": bool(flow.ricci_flow_eval(p.lam, p) < 0),
        "partition": _guarded(lambda: flow.log_partition(p, 10 * p.lam).ln_z_relative),
        "findings": _report_findings(p),
    }
    if p.dim == 1:
        doc["hs_norm_squared"] = _guarded(lambda: ops.hs_norm_direct(ops.KernelSpec(0.25, p)).value)
    if adm.holds:
        doc["property_sweep"] = _guarded(_property_sweep, p, cfg["report"]["samples"], seed)
    out = Output("report", {
        "admissible": adm.holds,
        "mass_verdict": doc["mass_verdict"],
        "derivative_sign_mismatch_at_lambda": doc["findings"]["derivative_mismatch"][1]["sign_mismatch"],
        "derivative_mismatch_magnitude_at_lambda": doc["findings"]["derivative_mismatch"][1]["magnitude"],
    })
    out.document = doc
    return out


HANDLERS = {
    "eval": cmd_eval, "admissibility": cmd_admissibility, "integrate": cmd_integrate,
    "mass": cmd_mass, "norm": cmd_norm, "hsnorm": cmd_hsnorm, "spectrum": cmd_spectrum,
    "gap": cmd_gap, "flow": cmd_flow, "ricci": cmd_ricci, "partition": cmd_partition,
    "report": cmd_report,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="suppression", description=__doc__.splitlines()[0])
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="INI experiment configuration")
    parser.add_argument("--out", help="directory for CSV/JSON artifacts")
    parser.add_argument("--format", choices=("table", "csv", "json"), default="table")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps in `report`")
    return parser


def _artifact(out, fmt):
    if fmt == "json":
        doc = getattr(out, "document", None)
        return dumps(doc if doc is not None else out.as_document())
    if out.columns:
        return csv_text(out.columns, out.rows)
    keys = list(k for k, v in out.summary.items() if not isinstance(v, (dict, list)))
    return csv_text(keys, [out.summary])


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        cfg = load_config(args.config)
        handler = HANDLERS[args.subcommand]
        out = handler(cfg, args.seed) if args.subcommand == "report" else handler(cfg)
    except (ConfigError, UsageError, DomainError) as exc:
        stderr.write(f"error: {args.subcommand}: {exc}\n")
        return EXIT_USAGE
    except DivergentIntegral as exc:
        stderr.write(f"error: {args.subcommand}: {exc}\n")
        return EXIT_DIVERGENT
    except IllDefinedGaussianMode as exc:
        stderr.write(f"error: {args.subcommand}: {exc}\n")
        return EXIT_DIVERGENT
    except ConvergenceFailure as exc:
        stderr.write(f"error: {args.subcommand}: {exc}\n")
        return EXIT_NUMERICAL

    if args.format == "table":
        stdout.write(render_table(out))
    elif args.out:
        target = Path(args.out)
        target.mkdir(parents=True, exist_ok=True)
        (target / f"{args.subcommand}.{args.format}").write_text(_artifact(out, args.format), encoding="utf-8")
        stdout.write(render_table(out))
    else:
        stdout.write(_artifact(out, args.format))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
