"""Reproducible experiment driver.

Subcommands: verify-axioms, extract, certify, corollary-table,
cauchy-profile, uniqueness.  Experiments are described by a flat INI config
(sections: instance, space, mode, control, grid, tolerances, output); all
numbers are plain decimals parsed with float(), grid points must be exactly
representable in binary.  Reports are JSON plus optional CSV traces and are
byte-identical for identical configs regardless of --parallel.

Exit codes: 0 success, 1 certificate/axiom failure, 2 configuration or
divergence rejection.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .equation import (Control, DivergentSeriesError, check_control,
                       series_beta, series_down, series_up,
                       vanishing_condition)
from .extract import (Certificate, ExtractionConfig, GridMap, certify,
                      cauchy_profile, extract_grid, homogeneity_check,
                      uniqueness_probe)
from .lab import (Instance, get_preset, make_quadratic, perturb_bounded,
                  perturb_power, rebuild_with_seed, saturating_instance)
from .modular import (FNorm, Modular, check_fnorm_axioms,
                      check_modular_axioms, delta2_estimate, sample_pairs)
from .quadratic import check_quadratic

__all__ = ["main", "run_experiment", "corollary_table", "emit_axiom_suite",
           "ConfigError", "load_config", "CorollaryAudit"]


class ConfigError(ValueError):
    """Invalid configuration or a statically divergent mode/control pair."""


# ---------------------------------------------------------------------------
# configuration

@dataclass
class ExperimentSetup:
    instance: Instance
    space: object
    mode: str
    tau: Optional[float]
    beta: Optional[float]
    control: Control
    grid: list[np.ndarray]
    extraction_tol: float
    n_max: int
    series_tol: float
    certificate_slack: float
    quadratic_tol: float
    echo: dict


def _parse_point(token: str, field: str) -> np.ndarray:
    coords = []
    for part in token.split(","):
        try:
            frac = Fraction(part.strip())
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"{field}: cannot parse {part!r} as a decimal")
        val = float(frac)
        if Fraction(val) != frac:
            raise ConfigError(
                f"{field}: {part!r} is not exactly representable in binary")
        coords.append(val)
    return np.array(coords, dtype=np.float64)


def _build_space(cp: configparser.ConfigParser):
    kind = cp.get("space", "kind", fallback="absolute-value").strip()
    if kind == "absolute-value":
        return Modular.absolute()
    if kind == "power":
        return Modular.power(cp.getfloat("space", "p"))
    if kind == "orlicz-sum":
        return Modular.orlicz(cp.get("space", "generator").strip())
    if kind == "fnorm":
        return FNorm(beta=cp.getfloat("space", "beta"),
                     base=cp.get("space", "base", fallback="euclidean").strip())
    raise ConfigError(f"space.kind: unknown kind {kind!r}")


def _build_instance(cp: configparser.ConfigParser, space,
                    seed_override: Optional[int]) -> Instance:
    if not cp.has_section("instance"):
        raise ConfigError("instance: section missing")
    preset = cp.get("instance", "preset", fallback=None)
    if preset is not None:
        inst = get_preset(preset.strip(), seed=seed_override)
        return inst
    kind = cp.get("instance", "kind", fallback=None)
    if kind is None:
        raise ConfigError("instance: need either preset or kind")
    kind = kind.strip()
    seed = seed_override if seed_override is not None else cp.getint(
        "instance", "seed", fallback=0)
    base = make_quadratic(np.array([[1.0]]))
    if kind == "bounded":
        return perturb_bounded(base, cp.getfloat("instance", "delta"),
                               seed=seed, space=space)
    if kind == "power":
        return perturb_power(base, cp.getfloat("instance", "delta"),
                             cp.getfloat("instance", "exponent"), seed=seed,
                             space=space,
                             oscillate=cp.getboolean("instance", "oscillate",
                                                     fallback=True))
    if kind == "saturating":
        return saturating_instance(cp.getfloat("instance", "eps"), seed=seed,
                                   space=space)
    raise ConfigError(f"instance.kind: unknown kind {kind!r}")


def _build_control(cp: configparser.ConfigParser, inst: Instance) -> Control:
    source = cp.get("control", "source", fallback="fitted").strip()
    if source == "fitted":
        return inst.control
    if source == "constant":
        return Control.constant(cp.getfloat("control", "eps"))
    if source == "power":
        return Control.power(cp.getfloat("control", "theta"),
                             cp.getfloat("control", "exponent"),
                             cp.get("control", "norm",
                                    fallback="euclidean").strip())
    raise ConfigError(f"control.source: unknown source {source!r}")


def load_config(path: str, seed_override: Optional[int] = None) -> ExperimentSetup:
    cp = configparser.ConfigParser(interpolation=None)
    read = cp.read(path)
    if not read:
        raise ConfigError(f"config: cannot read {path!r}")

    space = _build_space(cp)
    inst = _build_instance(cp, space, seed_override)

    mode = cp.get("mode", "kind", fallback="up").strip()
    if mode not in ("up", "down", "beta"):
        raise ConfigError(f"mode.kind: unknown mode {mode!r}")
    tau = cp.getfloat("mode", "tau", fallback=None)
    beta = cp.getfloat("mode", "beta", fallback=None)
    if mode == "down":
        if tau is None or tau < 2.0:
            raise ConfigError("mode.tau: down mode needs tau >= 2")
    if mode == "beta":
        if beta is None or not 0.0 < beta <= 1.0:
            raise ConfigError("mode.beta: beta mode needs beta in (0, 1]")

    control = _build_control(cp, inst)
    _check_mode_control(mode, control, tau, beta)

    if not cp.has_option("grid", "points"):
        raise ConfigError("grid.points: missing")
    tokens = cp.get("grid", "points").split()
    if not tokens:
        raise ConfigError("grid.points: empty")
    grid = [_parse_point(t, "grid.points") for t in tokens]

    extraction_tol = cp.getfloat("tolerances", "extraction", fallback=1e-10)
    n_max = cp.getint("tolerances", "n_max", fallback=26)
    series_tol = cp.getfloat("tolerances", "series", fallback=1e-12)
    certificate_slack = cp.getfloat("tolerances", "certificate_slack",
                                    fallback=1e-9)
    quadratic_tol = cp.getfloat("tolerances", "quadratic", fallback=1e-8)
    if extraction_tol <= 0 or series_tol <= 0:
        raise ConfigError("tolerances: must be positive")
    if not 1 <= n_max <= 30:
        raise ConfigError("tolerances.n_max: must lie in [1, 30]")

    echo = {
        "instance": inst.handle.label,
        "instance_kind": inst.kind,
        "instance_seed": inst.seed,
        "space": _space_label(space),
        "mode": mode,
        "tau": tau,
        "beta": beta,
        "control": control.describe(),
        "grid": [[float(c) for c in p] for p in grid],
        "tolerances": {
            "extraction": extraction_tol, "n_max": n_max,
            "series": series_tol, "certificate_slack": certificate_slack,
            "quadratic": quadratic_tol,
        },
    }
    return ExperimentSetup(instance=inst, space=space, mode=mode, tau=tau,
                           beta=beta, control=control, grid=grid,
                           extraction_tol=extraction_tol, n_max=n_max,
                           series_tol=series_tol,
                           certificate_slack=certificate_slack,
                           quadratic_tol=quadratic_tol, echo=echo)


def _space_label(space) -> str:
    return getattr(space, "label", str(space))


def _check_mode_control(mode: str, control: Control, tau: Optional[float],
                        beta: Optional[float]) -> None:
    """Reject statically divergent mode/control pairs before any iteration."""
    if control.kind == "custom":
        return
    if mode == "down":
        if control.kind == "constant" and control.eps > 0.0:
            raise ConfigError(
                f"control: divergent series; constant control has term ratio "
                f"tau^3/2 = {tau**3 / 2.0:g} >= 1 in down mode")
        if control.kind == "power" and control.theta > 0.0:
            ratio = tau**3 / 2.0 ** (control.exponent + 1.0)
            if ratio >= 1.0:
                raise ConfigError(
                    f"control: divergent series; term ratio {ratio:g} >= 1 "
                    f"(need exponent > log2(tau^3/2))")
    elif control.kind == "power" and control.theta > 0.0:
        denom = 4.0 if mode == "up" else 4.0**beta
        ratio = 2.0**control.exponent / denom
        if ratio >= 1.0:
            raise ConfigError(
                f"control: divergent series; term ratio {ratio:g} >= 1 "
                f"for {mode} mode")


# ---------------------------------------------------------------------------
# closure grids

def _closure_points(grid: Sequence[np.ndarray]) -> list[np.ndarray]:
    """Base grid plus every combination point the quadraticity checks touch."""
    seen: dict[tuple, np.ndarray] = {}

    def put(p: np.ndarray):
        seen.setdefault(tuple(p), p)

    pts = [np.asarray(p, dtype=np.float64) for p in grid]
    for x in pts:
        put(x)
        put(2.0 * x)
    for x in pts:
        for y in pts:
            put(x + y)
            put(x - y)
    for x in pts:
        for y in pts:
            for z in pts:
                put(x + y - z)
                put(x + y + z)
    return list(seen.values())


# ---------------------------------------------------------------------------
# pipeline

def run_experiment(setup: ExperimentSetup, out_dir: Path, parallel: int = 1,
                   fmt: str = "json") -> tuple[dict, int]:
    """Full pipeline; returns (summary dict, exit code) and writes artifacts."""
    inst = setup.instance
    space = setup.space
    summary: dict = {"config": setup.echo, "passed": False}

    control_report = check_control(space, inst.handle, setup.control,
                                   inst.triple_grid)
    summary["control_check"] = control_report.to_json_dict()

    if setup.mode == "down":
        vanish = {}
        all_ok = True
        for p in setup.grid:
            rep = vanishing_condition(setup.control, setup.tau, p, p, p)
            vanish[str([float(c) for c in p])] = rep.passed
            all_ok = all_ok and rep.passed
        summary["vanishing_condition"] = vanish
        if not all_ok:
            raise ConfigError(
                "control: vanishing condition fails on the grid; "
                "down-mode hypotheses are not met")

    cfg = ExtractionConfig(mode=setup.mode, space=space,
                           tol=setup.extraction_tol, n_max=setup.n_max,
                           tau=setup.tau, beta=setup.beta,
                           control=setup.control)
    closure = _closure_points(setup.grid)
    full_map = extract_grid(inst.handle, closure, cfg, parallel=parallel)
    base_map = GridMap(setup.grid, [full_map.result(p) for p in setup.grid])

    summary["extraction"] = {
        "points": len(closure),
        "base_grid": [
            {
                "point": [float(c) for c in p],
                "n_used": base_map.result(p).n_used,
                "residual": _fin(base_map.result(p).residual),
                "converged": base_map.result(p).converged,
                "failure": base_map.result(p).failure,
            }
            for p in setup.grid
        ],
    }

    exit_code = 0
    if not base_map.all_converged:
        summary["certificate"] = {"passed": False,
                                  "failure": "unconverged-extraction"}
        exit_code = 1
        cert = None
    else:
        cert = certify(space, inst.handle, base_map, setup.control, cfg,
                       slack=setup.certificate_slack,
                       series_tol=setup.series_tol)
        summary["certificate"] = cert.to_json_dict()
        if not cert.passed:
            exit_code = 1

    quad = check_quadratic(full_map, setup.grid, setup.quadratic_tol, space)
    summary["quadraticity"] = quad.to_json_dict()
    if not quad.passed:
        exit_code = exit_code or 1

    homo = homogeneity_check(full_map, setup.grid, 4.0 * setup.extraction_tol,
                             space)
    summary["doubling_law"] = homo.to_json_dict()
    if not homo.passed:
        exit_code = exit_code or 1

    if inst.seed is not None:
        second = rebuild_with_seed(inst, inst.seed + 1)
        second_map = extract_grid(second.handle, setup.grid, cfg,
                                  parallel=parallel)
        if second_map.all_converged:
            probe = uniqueness_probe(base_map, second_map, space, setup.grid)
            unique_ok = probe <= 2.0 * setup.extraction_tol
            summary["uniqueness"] = {"second_seed": inst.seed + 1,
                                     "max_half_difference": probe,
                                     "passed": unique_ok}
            if not unique_ok:
                exit_code = exit_code or 1
        else:
            summary["uniqueness"] = {"second_seed": inst.seed + 1,
                                     "passed": False,
                                     "failure": "unconverged-extraction"}
            exit_code = exit_code or 1

    if not control_report.passed:
        exit_code = exit_code or 1

    summary["passed"] = exit_code == 0

    out_dir.mkdir(parents=True, exist_ok=True)
    _write_json(out_dir / "summary.json", summary)
    if fmt == "csv":
        _write_trace_csv(out_dir / "trace.csv", setup.grid, base_map)
        if cert is not None:
            _write_certificate_csv(out_dir / "certificate.csv", cert)
    return summary, exit_code


def _fin(x: float):
    return x if math.isfinite(x) else repr(x)


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _fmt(v: float) -> str:
    return repr(float(v))


def _write_trace_csv(path: Path, grid: Sequence[np.ndarray],
                     gmap: GridMap) -> None:
    dim_in = len(grid[0])
    dim_out = gmap.result(grid[0]).value.size
    header = ([f"x{i}" for i in range(dim_in)] + ["n"]
              + [f"iterate{i}" for i in range(dim_out)] + ["residual", "bound"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for p in grid:
            res = gmap.result(p)
            for row in res.trace:
                writer.writerow(
                    [_fmt(c) for c in p] + [row.n]
                    + [_fmt(c) for c in row.iterate]
                    + ["" if row.residual is None else _fmt(row.residual),
                       "" if row.tail is None else _fmt(row.tail)])


def _write_certificate_csv(path: Path, cert: Certificate) -> None:
    if not cert.rows:
        return
    dim = len(cert.rows[0].point)
    header = [f"x{i}" for i in range(dim)] + ["measured", "bound", "margin"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in cert.rows:
            writer.writerow([_fmt(c) for c in r.point]
                            + [_fmt(r.measured), _fmt(r.bound), _fmt(r.margin)])


# ---------------------------------------------------------------------------
# corollary-constant audit

@dataclass
class CorollaryAudit:
    audit_id: str
    params: dict
    closed_form: str
    closed_form_value: float
    series_value: float
    rel_discrepancy: float
    verdict: str

    def to_json_dict(self) -> dict:
        return {
            "id": self.audit_id,
            "params": self.params,
            "closed_form": self.closed_form,
            "closed_form_value": _fin(self.closed_form_value),
            "series_value": self.series_value,
            "rel_discrepancy": _fin(self.rel_discrepancy),
            "verdict": self.verdict,
        }


def _audit(audit_id: str, params: dict, closed_form: str, closed_value: float,
           series_value: float) -> CorollaryAudit:
    if math.isfinite(closed_value):
        rel = abs(closed_value - series_value) / max(abs(series_value), 1e-300)
    else:
        rel = math.inf
    verdict = "match" if rel <= 1e-6 else "discrepant"
    return CorollaryAudit(audit_id=audit_id, params=params,
                          closed_form=closed_form,
                          closed_form_value=closed_value,
                          series_value=series_value, rel_discrepancy=rel,
                          verdict=verdict)


def corollary_table() -> list[CorollaryAudit]:
    """Compare each printed closed-form stability constant to its series."""
    x = np.array([1.0])
    zero = np.array([0.0])
    audits = []

    eps = 0.3
    s = series_up(Control.constant(eps), x, x, zero, tol=1e-13)
    audits.append(_audit("constant-up", {"eps": eps}, "eps/3", eps / 3.0,
                         s.value))

    theta, p = 1.0, 1.0
    s = series_up(Control.power(theta, p), x, x, zero, tol=1e-13)
    den = 2.0 - 2.0**p
    closed = math.inf if den == 0.0 else 2.0 * theta / den
    audits.append(_audit("power-up", {"theta": theta, "p": p, "norm_x": 1.0},
                         "2*theta*|x|^p/(2-2^p)", closed, s.value))

    theta, r, tau = 1.0, 3.0, 2.0
    s = series_down(Control.power(theta, r), tau, x, x, x, tol=1e-13)
    closed = 3.0 * theta * tau**2 / (2.0 * (2.0 ** (r + 1.0) - tau**3))
    audits.append(_audit(
        "power-down", {"theta": theta, "r": r, "tau": tau, "norm_x": 1.0},
        "3*theta*tau^2/(2*(2^(r+1)-tau^3))*|x|^r", closed,
        s.value / (2.0 * tau)))

    eps, beta = 0.5, 0.5
    s = series_beta(Control.constant(eps), beta, x, x, zero, tol=1e-13)
    audits.append(_audit("constant-beta", {"eps": eps, "beta": beta},
                         "eps/(4^beta-1)", eps / (4.0**beta - 1.0), s.value))
    return audits


# ---------------------------------------------------------------------------
# axiom suite

SHIPPED_MODULARS = (
    Modular.absolute(),
    Modular.power(1.5),
    Modular.power(2.0),
    Modular.power(3.0),
    Modular.orlicz("expm1"),
    Modular.orlicz("exp_lin"),
)
SHIPPED_FNORMS = (
    FNorm(beta=0.5),
    FNorm(beta=1.0),
    FNorm(beta=0.5, base="max-abs"),
)


def emit_axiom_suite(spaces=None, dim: int = 1, count: int = 200,
                     seed: int = 0) -> dict:
    """Axiom reports (and doubling estimates) for the shipped descriptors."""
    samples = sample_pairs(dim, count=count, seed=seed)
    reports = {}
    all_pass = True
    targets = spaces if spaces is not None else (list(SHIPPED_MODULARS)
                                                 + list(SHIPPED_FNORMS))
    for sp in targets:
        if isinstance(sp, Modular):
            rep = check_modular_axioms(sp, samples)
            entry = rep.to_json_dict()
            d2 = delta2_estimate(sp)
            entry["delta2"] = ({"divergent": True} if d2.divergent
                               else {"tau": d2.tau})
        else:
            rep = check_fnorm_axioms(sp, samples)
            entry = rep.to_json_dict()
        reports[_space_label(sp)] = entry
        all_pass = all_pass and rep.passed
    return {"passed": all_pass, "samples": count, "seed": seed,
            "reports": reports}


# ---------------------------------------------------------------------------
# entry points

def _add_common(sub: argparse.ArgumentParser, config_required: bool = True):
    sub.add_argument("--config", required=config_required,
                     help="experiment config (INI)")
    sub.add_argument("--seed", type=int, default=None,
                     help="override the instance seed")
    sub.add_argument("--out", default="out", help="output directory")
    sub.add_argument("--parallel", type=int, default=1,
                     help="grid-level worker threads")
    sub.add_argument("--format", choices=("json", "csv"), default="json",
                     help="also emit CSV artifacts when 'csv'")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="modstab",
        description="stability certificates for a quadratic-type "
                    "functional equation")
    subs = parser.add_subparsers(dest="command", required=True)

    sp = subs.add_parser("verify-axioms", help="run the axiom suites")
    sp.add_argument("--out", default="out")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    for name in ("extract", "certify", "uniqueness"):
        _add_common(subs.add_parser(name))

    sp = subs.add_parser("cauchy-profile",
                         help="iterate residuals vs partial-sum bounds")
    _add_common(sp)
    sp.add_argument("--n-top", type=int, default=20)

    sp = subs.add_parser("corollary-table",
                         help="audit closed-form constants against series")
    sp.add_argument("--out", default="out")
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    args = parser.parse_args(argv)
    out_dir = Path(args.out)

    try:
        if args.command == "verify-axioms":
            report = emit_axiom_suite()
            out_dir.mkdir(parents=True, exist_ok=True)
            _write_json(out_dir / "axioms.json", report)
            print("axiom suite:", "pass" if report["passed"] else "FAIL")
            return 0 if report["passed"] else 1

        if args.command == "corollary-table":
            audits = corollary_table()
            out_dir.mkdir(parents=True, exist_ok=True)
            payload = {"audits": [a.to_json_dict() for a in audits]}
            _write_json(out_dir / "corollaries.json", payload)
            for a in audits:
                print(f"{a.audit_id}: closed={a.closed_form_value!r} "
                      f"series={a.series_value!r} -> {a.verdict}")
            return 0

        setup = load_config(args.config, seed_override=args.seed)

        if args.command == "certify":
            summary, code = run_experiment(setup, out_dir,
                                           parallel=args.parallel,
                                           fmt=args.format)
            print("certificate:",
                  "pass" if summary.get("passed") else "FAIL")
            return code

        if args.command == "extract":
            cfg = ExtractionConfig(mode=setup.mode, space=setup.space,
                                   tol=setup.extraction_tol,
                                   n_max=setup.n_max, tau=setup.tau,
                                   beta=setup.beta, control=setup.control)
            gmap = extract_grid(setup.instance.handle, setup.grid, cfg,
                                parallel=args.parallel)
            out_dir.mkdir(parents=True, exist_ok=True)
            payload = {
                "config": setup.echo,
                "results": [
                    {"point": [float(c) for c in p],
                     "value": [float(c) for c in gmap.result(p).value],
                     "n_used": gmap.result(p).n_used,
                     "residual": _fin(gmap.result(p).residual),
                     "converged": gmap.result(p).converged}
                    for p in setup.grid
                ],
            }
            _write_json(out_dir / "extract.json", payload)
            _write_trace_csv(out_dir / "trace.csv", setup.grid, gmap)
            ok = gmap.all_converged
            print("extraction:", "converged" if ok else "FAILED")
            return 0 if ok else 1

        if args.command == "cauchy-profile":
            if setup.mode == "down":
                raise ConfigError("mode.kind: cauchy-profile needs up/beta")
            cfg = ExtractionConfig(mode=setup.mode, space=setup.space,
                                   tol=setup.extraction_tol,
                                   n_max=setup.n_max, tau=setup.tau,
                                   beta=setup.beta, control=setup.control)
            pairs = [(m, n) for n in range(args.n_top + 1)
                     for m in range(n)]
            out_dir.mkdir(parents=True, exist_ok=True)
            rows_all = []
            ok = True
            for p in setup.grid:
                for (m, n, resid, bound) in cauchy_profile(
                        setup.instance.handle, p, cfg, pairs):
                    ok = ok and resid <= bound + 1e-10
                    rows_all.append((p, m, n, resid, bound))
            with open(out_dir / "cauchy.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                dim = len(setup.grid[0])
                writer.writerow([f"x{i}" for i in range(dim)]
                                + ["m", "n", "residual", "bound"])
                for (p, m, n, resid, bound) in rows_all:
                    writer.writerow([_fmt(c) for c in p]
                                    + [m, n, _fmt(resid), _fmt(bound)])
            print("cauchy envelope:", "pass" if ok else "FAIL")
            return 0 if ok else 1

        if args.command == "uniqueness":
            inst = setup.instance
            if inst.seed is None:
                raise ConfigError("instance: uniqueness needs a seeded instance")
            cfg = ExtractionConfig(mode=setup.mode, space=setup.space,
                                   tol=setup.extraction_tol,
                                   n_max=setup.n_max, tau=setup.tau,
                                   beta=setup.beta, control=setup.control)
            h1 = extract_grid(inst.handle, setup.grid, cfg,
                              parallel=args.parallel)
            second = rebuild_with_seed(inst, inst.seed + 1)
            h2 = extract_grid(second.handle, setup.grid, cfg,
                              parallel=args.parallel)
            if not (h1.all_converged and h2.all_converged):
                print("uniqueness: extraction FAILED")
                return 1
            probe = uniqueness_probe(h1, h2, setup.space, setup.grid)
            ok = probe <= 2.0 * setup.extraction_tol
            out_dir.mkdir(parents=True, exist_ok=True)
            _write_json(out_dir / "uniqueness.json",
                        {"config": setup.echo,
                         "second_seed": inst.seed + 1,
                         "max_half_difference": probe,
                         "threshold": 2.0 * setup.extraction_tol,
                         "passed": ok})
            print(f"uniqueness probe: {probe!r} ->", "pass" if ok else "FAIL")
            return 0 if ok else 1

        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except DivergentSeriesError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
