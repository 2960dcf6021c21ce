"""Command-line driver: subcommands, config files, and artifact emission.

Precedence for every numeric knob: built-in defaults < profile < config
file < explicit flags. Artifacts (CSV/JSON/SVG plus a manifest) land in
--out, or under $KDVTORUS_OUTPUT_ROOT/<subcommand> when --out is absent.
CSV payloads are byte-identical across reruns of the same configuration;
the manifest additionally records wall time and version.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, KdvTorusError
from .experiments import (
    HermiteSpec,
    epsilon_sweep,
    hermite_initial,
    near_linearity_report,
    pullback_comparison,
    return_experiment,
)
from .fields import Grid, FourierField, l2_norm, random_real_field, synthesize, write_field_csv
from .integrator import KdvParams, Scheme
from .normal_form import (
    CENSUS_SEED,
    check_cube_identity,
    check_factorization_identity,
    normal_form_residual,
    ratio_census,
)
from .shallow_water import PhysicalParams, dimensionless, validate_regime
from .svgplot import LineSeries, write_line_plot

__all__ = ["run", "main", "load_config", "ENV_OUTPUT_ROOT", "PROFILES"]

ENV_OUTPUT_ROOT = "KDVTORUS_OUTPUT_ROOT"

#: Scheme/step presets; "paper" reproduces the reference runs (slow).
PROFILES = {
    "desk": {"scheme": "if-rk4", "dt": 1.0e-5},
    "paper": {"scheme": "fornberg-whitham", "dt": 1.0e-7},
}

# Per-subcommand defaults; also the authority on config-key names and types.
_DEFAULTS: dict[str, dict] = {
    "simulate": {
        "profile": "desk", "epsilon": 0.4, "amplitude": 1.0, "a": 1.0, "b": 1.0,
        "m": 512, "t_final": 1.0, "dt": None, "scheme": None, "dealias": True,
        "samples": 9,
    },
    "return-test": {
        "profile": "desk", "epsilon": 0.1, "amplitude": 1.0, "a": 1.0, "b": 1.0,
        "m": 512, "dt": None, "scheme": None, "dealias": True,
    },
    # defaults reproduce the shallow-water-normalized figure pair
    "pullback": {
        "profile": "desk", "epsilon": 0.4, "amplitude": 4.5, "a": 1.0 / 6.0,
        "b": 1.5, "m": 512, "t_final": 1.0, "dt": None, "scheme": None,
        "dealias": True,
    },
    "sweep": {
        "profile": "desk", "epsilons": (0.4, 0.2, 0.1), "a": 1.0, "b": 1.0,
        "m": 512, "t_final": 1.0, "dt": None, "scheme": None, "dealias": True,
    },
    "normalform-check": {
        "support": 4, "cutoff": 16, "seed": 7, "t": 0.37,
        "dts": (1.0e-3, 5.0e-4, 2.5e-4), "small_dt": 1.0e-5,
        "census_count": 100, "census_support": 32, "identity_limit": 12,
    },
    "identities": {"limit": 20},
    "shallow-water": {
        "delta": 0.01, "eps": 0.4, "threshold": 0.1,
        "a_phys": None, "h0": None, "l": None, "g": 9.81, "emit_json": True,
    },
}


def _parse_float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"cannot parse {text!r} as a comma-separated float list") from exc


def _coerce(key: str, raw: str, template):
    """Parse a config-file value to the type of its default."""
    if isinstance(template, bool):
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"config key {key}: cannot parse {raw!r} as a boolean")
    if isinstance(template, int) and not isinstance(template, bool):
        try:
            return int(raw)
        except ValueError as exc:
            raise ConfigError(f"config key {key}: cannot parse {raw!r} as an integer") from exc
    if isinstance(template, tuple):
        return _parse_float_list(raw)
    if isinstance(template, float) or template is None:
        try:
            return float(raw)
        except ValueError as exc:
            raise ConfigError(f"config key {key}: cannot parse {raw!r} as a number") from exc
    return raw.strip()


def load_config(path, allowed: dict | None = None) -> dict:
    """Parse a flat key=value config file (# comments, blank lines allowed).

    With an `allowed` template dict, keys are validated against it and
    values coerced to the template types; unknown keys raise ConfigError
    naming the key.
    """
    cfg: dict = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {stripped!r}")
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if allowed is not None:
            if key == "profile":
                cfg[key] = raw
                continue
            if key not in allowed:
                raise ConfigError(f"unknown config key: {key}")
            cfg[key] = _coerce(key, raw, allowed[key])
        else:
            cfg[key] = raw
    return cfg


def _resolve(command: str, args: argparse.Namespace) -> dict:
    """Merge defaults, profile, config file, and explicit flags."""
    defaults = _DEFAULTS[command]
    cfg = dict(defaults)
    file_cfg = {}
    if getattr(args, "config", None):
        file_cfg = load_config(args.config, allowed=defaults)
    flag_cfg = {
        key: value
        for key, value in vars(args).items()
        if key in defaults and value is not None
    }
    profile = None
    if "profile" in defaults:
        profile = flag_cfg.get("profile") or file_cfg.get("profile") or defaults["profile"]
        if profile not in PROFILES:
            raise ConfigError(f"unknown profile {profile!r}; choose from {sorted(PROFILES)}")
        cfg.update(PROFILES[profile])
        cfg["profile"] = profile
    for key, value in file_cfg.items():
        if key != "profile":
            cfg[key] = value
    for key, value in flag_cfg.items():
        if key != "profile":
            cfg[key] = value
    missing = [k for k, v in cfg.items() if v is None and k in ("dt", "scheme")]
    if missing:
        raise ConfigError(f"unresolved config keys: {missing}")
    return cfg


def _outdir(args: argparse.Namespace, command: str) -> Path:
    if getattr(args, "out", None):
        path = Path(args.out)
    else:
        root = os.environ.get(ENV_OUTPUT_ROOT, "kdvtorus-runs")
        path = Path(root) / command
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header, rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, float):
                cells.append(repr(float(cell)))
            else:
                cells.append(str(cell))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
        newline="\n",
    )


def _manifest(outdir: Path, command: str, cfg: dict, seeds: dict,
              artifacts: list[str], wall: float, results: dict) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "parameters": {k: (list(v) if isinstance(v, tuple) else v) for k, v in sorted(cfg.items())},
        "seeds": seeds,
        "results": results,
        "artifacts": sorted(artifacts),
        "wall_time_s": round(wall, 3),
    }
    _write_json(outdir / "manifest.json", payload)


def _kdv_params(cfg: dict, t_final: float) -> KdvParams:
    return KdvParams(
        a=cfg["a"], b=cfg["b"], dt=cfg["dt"], t_final=t_final,
        m=cfg["m"], scheme=cfg["scheme"], dealias=cfg["dealias"],
    )


def _physical_series(label: str, fld: FourierField, m: int) -> LineSeries:
    xs = Grid(m).points
    return LineSeries(label=label, xs=tuple(xs), ys=tuple(synthesize(fld, m)))


def _spectrum_series(label: str, fld: FourierField) -> LineSeries:
    ks = range(1, fld.cutoff + 1)
    return LineSeries(
        label=label,
        xs=tuple(float(k) for k in ks),
        ys=tuple(abs(fld.mode(k)) for k in ks),
    )


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (exit code, artifact names, seeds, results)
# ---------------------------------------------------------------------------


def _cmd_simulate(cfg: dict, outdir: Path):
    spec = HermiteSpec(epsilon=cfg["epsilon"], amplitude=cfg["amplitude"])
    params = _kdv_params(cfg, cfg["t_final"])
    phi = hermite_initial(spec, cfg["m"])
    times = np.linspace(0.0, cfg["t_final"], int(cfg["samples"]))
    report = near_linearity_report(phi, params, times)
    record = report.record
    rows = zip(record.times, record.energy_series, record.momentum_series, report.errors)
    _write_csv(outdir / "trajectory.csv", ["t", "energy", "momentum", "deviation"], rows)
    write_field_csv(report.initial, outdir / "spectrum_initial.csv")
    write_field_csv(record.snapshots[-1], outdir / "spectrum_final.csv")
    write_line_plot(
        outdir / "deviation_vs_t.svg",
        [LineSeries("|v(t) - v(0)|", tuple(record.times), report.errors)],
        title="Deviation from the free flow",
        xlabel="t", ylabel="l2 deviation",
    )
    write_line_plot(
        outdir / "physical.svg",
        [
            _physical_series("initial", report.initial, cfg["m"]),
            _physical_series(f"t = {record.times[-1]:.4g}", record.snapshots[-1], cfg["m"]),
        ],
        title="Physical-space profiles", xlabel="x", ylabel="u(x)",
    )
    write_line_plot(
        outdir / "spectrum.svg",
        [
            _spectrum_series("initial", report.initial),
            _spectrum_series(f"t = {record.times[-1]:.4g}", record.snapshots[-1]),
        ],
        title="Mode amplitudes", xlabel="k", ylabel="|u_k|", logy=True,
    )
    results = {
        "terminal_deviation": report.errors[-1],
        "identity_defect_max": report.identity_defect_max,
        "energy_drift": record.energy_drift(),
        "max_momentum": record.max_momentum(),
    }
    print(f"terminal deviation from the free flow: {report.errors[-1]:.6e}")
    print(f"energy drift: {record.energy_drift():.3e}  max momentum: {record.max_momentum():.3e}")
    artifacts = ["trajectory.csv", "spectrum_initial.csv", "spectrum_final.csv",
                 "deviation_vs_t.svg", "physical.svg", "spectrum.svg"]
    return 0, artifacts, {}, results


def _cmd_return_test(cfg: dict, outdir: Path):
    spec = HermiteSpec(epsilon=cfg["epsilon"], amplitude=cfg["amplitude"])
    params = _kdv_params(cfg, 2.0 * math.pi)
    report = return_experiment(spec, params)
    rows = zip(
        report.sample_times,
        report.nl_errors,
    )
    _write_csv(outdir / "deviation.csv", ["t", "deviation"], rows)
    write_field_csv(report.initial, outdir / "spectrum_initial.csv")
    write_field_csv(report.final, outdir / "spectrum_final.csv")
    write_field_csv(report.snapshot, outdir / "spectrum_snapshot.csv")
    write_line_plot(
        outdir / "spectrum_pair.svg",
        [_spectrum_series("initial", report.initial),
         _spectrum_series("after one period", report.final)],
        title="Mode amplitudes: initial vs one period",
        xlabel="k", ylabel="|u_k|", logy=True,
    )
    write_line_plot(
        outdir / "physical_pair.svg",
        [_physical_series("initial", report.initial, cfg["m"]),
         _physical_series("after one period", report.final, cfg["m"])],
        title="Return after one linear period", xlabel="x", ylabel="u(x)",
    )
    write_line_plot(
        outdir / "physical_snapshot.svg",
        [_physical_series("initial", report.initial, cfg["m"]),
         _physical_series(f"t = {report.snapshot_time:.4g}", report.snapshot, cfg["m"])],
        title="Short-time dispersion", xlabel="x", ylabel="u(x)",
    )
    write_line_plot(
        outdir / "deviation_vs_t.svg",
        [LineSeries("|v(t) - v(0)|", report.sample_times, report.nl_errors)],
        title="Deviation from the free flow", xlabel="t", ylabel="l2 deviation",
    )
    results = {
        "return_error_rel": report.return_error_rel,
        "identity_defect_max": report.identity_defect_max,
        "snapshot_time": report.snapshot_time,
        "snapshot_sup_ratio": report.snapshot_sup_ratio,
        "energy_drift": report.energy_drift,
        "initial_physical_energy": report.initial_physical_energy,
    }
    print(f"relative return error after one period: {report.return_error_rel:.6e}")
    print(f"snapshot sup-norm ratio at t = {report.snapshot_time:.4g}: "
          f"{report.snapshot_sup_ratio:.4f}")
    artifacts = ["deviation.csv", "spectrum_initial.csv", "spectrum_final.csv",
                 "spectrum_snapshot.csv", "spectrum_pair.svg", "physical_pair.svg",
                 "physical_snapshot.svg", "deviation_vs_t.svg"]
    return 0, artifacts, {}, results


def _cmd_pullback(cfg: dict, outdir: Path):
    spec = HermiteSpec(epsilon=cfg["epsilon"], amplitude=cfg["amplitude"])
    params = _kdv_params(cfg, cfg["t_final"])
    report = pullback_comparison(spec, params, cfg["t_final"])
    write_field_csv(report.initial, outdir / "spectrum_initial.csv")
    write_field_csv(report.evolved, outdir / "spectrum_evolved.csv")
    write_field_csv(report.pulled_back, outdir / "spectrum_pulled_back.csv")
    write_line_plot(
        outdir / "physical_pullback.svg",
        [_physical_series("initial", report.initial, cfg["m"]),
         _physical_series("pulled back", report.pulled_back, cfg["m"]),
         _physical_series(f"evolved (t = {report.t_final:.4g})", report.evolved, cfg["m"])],
        title="Reverse-linear pullback", xlabel="x", ylabel="u(x)",
    )
    write_line_plot(
        outdir / "spectrum_pullback.svg",
        [_spectrum_series("initial", report.initial),
         _spectrum_series("pulled back", report.pulled_back)],
        title="Mode amplitudes: initial vs pulled back",
        xlabel="k", ylabel="|u_k|", logy=True,
    )
    results = {
        "discrepancy_rel": report.discrepancy_rel,
        "energy_drift": report.energy_drift,
        "t_final": report.t_final,
    }
    print(f"relative pullback discrepancy at T = {report.t_final:.4g}: "
          f"{report.discrepancy_rel:.6e}")
    artifacts = ["spectrum_initial.csv", "spectrum_evolved.csv",
                 "spectrum_pulled_back.csv", "physical_pullback.svg",
                 "spectrum_pullback.svg"]
    return 0, artifacts, {}, results


def _cmd_sweep(cfg: dict, outdir: Path):
    params = _kdv_params(cfg, cfg["t_final"])
    result = epsilon_sweep(cfg["epsilons"], params, cfg["t_final"])
    rows = zip(result.epsilons, result.hm_norms, result.errors_at_t, result.energy_drifts)
    _write_csv(
        outdir / "sweep.csv",
        ["epsilon", "hm_half_norm", "deviation_at_t", "energy_drift"],
        rows,
    )
    if not result.degenerate:
        write_line_plot(
            outdir / "sweep_loglog.svg",
            [LineSeries("deviation at T", result.hm_norms, result.errors_at_t)],
            title="Deviation scaling vs H^{-1/2} size",
            xlabel="|phi| in H^{-1/2}", ylabel="deviation at T",
            logx=True, logy=True,
        )
    results = {
        "epsilons": list(result.epsilons),
        "errors_at_t": list(result.errors_at_t),
        "fitted_slope": None if result.degenerate else result.fitted_slope,
        "degenerate": result.degenerate,
        "identity_defect_max": result.identity_defect_max,
    }
    slope_text = "undefined" if result.degenerate else f"{result.fitted_slope:.4f}"
    print(f"fitted log-log slope: {slope_text}")
    for eps, err in zip(result.epsilons, result.errors_at_t):
        print(f"  epsilon = {eps:<5g} deviation at T = {err:.6e}")
    artifacts = ["sweep.csv"] + ([] if result.degenerate else ["sweep_loglog.svg"])
    return 0, artifacts, {}, results


def _cmd_normalform_check(cfg: dict, outdir: Path):
    rng = np.random.default_rng(int(cfg["seed"]))
    v = random_real_field(rng, int(cfg["support"]), cutoff=int(cfg["cutoff"]))
    v = (1.0 / l2_norm(v)) * v
    t = float(cfg["t"])
    dts = tuple(cfg["dts"])
    residuals = [normal_form_residual(v, t, dt) for dt in dts]
    orders = [
        math.log(residuals[i] / residuals[i + 1]) / math.log(dts[i] / dts[i + 1])
        for i in range(len(dts) - 1)
        if residuals[i + 1] > 0.0
    ]
    small = normal_form_residual(v, t, float(cfg["small_dt"]))
    census = ratio_census(count=int(cfg["census_count"]),
                          support=int(cfg["census_support"]))
    limit = int(cfg["identity_limit"])
    cube_ok = check_cube_identity(limit)
    fact_ok = check_factorization_identity(limit)
    orders_ok = all(1.5 <= o <= 2.5 for o in orders) and bool(orders)
    payload = {
        "residual_probe": {
            "support": int(cfg["support"]), "cutoff": int(cfg["cutoff"]),
            "seed": int(cfg["seed"]), "t": t,
            "series": [{"dt": d, "residual": r} for d, r in zip(dts, residuals)],
            "observed_orders": orders,
            "small_dt": float(cfg["small_dt"]),
            "small_dt_residual": small,
        },
        "ratio_census": {
            "count": int(cfg["census_count"]),
            "support": int(cfg["census_support"]),
            "seed": CENSUS_SEED,
            "maxima": census,
        },
        "identity_checks": {
            "limit": limit,
            "cube_identity": cube_ok,
            "factorization_identity": fact_ok,
        },
    }
    _write_json(outdir / "normalform_report.json", payload)
    ok = orders_ok and small < 1.0e-6 and cube_ok and fact_ok
    for d, r in zip(dts, residuals):
        print(f"residual at dt = {d:g}: {r:.6e}")
    print(f"observed orders: {['%.3f' % o for o in orders]}")
    print(f"residual at dt = {cfg['small_dt']:g}: {small:.6e}")
    print(f"census maxima: "
          + "  ".join(f"{k} = {val:.4f}" for k, val in sorted(census.items())))
    print(f"identity checks (|k| <= {limit}): "
          f"cube {'PASS' if cube_ok else 'FAIL'}, "
          f"factorization {'PASS' if fact_ok else 'FAIL'}")
    print("PASS" if ok else "FAIL")
    seeds = {"residual_probe": int(cfg["seed"]), "ratio_census": CENSUS_SEED}
    results = {
        "orders": orders,
        "small_dt_residual": small,
        "census_maxima": census,
        "pass": ok,
    }
    return (0 if ok else 1), ["normalform_report.json"], seeds, results


def _cmd_identities(cfg: dict, outdir: Path):
    limit = int(cfg["limit"])
    cube_ok = check_cube_identity(limit)
    fact_ok = check_factorization_identity(limit)
    payload = {"limit": limit, "cube_identity": cube_ok, "factorization_identity": fact_ok}
    _write_json(outdir / "identities.json", payload)
    print(f"cube identity, all |k| <= {limit}: {'PASS' if cube_ok else 'FAIL'}")
    print(f"factorization identity, all |k| <= {limit}: {'PASS' if fact_ok else 'FAIL'}")
    print("PASS" if cube_ok and fact_ok else "FAIL")
    return (0 if cube_ok and fact_ok else 1), ["identities.json"], {}, payload


def _cmd_shallow_water(cfg: dict, outdir: Path):
    report = validate_regime(cfg["delta"], cfg["eps"], cfg["threshold"])
    lines = [
        f"delta        {cfg['delta']:.6g}",
        f"eps          {cfg['eps']:.6g}",
        f"alpha_eps    {report.alpha_eps:.6g}",
        f"beta_eps     {report.beta_eps:.6g}",
        f"mismatch     {report.mismatch:.6g}",
        f"threshold    {report.threshold:.6g}",
        f"regime valid {'yes' if report.valid else 'no'}",
    ]
    results = report.as_dict()
    dims = (cfg["a_phys"], cfg["h0"], cfg["l"])
    if any(d is not None for d in dims):
        if any(d is None for d in dims):
            raise ConfigError("dimensional input needs all three of a_phys, h0, l")
        regime = dimensionless(PhysicalParams(a=dims[0], h0=dims[1], l=dims[2], g=cfg["g"]))
        lines += [
            f"alpha        {regime.alpha:.6g}",
            f"beta         {regime.beta:.6g}",
            f"c0           {regime.c0:.6g} m/s",
            f"t_scale      {regime.t_phys_scale:.6g} s",
        ]
        results["dimensional"] = {
            "alpha": regime.alpha, "beta": regime.beta,
            "c0": regime.c0, "t_phys_scale": regime.t_phys_scale,
        }
    print("\n".join(lines))
    artifacts = []
    if cfg["emit_json"]:
        _write_json(outdir / "regime.json", results)
        artifacts.append("regime.json")
    return 0, artifacts, {}, results


_HANDLERS = {
    "simulate": _cmd_simulate,
    "return-test": _cmd_return_test,
    "pullback": _cmd_pullback,
    "sweep": _cmd_sweep,
    "normalform-check": _cmd_normalform_check,
    "identities": _cmd_identities,
    "shallow-water": _cmd_shallow_water,
}


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out", "-o", help="output directory (default: "
                     f"${ENV_OUTPUT_ROOT}/<subcommand>)")


def _add_run_options(sub: argparse.ArgumentParser, with_t_final: bool = True) -> None:
    sub.add_argument("--profile", choices=sorted(PROFILES))
    sub.add_argument("--a", type=float, help="dispersion coefficient")
    sub.add_argument("--b", type=float, help="nonlinearity coefficient")
    sub.add_argument("--m", type=int, help="grid size (power of two)")
    sub.add_argument("--dt", type=float, help="time step (overrides profile)")
    sub.add_argument("--scheme", choices=[s.value for s in Scheme],
                     help="time stepper (overrides profile)")
    sub.add_argument("--dealias", action=argparse.BooleanOptionalAction, default=None,
                     help="2/3-rule dealiasing of the quadratic term")
    if with_t_final:
        sub.add_argument("--t-final", dest="t_final", type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kdvtorus",
        description="Spectral simulation and verification toolkit for periodic KdV.",
    )
    parser.add_argument("--version", action="version", version=f"kdvtorus {__version__}")
    subs = parser.add_subparsers(dest="command")

    sim = subs.add_parser("simulate", help="evolve odd-Gaussian data, track the deviation")
    _add_common(sim)
    _add_run_options(sim)
    sim.add_argument("--epsilon", type=float)
    sim.add_argument("--amplitude", type=float)
    sim.add_argument("--samples", type=int, help="number of sample times")

    ret = subs.add_parser("return-test", help="one full linear period, return error")
    _add_common(ret)
    _add_run_options(ret, with_t_final=False)
    ret.add_argument("--epsilon", type=float)
    ret.add_argument("--amplitude", type=float)

    pull = subs.add_parser("pullback", help="reverse-linear pullback comparison")
    _add_common(pull)
    _add_run_options(pull)
    pull.add_argument("--epsilon", type=float)
    pull.add_argument("--amplitude", type=float)

    sweep = subs.add_parser("sweep", help="deviation scaling across profile widths")
    _add_common(sweep)
    _add_run_options(sweep)
    sweep.add_argument("--epsilons", type=_parse_float_list,
                       help="comma-separated widths, e.g. 0.4,0.2,0.1")

    nf = subs.add_parser("normalform-check", help="operator identity diagnostics")
    _add_common(nf)
    nf.add_argument("--support", type=int)
    nf.add_argument("--cutoff", type=int)
    nf.add_argument("--seed", type=int)
    nf.add_argument("--t", type=float)
    nf.add_argument("--dts", type=_parse_float_list)
    nf.add_argument("--small-dt", dest="small_dt", type=float)
    nf.add_argument("--census-count", dest="census_count", type=int)
    nf.add_argument("--census-support", dest="census_support", type=int)
    nf.add_argument("--identity-limit", dest="identity_limit", type=int)

    ids = subs.add_parser("identities", help="exhaustive integer identity checks")
    _add_common(ids)
    ids.add_argument("--limit", type=int)

    sw = subs.add_parser("shallow-water", help="physical-to-KdV regime report")
    _add_common(sw)
    sw.add_argument("--delta", type=float)
    sw.add_argument("--eps", type=float)
    sw.add_argument("--threshold", type=float)
    sw.add_argument("--a-phys", dest="a_phys", type=float, help="amplitude (m)")
    sw.add_argument("--h0", type=float, help="rest depth (m)")
    sw.add_argument("--l", type=float, help="wavelength (m)")
    sw.add_argument("--g", type=float, help="gravity (m/s^2)")
    sw.add_argument("--emit-json", dest="emit_json",
                    action=argparse.BooleanOptionalAction, default=None)

    return parser


def run(argv) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    argv = list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        cfg = _resolve(args.command, args)
        outdir = _outdir(args, args.command)
        started = time.perf_counter()
        code, artifacts, seeds, results = _HANDLERS[args.command](cfg, outdir)
        wall = time.perf_counter() - started
        _manifest(outdir, args.command, cfg, seeds, artifacts, wall, results)
        return code
    except (KdvTorusError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
