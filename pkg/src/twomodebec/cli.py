"""Command-line front end: scenario orchestration and CSV/JSON emission.

Subcommands: evolve, cat, husimi, decohere, purify.  Each takes an INI
config and writes CSV series (17-significant-digit floats, LF endings,
UTF-8) plus a sibling .meta.json recording the config hash, engine choice,
truncation depth and achieved norm, so identical configs produce
byte-identical outputs.  Exit status: 0 success, 2 config error, 3
numerical failure.
"""

import argparse
import cmath
import csv
import hashlib
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analytic import amplitudes_at, evolved_state_analytic
from .config import ConfigError, RunConfig, load_config
from .dephasing import DampingParams, purity_series
from .evolution import ConvergenceError, evolve
from .gcs import (CatDecomposition, cat_coefficients, cat_reconstruct,
                  cat_size, coherent_amplitudes, detect_rational_phase,
                  purification_initial_condition, purification_times)
from .model import (CoherentPair, ModelParams, ResourceLimitError,
                    coherent_product, derive_params, poisson_cutoff)
from .husimi import count_packets, husimi
from .observables import (SingleModeDensity, diagnostics, reduce_mode_a,
                          reduce_mode_b)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _fmt(value) -> str:
    if value is None:
        return "nan"
    return f"{value:.17g}"


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else _fmt(cell)
                             for cell in row])


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        json.dump(payload, handle, indent=2)
        handle.write("\n")


def _meta_path(data_path: Path) -> Path:
    return data_path.with_suffix(".meta.json")


def _config_digest(config_path: str) -> str:
    with open(config_path, "rb") as handle:
        return hashlib.sha256(handle.read()).hexdigest()


def _base_meta(args, subcommand: str) -> dict:
    return {
        "tool": "twomodebec",
        "version": __version__,
        "subcommand": subcommand,
        "config": os.path.basename(args.config),
        "config_sha256": _config_digest(args.config),
        "seed": args.seed,
    }


def _resolve_initial(cfg: RunConfig):
    """Initial pair, solving the vanishing-amplitude condition when the
    config requests the partner via ``alpha_b = purify``.

    The detuning depends on the total number, which depends on the partner
    amplitude, so the condition is closed by fixed-point iteration (exact
    in one step when u_aa = u_bb).
    """
    if cfg.initial is not None:
        return cfg.initial
    alpha_known = cfg.purify_alpha_known
    n_mean = 2.0 * abs(alpha_known) ** 2
    partner = None
    for _ in range(64):
        d = derive_params(cfg.params, n_mean)
        t_e = purification_times(d, "quarter", cfg.purify_order + 1)[-1]
        partner = purification_initial_condition(
            alpha_known, cfg.vanish_mode, d, cfg.params, t_e)
        new_n = abs(alpha_known) ** 2 + abs(partner) ** 2
        if abs(new_n - n_mean) <= 1e-14 * max(1.0, new_n):
            n_mean = new_n
            break
        n_mean = new_n
    if cfg.vanish_mode == "a":
        return CoherentPair(alpha_known, partner)
    return CoherentPair(partner, alpha_known)


def _quarter_time(cfg: RunConfig, pair: CoherentPair) -> float:
    d = derive_params(cfg.params, pair.n_mean)
    return purification_times(d, "quarter", cfg.purify_order + 1)[-1]


def _series_records(pair: CoherentPair, params: ModelParams, times,
                    tail_tol: float, engine: str):
    """One diagnostics record per time point, plus run metadata."""
    if engine == "auto":
        engine = "analytic" if params.analytic_valid else "numeric"
    if engine == "analytic" and not params.analytic_valid:
        raise ConfigError("engine=analytic requires u_aa + u_bb = 2 u_ab")
    n_total = pair.n_mean
    records = []
    state0 = None if engine == "analytic" else coherent_product(pair, tail_tol)
    norm = None
    n_max = None
    for t in times:
        if engine == "analytic":
            state = evolved_state_analytic(pair, params, t, tail_tol)
        else:
            state = evolve(state0, params, t)
        di = diagnostics(reduce_mode_b(state))
        nb_frac = di.n_mean / n_total if n_total > 0 else 0.0
        records.append((t, nb_frac, di.var_n, di.var_b, di.mandel_q,
                        di.linear_entropy))
        norm = state.norm_sq()
        n_max = state.n_max
    return records, {"engine": engine, "n_max_blocks": n_max,
                     "achieved_norm": norm}


def cmd_evolve(cfg: RunConfig, args, out_dir: Path, stem: str) -> None:
    pair = _resolve_initial(cfg)
    times = np.linspace(cfg.time_start, cfg.time_stop, cfg.time_steps)
    header = ["t", "nb_frac", "var_nb", "var_b", "mandel_q", "linear_entropy"]
    if cfg.u_ab_percents is None:
        series = [(None, cfg.params)]
    else:
        series = [(pct, replace(cfg.params, u_ab=pct / 100.0 * cfg.params.u_aa))
                  for pct in cfg.u_ab_percents]
    outputs = []
    for pct, params in series:
        records, info = _series_records(pair, params, times, cfg.tail_tol,
                                        cfg.engine)
        label = "series" if pct is None else f"uab{pct:g}"
        csv_path = out_dir / f"{stem}_{label}.csv"
        _write_csv(csv_path, header, records)
        meta = _base_meta(args, "evolve")
        meta.update(info)
        meta.update({
            "u_ab_percent": pct,
            "u_ab": params.u_ab,
            "n_total": pair.n_mean,
            "columns": header,
            "rows": len(records),
        })
        _write_json(_meta_path(csv_path), meta)
        outputs.append(csv_path.name)
    print("\n".join(outputs))


def cmd_cat(cfg: RunConfig, args, out_dir: Path, stem: str) -> None:
    if not cfg.params.analytic_valid:
        raise ConfigError("cat analysis requires u_aa + u_bb = 2 u_ab")
    pair = _resolve_initial(cfg)
    params = cfg.params
    d = derive_params(params, pair.n_mean)
    t_e = _quarter_time(cfg, pair)
    state = evolved_state_analytic(pair, params, t_e, cfg.tail_tol)
    amps = amplitudes_at(pair, d, params, t_e)
    if cfg.vanish_mode == "a":
        residual = diagnostics(reduce_mode_a(state)).n_mean
        gcs_density = reduce_mode_b(state)
        beta_eff = amps.beta_t * cmath.exp(-1j * d.omega_0 * t_e)
    else:
        residual = diagnostics(reduce_mode_b(state)).n_mean
        gcs_density = reduce_mode_a(state)
        beta_eff = amps.alpha_t * cmath.exp(-1j * d.omega_0 * t_e)

    report = _base_meta(args, "cat")
    report.update({
        "t_e": t_e,
        "lambda_1": d.lambda_1,
        "vanish_mode": cfg.vanish_mode,
        "residual_population": residual,
        "alpha_a": [pair.alpha_a.real, pair.alpha_a.imag],
        "alpha_b": [pair.alpha_b.real, pair.alpha_b.imag],
        "beta": [beta_eff.real, beta_eff.imag],
        "engine": "analytic",
    })
    rp = detect_rational_phase(params.u_ab, t_e, cfg.rational_tol,
                               cfg.max_denominator)
    if rp is None:
        report["status"] = ("no rational quadratic phase within tolerance; "
                            "no finite cat decomposition")
    else:
        l = cat_size(rp)
        coeffs = cat_coefficients(rp)
        rec = cat_reconstruct(CatDecomposition(l=l, coeffs=coeffs, beta=beta_eff),
                              gcs_density.cutoff)
        fidelity = gcs_density.pure_state_fidelity(rec)
        report.update({
            "status": "ok",
            "r": rp.r,
            "s": rp.s,
            "l": l,
            "coefficients": [[c.real, c.imag] for c in coeffs],
            "reconstruction_fidelity": fidelity,
        })
    path = out_dir / f"{stem}_cat.json"
    _write_json(path, report)
    print(path.name)


def cmd_husimi(cfg: RunConfig, args, out_dir: Path, stem: str) -> None:
    if cfg.grid is None:
        raise ConfigError("section [husimi] is required for the husimi subcommand")
    if cfg.husimi_source == "coherent":
        amp = cfg.husimi_amplitude
        cutoff = poisson_cutoff(abs(amp) ** 2, cfg.tail_tol)
        density = SingleModeDensity.from_pure(coherent_amplitudes(amp, cutoff))
        engine = "coherent"
    else:
        if not cfg.params.analytic_valid:
            raise ConfigError("husimi source=purified requires u_aa + u_bb = 2 u_ab")
        pair = _resolve_initial(cfg)
        t_e = _quarter_time(cfg, pair)
        state = evolved_state_analytic(pair, cfg.params, t_e, cfg.tail_tol)
        density = (reduce_mode_b(state) if cfg.vanish_mode == "a"
                   else reduce_mode_a(state))
        engine = "analytic"
    g = cfg.grid
    corner = max(abs(complex(re, im))
                 for re in (g.re_min, g.re_max) for im in (g.im_min, g.im_max))
    density = density.padded(max(density.cutoff,
                                 poisson_cutoff(corner ** 2, 1e-12)))
    grid = husimi(density, g.re_min, g.re_max, g.im_min, g.im_max, g.resolution)
    packets = count_packets(grid, cfg.packet_threshold)

    csv_path = out_dir / f"{stem}_husimi.csv"
    re_axis = grid.re_axis
    im_axis = grid.im_axis
    rows = ((re_axis[j], im_axis[i], grid.values[i, j])
            for i in range(g.resolution) for j in range(g.resolution))
    _write_csv(csv_path, ["re", "im", "q"], rows)
    meta = _base_meta(args, "husimi")
    meta.update({
        "engine": engine,
        "max_q": float(grid.values.max()),
        "packet_count": packets,
        "packet_threshold": cfg.packet_threshold,
        "window": [g.re_min, g.re_max, g.im_min, g.im_max],
        "resolution": g.resolution,
        "fock_cutoff": density.cutoff,
        "achieved_norm": density.trace,
    })
    _write_json(_meta_path(csv_path), meta)
    print(csv_path.name)


def cmd_decohere(cfg: RunConfig, args, out_dir: Path, stem: str) -> None:
    if not cfg.decohere_series:
        raise ConfigError("section [decohere] is required for the decohere subcommand")
    u = cfg.params.u_aa
    if u <= 0:
        raise ConfigError("decohere needs u_aa > 0 to scale the dimensionless time axis")
    ut = np.linspace(0.0, cfg.decohere_ut_max, cfg.decohere_steps)
    times = ut / u
    columns = []
    cutoffs = {}
    for kappa_factor, n_atoms in cfg.decohere_series:
        cutoff = poisson_cutoff(n_atoms, cfg.tail_tol)
        cutoffs[f"n{n_atoms:g}"] = cutoff
        # dephasing damps by |n - m|^2 only, so the Kerr phases of any
        # quadratic-phase state with this mean leave the purity unchanged;
        # a plain coherent state is the cheapest representative
        rho0 = SingleModeDensity.from_pure(
            coherent_amplitudes(math.sqrt(n_atoms), cutoff))
        dp = DampingParams(omega_a=cfg.params.omega_a, u_aa=u,
                           kappa=kappa_factor * u)
        series = purity_series(rho0, dp, times)
        columns.append((f"purity_k{kappa_factor:g}_n{n_atoms:g}",
                        [v for _, v in series]))
    header = ["ut"] + [name for name, _ in columns]
    rows = ([ut[i]] + [col[i] for _, col in columns] for i in range(len(ut)))
    csv_path = out_dir / f"{stem}_decohere.csv"
    _write_csv(csv_path, header, rows)
    meta = _base_meta(args, "decohere")
    meta.update({
        "engine": "closed-form-channel",
        "series": [{"kappa_factor": kf, "n_atoms": n} for kf, n in cfg.decohere_series],
        "fock_cutoffs": cutoffs,
        "columns": header,
        "rows": cfg.decohere_steps,
    })
    _write_json(_meta_path(csv_path), meta)
    print(csv_path.name)


def cmd_purify(cfg: RunConfig, args, out_dir: Path, stem: str) -> None:
    pair = _resolve_initial(cfg)
    d = derive_params(cfg.params, pair.n_mean)
    report = _base_meta(args, "purify")
    if d.lambda_1 <= 0.0:
        report["status"] = "no-solution: lambda_1 = 0 (modes decoupled)"
    else:
        t_e = _quarter_time(cfg, pair)
        report.update({
            "status": "ok",
            "lambda_1": d.lambda_1,
            "omega_1": d.omega_1,
            "t_e": t_e,
            "quarter_times": purification_times(d, "quarter", cfg.purify_count),
            "full_times": purification_times(d, "full", cfg.purify_count),
            "vanish_mode": cfg.vanish_mode,
            "alpha_a": [pair.alpha_a.real, pair.alpha_a.imag],
            "alpha_b": [pair.alpha_b.real, pair.alpha_b.imag],
        })
    path = out_dir / f"{stem}_purify.json"
    _write_json(path, report)
    print(path.name)


_COMMANDS = {
    "evolve": cmd_evolve,
    "cat": cmd_cat,
    "husimi": cmd_husimi,
    "decohere": cmd_decohere,
    "purify": cmd_purify,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="twomodebec",
        description="Two Josephson-coupled bosonic modes: simulation runner",
    )
    parser.add_argument("subcommand", choices=sorted(_COMMANDS))
    parser.add_argument("config", help="INI run configuration")
    parser.add_argument("--out", default=None,
                        help="output directory (default: $OUT_DIR or CWD)")
    parser.add_argument("--seed", type=int, default=None,
                        help="reserved; recorded in metadata")
    args = parser.parse_args(argv)

    out_dir = Path(args.out or os.environ.get("OUT_DIR") or ".")
    stem = Path(args.config).stem
    try:
        cfg = load_config(args.config)
        out_dir.mkdir(parents=True, exist_ok=True)
        _COMMANDS[args.subcommand](cfg, args, out_dir, stem)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ResourceLimitError, ConvergenceError, ValueError,
            ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
