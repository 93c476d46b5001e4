"""Config-driven experiment runner.

Wires the simulation, quadrature, and ensemble modules into reproducible
command-line experiments.  Every run writes a manifest echoing the fully
resolved configuration; every CSV carries a comment line with the config
hash; reruns with the same config produce byte-identical artifacts.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import airy_spectrum, point_process, stat_validation, tridiag_ensemble
from .riccati_core import (
    Airy,
    Linear,
    NumericsConfig,
    Stationary,
    simulate_coupled_family,
    simulate_explosions,
    write_path_csv,
)
from .stationary_analysis import (
    flux_J0,
    integrated_J0,
    mean_exit_time,
    mean_exit_time_asymptotic,
)

__all__ = ["ExperimentConfig", "CliConfigError", "run", "main"]


class CliConfigError(ValueError):
    """Invalid configuration; the message carries file and line context."""


@dataclass
class ExperimentConfig:
    experiment: str
    params: dict = field(default_factory=dict)
    seed: int = 0
    replicas: int | None = None
    out_dir: str = "out"
    threads: int = 1

    def resolved(self) -> dict:
        # threads and out_dir are execution details, not experiment identity:
        # artifacts must be byte-identical across parallelism and location
        return {
            "experiment": self.experiment,
            "params": dict(sorted(self.params.items())),
            "seed": self.seed,
            "replicas": self.replicas,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.resolved(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


def _parse_value(raw: str, kind: str, where: str):
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        if kind == "bool":
            if raw.lower() in ("true", "1", "yes"):
                return True
            if raw.lower() in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        if kind == "floats":
            return tuple(float(tok) for tok in raw.split(",") if tok.strip())
        return raw
    except ValueError:
        raise CliConfigError(f"{where}: cannot parse {raw!r} as {kind}") from None


# key -> (type, default); None default means required
_RESERVED_KEYS = {
    "seed": "int",
    "replicas": "int",
    "threads": "int",
}

_SCHEMAS: dict[str, dict[str, tuple[str, object]]] = {
    "stationary-exit": {
        "a": ("float", 2.0),
        "horizon": ("float", 200.0),
        "dt0": ("float", 1e-3),
        "cutoff": ("float", 100.0),
        "intervals": ("int", 50),
    },
    "tw-gumbel": {
        "beta": ("float", 1e-4),
        "x_values": ("floats", (-1.0, 0.0, 1.0)),
        "t_resc": ("float", 8.0),
        "k": ("int", 0),
        "dt0": ("float", 1e-3),
        "cutoff": ("float", 100.0),
    },
    "kth-marginal": {
        "k": ("int", 1),
        "x_values": ("floats", (-2.0, -1.0, 0.0, 1.0, 2.0)),
    },
    "hill": {
        "a": ("float", 2.0),
        "length": ("float", 0.0),
        "dt0": ("float", 1e-3),
        "cutoff": ("float", 100.0),
    },
    "density": {
        "beta": ("float", 1e-3),
        "ell_values": ("floats", (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0)),
        "x_values": ("floats", (-4.0, -2.0, 0.0, 1.0, 2.0)),
    },
    "quadrature-tables": {
        "a_values": ("floats", (1.0, 2.0, 3.0)),
    },
    "tridiag": {
        "n": ("int", 4096),
        "beta_n": ("float", 0.0),
        "k": ("int", 1),
    },
    "coupled-paths": {
        "family": ("str", "linear"),
        "levels": ("floats", (-1.0, -0.5, 0.0, 0.5, 1.0)),
        "beta": ("float", 0.5),
        "horizon": ("float", 20.0),
        "dt0": ("float", 1e-3),
        "cutoff": ("float", 100.0),
        "record_dt": ("float", 0.01),
    },
}

_DEFAULT_REPLICAS = {
    "stationary-exit": 1,
    "tw-gumbel": 400,
    "kth-marginal": 0,
    "hill": 200,
    "density": 0,
    "quadrature-tables": 0,
    "tridiag": 2000,
    "coupled-paths": 1,
}


def parse_config_file(path: str, experiment: str) -> dict:
    """Parse a flat key = value config with [section] headers.

    Unknown and duplicate keys are rejected with the offending line number.
    Section headers organize the file but do not namespace keys.
    """
    schema = _SCHEMAS[experiment]
    out: dict = {}
    seen: set[str] = set()
    text = Path(path).read_text()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if stripped.startswith("[") and stripped.endswith("]"):
            continue
        if "=" not in stripped:
            raise CliConfigError(
                f"{path}:{lineno}: expected key = value, got {stripped!r}"
            )
        key, _, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if key in seen:
            raise CliConfigError(f"{path}:{lineno}: duplicate key {key!r}")
        seen.add(key)
        if key in _RESERVED_KEYS:
            out[key] = _parse_value(raw, _RESERVED_KEYS[key], f"{path}:{lineno}")
        elif key in schema:
            out[key] = _parse_value(raw, schema[key][0], f"{path}:{lineno}")
        else:
            raise CliConfigError(
                f"{path}:{lineno}: unknown key {key!r} for experiment "
                f"{experiment!r}"
            )
    return out


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def _write_csv(path: Path, config_hash: str, header: list[str], rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"# config_hash = {config_hash}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _map_replicas(fn, indices, threads: int) -> list:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, indices))
    return [fn(i) for i in indices]


# -- experiment drivers --------------------------------------------------------


def _run_stationary_exit(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    a = p["a"]
    ma = mean_exit_time(a).value
    numerics = NumericsConfig(dt0=p["dt0"], cutoff=p["cutoff"],
                              entry=p["cutoff"], horizon=p["horizon"])

    def one(i: int):
        log = simulate_explosions(Stationary(a=a), numerics,
                                  rng_seed=cfg.seed + i)
        return point_process.rescale_stationary(log, a)

    reps = _map_replicas(one, range(cfg.replicas), cfg.threads)
    rows, summary = [], []
    for i, epp in enumerate(reps):
        gaps = point_process.interarrivals(epp)
        for k, (t, g) in enumerate(zip(epp.points, gaps)):
            rows.append((i, k, t, g))
        n = len(epp.points)
        ks = math.nan
        if n >= 20:
            ks = stat_validation.ks_distance(
                gaps, lambda t: 1.0 - np.exp(-np.asarray(t))).statistic
        disp = math.nan
        n_iv = min(p["intervals"], int(p["horizon"] / ma))
        if n_iv >= 2:
            counts = [point_process.count(epp, j, j + 1.0) for j in range(n_iv)]
            if sum(counts) > 0:
                disp = stat_validation.poisson_dispersion(counts).statistic
        mean_gap = float(np.mean(gaps)) if n else math.nan
        summary.append((i, n, mean_gap, ks, disp))
    h = cfg.config_hash()
    _write_csv(out / "exits.csv", h,
               ["replica", "index", "rescaled_time", "rescaled_gap"], rows)
    _write_csv(out / "summary.csv", h,
               ["replica", "n_explosions", "mean_rescaled_gap", "ks_exp1",
                "dispersion"], summary)
    return ["exits.csv", "summary.csv"]


def _run_tw_gumbel(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    beta = p["beta"]
    numerics = NumericsConfig(
        dt0=p["dt0"], cutoff=p["cutoff"], entry=p["cutoff"],
        horizon=airy_spectrum.physical_horizon(beta, p["t_resc"]),
        seed=cfg.seed)
    estimates = airy_spectrum.estimate_tw_cdf(
        beta, np.asarray(p["x_values"]), cfg.replicas, numerics,
        k=p["k"], threads=cfg.threads)
    rows = []
    for est in estimates:
        pred = 1.0 - math.exp(-math.exp(est.x) * (1.0 - math.exp(-p["t_resc"])))
        rows.append((est.x, est.ell, est.estimate, est.ci_low, est.ci_high,
                     pred, est.n))
    _write_csv(out / "estimates.csv", cfg.config_hash(),
               ["x", "ell", "estimate", "ci_low", "ci_high", "prediction",
                "n"], rows)
    return ["estimates.csv"]


def _run_kth_marginal(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    rows = [(p["k"], x, airy_spectrum.kth_marginal_limit_cdf(p["k"], x))
            for x in p["x_values"]]
    _write_csv(out / "kth_marginal.csv", cfg.config_hash(),
               ["k", "x", "limit_cdf"], rows)
    return ["kth_marginal.csv"]


def _run_hill(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    a = p["a"]
    ma = mean_exit_time(a).value
    length = p["length"] if p["length"] > 0.0 else 5.0 * ma
    numerics = NumericsConfig(dt0=p["dt0"], cutoff=p["cutoff"],
                              entry=p["cutoff"], horizon=length)

    def one(i: int) -> int:
        log = simulate_explosions(Stationary(a=a), numerics,
                                  rng_seed=cfg.seed + i)
        return len(log.times)

    counts = _map_replicas(one, range(cfg.replicas), cfg.threads)
    h = cfg.config_hash()
    _write_csv(out / "counts.csv", h, ["replica", "count"],
               list(enumerate(counts)))
    target = length * flux_J0(a).value
    mean_count = float(np.mean(counts)) if counts else math.nan
    _write_csv(out / "summary.csv", h,
               ["replicas", "length", "mean_count", "target_count"],
               [(cfg.replicas, length, mean_count, target)])
    return ["counts.csv", "summary.csv"]


def _run_density(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    beta = p["beta"]
    h = cfg.config_hash()
    rows = []
    for ell in p["ell_values"]:
        d = airy_spectrum.macroscopic_density(ell, beta)
        rows.append((ell, d.density, d.integrated))
    _write_csv(out / "density.csv", h, ["ell", "density", "integrated"], rows)
    krows = []
    for x in p["x_values"]:
        krows.append((x, airy_spectrum.airy_ai(x), airy_spectrum.airy_ai_prime(x),
                      airy_spectrum.airy_kernel_density(x)))
    _write_csv(out / "kernel.csv", h, ["x", "ai", "ai_prime", "kernel_density"],
               krows)
    return ["density.csv", "kernel.csv"]


def _run_quadrature_tables(cfg: ExperimentConfig, out: Path) -> list[str]:
    rows = []
    for a in cfg.params["a_values"]:
        m = mean_exit_time(a)
        j0 = flux_J0(a)
        asym_ratio = math.exp(m.log_value - mean_exit_time_asymptotic(a))
        rows.append((a, m.value, j0.value, j0.value * m.value,
                     asym_ratio, integrated_J0(-a).value))
    _write_csv(out / "quadrature.csv", cfg.config_hash(),
               ["a", "mean_exit", "flux_j0", "j0_times_m", "asymptotic_ratio",
                "integrated_j0"], rows)
    return ["quadrature.csv"]


def _run_tridiag(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    n = p["n"]
    beta_n = p["beta_n"] if p["beta_n"] > 0.0 else n ** -0.5
    params = tridiag_ensemble.EnsembleParams(n, beta_n)

    def one(i: int):
        seed = cfg.seed + i
        mat = tridiag_ensemble.sample_matrix(params, seed)
        lam0 = float(tridiag_ensemble.top_k_eigenvalues(mat, p["k"])[0])
        resc = tridiag_ensemble.edge_rescale(lam0, n, beta_n)
        return (seed, lam0, resc,
                float(tridiag_ensemble.gumbel_prediction(beta_n, resc)))

    rows = _map_replicas(one, range(cfg.replicas), cfg.threads)
    h = cfg.config_hash()
    _write_csv(out / "eigenvalues.csv", h,
               ["seed", "lambda0", "rescaled", "gumbel_quantile"], rows)
    resc = np.array([r[2] for r in rows])
    ks = math.nan
    if resc.size >= 20:
        ks = stat_validation.ks_distance(
            resc, lambda x: tridiag_ensemble.gumbel_prediction(beta_n, x)
        ).statistic
    _write_csv(out / "summary.csv", h,
               ["n", "beta_n", "replicas", "ks_gumbel"],
               [(n, beta_n, cfg.replicas, ks)])
    return ["eigenvalues.csv", "summary.csv"]


def _run_coupled_paths(cfg: ExperimentConfig, out: Path) -> list[str]:
    p = cfg.params
    family = p["family"]
    numerics = NumericsConfig(dt0=p["dt0"], cutoff=p["cutoff"],
                              entry=p["cutoff"], horizon=p["horizon"],
                              record_path=True, record_dt=p["record_dt"])
    if family == "stationary":
        template = Stationary(a=p["levels"][0])
    elif family == "airy":
        template = Airy(lam=p["levels"][0], beta=p["beta"])
    elif family == "linear":
        template = Linear(ell=p["levels"][0], beta=p["beta"])
    else:
        raise CliConfigError(
            f"unknown family {family!r}: expected stationary, airy or linear")
    logs = simulate_coupled_family(np.asarray(p["levels"]), template, numerics,
                                   rng_seed=cfg.seed)
    h = cfg.config_hash()
    artifacts = []
    erows = []
    for k, log in enumerate(logs):
        name = f"path_{k}.csv"
        with open(out / name, "w", newline="\n") as fh:
            fh.write(f"# config_hash = {h}\n")
            write_path_csv(log.path, fh)
        artifacts.append(name)
        for t in log.times:
            erows.append((k, p["levels"][k], t))
    _write_csv(out / "explosions.csv", h, ["level_index", "level", "time"],
               erows)
    artifacts.append("explosions.csv")
    return artifacts


_DRIVERS = {
    "stationary-exit": _run_stationary_exit,
    "tw-gumbel": _run_tw_gumbel,
    "kth-marginal": _run_kth_marginal,
    "hill": _run_hill,
    "density": _run_density,
    "quadrature-tables": _run_quadrature_tables,
    "tridiag": _run_tridiag,
    "coupled-paths": _run_coupled_paths,
}


def run(cfg: ExperimentConfig) -> int:
    """Execute one experiment; returns 0 and writes artifacts + manifest."""
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    artifacts = _DRIVERS[cfg.experiment](cfg, out)
    manifest = cfg.resolved()
    manifest["config_hash"] = cfg.config_hash()
    manifest["artifacts"] = sorted(artifacts)
    with open(out / "manifest.json", "w", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return 0


def build_config(argv=None) -> ExperimentConfig:
    parser = argparse.ArgumentParser(
        prog="riccati-spectra",
        description="Reproducible spectral-statistics experiments")
    parser.add_argument("experiment", choices=sorted(_DRIVERS))
    parser.add_argument("--config", metavar="PATH", default=None)
    parser.add_argument("--seed", type=int, default=None, metavar="U64")
    parser.add_argument("--replicas", type=int, default=None, metavar="N")
    parser.add_argument("--out", default=None, metavar="DIR")
    parser.add_argument("--threads", type=int, default=None, metavar="N",
                        help="worker threads; 0 = one per CPU")
    args = parser.parse_args(argv)

    file_cfg: dict = {}
    if args.config is not None:
        file_cfg = parse_config_file(args.config, args.experiment)

    params = {key: default for key, (_, default) in
              _SCHEMAS[args.experiment].items()}
    for key, val in file_cfg.items():
        if key not in _RESERVED_KEYS:
            params[key] = val

    seed = args.seed if args.seed is not None else file_cfg.get("seed", 0)
    replicas = (args.replicas if args.replicas is not None
                else file_cfg.get("replicas",
                                  _DEFAULT_REPLICAS[args.experiment]))
    threads = (args.threads if args.threads is not None
               else file_cfg.get("threads", 1))
    if threads == 0:
        threads = os.cpu_count() or 1
    if replicas < 0:
        raise CliConfigError("replicas must be nonnegative")
    return ExperimentConfig(
        experiment=args.experiment, params=params, seed=seed,
        replicas=replicas, out_dir=args.out if args.out is not None else "out",
        threads=threads)


def main(argv=None) -> int:
    try:
        cfg = build_config(argv)
        return run(cfg)
    except CliConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
