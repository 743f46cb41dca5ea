"""Multi-trial experiments driven by a flat ``section.key = value`` config file.

Example config::

    # synthetic two-cluster run
    data.source = synthetic
    data.clusters = 2
    data.points_per_cluster = 20
    data.dim = 5
    data.center_spread = 1.0
    data.noise = 0.05
    kernel.kind = log_euclidean_gaussian
    kernel.gamma = 0.5
    solver.lambda = 0.04
    experiment.method = ksscr
    experiment.trials = 20
    experiment.output_dir = out

``data.source`` is one of ``synthetic``, ``images`` (a directory of PGM/RCMF
files, one class per file, tiled into covariance descriptors) or ``file``
(an ``.spds`` dataset).
"""
from __future__ import annotations

import csv
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .descriptors import describe_image, load_image
from .errors import NumericError, SpdcError, UsageError
from .kernels import KernelSpec, gram
from .metrics import accuracy, nmi
from .pipeline import METHODS, check_method_kernel, run_method, subspace_cluster
from .serialize import read_spds, write_f64
from .solver import SolverConfig
from .synth import SynthSpec, generate

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CONFIG, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3

RESULT_FIELDS = ["trial", "method", "kernel", "gamma", "lambda", "rho", "iters",
                 "converged", "accuracy", "nmi", "wall_ms"]
SUMMARY_FIELDS = ["method", "kernel", "gamma", "lambda", "rho", "trials",
                  "accuracy_mean", "accuracy_std", "nmi_mean", "nmi_std",
                  "iters_mean", "wall_ms_mean"]


class ConfigError(UsageError):
    pass


class InputError(SpdcError):
    pass


class StageError(SpdcError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"{stage} failed: {cause}")
        self.stage = stage


@dataclass
class ExperimentConfig:
    source: str = "synthetic"
    synth: SynthSpec = field(default_factory=SynthSpec)
    path: str | None = None
    tile: int = 32
    floor: float | None = None
    kernel: KernelSpec = field(default_factory=KernelSpec)
    solver: SolverConfig = field(default_factory=SolverConfig)
    clusters: int | None = None
    trials: int = 20
    base_seed: int = 0
    method: str = "ksscr"
    output_dir: str = "out"
    restarts: int = 20
    dump: bool = True

    def validate(self) -> "ExperimentConfig":
        if self.source not in ("synthetic", "images", "file"):
            raise ConfigError(f"unknown data.source {self.source!r}")
        if self.source != "synthetic" and not self.path:
            raise ConfigError(f"data.path is required for source {self.source!r}")
        if self.trials < 1:
            raise ConfigError("experiment.trials must be >= 1")
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        try:
            check_method_kernel(self.method, self.kernel)
        except UsageError as exc:
            raise ConfigError(str(exc)) from exc
        return self


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if not key:
            raise ConfigError(f"line {lineno}: empty key")
        out[key] = val
    return out


def _bool(s: str) -> bool:
    if s.lower() in ("1", "true", "yes", "on"):
        return True
    if s.lower() in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


_SYNTH_KEYS = {"clusters": int, "points_per_cluster": int, "dim": int,
               "center_spread": float, "noise": float}
_SOLVER_KEYS = {"lambda": ("lam", float), "rho": ("rho", float),
                "epsilon": ("epsilon", float), "max_iters": ("max_iters", int)}
_EXPERIMENT_KEYS = {"clusters": int, "trials": int, "base_seed": int, "method": str,
                    "output_dir": str, "restarts": int, "dump": _bool}


def config_from_dict(kv: dict, overrides: dict | None = None) -> ExperimentConfig:
    kv = dict(kv)
    for key, val in (overrides or {}).items():
        if val is not None:
            kv[key] = str(val)
    synth, kernel, solver, exp = {}, {}, {}, {}
    data = {}
    try:
        for key, val in kv.items():
            section, _, name = key.partition(".")
            if section == "data" and name in _SYNTH_KEYS:
                synth[name] = _SYNTH_KEYS[name](val)
            elif section == "data" and name in ("source", "path"):
                data[name] = val
            elif section == "data" and name == "tile":
                data["tile"] = int(val)
            elif section == "data" and name == "floor":
                data["floor"] = float(val)
            elif section == "kernel" and name == "kind":
                kernel["kind"] = val
            elif section == "kernel" and name in ("gamma", "beta"):
                kernel[name] = float(val)
            elif section == "solver" and name in _SOLVER_KEYS:
                attr, conv = _SOLVER_KEYS[name]
                solver[attr] = conv(val)
            elif section == "experiment" and name in _EXPERIMENT_KEYS:
                exp[name] = _EXPERIMENT_KEYS[name](val)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        if "kind" not in kernel:
            kernel["kind"] = "euclidean_gaussian" if exp.get("method") == "kssce" else "log_euclidean_gaussian"
        cfg = ExperimentConfig(
            source=data.get("source", "synthetic"),
            synth=SynthSpec(**synth),
            path=data.get("path"),
            tile=data.get("tile", 32),
            floor=data.get("floor"),
            kernel=KernelSpec(**kernel),
            solver=SolverConfig(**solver),
            **exp,
        )
    except ConfigError:
        raise
    except (ValueError, TypeError) as exc:
        raise ConfigError(str(exc)) from exc
    return cfg.validate()


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    return config_from_dict(parse_config_text(text), overrides)


# --- data ----------------------------------------------------------------

def _image_dataset(directory, tile: int, floor):
    files = sorted(p for p in Path(directory).iterdir()
                   if p.suffix.lower() in (".pgm", ".rcmf"))
    if not files:
        raise InputError(f"no .pgm or .rcmf images in {directory}")
    data, labels = [], []
    for cls, f in enumerate(files):
        desc = describe_image(load_image(f), tile, floor)
        data.append(desc)
        labels.append(np.full(len(desc), cls))
    return np.concatenate(data), np.concatenate(labels)


class DataSource:
    """Supplies the dataset for each trial seed."""

    def __init__(self, cfg: ExperimentConfig):
        self.cfg = cfg
        self.fixed = None
        if cfg.source == "synthetic":
            return
        try:
            if cfg.source == "images":
                self.fixed = _image_dataset(cfg.path, cfg.tile, cfg.floor)
            else:
                data, labels, repaired = read_spds(cfg.path, cfg.floor)
                if repaired:
                    log.warning("%d matrices in %s were projected onto the SPD cone", repaired, cfg.path)
                self.fixed = (data, labels)
        except (OSError, UsageError) as exc:
            raise InputError(str(exc)) from exc

    def clusters(self) -> int:
        cfg = self.cfg
        if cfg.clusters is not None:
            return cfg.clusters
        if self.fixed is None:
            return cfg.synth.clusters
        if self.fixed[1] is None:
            raise ConfigError("experiment.clusters is required for unlabeled data")
        return len(np.unique(self.fixed[1]))

    def trial(self, seed: int):
        if self.fixed is None:
            return generate(replace(self.cfg.synth, seed=seed))
        data, labels = self.fixed
        k = self.clusters()
        if labels is None:
            return data, None
        classes = np.unique(labels)
        if k < len(classes):
            chosen = np.random.default_rng(seed).choice(classes, size=k, replace=False)
            mask = np.isin(labels, chosen)
            return data[mask], labels[mask]
        return data, labels


# --- running -------------------------------------------------------------

def thread_cap() -> int:
    try:
        n = int(os.environ.get("SPDC_THREADS", "0"))
    except ValueError:
        n = 0
    return n if n > 0 else min(4, os.cpu_count() or 1)


def _run_trial(cfg: ExperimentConfig, source: DataSource, t: int):
    seed = cfg.base_seed + t
    data, truth = source.trial(seed)
    k = source.clusters()
    t0 = time.perf_counter()
    if cfg.method in ("ksscr", "kssce"):
        try:
            K = gram(data, cfg.kernel)
        except NumericError as exc:
            raise StageError("gram", exc) from exc
        try:
            res = subspace_cluster(K, k, cfg.solver, seed=seed, restarts=cfg.restarts)
        except NumericError as exc:
            raise StageError("solve", exc) from exc
    else:
        try:
            res = run_method(cfg.method, data, k, cfg.kernel, cfg.solver, seed=seed, restarts=cfg.restarts)
        except NumericError as exc:
            raise StageError("cluster", exc) from exc
    wall_ms = 1000.0 * (time.perf_counter() - t0)
    row = {
        "trial": t,
        "method": cfg.method,
        "kernel": cfg.kernel.kind if cfg.method in ("ksscr", "kssce") else "none",
        "gamma": cfg.kernel.gamma,
        "lambda": cfg.solver.lam,
        "rho": cfg.solver.rho,
        "iters": res.iters,
        "converged": int(res.converged),
        "accuracy": accuracy(res.labels, truth) if truth is not None else float("nan"),
        "nmi": nmi(res.labels, truth) if truth is not None else float("nan"),
        "wall_ms": wall_ms,
    }
    return row, res


def _std(x) -> float:
    return float(np.std(x, ddof=1)) if len(x) > 1 else float("nan")


def summarize(rows: list, cfg: ExperimentConfig) -> dict:
    acc = [r["accuracy"] for r in rows]
    nm = [r["nmi"] for r in rows]
    first = rows[0]
    return {
        "method": cfg.method, "kernel": first["kernel"], "gamma": cfg.kernel.gamma,
        "lambda": cfg.solver.lam, "rho": cfg.solver.rho, "trials": len(rows),
        "accuracy_mean": float(np.mean(acc)), "accuracy_std": _std(acc),
        "nmi_mean": float(np.mean(nm)), "nmi_std": _std(nm),
        "iters_mean": float(np.mean([r["iters"] for r in rows])),
        "wall_ms_mean": float(np.mean([r["wall_ms"] for r in rows])),
    }


def _fmt(v):
    return repr(v) if isinstance(v, float) else v


def write_csv(path, fields, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        for r in rows:
            w.writerow({k: _fmt(r[k]) for k in fields})


def read_csv(path) -> list:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def execute(cfg: ExperimentConfig):
    """Run every trial; returns ``(rows, summary, last_result)``.

    Trials may run on several threads (``SPDC_THREADS``); rows keep trial order.
    """
    source = DataSource(cfg)
    workers = min(thread_cap(), cfg.trials)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda t: _run_trial(cfg, source, t), range(cfg.trials)))
    else:
        out = [_run_trial(cfg, source, t) for t in range(cfg.trials)]
    rows = [r for r, _ in out]
    return rows, summarize(rows, cfg), out[-1][1]


def _guarded(fn):
    try:
        return fn()
    except ConfigError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG
    except InputError as exc:
        log.error("unreadable input: %s", exc)
        return EXIT_INPUT
    except StageError as exc:
        log.error("numeric failure in stage %r: %s", exc.stage, exc)
        return EXIT_NUMERIC
    except UsageError as exc:
        log.error("invalid config: %s", exc)
        return EXIT_CONFIG


def _run_into(cfg: ExperimentConfig, out: Path) -> dict:
    out.mkdir(parents=True, exist_ok=True)
    rows, summary, last = execute(cfg)
    write_csv(out / "results.csv", RESULT_FIELDS, rows)
    write_csv(out / "summary.csv", SUMMARY_FIELDS, [summary])
    if cfg.dump and last.report is not None:
        write_f64(out / "affinity.f64", last.affinity)
        write_f64(out / "coeff.f64", last.report.C)
    log.info("%s: accuracy %.3f +/- %.3f (sample std), nmi %.3f over %d trials",
             cfg.method, summary["accuracy_mean"], summary["accuracy_std"],
             summary["nmi_mean"], cfg.trials)
    return summary


def run(cfg: ExperimentConfig) -> int:
    """Run the experiment and write results.csv / summary.csv; returns an exit code."""
    def go():
        _run_into(cfg.validate(), Path(cfg.output_dir))
        return EXIT_OK
    return _guarded(go)


def gamma_sweep(cfg: ExperimentConfig, gammas) -> int:
    """One full run per gamma (in ``gamma_<i>/`` subdirectories) plus sweep.csv."""
    def go():
        if not gammas:
            raise ConfigError("gamma list is empty")
        out = Path(cfg.output_dir)
        rows = []
        for i, g in enumerate(gammas):
            try:
                sub = replace(cfg, kernel=replace(cfg.kernel, gamma=float(g)),
                              output_dir=str(out / f"gamma_{i}"))
            except UsageError as exc:
                raise ConfigError(str(exc)) from exc
            s = _run_into(sub.validate(), Path(sub.output_dir))
            rows.append({"gamma": float(g), "accuracy_mean": s["accuracy_mean"], "nmi_mean": s["nmi_mean"]})
        write_csv(out / "sweep.csv", ["gamma", "accuracy_mean", "nmi_mean"], rows)
        return EXIT_OK
    return _guarded(go)
