"""Command-line experiment runner.

Subcommands
-----------
bench           run a grid of (target, n, method, seed) rows and write a report
fit             one interpolant (FSK, or VSK with a given scaling), scored on the grid
train-scaling   train a scaling network and save a checkpoint
eval            rebuild the interpolant from a checkpoint and evaluate it
lebesgue        Lebesgue function and pointwise error-bound check on the grid

Settings come from an optional JSON file (``--config``); command-line flags
override the file, and the file overrides the built-in defaults.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path

import numpy as np

from . import data as datasets
from .deltann import TrainingDivergedError, load_checkpoint, save_checkpoint
from .interp import (CallableScaling, ConstantScaling, bound_check, evaluate, fit, lebesgue_profile,
                     node_residual)
from .kernels import KernelError, KernelSpec
from .metrics import grid_scores, to_image
from .numerics import SingularSystemError
from .training import (NetworkScaling, TrainConfig, build_joint_interpolant, build_vskf_interpolant,
                       scaling_fit_report, train_direct, train_joint)

log = logging.getLogger("vskdnn")

EXIT_OK, EXIT_CONFIG, EXIT_ALL_FAILED = 0, 2, 3

METHODS = ("fsk", "dnn-vsk", "vsk-f")
_METHOD_ALIASES = {
    "fsk": "fsk",
    "dnn-vsk": "dnn-vsk", "dnnvsk": "dnn-vsk", "deltannvsk": "dnn-vsk", "joint": "dnn-vsk",
    "vsk-f": "vsk-f", "vskf": "vsk-f", "direct": "vsk-f",
}
TARGETS = ("f1", "f2", "f3", "f4", "franke_classic")
_RUNTIME_ERRORS = (TrainingDivergedError, SingularSystemError, np.linalg.LinAlgError,
                   FloatingPointError, ValueError)


class ConfigError(ValueError):
    pass


def canonical_method(name: str) -> str:
    key = str(name).strip().lower().replace("_", "-")
    if key not in _METHOD_ALIASES:
        key = key.replace("-", "")
    try:
        return _METHOD_ALIASES[key]
    except KeyError:
        raise ConfigError(f"unknown method {name!r} (choose from {', '.join(METHODS)})") from None


# -- configuration -----------------------------------------------------------------

@dataclass
class ExperimentConfig:
    target: str = "f2"
    csv: str | None = None
    n: list = field(default_factory=lambda: [1089])
    kernel: str = "matern_c2"
    epsilon: float = 0.12
    methods: list = field(default_factory=lambda: ["fsk"])
    grid_side: int = 100
    seeds: list = field(default_factory=lambda: [0])
    output: str = "bench_out"
    max_epochs: dict = field(default_factory=dict)
    pgm: bool = False
    jobs: int = 1

    @classmethod
    def from_mapping(cls, raw: dict) -> ExperimentConfig:
        known = {f.name for f in fields(cls)}
        raw = dict(raw)
        if isinstance(raw.get("kernel"), dict):
            k = raw.pop("kernel")
            raw["kernel"] = k.get("family", cls.kernel)
            if "epsilon" in k:
                raw.setdefault("epsilon", k["epsilon"])
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        try:
            cfg = cls(**raw)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    def validate(self):
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r} (choose from {', '.join(TARGETS)})")
        if self.target == "f4" and self.csv is not None and not Path(self.csv).is_file():
            raise ConfigError(f"acetone CSV not found: {self.csv}")
        self.n = _int_list(self.n, "n")
        if any(v < 1 for v in self.n):
            raise ConfigError("n must be at least 1")
        self.seeds = _int_list(self.seeds, "seeds")
        if not self.seeds:
            raise ConfigError("at least one seed is required")
        if isinstance(self.methods, str):
            self.methods = [m for m in self.methods.split(",") if m.strip()]
        if not self.methods:
            raise ConfigError("at least one method is required")
        self.methods = sorted({canonical_method(m) for m in self.methods}, key=METHODS.index)
        try:
            KernelSpec(self.kernel, float(self.epsilon))
        except (KernelError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad kernel: {exc}") from None
        self.epsilon = float(self.epsilon)
        if int(self.grid_side) < 11:
            raise ConfigError("grid_side must be at least 11 (SSIM window)")
        self.grid_side = int(self.grid_side)
        if not isinstance(self.max_epochs, dict):
            raise ConfigError("max_epochs must map method names to epoch counts")
        self.max_epochs = {canonical_method(k): int(v) for k, v in self.max_epochs.items()}
        if any(v < 1 for v in self.max_epochs.values()):
            raise ConfigError("max_epochs values must be positive")
        if int(self.jobs) < 1:
            raise ConfigError("jobs must be positive")
        self.jobs = int(self.jobs)

    @property
    def kernel_spec(self) -> KernelSpec:
        return KernelSpec(self.kernel, self.epsilon)


def _int_list(value, name):
    if isinstance(value, (int, np.integer)):
        return [int(value)]
    if isinstance(value, str):
        value = [v for v in value.split(",") if v.strip()]
    try:
        return [int(v) for v in value]
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be an integer or a list of integers") from None


def load_config_file(path) -> dict:
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return raw


# -- report -------------------------------------------------------------------------

@dataclass(frozen=True)
class ReportRow:
    target: str
    n: int
    method: str
    seed: int
    kernel: str
    epsilon: float
    status: str
    mae: float | None = None
    mse: float | None = None
    ssim: float | None = None
    node_residual: float | None = None
    jitter: float | None = None
    epochs_done: int = 0
    max_epochs: int = 0
    error: str = ""

    @property
    def key(self):
        return (self.target, self.n, METHODS.index(self.method), self.seed)


REPORT_FIELDS = [f.name for f in fields(ReportRow)]
_INT_FIELDS = {"n", "seed", "epochs_done", "max_epochs"}
_FLOAT_FIELDS = {"epsilon", "mae", "mse", "ssim", "node_residual", "jitter"}


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def write_report(rows, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(REPORT_FIELDS)
        for r in sorted(rows, key=lambda r: r.key):
            w.writerow([_cell(getattr(r, k)) for k in REPORT_FIELDS])
    return path


def read_report(path) -> list[ReportRow]:
    out = []
    with Path(path).open(newline="") as fh:
        for rec in csv.DictReader(fh):
            vals = {}
            for k in REPORT_FIELDS:
                s = rec[k]
                if k in _INT_FIELDS:
                    vals[k] = int(s)
                elif k in _FLOAT_FIELDS:
                    vals[k] = float(s) if s != "" else None
                else:
                    vals[k] = s
            out.append(ReportRow(**vals))
    return out


def write_text_table(rows, seconds, path) -> Path:
    head = ["target", "n", "method", "seed", "MAE", "MSE", "SSIM", "epochs", "train s", "jitter", "status"]
    lines = []
    for r in sorted(rows, key=lambda r: r.key):
        fmt = lambda v, spec: "-" if v is None else format(v, spec)
        lines.append([r.target, str(r.n), r.method, str(r.seed), fmt(r.mae, ".3e"), fmt(r.mse, ".3e"),
                      fmt(r.ssim, ".4f"), f"{r.epochs_done}/{r.max_epochs}",
                      f"{seconds.get(r.key, 0.0):.1f}", fmt(r.jitter, ".0e"),
                      r.status if not r.error else f"{r.status}: {r.error}"])
    widths = [max(len(h), *(len(l[i]) for l in lines)) if lines else len(h) for i, h in enumerate(head)]
    text = ["  ".join(h.ljust(w) for h, w in zip(head, widths)),
            "  ".join("-" * w for w in widths)]
    text += ["  ".join(c.ljust(w) for c, w in zip(l, widths)) for l in lines]
    path = Path(path)
    path.write_text("\n".join(text) + "\n")
    return path


def write_grid_csv(path, points, values, name="value") -> Path:
    path = Path(path)
    arr = np.column_stack([points, values])
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x1", "x2", name] if np.ndim(name) == 0 else ["x1", "x2", *name])
        for row in arr:
            w.writerow([repr(float(v)) for v in row])
    return path


def _write_pgm(path, values, side, lo=None, hi=None):
    values = np.asarray(values, dtype=float)
    lo = float(values.min()) if lo is None else lo
    hi = float(values.max()) if hi is None else hi
    if hi <= lo:
        hi = lo + 1.0
    to_image(values, side, lo, hi).write_pgm(path)


# -- one benchmark row -----------------------------------------------------------------

@lru_cache(maxsize=8)
def _problem(target, csv_path, n, side):
    fn = datasets.resolve_target(target, csv_path)
    grid = datasets.eval_grid(side).points
    return fn, datasets.sample(fn, datasets.halton(n)), grid, fn(grid)


def run_row(cfg: ExperimentConfig, n: int, method: str, seed: int):
    """Fit and score one combination; returns (ReportRow, seconds). Never raises for runtime errors."""
    out = Path(cfg.output)
    kernel = cfg.kernel_spec
    base = dict(target=cfg.target, n=n, method=method, seed=seed, kernel=kernel.family.value,
                epsilon=kernel.epsilon)
    tag = f"{cfg.target}_n{n}_{method}_s{seed}"
    seconds = 0.0
    try:
        fn, data, grid, truth = _problem(cfg.target, cfg.csv, n, cfg.grid_side)
        epochs_done = max_epochs = 0
        scaling_grid = None
        if method == "fsk":
            interp = fit(data, kernel)
        else:
            tcfg = TrainConfig(method="joint" if method == "dnn-vsk" else "direct", kernel=kernel,
                               seed=seed, max_epochs=cfg.max_epochs.get(method))
            run_dir = out / "runs" / tag
            run_dir.mkdir(parents=True, exist_ok=True)
            result = (train_joint if method == "dnn-vsk" else train_direct)(data, tcfg)
            seconds = result.seconds
            epochs_done, max_epochs = result.epochs_done, result.max_epochs
            result.write_log(run_dir / "train_log.csv")
            save_checkpoint(run_dir / "checkpoint.npz", result.params, seed=seed, epoch=epochs_done,
                            meta=_checkpoint_meta(cfg.target, cfg.csv, n, kernel, method))
            build = build_joint_interpolant if method == "dnn-vsk" else build_vskf_interpolant
            interp = build(result.params, data, kernel)
            scaling_grid = NetworkScaling(result.params)(grid)
        pred = evaluate(interp, grid)
        scores = grid_scores(truth, pred, cfg.grid_side)
        if not all(np.isfinite(v) for v in scores.values()):
            raise FloatingPointError("non-finite score")
        write_grid_csv(out / f"grid_{tag}.csv", grid, pred)
        if scaling_grid is not None:
            write_grid_csv(out / f"scaling_{tag}.csv", grid, scaling_grid)
        if cfg.pgm:
            _write_pgm(out / f"{tag}.pgm", pred, cfg.grid_side, float(truth.min()), float(truth.max()))
            if scaling_grid is not None:
                _write_pgm(out / f"scaling_{tag}.pgm", scaling_grid, cfg.grid_side)
        row = ReportRow(**base, status="ok", mae=scores["mae"], mse=scores["mse"], ssim=scores["ssim"],
                        node_residual=node_residual(interp), jitter=interp.jitter_used,
                        epochs_done=epochs_done, max_epochs=max_epochs)
    except _RUNTIME_ERRORS as exc:
        log.error("row %s failed: %s", tag, exc)
        row = ReportRow(**base, status="failed", error=f"{type(exc).__name__}: {exc}".replace("\n", " "))
    return row, seconds


def _row_task(args):
    cfg, n, method, seed = args
    return run_row(cfg, n, method, seed)


def run_benchmark(cfg: ExperimentConfig):
    """Run every requested combination; returns (rows, seconds-by-key)."""
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    _, _, grid, truth = _problem(cfg.target, cfg.csv, cfg.n[0], cfg.grid_side)
    write_grid_csv(out / f"grid_{cfg.target}_truth.csv", grid, truth)
    if cfg.pgm:
        _write_pgm(out / f"{cfg.target}_truth.pgm", truth, cfg.grid_side)
    tasks = [(cfg, n, m, s) for n in cfg.n for m in cfg.methods for s in cfg.seeds]
    if cfg.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_row_task, tasks))
    else:
        results = [_row_task(t) for t in tasks]
    rows = sorted((r for r, _ in results), key=lambda r: r.key)
    seconds = {r.key: s for r, s in results}
    write_report(rows, out / "report.csv")
    write_text_table(rows, seconds, out / "report.txt")
    with (out / "timings.csv").open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["target", "n", "method", "seed", "train_seconds"])
        for r in rows:
            w.writerow([r.target, r.n, r.method, r.seed, f"{seconds[r.key]:.3f}"])
    return rows, seconds


# -- checkpoints carry enough to rebuild the interpolant --------------------------------

def _checkpoint_meta(target, csv_path, n, kernel: KernelSpec, method):
    return {"target": target, "csv": None if csv_path is None else str(csv_path), "n": int(n),
            "kernel": kernel.family.value, "epsilon": kernel.epsilon, "method": method}


def _interpolant_from_checkpoint(path):
    params, header, _ = load_checkpoint(path)
    meta = header.get("meta") or {}
    missing = {"target", "n", "kernel", "epsilon"} - set(meta)
    if missing:
        raise ConfigError(f"{path}: checkpoint lacks {', '.join(sorted(missing))}")
    kernel = KernelSpec(meta["kernel"], meta["epsilon"])
    fn = datasets.resolve_target(meta["target"], meta.get("csv"))
    data = datasets.sample(fn, datasets.halton(int(meta["n"])))
    return fit(data, kernel, NetworkScaling(params)), fn, meta


# -- argument parsing ------------------------------------------------------------------

def _add_problem_args(p, with_methods=False):
    p.add_argument("--config", help="JSON file with default settings")
    p.add_argument("--target", choices=TARGETS)
    p.add_argument("--csv", help="acetone CSV for target f4 (default: bundled stand-in)")
    p.add_argument("--n", help="node count, or comma-separated counts")
    p.add_argument("--kernel", choices=("gaussian", "matern_c2"))
    p.add_argument("--epsilon", type=float)
    p.add_argument("--grid-side", type=int, dest="grid_side")
    p.add_argument("--seed", action="append", dest="seeds",
                   help="seed; repeat or give a comma-separated list")
    p.add_argument("--out", dest="output", help="output directory")
    if with_methods:
        p.add_argument("--methods", help="comma-separated subset of fsk,dnn-vsk,vsk-f")
        p.add_argument("--max-epochs", type=int, dest="max_epochs_all",
                       help="epoch budget for every trained method")
        p.add_argument("--jobs", type=int)
        p.add_argument("--pgm", action="store_true", default=None, help="also write PGM images")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vskdnn", description=__doc__.split("\n")[0])
    ap.add_argument("-v", "--verbose", action="count", default=0)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bench", help="benchmark grid of methods, node counts and seeds")
    _add_problem_args(p, with_methods=True)

    p = sub.add_parser("fit", help="fit one interpolant and score it on the grid")
    _add_problem_args(p)
    p.add_argument("--scaling", default="fsk",
                   help="fsk, target, constant:<value> or checkpoint:<path>")

    p = sub.add_parser("train-scaling", help="train a scaling network and save a checkpoint")
    _add_problem_args(p)
    p.add_argument("--method", default="dnn-vsk", help="dnn-vsk (joint) or vsk-f (direct)")
    p.add_argument("--max-epochs", type=int)

    p = sub.add_parser("eval", help="evaluate the interpolant stored in a checkpoint")
    p.add_argument("checkpoint")
    p.add_argument("--points", help="CSV with x1,x2 columns (default: the evaluation grid)")
    p.add_argument("--grid-side", type=int, default=100, dest="grid_side")
    p.add_argument("--out", default="eval.csv")

    p = sub.add_parser("lebesgue", help="Lebesgue function and error-bound check on the grid")
    _add_problem_args(p)
    p.add_argument("--scaling", default="fsk",
                   help="fsk, target, constant:<value> or checkpoint:<path>")
    return ap


def config_from_args(args) -> ExperimentConfig:
    raw = load_config_file(args.config) if getattr(args, "config", None) else {}
    for key in ("target", "csv", "n", "kernel", "epsilon", "grid_side", "output", "methods", "jobs", "pgm"):
        v = getattr(args, key, None)
        if v is not None:
            raw[key] = v
    if getattr(args, "seeds", None):
        raw["seeds"] = [s for chunk in args.seeds for s in chunk.split(",") if s.strip()]
    budget = getattr(args, "max_epochs_all", None)
    if budget is not None:
        raw["max_epochs"] = {m: budget for m in METHODS[1:]}
    return ExperimentConfig.from_mapping(raw)


def _resolve_scaling(choice, cfg, fn):
    if choice == "fsk":
        return None, "fsk"
    if choice == "target":
        return CallableScaling(fn, "target"), "target"
    if choice.startswith("constant:"):
        return ConstantScaling(float(choice.split(":", 1)[1])), choice.replace(":", "")
    if choice.startswith("checkpoint:"):
        params, _, _ = load_checkpoint(choice.split(":", 1)[1])
        return NetworkScaling(params), "checkpoint"
    raise ConfigError(f"unknown scaling {choice!r}")


# -- subcommands -------------------------------------------------------------------------

def cmd_bench(args) -> int:
    cfg = config_from_args(args)
    rows, seconds = run_benchmark(cfg)
    print((Path(cfg.output) / "report.txt").read_text(), end="")
    return EXIT_OK if any(r.status == "ok" for r in rows) else EXIT_ALL_FAILED


def cmd_fit(args) -> int:
    cfg = config_from_args(args)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_ALL_FAILED
    for n in cfg.n:
        fn, data, grid, truth = _problem(cfg.target, cfg.csv, n, cfg.grid_side)
        scaling, label = _resolve_scaling(args.scaling, cfg, fn)
        try:
            interp = fit(data, cfg.kernel_spec, scaling)
        except _RUNTIME_ERRORS as exc:
            print(f"{cfg.target} n={n}: fit failed: {exc}", file=sys.stderr)
            continue
        pred = evaluate(interp, grid)
        tag = f"{cfg.target}_n{n}_{label}"
        write_grid_csv(out / f"grid_{tag}.csv", grid, pred)
        sc = grid_scores(truth, pred, cfg.grid_side)
        print(f"{tag}: mae={sc['mae']:.4e} mse={sc['mse']:.4e} ssim={sc['ssim']:.4f} "
              f"residual={node_residual(interp):.2e} jitter={interp.jitter_used:g}")
        status = EXIT_OK
    return status


def cmd_train_scaling(args) -> int:
    cfg = config_from_args(args)
    method = canonical_method(args.method)
    if method == "fsk":
        raise ConfigError("train-scaling needs a trained method (dnn-vsk or vsk-f)")
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_ALL_FAILED
    for n in cfg.n:
        fn, data, grid, truth = _problem(cfg.target, cfg.csv, n, cfg.grid_side)
        for seed in cfg.seeds:
            tag = f"{cfg.target}_n{n}_{method}_s{seed}"
            tcfg = TrainConfig(method="joint" if method == "dnn-vsk" else "direct",
                               kernel=cfg.kernel_spec, seed=seed, max_epochs=args.max_epochs)
            try:
                res = (train_joint if method == "dnn-vsk" else train_direct)(data, tcfg, log_every=100)
            except _RUNTIME_ERRORS as exc:
                print(f"{tag}: training failed: {exc}", file=sys.stderr)
                continue
            res.write_log(out / f"train_log_{tag}.csv")
            ck = save_checkpoint(out / f"checkpoint_{tag}.npz", res.params, seed=seed, epoch=res.epochs_done,
                                 meta=_checkpoint_meta(cfg.target, cfg.csv, n, cfg.kernel_spec, method))
            s = NetworkScaling(res.params)(grid)
            write_grid_csv(out / f"scaling_{tag}.csv", grid, s)
            rep = scaling_fit_report(s, truth)
            print(f"{tag}: {res.epochs_done}/{res.max_epochs} epochs in {res.seconds:.1f}s, "
                  f"final loss {res.history[-1].loss:.4e}; gamma={rep['gamma']:.3f} "
                  f"corr={rep['correlation']:.3f}; checkpoint {ck}")
            status = EXIT_OK
    return status


def _read_points(path):
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"x1", "x2"} <= set(reader.fieldnames):
            raise ConfigError(f"{path}: need x1,x2 columns")
        try:
            return np.array([[float(r["x1"]), float(r["x2"])] for r in reader])
        except ValueError as exc:
            raise ConfigError(f"{path}: {exc}") from None


def cmd_eval(args) -> int:
    interp, fn, meta = _interpolant_from_checkpoint(args.checkpoint)
    pts = _read_points(args.points) if args.points else datasets.eval_grid(args.grid_side).points
    pred = evaluate(interp, pts)
    write_grid_csv(args.out, pts, pred)
    line = f"{meta['target']} n={meta['n']} {meta.get('method', '?')}: {len(pts)} points -> {args.out}"
    if not args.points:
        sc = grid_scores(fn(pts), pred, args.grid_side)
        line += f"; mae={sc['mae']:.4e} mse={sc['mse']:.4e} ssim={sc['ssim']:.4f}"
    print(line)
    return EXIT_OK


def cmd_lebesgue(args) -> int:
    cfg = config_from_args(args)
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    for n in cfg.n:
        fn, data, grid, _ = _problem(cfg.target, cfg.csv, n, cfg.grid_side)
        scaling, label = _resolve_scaling(args.scaling, cfg, fn)
        interp = fit(data, cfg.kernel_spec, scaling)
        prof = lebesgue_profile(interp, grid)
        chk = bound_check(data, cfg.kernel_spec, scaling, fn, grid)
        tag = f"{cfg.target}_n{n}_{label}"
        write_grid_csv(out / f"lebesgue_{tag}.csv", grid, prof.lambda_values, name="lambda")
        write_grid_csv(out / f"bound_{tag}.csv", grid,
                       np.column_stack([chk.lhs, chk.rhs, chk.holds.astype(int)]),
                       name=["lhs", "rhs", "holds"])
        print(f"{tag}: Lebesgue constant (grid estimate) {prof.lambda_sup:.6g}; "
              f"bound violations {chk.violations}/{len(grid)}")
    return EXIT_OK


COMMANDS = {"bench": cmd_bench, "fit": cmd_fit, "train-scaling": cmd_train_scaling,
            "eval": cmd_eval, "lebesgue": cmd_lebesgue}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except datasets.IngestionError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
