"""Learning scaling functions: joint dNN-VSK training and direct VSK-f training."""
from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .deltann import (Adam, DeltaNN, EarlyStopping, NetworkParams, PlateauScheduler,
                      TrainingDivergedError, default_architecture, init_params,
                      network_backward, network_forward)
from .interp import Interpolant, ScalingFunction, ScatteredData, fit
from .kernels import Family, KernelSpec, augment, distance_matrix, gram, rbf_eval
from .numerics import spd_solve

log = logging.getLogger(__name__)

# named sub-streams of the run seed
STREAM_INIT, STREAM_SHUFFLE, STREAM_SPLIT = 1, 2, 3


def substream(seed: int, stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & 0xFFFFFFFFFFFFFFFF, stream])


class Method(str, Enum):
    JOINT = "joint"
    DIRECT = "direct"


@dataclass
class TrainConfig:
    method: Method = Method.JOINT
    kernel: KernelSpec | None = None
    max_epochs: int | None = None
    seed: int = 0
    lr: float = 1e-4
    plateau_patience: int = 75
    plateau_factor: float = 0.5
    min_lr: float = 1e-6
    early_stop_patience: int = 550
    batch_size: int = 32
    validation_fraction: float = 0.2
    warm_start: bool = False

    def __post_init__(self):
        self.method = Method(self.method)
        if self.max_epochs is None:
            self.max_epochs = 2000 if self.method is Method.JOINT else 1000
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be positive")


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    val_loss: float | None
    lr: float


@dataclass
class TrainResult:
    params: NetworkParams
    coefficients: np.ndarray | None
    history: list[EpochRecord]
    epochs_done: int
    max_epochs: int
    seconds: float
    stopped_early: bool = False
    best_epoch: int | None = None
    batch_sizes: set = field(default_factory=set)

    def write_log(self, path) -> Path:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["epoch", "loss", "val_loss", "lr"])
            for r in self.history:
                w.writerow([r.epoch, repr(r.loss), "" if r.val_loss is None else repr(r.val_loss), repr(r.lr)])
        return path


# -- joint model ----------------------------------------------------------------

@dataclass
class JointModel:
    network: NetworkParams
    coefficients: np.ndarray

    def __post_init__(self):
        self.coefficients = np.asarray(self.coefficients, dtype=float).reshape(-1)


def _kernel_ratio(kernel: KernelSpec, d, K):
    """(1/d) d/dd phi(eps d), written without the removable singularity at d = 0."""
    e2 = kernel.epsilon ** 2
    if kernel.family is Family.GAUSSIAN:
        return -2.0 * e2 * K
    return -e2 * np.exp(-kernel.epsilon * d)


def _joint_terms(network: NetworkParams, eta, X, f, kernel, want_grad=True):
    s, cache = network_forward(network, X)
    s = np.asarray(s).reshape(-1)
    if not np.all(np.isfinite(s)):
        raise TrainingDivergedError("network produced non-finite scaling values")
    pts = np.column_stack([X, s])
    d = distance_matrix(pts, pts)
    K = rbf_eval(kernel, d)
    n = f.shape[0]
    r = f - K @ eta
    loss = float(r @ r) / n
    if not want_grad:
        return loss, None, None
    g_eta = -(2.0 / n) * (K @ r)  # K is symmetric
    G = np.multiply.outer(r, eta) * (-2.0 / n)
    A = (G + G.T) * _kernel_ratio(kernel, d, K)
    g_s = s * A.sum(axis=1) - A @ s
    g_theta = network_backward(network, cache, g_s).flat
    return loss, g_theta, g_eta


def joint_loss(model: JointModel, data: ScatteredData, kernel: KernelSpec) -> float:
    """Mean squared interpolation residual (1/n) |f - K_fbar c|^2."""
    loss, _, _ = _joint_terms(model.network, model.coefficients, data.nodes.points,
                              np.asarray(data.values), kernel, want_grad=False)
    return loss


def joint_gradients(model: JointModel, data: ScatteredData, kernel: KernelSpec):
    """Return (loss, d loss / d theta, d loss / d eta)."""
    return _joint_terms(model.network, model.coefficients, data.nodes.points,
                        np.asarray(data.values), kernel)


def train_joint(data: ScatteredData, config: TrainConfig, arch=None, log_every: int = 0) -> TrainResult:
    """Full-batch Adam on (theta, eta) for the whole epoch budget."""
    if config.method is not Method.JOINT:
        raise ValueError("train_joint needs a joint-method config")
    kernel = config.kernel
    arch = arch or default_architecture(data.nodes.dim)
    X = data.nodes.points
    f = np.asarray(data.values)
    n = f.shape[0]
    net = init_params(arch, substream(config.seed, STREAM_INIT))
    p = net.size
    if config.warm_start:
        s0 = DeltaNN(net)(X)
        eta = spd_solve(gram(kernel, augment(data.nodes, s0), ), f).solution
    else:
        eta = np.zeros(n)
    vec = np.concatenate([net.flat, eta])
    opt = Adam(lr=config.lr)
    sched = PlateauScheduler(config.plateau_patience, config.plateau_factor, config.min_lr)
    history = []
    t0 = time.perf_counter()
    for epoch in range(config.max_epochs):
        net = NetworkParams(arch, vec[:p])
        loss, g_theta, g_eta = _joint_terms(net, vec[p:], X, f, kernel)
        if not np.isfinite(loss):
            raise TrainingDivergedError(f"loss became non-finite at epoch {epoch}")
        history.append(EpochRecord(epoch, loss, None, opt.lr))
        vec = opt.step(vec, np.concatenate([g_theta, g_eta]))
        sched.update(opt, loss)
        if log_every and epoch % log_every == 0:
            log.info("joint epoch %d loss %.8e lr %.1e", epoch, loss, opt.lr)
    seconds = time.perf_counter() - t0
    return TrainResult(params=NetworkParams(arch, vec[:p].copy()), coefficients=vec[p:].copy(),
                       history=history, epochs_done=config.max_epochs,
                       max_epochs=config.max_epochs, seconds=seconds, batch_sizes={n})


def refit_coefficients(network: NetworkParams, data: ScatteredData, kernel: KernelSpec) -> np.ndarray:
    """Exact coefficients c = K_fbar^{-1} f for a trained scaling network."""
    s = DeltaNN(network)(data.nodes.points)
    K = gram(kernel, augment(data.nodes, s), check=False)
    return spd_solve(K, np.asarray(data.values)).solution


# -- direct (VSK-f) training ------------------------------------------------------

def split_indices(n: int, fraction: float, seed: int):
    """Seeded permutation; the validation part has floor(fraction * n) points."""
    n_val = int(np.floor(fraction * n))
    perm = substream(seed, STREAM_SPLIT).permutation(n)
    return np.sort(perm[n_val:]), np.sort(perm[:n_val])


def _mse_and_grad(net, X, y):
    out, cache = network_forward(net, X)
    out = np.asarray(out).reshape(-1)
    r = out - y
    loss = float(r @ r) / y.shape[0]
    return loss, network_backward(net, cache, (2.0 / y.shape[0]) * r).flat


def _mse(net, X, y):
    out, _ = network_forward(net, X)
    r = np.asarray(out).reshape(-1) - y
    return float(r @ r) / y.shape[0]


def train_direct(data: ScatteredData, config: TrainConfig, arch=None, log_every: int = 0) -> TrainResult:
    """Minibatch Adam fit of the network to the data values, with early stopping."""
    if config.method is not Method.DIRECT:
        raise ValueError("train_direct needs a direct-method config")
    arch = arch or default_architecture(data.nodes.dim)
    X = data.nodes.points
    f = np.asarray(data.values)
    tr, va = split_indices(len(f), config.validation_fraction, config.seed)
    Xtr, ftr = X[tr], f[tr]
    Xva, fva = X[va], f[va]
    net = init_params(arch, substream(config.seed, STREAM_INIT))
    shuffle_rng = substream(config.seed, STREAM_SHUFFLE)
    opt = Adam(lr=config.lr)
    sched = PlateauScheduler(config.plateau_patience, config.plateau_factor, config.min_lr)
    stopper = EarlyStopping(config.early_stop_patience)
    history, batch_sizes = [], set()
    stopped = False
    vec = net.flat
    t0 = time.perf_counter()
    epoch = -1
    for epoch in range(config.max_epochs):
        order = shuffle_rng.permutation(len(tr))
        total = 0.0
        for s in range(0, len(order), config.batch_size):
            idx = order[s:s + config.batch_size]
            batch_sizes.add(len(idx))
            loss, g = _mse_and_grad(NetworkParams(arch, vec), Xtr[idx], ftr[idx])
            if not np.isfinite(loss):
                raise TrainingDivergedError(f"loss became non-finite at epoch {epoch}")
            total += loss * len(idx)
            vec = opt.step(vec, g)
        train_loss = total / len(order)
        net = NetworkParams(arch, vec)
        val_loss = _mse(net, Xva, fva) if len(va) else train_loss
        history.append(EpochRecord(epoch, train_loss, val_loss if len(va) else None, opt.lr))
        sched.update(opt, val_loss)
        if log_every and epoch % log_every == 0:
            log.info("direct epoch %d loss %.4e val %.4e lr %.1e", epoch, train_loss, val_loss, opt.lr)
        if stopper.update(epoch, val_loss, vec):
            stopped = True
            break
    seconds = time.perf_counter() - t0
    best = stopper.best_params if stopper.best_params is not None else vec
    return TrainResult(params=NetworkParams(arch, best.copy()), coefficients=None,
                       history=history, epochs_done=epoch + 1, max_epochs=config.max_epochs,
                       seconds=seconds, stopped_early=stopped, best_epoch=stopper.best_epoch,
                       batch_sizes=batch_sizes)


def build_vskf_interpolant(network: NetworkParams, data: ScatteredData, kernel: KernelSpec) -> Interpolant:
    return fit(data, kernel, NetworkScaling(network))


class NetworkScaling(ScalingFunction):
    """A trained network used as a VSK scaling function."""

    def __init__(self, params: NetworkParams):
        self.params = params
        self._net = DeltaNN(params)

    def __call__(self, points):
        return self._net(np.asarray(points, dtype=float).reshape(-1, self.params.arch[0].in_units))


def build_joint_interpolant(network: NetworkParams, data: ScatteredData, kernel: KernelSpec) -> Interpolant:
    """Interpolant from the trained scaling network with refitted coefficients."""
    return fit(data, kernel, NetworkScaling(network))


def scaling_fit_report(scaling_values, target_values) -> dict:
    """Least-squares scalar gamma with fbar ~ gamma * f, and the correlation (diagnostic only)."""
    s = np.asarray(scaling_values, dtype=float)
    t = np.asarray(target_values, dtype=float)
    denom = float(t @ t)
    gamma = float(s @ t) / denom if denom > 0 else 0.0
    corr = float(np.corrcoef(s, t)[0, 1]) if s.std() > 0 and t.std() > 0 else 0.0
    return {"gamma": gamma, "correlation": corr}
