"""Discontinuous neural networks (dNN) in plain numpy.

A discontinuous layer computes ``act(z) + alpha * H(z)`` with ``z = x @ W + b``
and ``H(z) = 1`` for ``z >= 0``.  Gradients treat ``H`` as piecewise constant:
nothing flows through its argument, while ``d out / d alpha = H(z)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

CHECKPOINT_VERSION = 1


class TrainingDivergedError(FloatingPointError):
    pass


class Kind(str, Enum):
    DENSE = "dense"
    DISCONTINUOUS = "discontinuous"
    RESIDUAL = "residual"


class Activation(str, Enum):
    ELU = "elu"
    LINEAR = "linear"


def elu(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, x, np.expm1(np.minimum(x, 0.0)))
    return out if out.ndim else float(out)


def elu_grad(x):
    return np.where(x >= 0, 1.0, np.exp(np.minimum(x, 0.0)))


def heaviside(x):
    out = (np.asarray(x) >= 0).astype(float)
    return out if out.ndim else float(out)


def _act(name, z):
    return elu(z) if name is Activation.ELU else z


def _act_grad(name, z):
    return elu_grad(z) if name is Activation.ELU else np.ones_like(z)


def delta_layer_forward(W, b, alpha, activation, x):
    """One discontinuous layer on a vector or batch: ``act(z) + alpha * H(z)``."""
    W, b, alpha = (np.asarray(a, dtype=float) for a in (W, b, alpha))
    x = np.asarray(x, dtype=float)
    if W.ndim != 2 or b.shape != (W.shape[1],) or alpha.shape != b.shape or x.shape[-1] != W.shape[0]:
        raise ValueError("inconsistent shapes for a discontinuous layer")
    z = x @ W + b
    return _act(Activation(activation), z) + alpha * heaviside(z)


@dataclass(frozen=True)
class LayerSpec:
    kind: Kind
    in_units: int
    out_units: int
    activation: Activation = Activation.ELU

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "activation", Activation(self.activation))
        if self.in_units < 1 or self.out_units < 1:
            raise ValueError("layer widths must be positive")
        if self.kind is Kind.RESIDUAL and self.in_units != self.out_units:
            raise ValueError("residual blocks need matching widths")

    def shapes(self):
        """Named parameter shapes in storage order."""
        i, o = self.in_units, self.out_units
        if self.kind is Kind.RESIDUAL:
            return [("W1", (i, o)), ("b1", (o,)), ("W2", (o, o)), ("b2", (o,))]
        out = [("W", (i, o)), ("b", (o,))]
        if self.kind is Kind.DISCONTINUOUS:
            out.append(("alpha", (o,)))
        return out

    def size(self) -> int:
        return sum(int(np.prod(s)) for _, s in self.shapes())

    def to_dict(self):
        return {"kind": self.kind.value, "in_units": self.in_units,
                "out_units": self.out_units, "activation": self.activation.value}


def default_architecture(in_dim: int = 2, width: int = 128, jump_units: int = 16,
                         n_blocks: int = 3) -> tuple[LayerSpec, ...]:
    """The residual dNN used for all experiments."""
    E, L = Activation.ELU, Activation.LINEAR
    layers = [LayerSpec(Kind.DENSE, in_dim, width, E),
              LayerSpec(Kind.DENSE, width, width, E),
              LayerSpec(Kind.RESIDUAL, width, width, E)]
    prev = width
    for _ in range(n_blocks):
        layers += [LayerSpec(Kind.DENSE, prev, width, E),
                   LayerSpec(Kind.RESIDUAL, width, width, E),
                   LayerSpec(Kind.DISCONTINUOUS, width, jump_units, E)]
        prev = jump_units
    layers += [LayerSpec(Kind.DENSE, prev, width, E),
               LayerSpec(Kind.DENSE, width, 1, L)]
    return tuple(layers)


def parameter_count(arch) -> int:
    return sum(layer.size() for layer in arch)


class NetworkParams:
    """Flat parameter vector with structured per-layer views."""

    def __init__(self, arch, flat=None):
        self.arch = tuple(arch)
        p = parameter_count(self.arch)
        if flat is None:
            flat = np.zeros(p)
        flat = np.asarray(flat, dtype=float)
        if flat.shape != (p,):
            raise ValueError(f"architecture needs {p} parameters, got shape {flat.shape}")
        self.flat = flat
        self.layers = self._views()

    def _views(self):
        views, pos = [], 0
        for layer in self.arch:
            d = {}
            for name, shape in layer.shapes():
                size = int(np.prod(shape))
                d[name] = self.flat[pos:pos + size].reshape(shape)
                pos += size
            views.append(d)
        return views

    @property
    def size(self) -> int:
        return self.flat.size

    def copy(self) -> NetworkParams:
        return NetworkParams(self.arch, self.flat.copy())

    def with_flat(self, flat) -> NetworkParams:
        return NetworkParams(self.arch, flat)

    @classmethod
    def from_layers(cls, arch, layers) -> NetworkParams:
        """Build from a list of per-layer dicts of arrays (the structured view)."""
        arch = tuple(arch)
        chunks = []
        for spec, d in zip(arch, layers, strict=True):
            for name, shape in spec.shapes():
                a = np.asarray(d[name], dtype=float)
                if a.shape != shape:
                    raise ValueError(f"{name}: expected {shape}, got {a.shape}")
                chunks.append(a.ravel())
        return cls(arch, np.concatenate(chunks) if chunks else np.zeros(0))


def init_params(arch, rng: np.random.Generator) -> NetworkParams:
    """Glorot-uniform weights, zero biases, zero jumps."""
    params = NetworkParams(arch)
    for spec, d in zip(params.arch, params.layers):
        for name, shape in spec.shapes():
            if name.startswith("W"):
                lim = np.sqrt(6.0 / (shape[0] + shape[1]))
                d[name][...] = rng.uniform(-lim, lim, size=shape)
    return params


@dataclass(eq=False)
class ForwardCache:
    params: NetworkParams
    flat: np.ndarray
    entries: list = field(default_factory=list)


def _as_batch(x):
    x = np.asarray(x, dtype=float)
    return (x[None, :], True) if x.ndim == 1 else (x, False)


def network_forward(params: NetworkParams, x):
    """Evaluate the network on a point or an (N, d) batch; returns (output, cache)."""
    h, single = _as_batch(x)
    if h.shape[1] != params.arch[0].in_units:
        raise ValueError(f"input has {h.shape[1]} features, network expects {params.arch[0].in_units}")
    cache = ForwardCache(params=params, flat=params.flat)
    for spec, p in zip(params.arch, params.layers):
        if spec.kind is Kind.RESIDUAL:
            z1 = h @ p["W1"] + p["b1"]
            a1 = elu(z1)
            z2 = a1 @ p["W2"] + p["b2"]
            s = a1 + z2
            cache.entries.append((h, z1, a1, s))
            h = _act(spec.activation, s)
        else:
            z = h @ p["W"] + p["b"]
            cache.entries.append((h, z))
            out = _act(spec.activation, z)
            if spec.kind is Kind.DISCONTINUOUS:
                out = out + p["alpha"] * (z >= 0)
            h = out
    out = h[:, 0] if h.shape[1] == 1 else h
    return (out[0] if single else out), cache


def network_backward(params: NetworkParams, cache: ForwardCache, upstream) -> NetworkParams:
    """Reverse-mode gradient of sum(upstream * output) w.r.t. every parameter."""
    if cache.params is not params or cache.flat is not params.flat:
        raise ValueError("forward cache does not belong to these parameters")
    n_batch = cache.entries[0][0].shape[0]
    g = np.asarray(upstream, dtype=float).reshape(n_batch, -1)
    grad = NetworkParams(params.arch)
    for spec, p, gp, entry in zip(reversed(params.arch), reversed(params.layers),
                                  reversed(grad.layers), reversed(cache.entries)):
        if spec.kind is Kind.RESIDUAL:
            h, z1, a1, s = entry
            gs = g * _act_grad(spec.activation, s)
            gp["W2"][...] = a1.T @ gs
            gp["b2"][...] = gs.sum(axis=0)
            ga1 = gs + gs @ p["W2"].T
            gz1 = ga1 * elu_grad(z1)
            gp["W1"][...] = h.T @ gz1
            gp["b1"][...] = gz1.sum(axis=0)
            g = gz1 @ p["W1"].T
        else:
            h, z = entry
            if spec.kind is Kind.DISCONTINUOUS:
                gp["alpha"][...] = (g * (z >= 0)).sum(axis=0)
            gz = g * _act_grad(spec.activation, z)
            gp["W"][...] = h.T @ gz
            gp["b"][...] = gz.sum(axis=0)
            g = gz @ p["W"].T
    return grad


class DeltaNN:
    """Callable wrapper: the network as a scalar function on (N, d) arrays."""

    def __init__(self, params: NetworkParams):
        self.params = params

    def __call__(self, X):
        out, _ = network_forward(self.params, np.asarray(X, dtype=float).reshape(-1, self.params.arch[0].in_units))
        return np.asarray(out, dtype=float).reshape(-1)


# -- optimization ---------------------------------------------------------------

@dataclass
class Adam:
    lr: float = 1e-4
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: np.ndarray | None = None
    v: np.ndarray | None = None

    def step(self, theta, grad):
        """Return the updated parameter vector; ``theta`` itself is not modified."""
        grad = np.asarray(grad, dtype=float)
        if not np.all(np.isfinite(grad)):
            raise TrainingDivergedError("non-finite gradient")
        if self.m is None:
            self.m = np.zeros_like(grad)
            self.v = np.zeros_like(grad)
        if self.m.shape != grad.shape or np.shape(theta) != grad.shape:
            raise ValueError("parameter and gradient shapes differ")
        self.t += 1
        self.m = self.beta1 * self.m + (1 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1 - self.beta2) * grad * grad
        m_hat = self.m / (1 - self.beta1 ** self.t)
        v_hat = self.v / (1 - self.beta2 ** self.t)
        return theta - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


@dataclass
class PlateauScheduler:
    """Multiply the learning rate by ``factor`` after ``patience`` epochs without improvement."""

    patience: int = 75
    factor: float = 0.5
    min_lr: float = 1e-6
    min_delta: float = 1e-12
    best: float = np.inf
    wait: int = 0

    def update(self, opt: Adam, loss: float) -> bool:
        """Record an epoch loss; returns True when the learning rate was reduced."""
        if loss < self.best - self.min_delta:
            self.best = loss
            self.wait = 0
            return False
        self.wait += 1
        if self.wait >= self.patience:
            self.wait = 0
            new_lr = max(opt.lr * self.factor, self.min_lr)
            reduced = new_lr < opt.lr
            opt.lr = new_lr
            return reduced
        return False


@dataclass
class EarlyStopping:
    patience: int = 550
    min_delta: float = 0.0
    best: float = np.inf
    wait: int = 0
    best_epoch: int = -1
    best_params: np.ndarray | None = None

    def update(self, epoch: int, val_loss: float, flat) -> bool:
        """Record a validation loss; returns True when training should stop."""
        if val_loss < self.best - self.min_delta:
            self.best = val_loss
            self.best_epoch = epoch
            self.best_params = np.array(flat, copy=True)
            self.wait = 0
            return False
        self.wait += 1
        return self.wait >= self.patience


# -- checkpoints ----------------------------------------------------------------

def save_checkpoint(path, params: NetworkParams, seed: int = 0, epoch: int = 0, extra=None,
                    meta=None) -> Path:
    """Write an ``.npz`` with a JSON header (architecture, seed, epoch) and the flat vector.

    ``meta`` is a JSON-serialisable dict stored under the header's "meta" key;
    ``extra`` maps names to additional arrays.
    """
    path = Path(path)
    header = {"format": "vskdnn-checkpoint", "version": CHECKPOINT_VERSION,
              "architecture": [l.to_dict() for l in params.arch],
              "seed": int(seed), "epoch": int(epoch), "meta": dict(meta or {})}
    arrays = {"header": np.array(json.dumps(header, sort_keys=True)), "theta": params.flat}
    for k, v in (extra or {}).items():
        arrays[k] = np.asarray(v)
    with path.open("wb") as fh:
        np.savez(fh, **arrays)
    return path


def load_checkpoint(path):
    """Return (params, header, extra_arrays)."""
    with np.load(Path(path), allow_pickle=False) as z:
        header = json.loads(str(z["header"]))
        if header.get("format") != "vskdnn-checkpoint":
            raise ValueError(f"{path}: not a checkpoint file")
        if header["version"] > CHECKPOINT_VERSION:
            raise ValueError(f"{path}: checkpoint version {header['version']} is newer than supported")
        arch = tuple(LayerSpec(**d) for d in header["architecture"])
        params = NetworkParams(arch, z["theta"].copy())
        extra = {k: z[k].copy() for k in z.files if k not in ("header", "theta")}
    return params, header, extra
