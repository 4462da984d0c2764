import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from vskdnn.deltann import (Adam, EarlyStopping, Kind, LayerSpec, NetworkParams, PlateauScheduler,
                            TrainingDivergedError, default_architecture, delta_layer_forward, elu,
                            heaviside, init_params, load_checkpoint, network_backward,
                            network_forward, parameter_count, save_checkpoint)

ARCH = default_architecture()


def test_elu_values():
    assert elu(0.0) == 0.0
    assert elu(1.0) == 1.0
    assert elu(-1.0) == pytest.approx(math.exp(-1) - 1, abs=1e-15)


def test_heaviside_values():
    assert heaviside(0.0) == 1.0
    assert heaviside(-0.5) == 0.0
    assert heaviside(2.0) == 1.0


def test_delta_layer_examples():
    W, b, a = [[1.0]], [0.0], [2.0]
    assert delta_layer_forward(W, b, a, "linear", [-1.0])[0] == -1.0
    assert delta_layer_forward(W, b, a, "linear", [1.0])[0] == 3.0
    assert delta_layer_forward(W, b, a, "linear", [0.0])[0] == 2.0


def test_delta_layer_zero_jump_is_dense(rng):
    W, b, x = rng.normal(size=(5, 4)), rng.normal(size=4), rng.normal(size=(20, 5))
    out = delta_layer_forward(W, b, np.zeros(4), "elu", x)
    assert np.array_equal(out, elu(x @ W + b))


def test_delta_layer_shape_errors():
    with pytest.raises(ValueError):
        delta_layer_forward(np.ones((2, 3)), np.ones(2), np.ones(3), "elu", np.ones(2))
    with pytest.raises(ValueError):
        delta_layer_forward(np.ones((2, 3)), np.ones(3), np.ones(3), "elu", np.ones(4))


def test_jump_realization():
    for alpha in (-3.0, 0.25, 7.5):
        up = delta_layer_forward([[1.0]], [0.0], [alpha], "linear", [1e-9])[0]
        dn = delta_layer_forward([[1.0]], [0.0], [alpha], "linear", [-1e-9])[0]
        assert abs((up - dn) - alpha) <= 1e-8


def _closed_form_count(width=128, jumps=16, blocks=3, d=2):
    dense = lambda i, o: i * o + o
    res = 2 * dense(width, width)
    total = dense(d, width) + dense(width, width) + res
    prev = width
    for _ in range(blocks):
        total += dense(prev, width) + res + dense(width, jumps) + jumps
        prev = jumps
    return total + dense(prev, width) + dense(width, 1)


def test_parameter_count():
    assert parameter_count(ARCH) == _closed_form_count()
    assert NetworkParams(ARCH).size == _closed_form_count()


def test_zero_params_zero_output(rng):
    out, _ = network_forward(NetworkParams(ARCH), rng.random((10, 2)))
    assert np.all(out == 0)


def test_layer_order():
    kinds = [l.kind for l in ARCH]
    assert kinds[:3] == [Kind.DENSE, Kind.DENSE, Kind.RESIDUAL]
    assert kinds[3:12] == [Kind.DENSE, Kind.RESIDUAL, Kind.DISCONTINUOUS] * 3
    assert kinds[12:] == [Kind.DENSE, Kind.DENSE]
    assert ARCH[-1].out_units == 1 and ARCH[-1].activation.value == "linear"


def test_continuity_without_jumps(rng):
    params = init_params(ARCH, rng)
    X = rng.random((100, 2))
    h = rng.normal(size=(100, 2))
    h *= 1e-6 / np.linalg.norm(h, axis=1, keepdims=True)
    a, _ = network_forward(params, X)
    b, _ = network_forward(params, X + h)
    assert np.max(np.abs(a - b)) < 1e-3


def test_flat_roundtrip(rng):
    params = init_params(ARCH, rng)
    params.flat[:] += rng.normal(size=params.size)
    again = NetworkParams.from_layers(ARCH, [{k: v.copy() for k, v in d.items()} for d in params.layers])
    assert again.flat.tobytes() == params.flat.tobytes()


def test_single_point_and_batch_agree(rng):
    params = _random_params(rng)
    X = rng.random((4, 2))
    batch, _ = network_forward(params, X)
    for i in range(4):
        assert network_forward(params, X[i])[0] == pytest.approx(batch[i], rel=1e-14, abs=1e-14)


def test_bad_input_width(rng):
    with pytest.raises(ValueError):
        network_forward(NetworkParams(ARCH), rng.random((3, 3)))


def test_stale_cache(rng):
    params = _random_params(rng)
    _, cache = network_forward(params, rng.random((3, 2)))
    with pytest.raises(ValueError):
        network_backward(params.copy(), cache, np.ones(3))


def test_zero_upstream(rng):
    params = _random_params(rng)
    _, cache = network_forward(params, rng.random((5, 2)))
    assert np.all(network_backward(params, cache, np.zeros(5)).flat == 0)


def test_single_discontinuous_layer_alpha_grad():
    arch = (LayerSpec("discontinuous", 1, 2, "linear"),)
    params = NetworkParams.from_layers(arch, [{"W": [[1.0, -1.0]], "b": [0.0, 0.0], "alpha": [0.5, 0.5]}])
    _, cache = network_forward(params, [[0.3]])
    up = np.array([[1.7, -2.2]])
    g = network_backward(params, cache, up)
    # z = (0.3, -0.3): first unit jumps, second does not
    np.testing.assert_array_equal(g.layers[0]["alpha"], [1.7, 0.0])


def _random_params(rng, arch=ARCH):
    params = init_params(arch, rng)
    for spec, d in zip(params.arch, params.layers):
        for name in d:
            if name.startswith("b"):
                d[name][...] = rng.normal(scale=0.1, size=d[name].shape)
            if name == "alpha":
                d[name][...] = rng.normal(scale=0.5, size=d[name].shape)
    return params


def _safe_points(params, rng, count, margin=1e-3, kink_margin=1e-4):
    """Random inputs whose jump pre-activations stay ``margin`` away from 0.

    Continuous elu units only need to clear the finite-difference step, so they
    use the looser ``kink_margin``.
    """
    X = rng.random((100 * count, 2))
    _, cache = network_forward(params, X)
    ok = np.ones(len(X), bool)
    for spec, entry in zip(params.arch, cache.entries):
        pre = entry[1:2] + entry[3:4] if spec.kind is Kind.RESIDUAL else entry[1:2]
        m = margin if spec.kind is Kind.DISCONTINUOUS else kink_margin
        for z in pre:
            ok &= np.all(np.abs(z) > m, axis=1)
    assert ok.sum() >= count
    return X[ok][:count]


def _objective(params, flat, X, up):
    out, _ = network_forward(params.with_flat(flat), X)
    return float(np.asarray(out) @ up)


def gradient_check(seed, per_tensor=6, h=1e-5):
    rng = np.random.default_rng(seed)
    params = _random_params(rng)
    X = _safe_points(params, rng, 4)
    up = rng.normal(size=len(X))
    _, cache = network_forward(params, X)
    grad = network_backward(params, cache, up).flat
    base = params.flat
    worst_wb, worst_alpha, offset = 0.0, 0.0, 0
    for spec in params.arch:
        for name, shape in spec.shapes():
            size = int(np.prod(shape))
            picks = rng.choice(size, size=min(per_tensor, size), replace=False) + offset
            for k in picks:
                def at(step):
                    v = base.copy()
                    v[k] += step
                    return _objective(params, v, X, up)
                if name == "alpha":
                    # Richardson-extrapolated central differences; a wider step
                    # keeps roundoff well under the 1e-10 target
                    ha = 1e-4
                    d1 = (at(ha) - at(-ha)) / (2 * ha)
                    d2 = (at(ha / 2) - at(-ha / 2)) / ha
                    fd = (4 * d2 - d1) / 3
                    worst_alpha = max(worst_alpha, abs(fd - grad[k]))
                else:
                    fd = (at(h) - at(-h)) / (2 * h)
                    rel = abs(fd - grad[k]) / max(abs(fd), abs(grad[k]), 1e-6)
                    worst_wb = max(worst_wb, rel)
            offset += size
    return worst_wb, worst_alpha


@pytest.mark.parametrize("seed", range(10))
def test_gradient_finite_differences(seed):
    wb, alpha = gradient_check(seed)
    assert wb < 1e-4
    assert alpha < 1e-10


def test_adam_zero_gradient():
    opt = Adam(lr=0.1)
    theta = np.array([1.0, -2.0])
    new = opt.step(theta, np.zeros(2))
    assert np.array_equal(new, theta) and opt.t == 1


def test_adam_first_step():
    opt = Adam(lr=1e-3)
    new = opt.step(np.array([0.0]), np.array([5.0]))
    assert new[0] == pytest.approx(-1e-3 * 5.0 / (5.0 + 1e-8), rel=1e-12)


def adam_scalar_oracle(theta, lr, steps):
    m = v = 0.0
    for t in range(1, steps + 1):
        g = 2.0 * theta
        m = 0.9 * m + 0.1 * g
        v = 0.999 * v + 0.001 * g * g
        mh = m / (1.0 - 0.9 ** t)
        vh = v / (1.0 - 0.999 ** t)
        theta = theta - lr * mh / (math.sqrt(vh) + 1e-8)
    return theta


def test_adam_three_steps_oracle():
    opt = Adam(lr=0.1)
    theta = np.array([1.0])
    for _ in range(3):
        theta = opt.step(theta, 2.0 * theta)
    assert abs(theta[0] - adam_scalar_oracle(1.0, 0.1, 3)) <= 1e-12
    assert opt.t == 3


def test_adam_rejects_nan():
    with pytest.raises(TrainingDivergedError):
        Adam().step(np.zeros(2), np.array([1.0, np.nan]))


def test_plateau_decreasing_keeps_lr():
    opt, s = Adam(lr=1e-4), PlateauScheduler()
    for i in range(500):
        s.update(opt, 1.0 / (i + 1))
    assert opt.lr == 1e-4


def test_plateau_halves_at_patience():
    opt, s = Adam(lr=1e-4), PlateauScheduler()
    s.update(opt, 1.0)
    for _ in range(74):
        s.update(opt, 1.0)
    assert opt.lr == 1e-4
    assert s.update(opt, 1.0)
    assert opt.lr == 5e-5


def test_plateau_floor():
    opt, s = Adam(lr=1e-4), PlateauScheduler()
    for _ in range(75 * 20):
        s.update(opt, 1.0)
    assert opt.lr == 1e-6


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0, 10), min_size=1, max_size=400))
def test_lr_never_increases(losses):
    opt, s = Adam(lr=1e-4), PlateauScheduler()
    prev = opt.lr
    for loss in losses:
        s.update(opt, loss)
        assert 1e-6 <= opt.lr <= prev
        prev = opt.lr


def test_early_stopping_constant():
    es = EarlyStopping()
    stops = [es.update(e, 1.0, np.array([float(e)])) for e in range(551)]
    assert stops[:550] == [False] * 550 and stops[550]
    assert es.best_epoch == 0 and es.best_params[0] == 0.0


def test_early_stopping_reset():
    es = EarlyStopping()
    for e in range(550):
        assert not es.update(e, 1.0 if e < 549 else 0.5, np.array([float(e)]))
    assert es.wait == 0 and es.best_epoch == 549


def test_early_stopping_monotone():
    es = EarlyStopping(patience=5)
    assert not any(es.update(e, 1.0 / (e + 1), np.zeros(1)) for e in range(100))


def test_determinism_of_init():
    a = init_params(ARCH, np.random.default_rng(7))
    b = init_params(ARCH, np.random.default_rng(7))
    assert a.flat.tobytes() == b.flat.tobytes()
    for spec, d in zip(a.arch, a.layers):
        if spec.kind is Kind.DISCONTINUOUS:
            assert np.all(d["alpha"] == 0)
        for name, arr in d.items():
            if name.startswith("W"):
                lim = math.sqrt(6 / sum(arr.shape))
                assert np.all(np.abs(arr) <= lim)


def test_checkpoint_roundtrip(tmp_path, rng):
    params = _random_params(rng)
    path = save_checkpoint(tmp_path / "net.npz", params, seed=11, epoch=42, extra={"eta": np.arange(3.0)})
    back, header, extra = load_checkpoint(path)
    assert back.flat.tobytes() == params.flat.tobytes()
    assert back.arch == params.arch
    assert header["seed"] == 11 and header["epoch"] == 42
    np.testing.assert_array_equal(extra["eta"], np.arange(3.0))
