"""Grid scores: MAE, MSE and SSIM on greyscale renderings."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

SSIM_WINDOW = 11
SSIM_SIGMA = 1.5
SSIM_K1 = 0.01
SSIM_K2 = 0.03


def _pair(truth, pred):
    a = np.asarray(truth, dtype=float).reshape(-1)
    b = np.asarray(pred, dtype=float).reshape(-1)
    if a.shape != b.shape:
        raise ValueError(f"length mismatch: {a.shape[0]} vs {b.shape[0]}")
    if a.size == 0:
        raise ValueError("empty input")
    return a, b


def mae(truth, pred) -> float:
    a, b = _pair(truth, pred)
    return float(np.mean(np.abs(a - b)))


def mse(truth, pred) -> float:
    a, b = _pair(truth, pred)
    return float(np.mean((a - b) ** 2))


@dataclass(frozen=True, eq=False)
class GreyImage:
    pixels: np.ndarray

    def __post_init__(self):
        px = np.array(self.pixels, dtype=float)
        if px.ndim != 2:
            raise ValueError("pixels must be a 2-D array")
        if px.size and (px.min() < 0 or px.max() > 1):
            raise ValueError("pixels must lie in [0, 1]")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    def write_pgm(self, path) -> Path:
        """Binary 8-bit PGM with pixel = round(255 * value)."""
        path = Path(path)
        data = np.rint(255 * self.pixels).astype(np.uint8)
        with path.open("wb") as fh:
            fh.write(f"P5\n{self.width} {self.height}\n255\n".encode("ascii"))
            fh.write(data.tobytes())
        return path


def to_image(values, side: int, lo: float, hi: float) -> GreyImage:
    """Row-major side x side image, linearly mapped from [lo, hi] to [0, 1] and clamped."""
    if not hi > lo:
        raise ValueError(f"need hi > lo, got lo={lo}, hi={hi}")
    v = np.asarray(values, dtype=float).reshape(-1)
    if v.size != side * side:
        raise ValueError(f"expected {side * side} values, got {v.size}")
    return GreyImage(np.clip((v - lo) / (hi - lo), 0.0, 1.0).reshape(side, side))


def _gaussian_window(size=SSIM_WINDOW, sigma=SSIM_SIGMA):
    t = np.arange(size, dtype=float) - (size - 1) / 2
    g = np.exp(-t * t / (2 * sigma * sigma))
    return g / g.sum()


def _filter(img, g):
    # separable 'valid' correlation
    rows = sliding_window_view(img, g.size, axis=1) @ g
    return sliding_window_view(rows, g.size, axis=0) @ g


def ssim(a: GreyImage, b: GreyImage, max_val: float = 1.0) -> float:
    """Mean SSIM over all fully-contained Gaussian windows (no padding)."""
    x, y = a.pixels, b.pixels
    if x.shape != y.shape:
        raise ValueError(f"image shapes differ: {x.shape} vs {y.shape}")
    if min(x.shape) < SSIM_WINDOW:
        raise ValueError(f"images must be at least {SSIM_WINDOW}x{SSIM_WINDOW}")
    g = _gaussian_window()
    c1 = (SSIM_K1 * max_val) ** 2
    c2 = (SSIM_K2 * max_val) ** 2
    mx, my = _filter(x, g), _filter(y, g)
    sxx = _filter(x * x, g) - mx * mx
    syy = _filter(y * y, g) - my * my
    sxy = _filter(x * y, g) - mx * my
    lum = (2 * mx * my + c1) / (mx * mx + my * my + c1)
    cs = (2 * sxy + c2) / (sxx + syy + c2)
    return float(np.mean(lum * cs))


def grid_scores(truth, pred, side: int) -> dict:
    """MAE, MSE and SSIM, with both images normalized by the truth range."""
    truth = np.asarray(truth, dtype=float)
    lo, hi = float(truth.min()), float(truth.max())
    if hi == lo:
        hi = lo + 1.0
    return {
        "mae": mae(truth, pred),
        "mse": mse(truth, pred),
        "ssim": ssim(to_image(truth, side, lo, hi), to_image(pred, side, lo, hi)),
    }
