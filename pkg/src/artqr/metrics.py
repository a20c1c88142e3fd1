"""Evaluation harness: structural similarity, error-module counts, and
seeded simulated-distortion decode-rate trials."""

from dataclasses import dataclass

import numpy as np
from PIL import Image
from scipy.ndimage import correlate

from .decoder import binarize_field, decode_check, sample, to_gray
from .errors import DimensionMismatch
from .geometry import ModuleGrid
from .qr import QrMatrix

_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_L = 255.0
_SSIM_SIDE = 11
_SSIM_SIGMA = 1.5


def _ssim_window():
    h = _SSIM_SIDE // 2
    ii, jj = np.meshgrid(np.arange(-h, h + 1), np.arange(-h, h + 1), indexing="ij")
    w = np.exp(-(ii ** 2 + jj ** 2) / (2.0 * _SSIM_SIGMA ** 2))
    return w / w.sum()


def ssim(a: np.ndarray, b: np.ndarray) -> float:
    """Mean structural similarity over 11x11 Gaussian windows (sigma 1.5),
    K1=0.01, K2=0.03, dynamic range 255, valid-window interior only."""
    if a.shape != b.shape:
        raise DimensionMismatch("ssim inputs differ in shape: %s vs %s" % (a.shape, b.shape))
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    w = _ssim_window()
    c1 = (_SSIM_K1 * _SSIM_L) ** 2
    c2 = (_SSIM_K2 * _SSIM_L) ** 2

    mu_x = correlate(x, w, mode="constant")
    mu_y = correlate(y, w, mode="constant")
    xx = correlate(x * x, w, mode="constant")
    yy = correlate(y * y, w, mode="constant")
    xy = correlate(x * y, w, mode="constant")
    var_x = xx - mu_x ** 2
    var_y = yy - mu_y ** 2
    cov = xy - mu_x * mu_y

    num = (2 * mu_x * mu_y + c1) * (2 * cov + c2)
    den = (mu_x ** 2 + mu_y ** 2 + c1) * (var_x + var_y + c2)
    smap = num / den
    h = _SSIM_SIDE // 2
    interior = smap[h:-h, h:-h]
    return float(interior.mean())


def error_module_count(image: np.ndarray, scheduled: QrMatrix, grid: ModuleGrid) -> int:
    """Data modules whose sampled center bit disagrees with the scheduled bit."""
    gray = to_gray(image)
    field = binarize_field(gray)
    sampled = sample(gray, field, grid)
    data = scheduled.data_modules()
    return int(np.sum(sampled.bits[data] != scheduled.white_flags()[data]))


@dataclass
class DistortionSpec:
    """Deterministic distortion magnitudes; sensor noise is the per-trial
    random part. Applied in the order: brightness, gamma, resize round trip,
    tilt shear, noise."""
    brightness_shift: float = 0.0
    gamma: float = 1.0
    scale_factor: float = 1.0
    tilt_degrees: float = 0.0
    noise_sigma: float = 2.0


def apply_distortion(image: np.ndarray, spec: DistortionSpec,
                     rng: np.random.Generator) -> np.ndarray:
    out = image.astype(np.float64)
    if spec.brightness_shift:
        out = out + spec.brightness_shift
    if spec.gamma != 1.0:
        out = np.clip(out, 0, 255)
        out = (out / 255.0) ** spec.gamma * 255.0
    out = np.clip(out, 0, 255)
    if spec.scale_factor != 1.0:
        h, w = out.shape[:2]
        small = (max(1, round(w * spec.scale_factor)), max(1, round(h * spec.scale_factor)))
        im = Image.fromarray(out.astype(np.uint8))
        out = np.asarray(im.resize(small, Image.BILINEAR).resize((w, h), Image.BILINEAR)).astype(np.float64)
    if spec.tilt_degrees:
        h, w = out.shape[:2]
        shear = float(np.tan(np.deg2rad(spec.tilt_degrees)))
        # x' = x + shear * (y - cy), centered so displacement is symmetric
        cy = h / 2.0
        im = Image.fromarray(out.astype(np.uint8))
        out = np.asarray(im.transform((w, h), Image.AFFINE,
                                      (1.0, shear, -shear * cy, 0.0, 1.0, 0.0),
                                      resample=Image.BILINEAR, fillcolor=(255, 255, 255))).astype(np.float64)
    if spec.noise_sigma:
        out = out + rng.normal(0.0, spec.noise_sigma, size=out.shape)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def decode_rate_trial(image: np.ndarray, grid: ModuleGrid, spec: DistortionSpec,
                      trials: int, seed: int, expected_payload: bytes | None = None):
    """Fraction of seeded distortion trials that still decode (to the expected
    payload when given). Returns (fraction, per-trial outcome list)."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    outcomes = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        distorted = apply_distortion(image, spec, rng)
        result = decode_check(distorted, grid)
        ok = bool(result.ok)
        if ok and expected_payload is not None:
            ok = result.payload == expected_payload
        outcomes.append(ok)
    return sum(outcomes) / trials, outcomes
