"""Pluggable stylization boundary: deterministic built-in transforms plus an
external subprocess protocol (input PNG path, output PNG path, exit 0)."""

import subprocess
import tempfile
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from .errors import StylizerFailure


def _identity(image, _):
    return image.copy()


def _posterize(image, arg):
    levels = int(arg) if arg else 4
    if levels < 2:
        raise StylizerFailure("posterize needs at least 2 levels")
    q = np.rint(image.astype(np.float64) / 255.0 * (levels - 1))
    return np.rint(q / (levels - 1) * 255.0).astype(np.uint8)


def _soften(image, arg):
    sigma = float(arg) if arg else 2.0
    out = np.empty_like(image, dtype=np.float64)
    for ch in range(image.shape[2]):
        out[..., ch] = gaussian_filter(image[..., ch].astype(np.float64), sigma, mode="nearest")
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def _rgb_to_hsv(rgb):
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    maxc = np.max(rgb, axis=-1)
    minc = np.min(rgb, axis=-1)
    v = maxc
    delta = maxc - minc
    s = np.where(maxc > 0, delta / np.maximum(maxc, 1e-12), 0.0)
    # hue sectors, guarded against zero delta
    dd = np.maximum(delta, 1e-12)
    rc = (maxc - r) / dd
    gc = (maxc - g) / dd
    bc = (maxc - b) / dd
    h = np.where(maxc == r, bc - gc, np.where(maxc == g, 2.0 + rc - bc, 4.0 + gc - rc))
    h = (h / 6.0) % 1.0
    h = np.where(delta == 0, 0.0, h)
    return h, s, v


def _hsv_to_rgb(h, s, v):
    i = np.floor(h * 6.0)
    f = h * 6.0 - i
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    i = i.astype(int) % 6
    r = np.choose(i, [v, q, p, p, t, v])
    g = np.choose(i, [t, v, v, q, p, p])
    b = np.choose(i, [p, p, t, v, v, q])
    return np.stack([r, g, b], axis=-1)


def _hue_rotate(image, arg):
    degrees = float(arg) if arg else 120.0
    h, s, v = _rgb_to_hsv(image.astype(np.float64) / 255.0)
    h = (h + degrees / 360.0) % 1.0
    rgb = _hsv_to_rgb(h, s, v)
    return np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)


_BAYER4 = np.array([[0, 8, 2, 10],
                    [12, 4, 14, 6],
                    [3, 11, 1, 9],
                    [15, 7, 13, 5]], dtype=np.float64)


def _dither(image, arg):
    cell = int(arg) if arg else 4
    if cell != 4:
        raise StylizerFailure("only the 4x4 ordered-dither matrix is built in")
    from .decoder import to_gray
    gray = to_gray(image)
    h, w = gray.shape
    thresh = (_BAYER4 + 0.5) / 16.0 * 255.0
    reps = (h + 3) // 4, (w + 3) // 4
    tiled = np.tile(thresh, reps)[:h, :w]
    bw = np.where(gray >= tiled, 255, 0).astype(np.uint8)
    return np.stack([bw, bw, bw], axis=-1)


_BUILTINS = {
    "identity": _identity,
    "posterize": _posterize,
    "soften": _soften,
    "hue-rotate": _hue_rotate,
    "dither": _dither,
}


def builtin_stylizers() -> list:
    return sorted(_BUILTINS)


def apply_stylizer(image: np.ndarray, spec: str) -> np.ndarray:
    """Apply a built-in stylizer given as "name" or "name:arg"."""
    name, _, arg = spec.partition(":")
    if name not in _BUILTINS:
        raise StylizerFailure("unknown stylizer %r (built-ins: %s)"
                              % (name, ", ".join(builtin_stylizers())))
    out = _BUILTINS[name](image, arg or None)
    _check_contract(image, out)
    return out


def apply_external(image: np.ndarray, command: list) -> np.ndarray:
    """Run an external stylizer process over temporary PNG files."""
    with tempfile.TemporaryDirectory(prefix="artqr-style-") as tmp:
        src = Path(tmp) / "input.png"
        dst = Path(tmp) / "output.png"
        Image.fromarray(image).save(src)
        proc = subprocess.run(list(command) + [str(src), str(dst)],
                              capture_output=True, text=True)
        if proc.returncode != 0:
            raise StylizerFailure("external stylizer exited %d: %s"
                                  % (proc.returncode, proc.stderr.strip()[:500]))
        if not dst.exists():
            raise StylizerFailure("external stylizer produced no output file")
        out = np.asarray(Image.open(dst).convert("RGB"))
    _check_contract(image, out)
    return out


def _check_contract(src: np.ndarray, out: np.ndarray):
    if out.shape[:2] != src.shape[:2]:
        raise StylizerFailure("stylizer changed dimensions %s -> %s"
                              % (src.shape[:2], out.shape[:2]))
    if out.ndim != 3 or out.shape[2] != 3 or out.dtype != np.uint8:
        raise StylizerFailure("stylizer output must be 8-bit RGB")
