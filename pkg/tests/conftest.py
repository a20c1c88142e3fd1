"""Shared fixtures: a deterministic synthetic image corpus and pipeline stages."""

import numpy as np
import pytest

from artqr.decoder import to_gray
from artqr.geometry import ModuleGrid, gaussian_module_kernel
from artqr.qr import build_matrix, encode_message
from artqr.scheduling import compose_qa, compute_plan, schedule_detailed

MODULE_PX = 13
VERSION = 5
MODULES = 37
SIDE = MODULES * MODULE_PX  # 481
SPOT_RADIUS = MODULE_PX // 4
PAYLOAD = b"https://example.org/see-for-yourself"


def corpus_image(index: int, side: int = SIDE) -> np.ndarray:
    """Deterministic synthetic blended image number ``index`` (RGB uint8)."""
    rng = np.random.default_rng(1000 + index)
    yy, xx = np.meshgrid(np.linspace(0, 1, side), np.linspace(0, 1, side), indexing="ij")
    kind = index % 10
    if kind == 0:
        base = xx
    elif kind == 1:
        base = yy
    elif kind == 2:
        base = (xx + yy) / 2
    elif kind == 3:
        base = np.sqrt((xx - 0.5) ** 2 + (yy - 0.5) ** 2) * 1.4
    elif kind == 4:
        # smoothed random field
        from scipy.ndimage import gaussian_filter
        noise = rng.normal(size=(side, side))
        base = gaussian_filter(noise, side / 12)
        base = (base - base.min()) / (np.ptp(base) + 1e-12)
    elif kind == 5:
        base = 0.5 + 0.5 * np.sin(8 * np.pi * xx) * np.sin(6 * np.pi * yy)
    elif kind == 6:
        base = np.zeros_like(xx)
        for _ in range(6):
            cx, cy, r = rng.uniform(0.1, 0.9), rng.uniform(0.1, 0.9), rng.uniform(0.08, 0.25)
            base += np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / (2 * r ** 2))
        base = base / (base.max() + 1e-12)
    elif kind == 7:
        base = 0.5 + 0.45 * np.sin(14 * np.pi * (xx * 0.7 + yy * 0.3))
    elif kind == 8:
        base = np.where(xx + yy < 1.0, 0.3 + 0.4 * xx, 0.8 - 0.5 * yy)
    else:
        from scipy.ndimage import gaussian_filter
        noise = rng.normal(size=(side, side))
        base = gaussian_filter(noise, side / 30)
        base = (base - base.min()) / (np.ptp(base) + 1e-12)
        if index == 19:
            # dark vignette corner exercising the near-black lift path
            base = base * np.clip((xx + yy) * 1.5, 0.0, 1.0)

    phase = rng.uniform(0, 2 * np.pi, size=3)
    channels = [np.clip(base + 0.12 * np.sin(2 * np.pi * base + p), 0, 1) for p in phase]
    img = np.stack(channels, axis=-1)
    out = np.clip(np.rint(8 + img * 237), 0, 255).astype(np.uint8)
    if index == 19:
        out[:130, :130] = 0  # exactly-black corner: thresholds collapse to 0 there
    return out


@pytest.fixture(scope="session")
def grid():
    return ModuleGrid(MODULE_PX, MODULES)


@pytest.fixture(scope="session")
def kernel():
    return gaussian_module_kernel(MODULE_PX)


@pytest.fixture(scope="session")
def frame():
    return encode_message(PAYLOAD, VERSION, "L")


@pytest.fixture(scope="session")
def layout(frame):
    return build_matrix(frame, 0)


def make_stage_a(image, frame, mask_index=0, spot_radius=SPOT_RADIUS):
    """Full Stage-A run: plan, schedule, compose. Returns (scheduled, plan, qa)."""
    layout = build_matrix(frame, mask_index)
    kern = gaussian_module_kernel(MODULE_PX)
    plan = compute_plan(to_gray(image), kern, layout)
    scheduled, basis = schedule_detailed(frame, plan, layout)
    qa = compose_qa(image, scheduled, ModuleGrid(MODULE_PX, MODULES), spot_radius)
    return scheduled, plan, qa, basis


@pytest.fixture(scope="session")
def stage_a_small(frame):
    """Stage-A outputs for a handful of corpus images (unit-test sized)."""
    out = []
    for idx in (0, 4, 6, 9, 19):
        image = corpus_image(idx)
        scheduled, plan, qa, basis = make_stage_a(image, frame)
        out.append({"index": idx, "image": image, "scheduled": scheduled,
                    "plan": plan, "qa": qa, "basis": basis})
    return out
