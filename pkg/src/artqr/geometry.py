"""Module-grid geometry, the per-module Gaussian weight kernel, spot stencils."""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch


@dataclass(frozen=True)
class ModuleGrid:
    """Pixel geometry of an m x m module grid with a x a pixels per module.

    ``a`` must be odd so every module center is an exact pixel.
    """
    a: int
    m: int
    origin: tuple = (0, 0)  # (row, col) pixel offset of module (0, 0)

    def __post_init__(self):
        if self.a < 3 or self.a % 2 == 0:
            raise ValueError("module size must be odd and >= 3")

    @property
    def side_px(self) -> int:
        return self.m * self.a

    def center(self, row: int, col: int) -> tuple:
        h = (self.a - 1) // 2
        return (self.origin[0] + row * self.a + h, self.origin[1] + col * self.a + h)

    def center_rows(self) -> np.ndarray:
        h = (self.a - 1) // 2
        return self.origin[0] + np.arange(self.m) * self.a + h

    def center_cols(self) -> np.ndarray:
        h = (self.a - 1) // 2
        return self.origin[1] + np.arange(self.m) * self.a + h

    def check_image(self, image: np.ndarray):
        h, w = image.shape[:2]
        if h != self.side_px + self.origin[0] or w != self.side_px + self.origin[1]:
            if (h, w) != (self.side_px, self.side_px) or self.origin != (0, 0):
                raise DimensionMismatch(
                    "image %dx%d does not cover a %d-module grid of %d px modules"
                    % (h, w, self.m, self.a))


@dataclass(frozen=True)
class GaussianModuleKernel:
    """Center-weighted sampling weights over one module, sum normalized to 1.

    sigma = (a - 1) / 6, so the module edge sits three sigma from the center.
    """
    a: int
    weights: np.ndarray

    @property
    def sigma(self) -> float:
        return (self.a - 1) / 6.0


@lru_cache(maxsize=32)
def gaussian_module_kernel(a: int) -> GaussianModuleKernel:
    if a < 3 or a % 2 == 0:
        raise ValueError("kernel side must be odd and >= 3")
    sigma = (a - 1) / 6.0
    h = (a - 1) // 2
    ii, jj = np.meshgrid(np.arange(-h, h + 1), np.arange(-h, h + 1), indexing="ij")
    w = np.exp(-(ii ** 2 + jj ** 2) / (2.0 * sigma ** 2)) / (2.0 * math.pi * sigma ** 2)
    w /= w.sum()
    w.setflags(write=False)
    return GaussianModuleKernel(a, w)


@lru_cache(maxsize=32)
def disc_stencil(a: int, radius: int) -> np.ndarray:
    """Boolean a x a stencil: pixel included iff i^2 + j^2 <= radius^2."""
    if radius > a // 2:
        raise ValueError("spot radius %d exceeds half the module size %d" % (radius, a))
    h = (a - 1) // 2
    ii, jj = np.meshgrid(np.arange(-h, h + 1), np.arange(-h, h + 1), indexing="ij")
    s = (ii ** 2 + jj ** 2) <= radius ** 2
    s.setflags(write=False)
    return s


@lru_cache(maxsize=32)
def ring_offsets(radius: int) -> tuple:
    """Lattice offsets of the annulus (r+0.5)^2 <= i^2+j^2 < (r+1.5)^2."""
    lim = int(math.ceil(radius + 1.5))
    lo, hi = (radius + 0.5) ** 2, (radius + 1.5) ** 2
    offs = []
    for i in range(-lim, lim + 1):
        for j in range(-lim, lim + 1):
            d2 = i * i + j * j
            if lo <= d2 < hi:
                offs.append((i, j))
    return tuple(offs)


def disc_mask(grid: ModuleGrid, radius: int) -> np.ndarray:
    """Full-image boolean mask of the spot discs at every module center."""
    stencil = disc_stencil(grid.a, radius)
    core = np.tile(stencil, (grid.m, grid.m))
    if grid.origin == (0, 0):
        return core
    full = np.zeros((grid.origin[0] + grid.side_px, grid.origin[1] + grid.side_px), dtype=bool)
    full[grid.origin[0]:, grid.origin[1]:] = core
    return full


def expand_modules(values: np.ndarray, a: int) -> np.ndarray:
    """Repeat an (m, m) per-module array to pixel resolution (m*a, m*a)."""
    return np.repeat(np.repeat(values, a, axis=0), a, axis=1)
