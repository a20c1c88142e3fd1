"""Error correction stage: robustness scoring with margin-shifted thresholds,
iterative spot forcing until every module is robust, ring-averaged spot
preprocessing, and gray-preserving colorization."""

from dataclasses import dataclass, field

import numpy as np

from .decoder import binarize_field, psi, to_gray
from .errors import NonConvergence
from .geometry import (
    GaussianModuleKernel,
    ModuleGrid,
    disc_mask,
    disc_stencil,
    expand_modules,
    ring_offsets,
)
from .qr import QrMatrix

# The final raster is 8-bit: colorization may move a gray by 1 and block
# thresholds follow by up to 1 more, so forced spot values clear the margin
# by GUARD beyond the trigger bound, and re-forcing overshoots by SLACK so
# sub-pixel threshold drift cannot re-trigger a corrected module.
GUARD = 2.0
SLACK = 1.0
# gray used to lift a module's surround when the local threshold is too close
# to 0 for a dark spot to be separable (uniform near-black regions threshold
# to ~0, where the closed thresholding interval reads everything as light)
LIFT_GRAY = 160.0


@dataclass
class RobustnessParams:
    delta: float = 0.1
    eta: float = 0.8
    spot_radius: int = 3
    max_iterations: int = 20

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError("delta must lie in [0, 1]")
        if not 0.0 < self.eta <= 1.0:
            raise ValueError("eta must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")


@dataclass
class RobustnessReport:
    """Per-module robustness. ``scores``/``non_robust`` weight the Gaussian
    over the spot disc (the region correction controls and decoding reads);
    ``scores_full``/``non_robust_full`` keep the whole-module sum for
    inspection. A flat color region thresholds to its own gray, so every
    non-spot pixel there sits inside the margin band and the whole-module
    score is capped at the disc's Gaussian mass; only the disc-weighted
    score is attainable by spot correction."""
    scores: np.ndarray                 # (m, m) float64, disc-weighted
    non_robust: frozenset              # {(row, col): score < eta}
    registry: frozenset = frozenset()  # all modules ever corrected
    iterations_used: int = 0
    omega_history: list = field(default_factory=list)
    lifted: frozenset = frozenset()
    quantization_repairs: int = 0
    scores_full: np.ndarray | None = None   # whole-module Gaussian sum
    non_robust_full: frozenset = frozenset()


def margin_threshold(t, ideal, delta):
    """Threshold shifted into the non-robust band: up by delta*(255-t) for an
    ideally-light pixel, down by delta*t for an ideally-dark one."""
    t = np.asarray(t, dtype=np.float64)
    up = t + delta * (255.0 - t)
    down = t - delta * t
    return np.where(np.asarray(ideal) == 1, up, down)


def pixel_robust(gray, t, ideal, delta):
    """1 iff thresholding against the margin-shifted threshold still yields
    the ideal bit."""
    shifted = margin_threshold(t, ideal, delta)
    return (psi(gray, shifted) == np.asarray(ideal)).astype(np.uint8)


def ideal_bits(scheduled: QrMatrix, grid: ModuleGrid, spot_radius: int,
               current_bits: np.ndarray) -> np.ndarray:
    """Per-pixel ideal thresholding results: the scheduled module bit inside
    every spot disc, the pixel's own current binarization elsewhere."""
    ideal = np.array(current_bits, dtype=np.uint8, copy=True)
    discs = disc_mask(grid, spot_radius)
    white = expand_modules(scheduled.white_flags(), grid.a)
    ideal[discs] = white[discs]
    return ideal


def evaluate(gray: np.ndarray, field_: "ThresholdField", ideal: np.ndarray,
             kernel: GaussianModuleKernel, params: RobustnessParams) -> RobustnessReport:
    """Gaussian-weighted per-module robustness scores and the non-robust set."""
    xi = pixel_robust(gray, field_.thresholds, ideal, params.delta)
    a = kernel.a
    m = gray.shape[0] // a
    tiles = xi.reshape(m, a, m, a).astype(np.float64)
    full = np.einsum("iajb,ab->ij", tiles, kernel.weights)
    disc_w = kernel.weights * disc_stencil(a, params.spot_radius)
    disc_w = disc_w / disc_w.sum()
    scores = np.einsum("iajb,ab->ij", tiles, disc_w)
    bad = np.argwhere(scores < params.eta)
    bad_full = np.argwhere(full < params.eta)
    return RobustnessReport(scores, frozenset(map(tuple, bad.tolist())),
                            scores_full=full,
                            non_robust_full=frozenset(map(tuple, bad_full.tolist())))


def preprocess_spots(qb: np.ndarray, registry, grid: ModuleGrid,
                     spot_radius: int) -> np.ndarray:
    """Fill each registered module's spot with the average color of the
    surrounding pixel ring, sampled from the evolving image."""
    out = np.array(qb, dtype=np.float64, copy=True)
    h, w = out.shape[:2]
    offs = np.array(ring_offsets(spot_radius))
    disc = np.argwhere(disc_stencil(grid.a, spot_radius))
    half = (grid.a - 1) // 2
    for r, c in sorted(registry):
        cr, cc = grid.center(r, c)
        rr = np.clip(cr + offs[:, 0], 0, h - 1)
        ww = np.clip(cc + offs[:, 1], 0, w - 1)
        color = out[rr, ww].mean(axis=0)
        out[cr - half + disc[:, 0], cc - half + disc[:, 1]] = color
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def correct(qb: np.ndarray, scheduled: QrMatrix, grid: ModuleGrid,
            kernel: GaussianModuleKernel, params: RobustnessParams):
    """Iteratively force non-robust modules' spots to margin-clearing grays.

    Per iteration: recompute the threshold field, evaluate robustness, then
    re-force the whole registry (old and new) at the current thresholds so
    threshold drift cannot un-correct earlier modules. A module also enters
    the registry when its center pixel alone fails the margin (plus GUARD):
    the decode model reads only centers, so a module can score above eta
    while its center bit would still flip.

    Returns (corrected gray image, ring-preprocessed color reference, report).
    """
    gray = to_gray(qb)
    m, a = scheduled.m, grid.a
    white_mod = scheduled.white_flags().astype(bool)
    white_px = expand_modules(white_mod, a)
    discs = disc_mask(grid, params.spot_radius)
    module_px = ~discs  # complement used for surround lifting
    center_rows = grid.center_rows()
    center_cols = grid.center_cols()

    registry = set()
    lifted = set()
    omega_history = []
    report = None
    delta = params.delta

    for iteration in range(1, params.max_iterations + 1):
        field_ = binarize_field(gray)
        t = field_.thresholds
        current = psi(gray, t)
        ideal = ideal_bits(scheduled, grid, params.spot_radius, current)
        report = evaluate(gray, field_, ideal, kernel, params)

        bound_hi = np.minimum(t + delta * (255.0 - t) + GUARD, 255.0)
        bound_lo = t - delta * t - GUARD
        tc = t[np.ix_(center_rows, center_cols)]
        gc = gray[np.ix_(center_rows, center_cols)]
        hi_c = np.minimum(tc + delta * (255.0 - tc) + GUARD, 255.0)
        lo_c = tc - delta * tc - GUARD
        center_bad = np.where(white_mod, gc < hi_c, gc > lo_c)

        need = set(report.non_robust) | set(map(tuple, np.argwhere(center_bad).tolist()))
        omega_history.append(len(report.non_robust))
        if not need:
            break
        registry |= need

        force_mod = np.zeros((m, m), dtype=bool)
        for rc in registry:
            force_mod[rc] = True
        # dark spots need the local threshold clear of the gray floor; lift
        # the surround of modules where bound_lo dips to or below zero
        stuck = force_mod & ~white_mod & (lo_c <= 0.0)
        for rc in map(tuple, np.argwhere(stuck).tolist()):
            lifted.add(rc)
        if lifted:
            lift_mod = np.zeros((m, m), dtype=bool)
            for rc in lifted:
                lift_mod[rc] = True
            lift_px = expand_modules(lift_mod, a) & module_px
            gray[lift_px] = LIFT_GRAY

        force_px = expand_modules(force_mod, a) & discs
        forced = np.where(white_px,
                          np.minimum(bound_hi + SLACK, 255.0),
                          np.maximum(bound_lo - SLACK, 0.0))
        gray[force_px] = forced[force_px]
    else:
        raise NonConvergence("non-robust modules remain after %d iterations"
                             % params.max_iterations)

    qb0 = preprocess_spots(qb, registry, grid, params.spot_radius)
    return gray, qb0, RobustnessReport(
        report.scores, report.non_robust, frozenset(registry),
        iteration, omega_history, frozenset(lifted),
        scores_full=report.scores_full, non_robust_full=report.non_robust_full)


def colorize(qc_gray: np.ndarray, qb0: np.ndarray) -> np.ndarray:
    """Scale qb0's RGB per pixel so the output gray equals qc_gray.

    Pixels where the scale is undefined (qb0 gray 0) or where clipping the
    scaled channels would move the gray by more than 1 fall back to the
    achromatic target. Guarantee: |to_gray(output) - qc_gray| <= 1.
    """
    ref = qb0.astype(np.float64)
    g0 = to_gray(qb0)
    target = qc_gray.astype(np.float64)
    theta = np.divide(target, g0, out=np.zeros_like(target), where=g0 > 0)
    candidate = np.rint(np.clip(theta[..., None] * ref, 0.0, 255.0))
    err = np.abs(to_gray(candidate) - target)
    bad = (g0 <= 0) | (err > 1.0)
    fallback = np.rint(np.clip(target, 0.0, 255.0))
    out = np.where(bad[..., None], fallback[..., None], candidate)
    return out.astype(np.uint8)


@dataclass
class StageCResult:
    qc_color: np.ndarray
    qc_gray: np.ndarray
    qb0: np.ndarray
    report: RobustnessReport


def run_stage_c(qb: np.ndarray, scheduled: QrMatrix, grid: ModuleGrid,
                kernel: GaussianModuleKernel, params: RobustnessParams) -> StageCResult:
    """correct + colorize, then verify the 8-bit raster actually samples to
    the scheduled bits and repaint (achromatically) any module where
    quantization of gray or thresholds flipped its center."""
    qc_gray, qb0, report = correct(qb, scheduled, grid, kernel, params)
    qc = colorize(qc_gray, qb0)

    registry = set(report.registry)
    lifted = set(report.lifted)
    repairs = 0
    half = (grid.a - 1) // 2
    disc = np.argwhere(disc_stencil(grid.a, params.spot_radius))
    white_mod = scheduled.white_flags()
    for _ in range(5):
        gray = to_gray(qc)
        field_ = binarize_field(gray)
        rows, cols = grid.center_rows(), grid.center_cols()
        bits = psi(gray[np.ix_(rows, cols)], field_.thresholds[np.ix_(rows, cols)])
        mism = np.argwhere(bits != white_mod)
        if mism.size == 0:
            break
        t = field_.thresholds
        for r, c in map(tuple, mism.tolist()):
            cr, cc = grid.center(r, c)
            tc = t[cr, cc]
            if white_mod[r, c]:
                v = int(np.clip(round(min(tc + params.delta * (255 - tc) + GUARD + SLACK, 255)), 0, 255))
            else:
                v = int(np.clip(round(tc - params.delta * tc - GUARD - SLACK), 0, 255))
                if tc - params.delta * tc - GUARD <= 0:
                    lift_v = int(LIFT_GRAY)
                    rr = slice(cr - half, cr + half + 1)
                    ss = slice(cc - half, cc + half + 1)
                    block = np.zeros((grid.a, grid.a), dtype=bool)
                    block[disc[:, 0], disc[:, 1]] = True
                    qc[rr, ss][~block] = lift_v
                    qc_gray[rr, ss][~block] = lift_v
                    lifted.add((r, c))
            qc[cr - half + disc[:, 0], cc - half + disc[:, 1]] = v
            qc_gray[cr - half + disc[:, 0], cc - half + disc[:, 1]] = v
            registry.add((r, c))
            repairs += 1
    else:
        raise NonConvergence("raster quantization kept flipping sampled bits")

    final = RobustnessReport(report.scores, report.non_robust, frozenset(registry),
                             report.iterations_used, report.omega_history,
                             frozenset(lifted), repairs,
                             scores_full=report.scores_full,
                             non_robust_full=report.non_robust_full)
    return StageCResult(qc, qc_gray, qb0, final)
