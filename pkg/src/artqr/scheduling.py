"""Baseline aesthetic code generation: gray-driven priorities, GF(2) scheduling
of the pad-slack freedom, and circular-spot composition."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DimensionMismatch
from .galois import GF256
from .geometry import GaussianModuleKernel, ModuleGrid, disc_stencil, expand_modules
from .qr import (
    ROLE_DATA,
    CodewordFrame,
    QrMatrix,
    build_matrix,
    data_capacity_bytes,
    rs_blocks,
)
from .rs import rs_encode


@dataclass
class PriorityPlan:
    """Per-module scheduling targets and normalized priorities.

    ``targets`` follow the thresholding convention (1 = light module);
    ``priorities`` lie in [0, 1], 1 meaning the module gray sits at an
    extreme and is most worth scheduling. Function-pattern modules are
    flagged fixed; their priorities are computed but never used.
    """
    targets: np.ndarray      # (m, m) uint8
    priorities: np.ndarray   # (m, m) float64
    fixed: np.ndarray        # (m, m) bool
    mean_gray: np.ndarray    # (m, m) float64, Gaussian-weighted module gray


@dataclass
class SchedulingBasis:
    """GF(2) rows spanning the frames reachable by rewriting free bits."""
    rows: np.ndarray                      # (n_free, total_bits) uint8
    pivot_log: list = field(default_factory=list)  # consumed (bit_index, matched) pairs

    @property
    def rank(self) -> int:
        return self.rows.shape[0]

    @property
    def consumed(self) -> int:
        return len(self.pivot_log)


def compute_plan(image_gray: np.ndarray, kernel: GaussianModuleKernel,
                 matrix_layout: QrMatrix) -> PriorityPlan:
    """Gaussian-weighted module grays -> binary targets and priorities.

    target = round(mean_gray / 255); priority = 1 - |mean_gray - 255*target| / 127.5.
    """
    m = matrix_layout.m
    a = kernel.a
    if image_gray.shape != (m * a, m * a):
        raise DimensionMismatch("gray image %s does not match %d modules of %d px"
                                % (image_gray.shape, m, a))
    tiles = image_gray.reshape(m, a, m, a)
    mean_gray = np.einsum("iajb,ab->ij", tiles, kernel.weights)
    targets = (mean_gray >= 127.5).astype(np.uint8)
    priorities = np.clip(1.0 - np.abs(mean_gray - 255.0 * targets) / 127.5, 0.0, 1.0)
    fixed = matrix_layout.role != ROLE_DATA
    return PriorityPlan(targets, priorities, fixed, mean_gray)


@lru_cache(maxsize=8)
def _parity_bit_matrix(version: int, ec_level: str) -> np.ndarray:
    """GF(2) map from each data bit to the EC bit vector it induces.

    Shape (data_bits, ec_bits). Built per block from unit-byte encodings;
    parity of a scaled unit byte is the GF(256) scalar multiple of the unit
    parity, so only one RS encode per byte position is needed.
    """
    blocks = rs_blocks(version, ec_level)
    data_total = sum(d for _, d in blocks)
    ec_total = sum(t - d for t, d in blocks)
    out = np.zeros((data_total * 8, ec_total * 8), dtype=np.uint8)

    data_off = 0
    ec_off = 0
    for total, dlen in blocks:
        elen = total - dlen
        for p in range(dlen):
            unit = [0] * dlen
            unit[p] = 1
            base_parity = rs_encode(unit, elen)
            for k in range(8):
                value = 0x80 >> k
                parity = [GF256.mul(value, v) for v in base_parity]
                row = np.unpackbits(np.array(parity, dtype=np.uint8))
                out[(data_off + p) * 8 + k, ec_off * 8:(ec_off + elen) * 8] = row
        data_off += dlen
        ec_off += elen
    out.setflags(write=False)
    return out


def build_basis(frame: CodewordFrame) -> SchedulingBasis:
    """One row per free bit: unit data bit plus the EC bits it flips."""
    parity = _parity_bit_matrix(frame.version, frame.ec_level)
    data_bits = len(frame.data) * 8
    total_bits = frame.total_bits
    free = frame.free_bit_positions
    rows = np.zeros((len(free), total_bits), dtype=np.uint8)
    for i, f in enumerate(free):
        rows[i, f] = 1
        rows[i, data_bits:] = parity[f]
    return SchedulingBasis(rows)


def _module_visit_order(plan: PriorityPlan, matrix: QrMatrix):
    """Data modules by descending priority, row-major index as tie-break."""
    m = matrix.m
    flat = np.arange(m * m)
    data = matrix.data_modules().ravel()
    idx = flat[data]
    prio = plan.priorities.ravel()[data]
    order = np.lexsort((idx, -prio))
    return idx[order]


def schedule_detailed(frame: CodewordFrame, plan: PriorityPlan, layout: QrMatrix):
    """Gauss-Jordan scheduling of free bits toward the plan targets.

    Visits data modules in descending priority. A module is locked when a
    basis row still has a pivot at its codeword bit: the row is applied if
    the current bit disagrees with the desired one, then eliminated from all
    other rows so later steps cannot disturb the locked bit.

    Returns (scheduled QrMatrix, consumed SchedulingBasis).
    """
    basis = build_basis(frame)
    bits = frame.logical_bits().copy()
    bit_map = layout.bit_map
    mask_flags = _mask_flag_array(layout)
    targets = plan.targets

    rows = basis.rows.copy()
    active = np.ones(rows.shape[0], dtype=bool)
    pivot_log = []

    m = layout.m
    for flat_idx in _module_visit_order(plan, layout):
        r, c = divmod(int(flat_idx), m)
        j = int(bit_map[r, c])
        # the module shows white iff codeword bit XOR mask is 0; aim the
        # codeword bit so the displayed appearance equals the target
        desired = (1 - int(targets[r, c])) ^ int(mask_flags[r, c])
        candidates = np.flatnonzero(active & (rows[:, j] == 1))
        if candidates.size == 0:
            continue
        pivot = candidates[0]
        if bits[j] != desired:
            bits ^= rows[pivot]
        others = np.flatnonzero(rows[:, j] == 1)
        others = others[others != pivot]
        if others.size:
            rows[others] ^= rows[pivot]
        active[pivot] = False
        pivot_log.append((j, True))

    data_len = data_capacity_bytes(frame.version, frame.ec_level)
    all_bytes = np.packbits(bits).tobytes()
    new_frame = CodewordFrame(frame.version, frame.ec_level,
                              all_bytes[:data_len], all_bytes[data_len:],
                              frame.free_bit_positions)
    basis.pivot_log = pivot_log
    return build_matrix(new_frame, layout.mask_index), basis


def schedule(frame: CodewordFrame, plan: PriorityPlan, layout: QrMatrix) -> QrMatrix:
    matrix, _ = schedule_detailed(frame, plan, layout)
    return matrix


def _mask_flag_array(layout: QrMatrix) -> np.ndarray:
    from .qr import mask_condition
    return mask_condition(layout.version, layout.mask_index).astype(np.uint8)


def target_match_count(matrix: QrMatrix, plan: PriorityPlan) -> int:
    """Data modules whose displayed appearance equals the plan target."""
    data = matrix.data_modules()
    return int(np.sum(matrix.white_flags()[data] == plan.targets[data]))


def compose_qa(image_color: np.ndarray, scheduled: QrMatrix, grid: ModuleGrid,
               spot_radius: int) -> np.ndarray:
    """Blend image with the scheduled symbol: solid function patterns, hard
    black/white discs on data modules, image pixels everywhere else."""
    if spot_radius > grid.a // 2:
        raise DimensionMismatch("spot radius %d too large for %d px modules"
                                % (spot_radius, grid.a))
    if image_color.shape[:2] != (grid.side_px, grid.side_px):
        raise DimensionMismatch("image %s does not match grid %d px"
                                % (image_color.shape, grid.side_px))
    a, m = grid.a, grid.m
    out = np.array(image_color, dtype=np.uint8, copy=True)
    shade = expand_modules(scheduled.white_flags().astype(np.uint8) * 255, a)

    solid = expand_modules(scheduled.function_modules(), a)
    stencil = disc_stencil(a, spot_radius)
    spots = np.tile(stencil, (m, m)) & expand_modules(~scheduled.function_modules(), a)

    paint = solid | spots
    out[paint] = shade[paint, None]
    return out
