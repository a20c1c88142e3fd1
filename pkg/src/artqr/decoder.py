"""Reference decode model: center-pixel sampling over mean-block thresholds.

Gray values stay real-valued until thresholding so the correction stage's
margin arithmetic and this verification path cannot disagree by rounding.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, FormatInfoError, UncorrectableError
from .geometry import ModuleGrid
from .qr import QrMatrix, _bit_map, read_matrix, symbol_layout
from .rs import rs_decode

GRAY_WEIGHTS = (0.299, 0.587, 0.114)


def to_gray(image: np.ndarray) -> np.ndarray:
    """Luma gray: 0.299 R + 0.587 G + 0.114 B, kept real-valued.

    Values are snapped to a 1e-6 grid: the raw float weights sum a few ulp
    short of 1, which would leave pure white at 254.99999999999997 and make
    flat regions epsilon-fragile against their own thresholds.
    """
    if image.ndim == 2:
        return image.astype(np.float64)
    a, b, g = GRAY_WEIGHTS
    img = image.astype(np.float64)
    return np.round(a * img[..., 0] + b * img[..., 1] + g * img[..., 2], 6)


@dataclass
class ThresholdField:
    """Per-pixel binarization thresholds from 8x8 block means.

    Each pixel's threshold is the mean of the block means over the 5x5
    block neighborhood of its block, clamped at the image border.
    """
    thresholds: np.ndarray
    block_size: int
    block_means: np.ndarray


def binarize_field(gray: np.ndarray, block_size: int = 8) -> ThresholdField:
    h, w = gray.shape
    if h < block_size or w < block_size:
        raise DimensionMismatch("image smaller than one %d px block" % block_size)
    row_edges = np.arange(0, h, block_size)
    col_edges = np.arange(0, w, block_size)
    sums = np.add.reduceat(np.add.reduceat(gray, row_edges, axis=0), col_edges, axis=1)
    rows_in = np.diff(np.append(row_edges, h))
    cols_in = np.diff(np.append(col_edges, w))
    means = sums / (rows_in[:, None] * cols_in[None, :])

    bh, bw = means.shape
    # clamped 5x5 window mean via an integral image over block means
    integ = np.zeros((bh + 1, bw + 1))
    integ[1:, 1:] = np.cumsum(np.cumsum(means, axis=0), axis=1)
    bi = np.arange(bh)
    bj = np.arange(bw)
    r0 = np.maximum(bi - 2, 0)
    r1 = np.minimum(bi + 2, bh - 1) + 1
    c0 = np.maximum(bj - 2, 0)
    c1 = np.minimum(bj + 2, bw - 1) + 1
    window = (integ[r1[:, None], c1[None, :]] - integ[r0[:, None], c1[None, :]]
              - integ[r1[:, None], c0[None, :]] + integ[r0[:, None], c0[None, :]])
    counts = (r1 - r0)[:, None] * (c1 - c0)[None, :]
    # integral-image rounding can push a flat region's threshold a few ulp
    # off the region gray (or past 255), where psi's closed interval would
    # flip saturated pixels; snap to the same 1e-6 grid as to_gray and keep
    # thresholds in [0, 255] by definition
    block_thresh = np.round(np.clip(window / counts, 0.0, 255.0), 6)

    per_pixel = np.repeat(np.repeat(block_thresh, block_size, axis=0), block_size, axis=1)
    per_pixel = per_pixel[:h, :w]
    return ThresholdField(per_pixel, block_size, means)


def psi(gray, threshold):
    """Thresholding: 1 iff gray lies in the closed interval [threshold, 255]."""
    return (np.asarray(gray) >= np.asarray(threshold)).astype(np.uint8)


@dataclass
class SampledGrid:
    """Module-center grays and their thresholded bits (1 = light)."""
    grays: np.ndarray
    bits: np.ndarray


def sample(gray: np.ndarray, field: ThresholdField, grid: ModuleGrid) -> SampledGrid:
    rows = grid.center_rows()
    cols = grid.center_cols()
    if rows[-1] >= gray.shape[0] or cols[-1] >= gray.shape[1]:
        raise DimensionMismatch("grid centers fall outside the image")
    grays = gray[np.ix_(rows, cols)]
    thresholds = field.thresholds[np.ix_(rows, cols)]
    return SampledGrid(grays, psi(grays, thresholds))


@dataclass
class DecodeResult:
    ok: bool
    payload: bytes | None
    corrections: int
    failure: str | None          # None | "format" | "rs"
    ec_level: str | None = None
    mask_index: int | None = None

    def __bool__(self):
        return self.ok


def matrix_from_bits(dark_bits: np.ndarray, version: int) -> QrMatrix:
    """Wrap raw sampled dark bits in a QrMatrix using the known layout."""
    role, _ = symbol_layout(version)
    return QrMatrix(version, "L", 0, dark_bits.astype(np.uint8), role.copy(),
                    _bit_map(version, "L").copy())


def decode_check(image: np.ndarray, grid: ModuleGrid, mask_index: int | None = None) -> DecodeResult:
    """Full decode: gray -> thresholds -> center sampling -> frame -> RS.

    Format information is read from the raster itself (BCH-corrected); the
    optional ``mask_index`` is only the caller's expectation and does not
    steer decoding.
    """
    version = (grid.m - 17) // 4
    if version < 1 or grid.m != 17 + 4 * version:
        raise DimensionMismatch("grid size %d is not a valid symbol size" % grid.m)
    gray = to_gray(image)
    field = binarize_field(gray)
    sampled = sample(gray, field, grid)
    dark = (1 - sampled.bits).astype(np.uint8)
    matrix = matrix_from_bits(dark, version)
    try:
        frame = read_matrix(matrix)
    except FormatInfoError:
        return DecodeResult(False, None, 0, "format")

    # per-block RS decode over the logical byte stream
    from .qr import rs_blocks
    blocks = rs_blocks(version, frame.ec_level)
    data_bytes = frame.data
    ec_bytes = frame.ec
    payload_parts = []
    corrections = 0
    d_off = e_off = 0
    try:
        for total, dlen in blocks:
            chunk = list(data_bytes[d_off:d_off + dlen]) + list(ec_bytes[e_off:e_off + total - dlen])
            part, fixed = rs_decode(chunk, total - dlen)
            payload_parts.append(bytes(part))
            corrections += fixed
            d_off += dlen
            e_off += total - dlen
    except UncorrectableError:
        return DecodeResult(False, None, 0, "rs", frame.ec_level)

    stream = b"".join(payload_parts)
    payload = _parse_byte_mode(stream, version)
    if payload is None:
        return DecodeResult(False, None, corrections, "rs", frame.ec_level)
    level, mask = _format_of(matrix)
    return DecodeResult(True, payload, corrections, None, level, mask)


def _format_of(matrix: QrMatrix):
    from .qr import read_format_info
    return read_format_info(matrix.bits)


def _parse_byte_mode(stream: bytes, version: int) -> bytes | None:
    bits = np.unpackbits(np.frombuffer(stream, dtype=np.uint8))
    mode = (int(bits[0]) << 3) | (int(bits[1]) << 2) | (int(bits[2]) << 1) | int(bits[3])
    if mode != 0b0100:
        return None
    count_bits = 8 if version < 10 else 16
    length = 0
    for b in bits[4:4 + count_bits]:
        length = (length << 1) | int(b)
    start = 4 + count_bits
    if start + 8 * length > bits.size:
        return None
    payload_bits = bits[start:start + 8 * length]
    return np.packbits(payload_bits).tobytes()
