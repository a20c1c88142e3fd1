"""Decode model: grayscale conversion, block thresholds, sampling, decoding."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artqr.decoder import binarize_field, decode_check, psi, sample, to_gray
from artqr.errors import DimensionMismatch
from artqr.geometry import ModuleGrid
from conftest import MODULE_PX, MODULES, PAYLOAD, SIDE, corpus_image, make_stage_a


def test_to_gray_reference_values():
    assert to_gray(np.array([[[255, 255, 255]]], dtype=np.uint8))[0, 0] == 255.0
    assert abs(to_gray(np.array([[[255, 0, 0]]], dtype=np.uint8))[0, 0] - 76.245) < 1e-9
    assert abs(to_gray(np.array([[[0, 255, 0]]], dtype=np.uint8))[0, 0] - 149.685) < 1e-9


def test_psi_closed_interval():
    assert psi(200.0, 128.0) == 1
    assert psi(127.9, 128.0) == 0
    assert psi(128.0, 128.0) == 1  # threshold itself maps to light


def test_threshold_uniform_image():
    field = binarize_field(np.full((64, 64), 77.0))
    assert np.allclose(field.thresholds, 77.0)


def test_threshold_half_split():
    gray = np.zeros((128, 256))
    gray[:, 128:] = 255.0
    field = binarize_field(gray)
    # a pixel deep inside the left half sees only 0-mean blocks
    assert field.thresholds[64, 20] == 0.0
    assert field.thresholds[64, 236] == 255.0


def brute_force_threshold(gray, r, c, block=8):
    """Direct 5x5 block-mean enumeration, the threshold rule stated literally."""
    bh = (gray.shape[0] + block - 1) // block
    bw = (gray.shape[1] + block - 1) // block
    means = np.empty((bh, bw))
    for bi in range(bh):
        for bj in range(bw):
            tile = gray[bi * block:(bi + 1) * block, bj * block:(bj + 1) * block]
            means[bi, bj] = tile.mean()
    bi, bj = r // block, c // block
    acc = []
    for di in range(-2, 3):
        for dj in range(-2, 3):
            i, j = bi + di, bj + dj
            if 0 <= i < bh and 0 <= j < bw:
                acc.append(means[i, j])
    return float(np.mean(acc))


def test_threshold_checkerboard_vs_bruteforce():
    gray = np.zeros((64, 64))
    for bi in range(8):
        for bj in range(8):
            if (bi + bj) % 2 == 0:
                gray[bi * 8:(bi + 1) * 8, bj * 8:(bj + 1) * 8] = 255.0
    field = binarize_field(gray)
    for r, c in [(0, 0), (31, 31), (17, 40), (63, 63), (8, 56)]:
        # thresholds snap to a 1e-6 grid, so the oracle agrees to that grid
        assert abs(field.thresholds[r, c] - brute_force_threshold(gray, r, c)) <= 1e-6


def test_threshold_edge_blocks_vs_bruteforce():
    rng = np.random.default_rng(11)
    gray = rng.uniform(0, 255, size=(53, 61))  # ragged edge blocks
    field = binarize_field(gray)
    for r, c in [(0, 0), (52, 60), (25, 59), (50, 7)]:
        assert abs(field.thresholds[r, c] - brute_force_threshold(gray, r, c)) <= 1e-6


def test_brightness_covariance():
    rng = np.random.default_rng(2)
    gray = rng.uniform(20, 200, size=(96, 96))
    f0 = binarize_field(gray)
    f1 = binarize_field(gray + 30.0)
    assert np.allclose(f1.thresholds, f0.thresholds + 30.0)
    # hence bits at any sample points are invariant
    grid = ModuleGrid(3, 32)
    s0 = sample(gray, f0, grid)
    s1 = sample(gray + 30.0, f1, grid)
    assert np.array_equal(s0.bits, s1.bits)


def test_all_black_image_reads_light():
    # degenerate uniform input: threshold 0 everywhere and psi(0, 0) = 1
    gray = np.zeros((64, 64))
    field = binarize_field(gray)
    grid = ModuleGrid(3, 21)
    bits = sample(gray, field, grid).bits
    assert np.all(bits == 1)


def test_sample_matches_scheduled_bits(frame, grid):
    image = corpus_image(6)
    scheduled, plan, qa, _ = make_stage_a(image, frame)
    gray = to_gray(qa)
    field = binarize_field(gray)
    sampled = sample(gray, field, grid)
    data = scheduled.data_modules()
    assert np.array_equal(sampled.bits[data], scheduled.white_flags()[data])


def test_decode_check_plain_render(grid):
    from artqr.qr import build_matrix, encode_message
    from artqr.geometry import expand_modules
    frame = encode_message(PAYLOAD, 5, "L")
    mat = build_matrix(frame, 0)
    plain = expand_modules((1 - mat.bits) * 255, MODULE_PX).astype(np.uint8)
    img = np.stack([plain] * 3, axis=-1)
    result = decode_check(img, grid)
    assert result.ok and result.corrections == 0 and result.payload == PAYLOAD


def test_decode_check_stage_a(stage_a_small, grid):
    for case in stage_a_small:
        result = decode_check(case["qa"], grid)
        assert result.ok and result.corrections == 0
        assert result.payload == PAYLOAD


def test_decode_check_reports_corrections_on_damage(stage_a_small, grid):
    case = stage_a_small[0]
    damaged = case["qa"].copy()
    scheduled = case["scheduled"]
    # invert a handful of spots
    flipped = 0
    for r in range(MODULES):
        for c in range(MODULES):
            if scheduled.role[r, c] == 7 and flipped < 6:  # ROLE_DATA
                rr, cc = r * MODULE_PX + 6, c * MODULE_PX + 6
                damaged[rr - 3:rr + 4, cc - 3:cc + 4] = (
                    255 - int(scheduled.white_flags()[r, c]) * 255)
                flipped += 1
    result = decode_check(damaged, grid)
    assert result.ok
    assert result.corrections >= 1


def test_decode_check_failure_is_reported(grid):
    rng = np.random.default_rng(0)
    noise = rng.integers(0, 256, size=(SIDE, SIDE, 3)).astype(np.uint8)
    result = decode_check(noise, grid)
    assert not result.ok
    assert result.failure in ("format", "rs")


def test_sample_out_of_bounds(grid):
    gray = np.zeros((100, 100))
    field = binarize_field(gray)
    with pytest.raises(DimensionMismatch):
        sample(gray, field, grid)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255))
def test_psi_anywhere(gray, threshold):
    assert psi(float(gray), float(threshold)) == (1 if gray >= threshold else 0)
