"""Robust stylized aesthetic QR codes: gray-driven module scheduling, a
pluggable stylization stage, and decode-model-driven error correction."""

from .correction import (
    RobustnessParams,
    RobustnessReport,
    StageCResult,
    colorize,
    correct,
    evaluate,
    ideal_bits,
    margin_threshold,
    pixel_robust,
    preprocess_spots,
    run_stage_c,
)
from .decoder import (
    DecodeResult,
    SampledGrid,
    ThresholdField,
    binarize_field,
    decode_check,
    psi,
    sample,
    to_gray,
)
from .errors import (
    ArtqrError,
    CapacityExceeded,
    DimensionMismatch,
    FormatInfoError,
    NonConvergence,
    StylizerFailure,
    UncorrectableError,
)
from .geometry import (
    GaussianModuleKernel,
    ModuleGrid,
    disc_mask,
    disc_stencil,
    gaussian_module_kernel,
    ring_offsets,
)
from .metrics import DistortionSpec, apply_distortion, decode_rate_trial, error_module_count, ssim
from .qr import CodewordFrame, QrMatrix, build_matrix, encode_message, read_matrix
from .rs import rs_decode, rs_encode
from .scheduling import (
    PriorityPlan,
    SchedulingBasis,
    compose_qa,
    compute_plan,
    schedule,
    schedule_detailed,
    target_match_count,
)
from .sidecar import SidecarMeta, load_core, read_sidecar, save_png, write_sidecar
from .stylizers import apply_external, apply_stylizer, builtin_stylizers

__version__ = "0.1.0"
