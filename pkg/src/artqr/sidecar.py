"""Sidecar metadata binding an exported raster to its encoding ground truth,
plus PNG I/O with the quiet zone added at export and stripped at import."""

import hashlib
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
from PIL import Image

from .geometry import ModuleGrid
from .qr import QrMatrix, _bit_map, symbol_layout

FORMAT_VERSION = 1


@dataclass
class SidecarMeta:
    qr_version: int
    ec_level: str
    mask_index: int
    m: int
    a: int
    quiet_zone: int
    scheduled_bits_hex: str        # row-major dark bits, hex, m*m bits
    payload_sha256: str
    delta: float = 0.1
    eta: float = 0.8
    spot_radius: int = 3
    provenance: list = dc_field(default_factory=list)
    format_version: int = FORMAT_VERSION

    @property
    def origin_px(self) -> int:
        return self.quiet_zone * self.a

    def grid(self) -> ModuleGrid:
        """Geometry of the core (quiet-zone-stripped) raster."""
        return ModuleGrid(self.a, self.m)

    def scheduled_matrix(self) -> QrMatrix:
        bits = bits_from_hex(self.scheduled_bits_hex, self.m)
        role, _ = symbol_layout(self.qr_version)
        return QrMatrix(self.qr_version, self.ec_level, self.mask_index,
                        bits, role.copy(), _bit_map(self.qr_version, self.ec_level).copy())


def bits_to_hex(bits: np.ndarray) -> str:
    flat = bits.astype(np.uint8).ravel()
    return np.packbits(flat).tobytes().hex()


def bits_from_hex(hexstr: str, m: int) -> np.ndarray:
    raw = np.frombuffer(bytes.fromhex(hexstr), dtype=np.uint8)
    flat = np.unpackbits(raw)[:m * m]
    return flat.reshape(m, m)


def payload_digest(payload: bytes) -> str:
    return hashlib.sha256(payload).hexdigest()


def write_sidecar(path, meta: SidecarMeta):
    lines = [
        "format-version: %d" % meta.format_version,
        "qr-version: %d" % meta.qr_version,
        "ec-level: %s" % meta.ec_level,
        "mask-index: %d" % meta.mask_index,
        "modules: %d" % meta.m,
        "module-px: %d" % meta.a,
        "quiet-zone: %d" % meta.quiet_zone,
        "origin-px: %d" % meta.origin_px,
        "delta: %g" % meta.delta,
        "eta: %g" % meta.eta,
        "spot-radius: %d" % meta.spot_radius,
        "payload-sha256: %s" % meta.payload_sha256,
        "provenance: %s" % ";".join(meta.provenance),
        "scheduled-bits: %s" % meta.scheduled_bits_hex,
    ]
    Path(path).write_text("\n".join(lines) + "\n")


def read_sidecar(path) -> SidecarMeta:
    kv = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition(":")
        kv[key.strip()] = value.strip()
    if int(kv.get("format-version", -1)) != FORMAT_VERSION:
        raise ValueError("unsupported sidecar format-version %r" % kv.get("format-version"))
    prov = kv.get("provenance", "")
    return SidecarMeta(
        qr_version=int(kv["qr-version"]),
        ec_level=kv["ec-level"],
        mask_index=int(kv["mask-index"]),
        m=int(kv["modules"]),
        a=int(kv["module-px"]),
        quiet_zone=int(kv["quiet-zone"]),
        scheduled_bits_hex=kv["scheduled-bits"],
        payload_sha256=kv["payload-sha256"],
        delta=float(kv.get("delta", 0.1)),
        eta=float(kv.get("eta", 0.8)),
        spot_radius=int(kv.get("spot-radius", 3)),
        provenance=[p for p in prov.split(";") if p],
    )


def save_png(path, core_image: np.ndarray, meta: SidecarMeta):
    """Export the core raster with the quiet zone attached."""
    pad = meta.origin_px
    h, w = core_image.shape[:2]
    canvas = np.full((h + 2 * pad, w + 2 * pad, 3), 255, dtype=np.uint8)
    canvas[pad:pad + h, pad:pad + w] = core_image
    Image.fromarray(canvas).save(path)


def load_core(path, meta: SidecarMeta) -> np.ndarray:
    """Import a PNG and strip the quiet zone recorded in the sidecar."""
    img = np.asarray(Image.open(path).convert("RGB"))
    pad = meta.origin_px
    side = meta.m * meta.a
    if img.shape[0] < side + 2 * pad or img.shape[1] < side + 2 * pad:
        raise ValueError("image %s smaller than sidecar geometry" % (img.shape,))
    return img[pad:pad + side, pad:pad + side].copy()
