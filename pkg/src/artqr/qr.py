"""Standard QR symbol machinery: capacity tables, byte-mode encoding, matrix layout.

Conventions used throughout the package:
  * matrix ``bits`` store 1 = dark module (ISO placement: dark = codeword bit
    XOR mask condition),
  * logical codeword order is block-major (all data codewords, then all EC
    codewords); ``bit_map`` holds logical bit indices, MSB-first per byte,
  * the decode model's thresholding emits 1 = light, so the "white flag" of a
    module is ``1 - bits``.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityExceeded, FormatInfoError
from .rs import rs_encode

EC_LEVELS = ("L", "M", "Q", "H")
# format-information encoding of the level (ISO: L=01, M=00, Q=11, H=10)
EC_LEVEL_BITS = {"L": 1, "M": 0, "Q": 3, "H": 2}

# (count, total, data) triplets per version x level, L/M/Q/H order (ISO 18004)
RS_BLOCK_TABLE = [
    [1, 26, 19], [1, 26, 16], [1, 26, 13], [1, 26, 9],
    [1, 44, 34], [1, 44, 28], [1, 44, 22], [1, 44, 16],
    [1, 70, 55], [1, 70, 44], [2, 35, 17], [2, 35, 13],
    [1, 100, 80], [2, 50, 32], [2, 50, 24], [4, 25, 9],
    [1, 134, 108], [2, 67, 43], [2, 33, 15, 2, 34, 16], [2, 33, 11, 2, 34, 12],
    [2, 86, 68], [4, 43, 27], [4, 43, 19], [4, 43, 15],
    [2, 98, 78], [4, 49, 31], [2, 32, 14, 4, 33, 15], [4, 39, 13, 1, 40, 14],
    [2, 121, 97], [2, 60, 38, 2, 61, 39], [4, 40, 18, 2, 41, 19], [4, 40, 14, 2, 41, 15],
    [2, 146, 116], [3, 58, 36, 2, 59, 37], [4, 36, 16, 4, 37, 17], [4, 36, 12, 4, 37, 13],
    [2, 86, 68, 2, 87, 69], [4, 69, 43, 1, 70, 44], [6, 43, 19, 2, 44, 20], [6, 43, 15, 2, 44, 16],
    [4, 101, 81], [1, 80, 50, 4, 81, 51], [4, 50, 22, 4, 51, 23], [3, 36, 12, 8, 37, 13],
    [2, 116, 92, 2, 117, 93], [6, 58, 36, 2, 59, 37], [4, 46, 20, 6, 47, 21], [7, 42, 14, 4, 43, 15],
    [4, 133, 107], [8, 59, 37, 1, 60, 38], [8, 44, 20, 4, 45, 21], [12, 33, 11, 4, 34, 12],
    [3, 145, 115, 1, 146, 116], [4, 64, 40, 5, 65, 41], [11, 36, 16, 5, 37, 17], [11, 36, 12, 5, 37, 13],
    [5, 109, 87, 1, 110, 88], [5, 65, 41, 5, 66, 42], [5, 54, 24, 7, 55, 25], [11, 36, 12],
    [5, 122, 98, 1, 123, 99], [7, 73, 45, 3, 74, 46], [15, 43, 19, 2, 44, 20], [3, 45, 15, 13, 46, 16],
    [1, 135, 107, 5, 136, 108], [10, 74, 46, 1, 75, 47], [1, 50, 22, 15, 51, 23], [2, 42, 14, 17, 43, 15],
    [5, 150, 120, 1, 151, 121], [9, 69, 43, 4, 70, 44], [17, 50, 22, 1, 51, 23], [2, 42, 14, 19, 43, 15],
    [3, 141, 113, 4, 142, 114], [3, 70, 44, 11, 71, 45], [17, 47, 21, 4, 48, 22], [9, 39, 13, 16, 40, 14],
    [3, 135, 107, 5, 136, 108], [3, 67, 41, 13, 68, 42], [15, 54, 24, 5, 55, 25], [15, 43, 15, 10, 44, 16],
    [4, 144, 116, 4, 145, 117], [17, 68, 42], [17, 50, 22, 6, 51, 23], [19, 46, 16, 6, 47, 17],
    [2, 139, 111, 7, 140, 112], [17, 74, 46], [7, 54, 24, 16, 55, 25], [34, 37, 13],
    [4, 151, 121, 5, 152, 122], [4, 75, 47, 14, 76, 48], [11, 54, 24, 14, 55, 25], [16, 45, 15, 14, 46, 16],
    [6, 147, 117, 4, 148, 118], [6, 73, 45, 14, 74, 46], [11, 54, 24, 16, 55, 25], [30, 46, 16, 2, 47, 17],
    [8, 132, 106, 4, 133, 107], [8, 75, 47, 13, 76, 48], [7, 54, 24, 22, 55, 25], [22, 45, 15, 13, 46, 16],
    [10, 142, 114, 2, 143, 115], [19, 74, 46, 4, 75, 47], [28, 50, 22, 6, 51, 23], [33, 46, 16, 4, 47, 17],
    [8, 152, 122, 4, 153, 123], [22, 73, 45, 3, 74, 46], [8, 53, 23, 26, 54, 24], [12, 45, 15, 28, 46, 16],
    [3, 147, 117, 10, 148, 118], [3, 73, 45, 23, 74, 46], [4, 54, 24, 31, 55, 25], [11, 45, 15, 31, 46, 16],
    [7, 146, 116, 7, 147, 117], [21, 73, 45, 7, 74, 46], [1, 53, 23, 37, 54, 24], [19, 45, 15, 26, 46, 16],
    [5, 145, 115, 10, 146, 116], [19, 75, 47, 10, 76, 48], [15, 54, 24, 25, 55, 25], [23, 45, 15, 25, 46, 16],
    [13, 145, 115, 3, 146, 116], [2, 74, 46, 29, 75, 47], [42, 54, 24, 1, 55, 25], [23, 45, 15, 28, 46, 16],
    [17, 145, 115], [10, 74, 46, 23, 75, 47], [10, 54, 24, 35, 55, 25], [19, 45, 15, 35, 46, 16],
    [17, 145, 115, 1, 146, 116], [14, 74, 46, 21, 75, 47], [29, 54, 24, 19, 55, 25], [11, 45, 15, 46, 46, 16],
    [13, 145, 115, 6, 146, 116], [14, 74, 46, 23, 75, 47], [44, 54, 24, 7, 55, 25], [59, 46, 16, 1, 47, 17],
    [12, 151, 121, 7, 152, 122], [12, 75, 47, 26, 76, 48], [39, 54, 24, 14, 55, 25], [22, 45, 15, 41, 46, 16],
    [6, 151, 121, 14, 152, 122], [6, 75, 47, 34, 76, 48], [46, 54, 24, 10, 55, 25], [2, 45, 15, 64, 46, 16],
    [17, 152, 122, 4, 153, 123], [29, 74, 46, 14, 75, 47], [49, 54, 24, 10, 55, 25], [24, 45, 15, 46, 46, 16],
    [4, 152, 122, 18, 153, 123], [13, 74, 46, 32, 75, 47], [48, 54, 24, 14, 55, 25], [42, 45, 15, 32, 46, 16],
    [20, 147, 117, 4, 148, 118], [40, 75, 47, 7, 76, 48], [43, 54, 24, 22, 55, 25], [10, 45, 15, 67, 46, 16],
    [19, 148, 118, 6, 149, 119], [18, 75, 47, 31, 76, 48], [34, 54, 24, 34, 55, 25], [20, 45, 15, 61, 46, 16],
]

ALIGNMENT_POSITIONS = [
    [], [6, 18], [6, 22], [6, 26], [6, 30], [6, 34],
    [6, 22, 38], [6, 24, 42], [6, 26, 46], [6, 28, 50], [6, 30, 54], [6, 32, 58], [6, 34, 62],
    [6, 26, 46, 66], [6, 26, 48, 70], [6, 26, 50, 74], [6, 30, 54, 78], [6, 30, 56, 82],
    [6, 30, 58, 86], [6, 34, 62, 90],
    [6, 28, 50, 72, 94], [6, 26, 50, 74, 98], [6, 30, 54, 78, 102], [6, 28, 54, 80, 106],
    [6, 32, 58, 84, 110], [6, 30, 58, 86, 114], [6, 34, 62, 90, 118],
    [6, 26, 50, 74, 98, 122], [6, 30, 54, 78, 102, 126], [6, 26, 52, 78, 104, 130],
    [6, 30, 56, 82, 108, 134], [6, 34, 60, 86, 112, 138], [6, 30, 58, 86, 114, 142],
    [6, 34, 62, 90, 118, 146],
    [6, 30, 54, 78, 102, 126, 150], [6, 24, 50, 76, 102, 128, 154],
    [6, 28, 54, 80, 106, 132, 158], [6, 32, 58, 84, 110, 136, 162],
    [6, 26, 54, 82, 110, 138, 166], [6, 30, 58, 86, 114, 142, 170],
]

# module roles
ROLE_FINDER = 0
ROLE_SEPARATOR = 1
ROLE_TIMING = 2
ROLE_ALIGNMENT = 3
ROLE_FORMAT = 4
ROLE_DARK = 5
ROLE_VERSION_INFO = 6
ROLE_DATA = 7
ROLE_REMAINDER = 8

ROLE_NAMES = {
    ROLE_FINDER: "finder", ROLE_SEPARATOR: "separator", ROLE_TIMING: "timing",
    ROLE_ALIGNMENT: "alignment", ROLE_FORMAT: "format", ROLE_DARK: "dark-module",
    ROLE_VERSION_INFO: "version-info", ROLE_DATA: "data-ec", ROLE_REMAINDER: "remainder",
}

_G15 = 0b10100110111
_G15_MASK = 0x5412
_G18 = 0b1111100100101

_MASK_FUNCS = (
    lambda r, c: (r + c) % 2 == 0,
    lambda r, c: r % 2 == 0,
    lambda r, c: c % 3 == 0,
    lambda r, c: (r + c) % 3 == 0,
    lambda r, c: (r // 2 + c // 3) % 2 == 0,
    lambda r, c: (r * c) % 2 + (r * c) % 3 == 0,
    lambda r, c: ((r * c) % 2 + (r * c) % 3) % 2 == 0,
    lambda r, c: ((r * c) % 3 + (r + c) % 2) % 2 == 0,
)


def matrix_size(version: int) -> int:
    return 17 + 4 * version


def rs_blocks(version: int, ec_level: str):
    """(total, data) per block, in block order."""
    row = RS_BLOCK_TABLE[(version - 1) * 4 + EC_LEVELS.index(ec_level)]
    blocks = []
    for i in range(0, len(row), 3):
        count, total, data = row[i:i + 3]
        blocks.extend([(total, data)] * count)
    return blocks


def data_capacity_bytes(version: int, ec_level: str) -> int:
    return sum(d for _, d in rs_blocks(version, ec_level))


def _bch(value: int, poly: int, shift: int) -> int:
    d = value << shift
    while d.bit_length() >= poly.bit_length():
        d ^= poly << (d.bit_length() - poly.bit_length())
    return (value << shift) | d


def format_info_bits(ec_level: str, mask_index: int) -> int:
    """15-bit BCH(15,5)-protected format field, XOR-masked with 0x5412."""
    return _bch((EC_LEVEL_BITS[ec_level] << 3) | mask_index, _G15, 10) ^ _G15_MASK


@lru_cache(maxsize=1)
def _format_codewords():
    table = {}
    for level in EC_LEVELS:
        for mask in range(8):
            table[format_info_bits(level, mask)] = (level, mask)
    return table


def decode_format_bits(candidate: int):
    """Nearest format codeword within Hamming distance 3, or None."""
    best = None
    for word, meta in _format_codewords().items():
        dist = bin(candidate ^ word).count("1")
        if dist <= 3 and (best is None or dist < best[0]):
            best = (dist, meta)
    return None if best is None else best[1]


def version_info_bits(version: int) -> int:
    return _bch(version, _G18, 12)


@dataclass
class CodewordFrame:
    """A complete RS frame: logical data bytes, EC bytes, and pad-slack bits.

    ``free_bit_positions`` are bit indices (MSB-first within each data byte)
    that lie after the terminator; their values may be rewritten freely
    without breaking the encoded message.
    """
    version: int
    ec_level: str
    data: bytes
    ec: bytes
    free_bit_positions: tuple = field(default_factory=tuple)

    @property
    def total_codewords(self) -> int:
        return len(self.data) + len(self.ec)

    @property
    def total_bits(self) -> int:
        return self.total_codewords * 8

    def logical_bytes(self) -> bytes:
        return self.data + self.ec

    def logical_bits(self) -> np.ndarray:
        return np.unpackbits(np.frombuffer(self.logical_bytes(), dtype=np.uint8))


def _encode_blocks(data: bytes, version: int, ec_level: str) -> bytes:
    blocks = rs_blocks(version, ec_level)
    ec_parts = []
    offset = 0
    for total, dlen in blocks:
        chunk = data[offset:offset + dlen]
        ec_parts.append(bytes(rs_encode(list(chunk), total - dlen)))
        offset += dlen
    return b"".join(ec_parts)


def encode_message(payload: bytes, version: int = 5, ec_level: str = "L") -> CodewordFrame:
    """Byte-mode encoding: mode 0100, length field, payload, terminator, pads."""
    if isinstance(payload, str):
        payload = payload.encode("utf-8")
    capacity = data_capacity_bytes(version, ec_level)
    count_bits = 8 if version < 10 else 16
    used = 4 + count_bits + 8 * len(payload)
    if used > capacity * 8:
        raise CapacityExceeded(
            "payload of %d bytes exceeds v%d-%s byte-mode capacity" % (len(payload), version, ec_level))

    bits = []
    def put(value, width):
        bits.extend((value >> (width - 1 - i)) & 1 for i in range(width))

    put(0b0100, 4)
    put(len(payload), count_bits)
    for b in payload:
        put(b, 8)
    terminator = min(4, capacity * 8 - len(bits))
    put(0, terminator)
    free_start = len(bits)

    while len(bits) % 8:
        bits.append(0)
    pads = (0xEC, 0x11)
    i = 0
    while len(bits) < capacity * 8:
        put(pads[i % 2], 8)
        i += 1

    data = np.packbits(np.array(bits, dtype=np.uint8)).tobytes()
    ec = _encode_blocks(data, version, ec_level)
    return CodewordFrame(version, ec_level, data, ec,
                         tuple(range(free_start, capacity * 8)))


def frame_from_bytes(data: bytes, version: int, ec_level: str) -> CodewordFrame:
    """Rebuild a frame (with recomputed EC and parsed free bits) from data bytes."""
    capacity = data_capacity_bytes(version, ec_level)
    if len(data) != capacity:
        raise ValueError("expected %d data bytes, got %d" % (capacity, len(data)))
    ec = _encode_blocks(data, version, ec_level)
    return CodewordFrame(version, ec_level, bytes(data), ec, _parse_free_bits(data, version))


def _parse_free_bits(data: bytes, version: int) -> tuple:
    # recover the pad-slack region from the byte-mode header; a frame whose
    # header is not byte mode gets no free bits
    bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
    mode = int(bits[0]) << 3 | int(bits[1]) << 2 | int(bits[2]) << 1 | int(bits[3])
    if mode != 0b0100:
        return ()
    count_bits = 8 if version < 10 else 16
    length = 0
    for b in bits[4:4 + count_bits]:
        length = (length << 1) | int(b)
    used = 4 + count_bits + 8 * length
    total = len(data) * 8
    if used > total:
        return ()
    free_start = min(used + 4, total)
    return tuple(range(free_start, total))


@lru_cache(maxsize=8)
def _interleave_order(version: int, ec_level: str):
    """Placement sequence: for each transmitted byte, its logical byte index."""
    blocks = rs_blocks(version, ec_level)
    data_lens = [d for _, d in blocks]
    ec_lens = [t - d for t, d in blocks]
    data_starts = np.concatenate([[0], np.cumsum(data_lens)])[:-1]
    ec_base = int(sum(data_lens))
    ec_starts = np.concatenate([[0], np.cumsum(ec_lens)])[:-1] + ec_base
    order = []
    for i in range(max(data_lens)):
        for b, dlen in enumerate(data_lens):
            if i < dlen:
                order.append(int(data_starts[b]) + i)
    for i in range(max(ec_lens)):
        for b, elen in enumerate(ec_lens):
            if i < elen:
                order.append(int(ec_starts[b]) + i)
    return tuple(order)


@lru_cache(maxsize=8)
def symbol_layout(version: int):
    """Static layout for a version: (role array, zig-zag placement order).

    Remainder positions (placed after the last codeword bit) get their own
    role and never carry a codeword bit.
    """
    m = matrix_size(version)
    role = np.full((m, m), -1, dtype=np.int8)

    for r0, c0 in ((0, 0), (0, m - 7), (m - 7, 0)):
        for dr in range(-1, 8):
            for dc in range(-1, 8):
                r, c = r0 + dr, c0 + dc
                if not (0 <= r < m and 0 <= c < m):
                    continue
                inside = 0 <= dr <= 6 and 0 <= dc <= 6
                role[r, c] = ROLE_FINDER if inside else ROLE_SEPARATOR

    # format info around the top-left finder and split along the other two
    for r, c in _format_positions(m, 0) + _format_positions(m, 1):
        role[r, c] = ROLE_FORMAT
    role[m - 8, 8] = ROLE_DARK

    if version >= 7:
        for r in range(6):
            for c in range(3):
                role[r, m - 11 + c] = ROLE_VERSION_INFO
                role[m - 11 + c, r] = ROLE_VERSION_INFO

    for r in range(m):
        if role[r, 6] == -1:
            role[r, 6] = ROLE_TIMING
    for c in range(m):
        if role[6, c] == -1:
            role[6, c] = ROLE_TIMING

    positions = ALIGNMENT_POSITIONS[version - 1]
    for cr in positions:
        for cc in positions:
            if role[cr, cc] in (ROLE_FINDER, ROLE_SEPARATOR):
                continue
            for dr in range(-2, 3):
                for dc in range(-2, 3):
                    role[cr + dr, cc + dc] = ROLE_ALIGNMENT

    # zig-zag placement over unassigned cells
    placement = []
    col = m - 1
    upward = True
    while col > 0:
        if col == 6:
            col -= 1
        rows = range(m - 1, -1, -1) if upward else range(m)
        for r in rows:
            for c in (col, col - 1):
                if role[r, c] == -1:
                    placement.append((r, c))
        upward = not upward
        col -= 2

    blocks = rs_blocks(version, "L")  # total codeword count is level-independent
    total_bits = sum(t for t, _ in blocks) * 8
    for s, (r, c) in enumerate(placement):
        role[r, c] = ROLE_DATA if s < total_bits else ROLE_REMAINDER
    role.setflags(write=False)
    return role, tuple(placement)


def _format_positions(m: int, copy: int):
    # bit i of the 15-bit format field, i = 0 (LSB) first
    pos = []
    for i in range(15):
        if copy == 0:
            if i < 6:
                pos.append((i, 8))
            elif i < 8:
                pos.append((i + 1, 8))
            else:
                pos.append((m - 15 + i, 8))
        else:
            if i < 8:
                pos.append((8, m - 1 - i))
            elif i < 9:
                pos.append((8, 15 - i))
            else:
                pos.append((8, 14 - i))
    return pos


@lru_cache(maxsize=8)
def _bit_map(version: int, ec_level: str) -> np.ndarray:
    """Logical codeword bit index per data module (-1 for everything else)."""
    role, placement = symbol_layout(version)
    m = role.shape[0]
    order = _interleave_order(version, ec_level)
    total_bits = len(order) * 8
    bm = np.full((m, m), -1, dtype=np.int32)
    for s, (r, c) in enumerate(placement):
        if s >= total_bits:
            break
        bm[r, c] = order[s // 8] * 8 + (s % 8)
    bm.setflags(write=False)
    return bm


@dataclass
class QrMatrix:
    """Module grid of one symbol: dark bits plus role and codeword-bit maps."""
    version: int
    ec_level: str
    mask_index: int
    bits: np.ndarray        # (m, m) uint8, 1 = dark
    role: np.ndarray        # (m, m) int8
    bit_map: np.ndarray     # (m, m) int32, logical bit index or -1

    @property
    def m(self) -> int:
        return self.bits.shape[0]

    def data_modules(self) -> np.ndarray:
        return self.role == ROLE_DATA

    def function_modules(self) -> np.ndarray:
        return (self.role != ROLE_DATA) & (self.role != ROLE_REMAINDER)

    def white_flags(self) -> np.ndarray:
        """Per-module thresholding target: 1 = light, matching the decode model."""
        return (1 - self.bits).astype(np.uint8)


def mask_condition(version: int, mask_index: int) -> np.ndarray:
    m = matrix_size(version)
    rr, cc = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    fn = _MASK_FUNCS[mask_index]
    return fn(rr, cc)


def _function_pattern_bits(version: int) -> np.ndarray:
    role, _ = symbol_layout(version)
    m = role.shape[0]
    dark = np.zeros((m, m), dtype=np.uint8)

    for r0, c0 in ((0, 0), (0, m - 7), (m - 7, 0)):
        for dr in range(7):
            for dc in range(7):
                edge = dr in (0, 6) or dc in (0, 6)
                core = 2 <= dr <= 4 and 2 <= dc <= 4
                dark[r0 + dr, c0 + dc] = 1 if (edge or core) else 0

    timing = role == ROLE_TIMING
    rr, cc = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    dark[timing] = ((rr + cc)[timing] % 2 == 0).astype(np.uint8)

    positions = ALIGNMENT_POSITIONS[version - 1]
    for cr in positions:
        for cc_ in positions:
            if role[cr, cc_] != ROLE_ALIGNMENT:
                continue
            for dr in range(-2, 3):
                for dc in range(-2, 3):
                    ring = max(abs(dr), abs(dc)) in (0, 2)
                    dark[cr + dr, cc_ + dc] = 1 if ring else 0

    dark[m - 8, 8] = 1

    if version >= 7:
        vbits = version_info_bits(version)
        for i in range(18):
            bit = (vbits >> i) & 1
            dark[i // 3, m - 11 + i % 3] = bit
            dark[m - 11 + i % 3, i // 3] = bit
    return dark


def build_matrix(frame: CodewordFrame, mask_index: int = 0) -> QrMatrix:
    """Place a frame into a masked symbol matrix with format information."""
    version, level = frame.version, frame.ec_level
    role, placement = symbol_layout(version)
    m = role.shape[0]
    dark = _function_pattern_bits(version).copy()

    fmt = format_info_bits(level, mask_index)
    for copy in (0, 1):
        for i, (r, c) in enumerate(_format_positions(m, copy)):
            dark[r, c] = (fmt >> i) & 1

    order = _interleave_order(version, level)
    logical = frame.logical_bits()
    total_bits = len(logical)
    fn = _MASK_FUNCS[mask_index]
    for s, (r, c) in enumerate(placement):
        if s < total_bits:
            bit = int(logical[order[s // 8] * 8 + s % 8])
        else:
            bit = 0
        dark[r, c] = bit ^ (1 if fn(r, c) else 0)

    return QrMatrix(version, level, mask_index, dark, role.copy(), _bit_map(version, level).copy())


def read_format_info(bits: np.ndarray):
    """Decode (ec_level, mask_index) from either raster copy, BCH-corrected."""
    m = bits.shape[0]
    for copy in (0, 1):
        candidate = 0
        for i, (r, c) in enumerate(_format_positions(m, copy)):
            candidate |= int(bits[r, c]) << i
        meta = decode_format_bits(candidate)
        if meta is not None:
            return meta
    raise FormatInfoError("format information unreadable in both copies")


def read_matrix(matrix: QrMatrix) -> CodewordFrame:
    """Inverse of build_matrix: unmask the data region and reassemble codewords.

    The mask index and EC level are taken from the raster's format
    information, not from the dataclass fields, mirroring a real decoder.
    """
    level, mask_index = read_format_info(matrix.bits)
    version = matrix.version
    _, placement = symbol_layout(version)
    order = _interleave_order(version, level)
    total_bits = len(order) * 8
    logical = np.zeros(total_bits, dtype=np.uint8)
    fn = _MASK_FUNCS[mask_index]
    for s, (r, c) in enumerate(placement):
        if s >= total_bits:
            break
        bit = int(matrix.bits[r, c]) ^ (1 if fn(r, c) else 0)
        logical[order[s // 8] * 8 + s % 8] = bit
    all_bytes = np.packbits(logical).tobytes()
    data_len = data_capacity_bytes(version, level)
    data, ec = all_bytes[:data_len], all_bytes[data_len:]
    return CodewordFrame(version, level, data, ec, _parse_free_bits(data, version))
