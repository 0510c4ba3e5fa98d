"""Baseline JFIF emission and parsing.

Single interleaved scan, the standard (T.81 Annex K.3) Huffman tables,
no restart markers, no progressive mode. ``parse_jfif(emit_jfif(c))``
reproduces the quantized coefficient planes of ``c`` exactly; that is
the contract the rest of the toolkit relies on. Parsing targets streams
in this same baseline subset and raises :class:`DecodeError` otherwise.
"""

import struct

import numpy as np

from .codec import CodecConfig, CompressedImage, DecodeError
from .tables import QuantTableSet, zigzag_flatten, zigzag_unflatten

# T.81 Annex K.3 default Huffman specs: (BITS counts per code length 1..16,
# HUFFVAL symbol list).
DC_LUMA_SPEC = (
    (0, 1, 5, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0),
    tuple(range(12)),
)
DC_CHROMA_SPEC = (
    (0, 3, 1, 1, 1, 1, 1, 1, 1, 1, 1, 0, 0, 0, 0, 0),
    tuple(range(12)),
)
AC_LUMA_SPEC = (
    (0, 2, 1, 3, 3, 2, 4, 3, 5, 5, 4, 4, 0, 0, 1, 0x7D),
    (0x01, 0x02, 0x03, 0x00, 0x04, 0x11, 0x05, 0x12, 0x21, 0x31, 0x41, 0x06,
     0x13, 0x51, 0x61, 0x07, 0x22, 0x71, 0x14, 0x32, 0x81, 0x91, 0xA1, 0x08,
     0x23, 0x42, 0xB1, 0xC1, 0x15, 0x52, 0xD1, 0xF0, 0x24, 0x33, 0x62, 0x72,
     0x82, 0x09, 0x0A, 0x16, 0x17, 0x18, 0x19, 0x1A, 0x25, 0x26, 0x27, 0x28,
     0x29, 0x2A, 0x34, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44, 0x45,
     0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58, 0x59,
     0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74, 0x75,
     0x76, 0x77, 0x78, 0x79, 0x7A, 0x83, 0x84, 0x85, 0x86, 0x87, 0x88, 0x89,
     0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A, 0xA2, 0xA3,
     0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4, 0xB5, 0xB6,
     0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7, 0xC8, 0xC9,
     0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA, 0xE1, 0xE2,
     0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF1, 0xF2, 0xF3, 0xF4,
     0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA),
)
AC_CHROMA_SPEC = (
    (0, 2, 1, 2, 4, 4, 3, 4, 7, 5, 4, 4, 0, 1, 2, 0x77),
    (0x00, 0x01, 0x02, 0x03, 0x11, 0x04, 0x05, 0x21, 0x31, 0x06, 0x12, 0x41,
     0x51, 0x07, 0x61, 0x71, 0x13, 0x22, 0x32, 0x81, 0x08, 0x14, 0x42, 0x91,
     0xA1, 0xB1, 0xC1, 0x09, 0x23, 0x33, 0x52, 0xF0, 0x15, 0x62, 0x72, 0xD1,
     0x0A, 0x16, 0x24, 0x34, 0xE1, 0x25, 0xF1, 0x17, 0x18, 0x19, 0x1A, 0x26,
     0x27, 0x28, 0x29, 0x2A, 0x35, 0x36, 0x37, 0x38, 0x39, 0x3A, 0x43, 0x44,
     0x45, 0x46, 0x47, 0x48, 0x49, 0x4A, 0x53, 0x54, 0x55, 0x56, 0x57, 0x58,
     0x59, 0x5A, 0x63, 0x64, 0x65, 0x66, 0x67, 0x68, 0x69, 0x6A, 0x73, 0x74,
     0x75, 0x76, 0x77, 0x78, 0x79, 0x7A, 0x82, 0x83, 0x84, 0x85, 0x86, 0x87,
     0x88, 0x89, 0x8A, 0x92, 0x93, 0x94, 0x95, 0x96, 0x97, 0x98, 0x99, 0x9A,
     0xA2, 0xA3, 0xA4, 0xA5, 0xA6, 0xA7, 0xA8, 0xA9, 0xAA, 0xB2, 0xB3, 0xB4,
     0xB5, 0xB6, 0xB7, 0xB8, 0xB9, 0xBA, 0xC2, 0xC3, 0xC4, 0xC5, 0xC6, 0xC7,
     0xC8, 0xC9, 0xCA, 0xD2, 0xD3, 0xD4, 0xD5, 0xD6, 0xD7, 0xD8, 0xD9, 0xDA,
     0xE2, 0xE3, 0xE4, 0xE5, 0xE6, 0xE7, 0xE8, 0xE9, 0xEA, 0xF2, 0xF3, 0xF4,
     0xF5, 0xF6, 0xF7, 0xF8, 0xF9, 0xFA),
)


def _canonical_codes(spec):
    """(BITS, HUFFVAL) -> {symbol: (code, length)} per T.81 C.2."""
    bits, values = spec
    table = {}
    code = 0
    k = 0
    for length in range(1, 17):
        for _ in range(bits[length - 1]):
            table[values[k]] = (code, length)
            k += 1
            code += 1
        code <<= 1
    return table


def _decode_table(spec):
    """(BITS, HUFFVAL) -> {(length, code): symbol}."""
    return {(length, code): sym
            for sym, (code, length) in _canonical_codes(spec).items()}

ENC_DC = (_canonical_codes(DC_LUMA_SPEC), _canonical_codes(DC_CHROMA_SPEC))
ENC_AC = (_canonical_codes(AC_LUMA_SPEC), _canonical_codes(AC_CHROMA_SPEC))
DEC_DC = (_decode_table(DC_LUMA_SPEC), _decode_table(DC_CHROMA_SPEC))
DEC_AC = (_decode_table(AC_LUMA_SPEC), _decode_table(AC_CHROMA_SPEC))


def _magnitude_category(value: int) -> int:
    return int(value).bit_length() if value >= 0 else int(-value).bit_length()


class _BitWriter:
    def __init__(self):
        self.bytes = bytearray()
        self._acc = 0
        self._nbits = 0

    def write(self, code: int, length: int):
        self._acc = (self._acc << length) | (code & ((1 << length) - 1))
        self._nbits += length
        while self._nbits >= 8:
            self._nbits -= 8
            byte = (self._acc >> self._nbits) & 0xFF
            self.bytes.append(byte)
            if byte == 0xFF:
                self.bytes.append(0x00)
        self._acc &= (1 << self._nbits) - 1

    def flush(self):
        if self._nbits:
            pad = 8 - self._nbits
            self.write((1 << pad) - 1, pad)


class _BitReader:
    def __init__(self, data: bytes, pos: int):
        self.data = data
        self.pos = pos
        self._acc = 0
        self._nbits = 0

    def _fill(self):
        if self.pos >= len(self.data):
            raise DecodeError("unexpected end of entropy-coded data")
        byte = self.data[self.pos]
        self.pos += 1
        if byte == 0xFF:
            if self.pos >= len(self.data):
                raise DecodeError("truncated byte stuffing")
            marker = self.data[self.pos]
            if marker == 0x00:
                self.pos += 1
            else:
                raise DecodeError(f"marker 0xFF{marker:02X} inside scan")
        self._acc = (self._acc << 8) | byte
        self._nbits += 8

    def read_bit(self) -> int:
        if self._nbits == 0:
            self._fill()
        self._nbits -= 1
        return (self._acc >> self._nbits) & 1

    def read_bits(self, n: int) -> int:
        v = 0
        for _ in range(n):
            v = (v << 1) | self.read_bit()
        return v

    def read_symbol(self, table) -> int:
        code = 0
        for length in range(1, 17):
            code = (code << 1) | self.read_bit()
            sym = table.get((length, code))
            if sym is not None:
                return sym
        raise DecodeError("invalid Huffman code")


def _extend(value: int, category: int) -> int:
    if category == 0:
        return 0
    if value < (1 << (category - 1)):
        value -= (1 << category) - 1
    return value


def _encode_block(writer: _BitWriter, block: np.ndarray, pred: int,
                  dc_table, ac_table) -> int:
    coeffs = zigzag_flatten(block)
    dc = int(coeffs[0])
    diff = dc - pred
    cat = _magnitude_category(diff)
    code, length = dc_table[cat]
    writer.write(code, length)
    if cat:
        amp = diff if diff >= 0 else diff + (1 << cat) - 1
        writer.write(amp, cat)

    run = 0
    last_nonzero = int(np.max(np.nonzero(coeffs)[0])) if np.any(coeffs) else 0
    for k in range(1, 64):
        if k > last_nonzero:
            code, length = ac_table[0x00]  # EOB
            writer.write(code, length)
            break
        v = int(coeffs[k])
        if v == 0:
            run += 1
            continue
        while run >= 16:
            code, length = ac_table[0xF0]  # ZRL
            writer.write(code, length)
            run -= 16
        cat = _magnitude_category(v)
        code, length = ac_table[(run << 4) | cat]
        writer.write(code, length)
        amp = v if v >= 0 else v + (1 << cat) - 1
        writer.write(amp, cat)
        run = 0
    return dc


def _decode_block(reader: _BitReader, pred: int, dc_table, ac_table):
    coeffs = np.zeros(64, dtype=np.int32)
    cat = reader.read_symbol(dc_table)
    diff = _extend(reader.read_bits(cat), cat)
    dc = pred + diff
    coeffs[0] = dc
    k = 1
    while k < 64:
        rs = reader.read_symbol(ac_table)
        run, cat = rs >> 4, rs & 0x0F
        if cat == 0:
            if run == 15:
                k += 16
                continue
            break  # EOB
        k += run
        if k > 63:
            raise DecodeError("AC run overflows block")
        coeffs[k] = _extend(reader.read_bits(cat), cat)
        k += 1
    return zigzag_unflatten(coeffs), dc


def _mcu_layout(c: CompressedImage):
    """Per-component (sampling_h, sampling_v) and the MCU grid size."""
    if c.config.chroma_subsampling == "4:2:0":
        sampling = {"y": (2, 2), "cb": (1, 1), "cr": (1, 1)}
    else:
        sampling = {"y": (1, 1), "cb": (1, 1), "cr": (1, 1)}
    ybh, ybw = c.planes["y"].shape[:2]
    sh, sv = sampling["y"]
    mcus_w = (ybw + sh - 1) // sh
    mcus_h = (ybh + sv - 1) // sv
    return sampling, mcus_w, mcus_h


def _segment(marker: int, payload: bytes) -> bytes:
    return struct.pack(">BBH", 0xFF, marker, len(payload) + 2) + payload


def emit_jfif(c: CompressedImage) -> bytes:
    """Serialize quantized planes to a decodable baseline JFIF stream."""
    sampling, mcus_w, mcus_h = _mcu_layout(c)
    out = bytearray(b"\xff\xd8")  # SOI
    out += _segment(0xE0, b"JFIF\x00\x01\x01\x00\x00\x01\x00\x01\x00\x00")

    for table_id, table in ((0, c.tables.luma), (1, c.tables.chroma)):
        zz = zigzag_flatten(table).astype(np.uint8).tobytes()
        out += _segment(0xDB, bytes([table_id]) + zz)

    sof = bytearray([8])  # precision
    sof += struct.pack(">HH", c.height, c.width)
    sof.append(3)
    for comp_id, name, qtab in ((1, "y", 0), (2, "cb", 1), (3, "cr", 1)):
        sh, sv = sampling[name]
        sof += bytes([comp_id, (sh << 4) | sv, qtab])
    out += _segment(0xC0, bytes(sof))

    for tc_th, spec in ((0x00, DC_LUMA_SPEC), (0x01, DC_CHROMA_SPEC),
                        (0x10, AC_LUMA_SPEC), (0x11, AC_CHROMA_SPEC)):
        bits, values = spec
        out += _segment(0xC4, bytes([tc_th]) + bytes(bits) + bytes(values))

    sos = bytearray([3])
    for comp_id, tabs in ((1, 0x00), (2, 0x11), (3, 0x11)):
        sos += bytes([comp_id, tabs])
    sos += bytes([0, 63, 0])
    out += _segment(0xDA, bytes(sos))

    writer = _BitWriter()
    preds = {"y": 0, "cb": 0, "cr": 0}
    order = ("y", "cb", "cr")
    for my in range(mcus_h):
        for mx in range(mcus_w):
            for name in order:
                sh, sv = sampling[name]
                tab = 0 if name == "y" else 1
                plane = c.planes[name]
                bh, bw = plane.shape[:2]
                for dy in range(sv):
                    for dx in range(sh):
                        by, bx = my * sv + dy, mx * sh + dx
                        if by < bh and bx < bw:
                            block = plane[by, bx]
                        else:
                            block = np.zeros((8, 8), dtype=np.int32)
                        preds[name] = _encode_block(
                            writer, block, preds[name], ENC_DC[tab], ENC_AC[tab])
    writer.flush()
    out += writer.bytes
    out += b"\xff\xd9"  # EOI
    return bytes(out)


def _read_u16(data: bytes, pos: int) -> int:
    if pos + 2 > len(data):
        raise DecodeError("truncated stream")
    return struct.unpack_from(">H", data, pos)[0]


def parse_jfif(data: bytes) -> CompressedImage:
    """Parse a baseline JFIF stream back into coefficient planes."""
    if len(data) < 4 or data[:2] != b"\xff\xd8":
        raise DecodeError("missing SOI marker")
    pos = 2
    qtables: dict[int, np.ndarray] = {}
    frame = None  # (height, width, [(comp_id, sh, sv, qtab_id)])
    scan_comps = None

    while True:
        if pos + 2 > len(data):
            raise DecodeError("ran off end of stream before SOS")
        if data[pos] != 0xFF:
            raise DecodeError(f"expected marker at byte {pos}")
        marker = data[pos + 1]
        pos += 2
        if marker == 0xD9:
            raise DecodeError("EOI before scan data")
        if marker in (0x01, *range(0xD0, 0xD8)):
            continue  # standalone markers
        length = _read_u16(data, pos)
        payload = data[pos + 2:pos + length]
        if len(payload) != length - 2:
            raise DecodeError("truncated marker segment")
        pos += length

        if marker == 0xDB:
            p = 0
            while p < len(payload):
                pq, tq = payload[p] >> 4, payload[p] & 0x0F
                p += 1
                if pq != 0:
                    raise DecodeError("16-bit quant tables unsupported")
                if p + 64 > len(payload):
                    raise DecodeError("truncated DQT")
                qtables[tq] = zigzag_unflatten(
                    np.frombuffer(payload[p:p + 64], dtype=np.uint8).astype(np.int32))
                p += 64
        elif marker == 0xC0:
            if payload[0] != 8:
                raise DecodeError("only 8-bit precision supported")
            height = struct.unpack_from(">H", payload, 1)[0]
            width = struct.unpack_from(">H", payload, 3)[0]
            ncomp = payload[5]
            if ncomp != 3:
                raise DecodeError(f"expected 3 components, got {ncomp}")
            comps = []
            for i in range(ncomp):
                cid, hv, tq = payload[6 + 3 * i:9 + 3 * i]
                comps.append((cid, hv >> 4, hv & 0x0F, tq))
            frame = (height, width, comps)
        elif marker in (0xC1, 0xC2, 0xC3, 0xC5, 0xC6, 0xC7,
                        0xC9, 0xCA, 0xCB, 0xCD, 0xCE, 0xCF):
            raise DecodeError("only baseline sequential (SOF0) supported")
        elif marker == 0xC4:
            pass  # standard tables assumed; validated below
        elif marker == 0xDA:
            ncomp = payload[0]
            scan_comps = [(payload[1 + 2 * i], payload[2 + 2 * i])
                          for i in range(ncomp)]
            break
        # APPn / COM / others: skipped via length

    if frame is None:
        raise DecodeError("missing SOF0 before SOS")
    height, width, comps = frame
    if [cid for cid, *_ in comps] != [1, 2, 3]:
        raise DecodeError("unexpected component ids")
    samplings = {cid: (sh, sv) for cid, sh, sv, _ in comps}
    if samplings[2] != (1, 1) or samplings[3] != (1, 1):
        raise DecodeError("unsupported chroma sampling factors")
    if samplings[1] == (2, 2):
        subsampling = "4:2:0"
    elif samplings[1] == (1, 1):
        subsampling = "4:4:4"
    else:
        raise DecodeError("unsupported luma sampling factors")
    if 0 not in qtables or 1 not in qtables:
        raise DecodeError("missing quantization tables")

    cfg = CodecConfig(quality=None, chroma_subsampling=subsampling,
                      entropy_coding=True)
    tables = QuantTableSet(luma=qtables[0], chroma=qtables[1])

    names = {1: "y", 2: "cb", 3: "cr"}
    dims = {}
    for cid in (1, 2, 3):
        if cid == 1 or subsampling == "4:4:4":
            cw, ch = width, height
        else:
            cw, ch = (width + 1) // 2, (height + 1) // 2
        dims[cid] = ((ch + 7) // 8, (cw + 7) // 8)

    sh, sv = samplings[1]
    mcus_w = (dims[1][1] + sh - 1) // sh
    mcus_h = (dims[1][0] + sv - 1) // sv
    grids = {cid: np.zeros((mcus_h * s_v, mcus_w * s_h, 8, 8), dtype=np.int32)
             for cid, (s_h, s_v) in samplings.items()}

    reader = _BitReader(data, pos)
    preds = {1: 0, 2: 0, 3: 0}
    for my in range(mcus_h):
        for mx in range(mcus_w):
            for cid, dc_id_ac_id in scan_comps:
                tab = 0 if cid == 1 else 1
                s_h, s_v = samplings[cid]
                for dy in range(s_v):
                    for dx in range(s_h):
                        block, preds[cid] = _decode_block(
                            reader, preds[cid], DEC_DC[tab], DEC_AC[tab])
                        grids[cid][my * s_v + dy, mx * s_h + dx] = block

    planes = {names[cid]: grids[cid][:dims[cid][0], :dims[cid][1]]
              for cid in (1, 2, 3)}
    return CompressedImage(config=cfg, width=width, height=height,
                           tables=tables, planes=planes, bitstream=data)
