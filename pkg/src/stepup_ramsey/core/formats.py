"""Binary file formats for the base colorings.

PHI1 stores a PairColoring: little-endian header (magic, version u16,
M u32, seed u64) followed by the strict upper triangle in row-major order
packed eight pairs per byte (most significant bit first, 1 = red).

PSI1 stores a QuadColoring: header (magic, M u32) followed by the colors
of the 4-subsets in colex order, packed the same way.
"""

import math
import struct

import numpy as np

from stepup_ramsey import PHI_FORMAT_VERSION
from stepup_ramsey.core.base_coloring import PairColoring
from stepup_ramsey.core.errors import FormatError

PHI_MAGIC = b'PHI1'
PSI_MAGIC = b'PSI1'
PHI_HEADER = struct.Struct('<4sHIQ')
PSI_HEADER = struct.Struct('<4sI')


def _pack(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def _unpack(payload: bytes, count: int, what: str) -> np.ndarray:
    expected = (count + 7) // 8
    if len(payload) != expected:
        raise FormatError(f'{what} payload has {len(payload)} bytes, '
                          f'expected {expected}')
    bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8))
    if bits[count:].any():
        raise FormatError(f'{what} padding bits must be zero')
    return bits[:count].astype(bool)


def encode_phi(phi: PairColoring) -> bytes:
    seed = phi.seed if phi.seed is not None else 0
    header = PHI_HEADER.pack(PHI_MAGIC, PHI_FORMAT_VERSION,
                             phi.ground_size, seed)
    return header + _pack(phi.upper_bits())


def decode_phi(data: bytes) -> PairColoring:
    if len(data) < PHI_HEADER.size:
        raise FormatError('PHI1 data shorter than its header')
    magic, version, ground_size, seed = PHI_HEADER.unpack_from(data)
    if magic != PHI_MAGIC:
        raise FormatError(f'Bad magic {magic!r}, expected {PHI_MAGIC!r}')
    if version != PHI_FORMAT_VERSION:
        raise FormatError(f'Unsupported PHI1 version {version}')
    if ground_size < 2:
        raise FormatError(f'PHI1 ground set too small: M={ground_size}')
    bits = _unpack(data[PHI_HEADER.size:], math.comb(ground_size, 2), 'PHI1')
    return PairColoring.from_upper_bits(ground_size, bits, seed=seed or None)


def write_phi(path, phi: PairColoring) -> None:
    with open(path, 'wb') as fdesc:
        fdesc.write(encode_phi(phi))


def read_phi(path) -> PairColoring:
    with open(path, 'rb') as fdesc:
        return decode_phi(fdesc.read())


def encode_psi(psi) -> bytes:
    return PSI_HEADER.pack(PSI_MAGIC, psi.ground_size) + _pack(psi.bits)


def decode_psi(data: bytes):
    from stepup_ramsey.core.stepup import QuadColoring  # pylint: disable=import-outside-toplevel
    if len(data) < PSI_HEADER.size:
        raise FormatError('PSI1 data shorter than its header')
    magic, ground_size = PSI_HEADER.unpack_from(data)
    if magic != PSI_MAGIC:
        raise FormatError(f'Bad magic {magic!r}, expected {PSI_MAGIC!r}')
    if ground_size < 4:
        raise FormatError(f'PSI1 ground set too small: M={ground_size}')
    bits = _unpack(data[PSI_HEADER.size:], math.comb(ground_size, 4), 'PSI1')
    return QuadColoring(ground_size, bits)


def write_psi(path, psi) -> None:
    with open(path, 'wb') as fdesc:
        fdesc.write(encode_psi(psi))


def read_psi(path):
    with open(path, 'rb') as fdesc:
        return decode_psi(fdesc.read())
