"""Tests for the PHI1 and PSI1 binary files.
"""

import os

import pytest

from stepup_ramsey.core import formats
from stepup_ramsey.core.base_coloring import PairColoring, random_pair_coloring
from stepup_ramsey.core.errors import FormatError
from stepup_ramsey.core.models import Color
from stepup_ramsey.core.stepup import QuadColoring


class TestPhiFormat:

    def test_exact_bytes(self):
        data = formats.encode_phi(PairColoring.constant(4, Color.RED))
        assert data == (b'PHI1' + b'\x01\x00' + b'\x04\x00\x00\x00'
                        + b'\x00' * 8 + b'\xfc')

    def test_file_round_trip(self, temp_dir):
        phi = random_pair_coloring(23, seed=77)
        path = os.path.join(temp_dir, 'phi.bin')
        formats.write_phi(path, phi)
        loaded = formats.read_phi(path)
        assert loaded == phi
        assert loaded.seed == 77
        assert formats.encode_phi(loaded) == formats.encode_phi(phi)

    def test_missing_seed_is_zero(self):
        data = formats.encode_phi(PairColoring.constant(3, Color.BLUE))
        assert formats.decode_phi(data).seed is None

    def test_bad_magic(self):
        data = formats.encode_phi(random_pair_coloring(5, seed=1))
        with pytest.raises(FormatError):
            formats.decode_phi(b'PHI2' + data[4:])

    def test_bad_version(self):
        data = formats.encode_phi(random_pair_coloring(5, seed=1))
        with pytest.raises(FormatError):
            formats.decode_phi(data[:4] + b'\x02\x00' + data[6:])

    def test_truncated(self):
        data = formats.encode_phi(random_pair_coloring(30, seed=1))
        with pytest.raises(FormatError):
            formats.decode_phi(data[:-1])
        with pytest.raises(FormatError):
            formats.decode_phi(data[:10])

    def test_nonzero_padding(self):
        data = formats.encode_phi(PairColoring.constant(4, Color.BLUE))
        with pytest.raises(FormatError):
            formats.decode_phi(data[:-1] + b'\x01')


class TestPsiFormat:

    def test_exact_bytes(self):
        data = formats.encode_psi(QuadColoring.constant(5, Color.RED))
        assert data == b'PSI1' + b'\x05\x00\x00\x00' + b'\xf8'

    def test_file_round_trip(self, temp_dir):
        psi = QuadColoring.random(9, seed=5)
        path = os.path.join(temp_dir, 'psi.bin')
        formats.write_psi(path, psi)
        assert formats.read_psi(path) == psi

    def test_bad_header(self):
        data = formats.encode_psi(QuadColoring.random(6, seed=2))
        with pytest.raises(FormatError):
            formats.decode_psi(b'PHI1' + data[4:])
        with pytest.raises(FormatError):
            formats.decode_psi(data[:-1])
        with pytest.raises(FormatError):
            formats.decode_psi(b'PSI1' + b'\x03\x00\x00\x00')
