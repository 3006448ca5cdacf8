import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import entropy_bruteforce
from ppml_audit.data import dataset_from_arrays
from ppml_audit.errors import InputError
from ppml_audit.metrics import (compression_ratio, dataset_compression_ratios,
                                dataset_entropy, shannon_entropy)


class TestEntropy:
    def test_constant_image_zero(self):
        img = np.full((16, 16), 7, dtype=np.uint8)
        assert shannon_entropy(img) == 0.0

    def test_uniform_histogram_maximal(self):
        img = np.arange(256, dtype=np.uint8).reshape(16, 16)
        assert shannon_entropy(img) == pytest.approx(1.0)

    def test_two_symbol_half_half(self):
        img = np.zeros((16, 16), dtype=np.uint8)
        img[:8] = 255
        assert shannon_entropy(img) == pytest.approx(0.125)

    def test_color_channels_averaged(self):
        img = np.zeros((16, 16, 3), dtype=np.uint8)
        img[:8, :, 0] = 255  # one bit in channel 0, constant elsewhere
        assert shannon_entropy(img) == pytest.approx(0.125 / 3)

    def test_empty_rejected(self):
        with pytest.raises(InputError):
            shannon_entropy(np.zeros((0, 4), dtype=np.uint8))

    def test_permutation_invariant(self, rng):
        img = rng.integers(0, 256, size=(12, 12), dtype=np.uint8)
        shuffled = img.ravel().copy()
        rng.shuffle(shuffled)
        assert shannon_entropy(img) == pytest.approx(
            shannon_entropy(shuffled.reshape(12, 12)), abs=1e-12)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 31 - 1))
    def test_matches_bruteforce_and_stays_in_range(self, seed):
        rng = np.random.default_rng(seed)
        img = rng.integers(0, 256, size=(10, 10, 3), dtype=np.uint8)
        value = shannon_entropy(img)
        assert 0.0 <= value <= 1.0
        assert value == pytest.approx(entropy_bruteforce(img), abs=1e-9)

    def test_dataset_mean(self):
        constant = np.zeros((4, 8, 8, 1), dtype=np.uint8)
        ds = dataset_from_arrays(constant, [0, 0, 1, 1], constant[:1], [0],
                                 ["a", "b"])
        assert dataset_entropy(ds) == 0.0


class TestCompression:
    def test_raw_size_is_numerator(self):
        img = np.zeros((32, 32, 3), dtype=np.uint8)
        ratio = compression_ratio(img, "lossless")
        encoded = 32 * 32 * 3 / ratio
        assert encoded == pytest.approx(int(encoded))
        assert img.size == 3072

    def test_constant_image_highly_compressible(self):
        img = np.full((32, 32, 3), 128, dtype=np.uint8)
        assert compression_ratio(img, "lossless") > 5.0

    def test_noise_compresses_worse_than_constant(self, rng):
        noise = rng.integers(0, 256, size=(32, 32, 3), dtype=np.uint8)
        constant = np.full((32, 32, 3), 90, dtype=np.uint8)
        assert (compression_ratio(noise, "lossless")
                <= compression_ratio(constant, "lossless"))

    def test_unknown_codec_rejected(self):
        with pytest.raises(InputError):
            compression_ratio(np.zeros((8, 8, 1), dtype=np.uint8), "zip")

    def test_dataset_ratios_structure(self, balanced_dataset):
        out = dataset_compression_ratios(balanced_dataset)
        for codec in ("jpeg", "png"):
            assert out[codec]["ratio"] > 0
            assert out[codec]["inverse_ratio"] == pytest.approx(
                1.0 / out[codec]["ratio"])
            assert out[codec]["savings"] < 1.0
