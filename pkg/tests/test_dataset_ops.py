import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import clipped_normal_mean_quadrature
from ppml_audit.data import (clipped_normal_factors, dataset_from_arrays,
                             imbalance_linear, imbalance_normal,
                             linear_imbalance_sizes, reduce_class_count,
                             reduce_class_size, to_grayscale)
from ppml_audit.errors import InputError
from ppml_audit.rng import derive_rng


def balanced(num_classes=4, per_class=30, names=None):
    rng = np.random.default_rng(0)
    n = num_classes * per_class
    images = rng.integers(0, 256, size=(n, 8, 8, 3), dtype=np.uint8)
    labels = np.repeat(np.arange(num_classes), per_class)
    test_images = rng.integers(0, 256, size=(num_classes * 5, 8, 8, 3),
                               dtype=np.uint8)
    test_labels = np.repeat(np.arange(num_classes), 5)
    names = names or [f"c{i}" for i in range(num_classes)]
    return dataset_from_arrays(images, labels, test_images, test_labels, names)


class TestGrayscale:
    def test_pure_colors(self):
        img = np.zeros((1, 1, 3, 3), dtype=np.uint8)
        img[0, 0, 0] = (255, 255, 255)   # white
        img[0, 0, 1] = (255, 0, 0)       # red
        img[0, 0, 2] = (0, 0, 0)         # black
        ds = dataset_from_arrays(img, [0], img.copy(), [0], ["a", "b"])
        gray = to_grayscale(ds)
        assert gray.train_images[0, 0, :, 0].tolist() == [255, 76, 0]

    def test_both_splits_converted(self, balanced_dataset):
        gray = to_grayscale(balanced_dataset)
        assert gray.train_images.shape[-1] == 1
        assert gray.test_images.shape[-1] == 1
        assert np.array_equal(gray.test_labels, balanced_dataset.test_labels)

    def test_already_gray_warns_and_passes_through(self, balanced_dataset):
        gray = to_grayscale(balanced_dataset)
        with pytest.warns(UserWarning):
            again = to_grayscale(gray)
        assert again is gray


class TestReduceClassSize:
    def test_exact_target_counts(self):
        ds = reduce_class_size(balanced(per_class=30), 12, seed=42)
        assert np.all(ds.class_histogram("train") == 12)

    def test_test_split_untouched(self):
        src = balanced()
        ds = reduce_class_size(src, 12, seed=42)
        assert np.array_equal(ds.test_images, src.test_images)
        assert np.array_equal(ds.test_labels, src.test_labels)

    def test_target_equal_to_size_keeps_everything(self):
        src = balanced(per_class=10)
        ds = reduce_class_size(src, 10, seed=42)
        assert np.array_equal(np.sort(ds.train_labels), np.sort(src.train_labels))
        assert ds.train_images.shape == src.train_images.shape

    def test_small_class_rejected_by_name(self):
        with pytest.raises(InputError, match="c1"):
            reduce_class_size(balanced(per_class=10), 11)

    def test_deterministic(self):
        a = reduce_class_size(balanced(), 7, seed=42)
        b = reduce_class_size(balanced(), 7, seed=42)
        assert np.array_equal(a.train_images, b.train_images)


class TestReduceClassCount:
    def test_alphanumeric_digit_labels(self):
        ds = balanced(num_classes=10, per_class=4,
                      names=[str(i) for i in range(10)])
        out = reduce_class_count(ds, 3)
        assert out.class_names == ("0", "1", "2")
        assert set(out.train_labels.tolist()) == {0, 1, 2}

    def test_alphanumeric_word_labels(self):
        ds = balanced(num_classes=4, per_class=4,
                      names=["dog", "ant", "cat", "bee"])
        out = reduce_class_count(ds, 3)
        # sorted: ant, bee, cat; kept ids re-indexed in original id order
        assert out.class_names == ("ant", "cat", "bee")

    def test_test_split_filtered_too(self):
        ds = balanced(num_classes=5, per_class=4)
        out = reduce_class_count(ds, 3)
        assert out.test_labels.max() == 2
        assert out.test_images.shape[0] == 15  # 3 of 5 classes x 5 samples

    def test_keep_all_classes_unchanged(self):
        ds = balanced(num_classes=4)
        out = reduce_class_count(ds, 4)
        assert np.array_equal(out.train_images, ds.train_images)

    def test_bounds_enforced(self):
        ds = balanced(num_classes=4)
        with pytest.raises(InputError):
            reduce_class_count(ds, 2)
        with pytest.raises(InputError):
            reduce_class_count(ds, 5)


class TestLinearImbalance:
    def test_closed_form_strong_skew(self):
        sizes = linear_imbalance_sizes(5000, 10, 0.9)
        assert sizes.tolist() == [500, 1000, 1500, 2000, 2500, 3000, 3500,
                                  4000, 4500, 5000]

    def test_closed_form_mild_skew(self):
        sizes = linear_imbalance_sizes(5000, 10, 0.3)
        assert sizes.tolist() == [3500, 3667, 3833, 4000, 4167, 4333, 4500,
                                  4667, 4833, 5000]

    def test_zero_factor_keeps_dataset(self):
        src = balanced()
        out = imbalance_linear(src, 0.0)
        assert out is src

    def test_histogram_matches_closed_form(self):
        src = balanced(num_classes=4, per_class=30)
        out = imbalance_linear(src, 0.5, seed=42)
        expected = linear_imbalance_sizes(30, 4, 0.5)
        assert np.array_equal(out.class_histogram("train"), expected)

    def test_sizes_strictly_increase_even_with_rounding_collisions(self):
        # step below 1 forces collisions that must resolve to distinct sizes
        sizes = linear_imbalance_sizes(100, 8, 0.02)
        assert all(b > a for a, b in zip(sizes, sizes[1:]))
        assert sizes[-1] == 100

    def test_largest_class_keeps_base_size(self):
        for factor in (0.1, 0.3, 0.6, 0.9):
            assert linear_imbalance_sizes(5000, 10, factor)[-1] == 5000

    def test_unbalanced_input_rejected(self):
        src = balanced()
        skewed = imbalance_linear(src, 0.5, seed=1)
        with pytest.raises(InputError):
            imbalance_linear(skewed, 0.5, seed=1)

    def test_single_class_rejected(self):
        with pytest.raises(InputError):
            linear_imbalance_sizes(100, 1, 0.5)


class TestNormalImbalance:
    def test_zero_factor_degenerate(self):
        src = balanced()
        out = imbalance_normal(src, 0.0, seed=42)
        assert np.array_equal(out.class_histogram("train"),
                              src.class_histogram("train"))

    def test_factors_respect_clipping_bounds(self):
        rng = derive_rng(42, "test_factors", factor=0.9)
        factors = clipped_normal_factors(0.9, 10_000, rng)
        assert factors.min() >= 0.05
        assert factors.max() <= 1.0

    def test_empirical_mean_matches_quadrature(self):
        """10k draws vs the numerically integrated clipped-normal mean."""
        rng = derive_rng(42, "test_mean", factor=0.9)
        factors = clipped_normal_factors(0.9, 10_000, rng)
        oracle = clipped_normal_mean_quadrature(0.1, 0.9, 0.05, 1.0)
        assert abs(factors.mean() - oracle) / oracle < 0.02

    def test_class_sizes_inside_bounds(self):
        src = balanced(num_classes=6, per_class=40)
        out = imbalance_normal(src, 0.7, seed=42)
        hist = out.class_histogram("train")
        assert np.all(hist >= round(0.05 * 40))
        assert np.all(hist <= 40)

    def test_deterministic(self):
        a = imbalance_normal(balanced(), 0.6, seed=42)
        b = imbalance_normal(balanced(), 0.6, seed=42)
        assert np.array_equal(a.train_images, b.train_images)


@settings(max_examples=20, deadline=None)
@given(st.integers(min_value=2, max_value=12),
       st.floats(min_value=0.0, max_value=1.0),
       st.integers(min_value=50, max_value=5000))
def test_linear_sizes_bounded_and_monotone(num_classes, factor, base):
    sizes = linear_imbalance_sizes(base, num_classes, factor)
    assert sizes[-1] == base
    assert np.all(sizes >= 1)
    assert np.all(np.diff(sizes) >= 0)
    if factor > 0:
        assert np.all(np.diff(sizes) >= 1)


def test_operators_never_touch_test_split(balanced_dataset):
    """Removal operators leave the test split alone; only the class-count
    reduction may filter it."""
    for op in (lambda d: reduce_class_size(d, 5, seed=1),
               lambda d: imbalance_linear(d, 0.4, seed=1),
               lambda d: imbalance_normal(d, 0.4, seed=1)):
        out = op(balanced_dataset)
        assert np.array_equal(out.test_images, balanced_dataset.test_images)
        assert np.array_equal(out.test_labels, balanced_dataset.test_labels)


def test_histograms_sum_to_split_sizes(balanced_dataset):
    for op in (lambda d: reduce_class_size(d, 5, seed=1),
               lambda d: reduce_class_count(d, 3),
               lambda d: imbalance_linear(d, 0.7, seed=1),
               lambda d: imbalance_normal(d, 0.7, seed=1)):
        out = op(balanced_dataset)
        assert out.class_histogram("train").sum() == out.train_images.shape[0]
        assert out.class_histogram("test").sum() == out.test_images.shape[0]
