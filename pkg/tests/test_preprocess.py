import numpy as np
import pytest

from ppml_audit.data import dataset_from_arrays, preprocess
from ppml_audit.errors import InputError


def make_ds(h, w, c, n=3):
    rng = np.random.default_rng(0)
    imgs = rng.integers(0, 256, size=(n, h, w, c), dtype=np.uint8)
    labels = np.zeros(n, dtype=np.int64)
    labels[-1] = 1
    return dataset_from_arrays(imgs, labels, imgs[:1], labels[:1], ["a", "b"])


def test_small_grayscale_upscaled_and_replicated():
    data = preprocess(make_ds(28, 28, 1))
    assert data.train_x.shape == (3, 32, 32, 3)
    # replicated channels stay identical
    assert np.array_equal(data.train_x[..., 0], data.train_x[..., 1])
    assert np.array_equal(data.train_x[..., 0], data.train_x[..., 2])


def test_value_scaling_bounds():
    imgs = np.zeros((1, 32, 32, 3), dtype=np.uint8)
    imgs[0, 0, 0] = 255
    ds = dataset_from_arrays(imgs, [0], imgs, [0], ["a", "b"])
    data = preprocess(ds)
    assert data.train_x.max() == 1.0
    assert data.train_x.min() == 0.0


def test_native_size_content_unchanged():
    ds = make_ds(32, 32, 3)
    data = preprocess(ds)
    assert np.array_equal(data.train_x, ds.train_images / 255.0)


def test_large_images_need_explicit_downscale():
    ds = make_ds(64, 64, 3)
    with pytest.raises(InputError, match="allow_downscale"):
        preprocess(ds)
    data = preprocess(ds, allow_downscale=True)
    assert data.train_x.shape == (3, 32, 32, 3)


def test_values_stay_in_unit_interval():
    data = preprocess(make_ds(20, 20, 3))
    assert data.train_x.min() >= 0.0
    assert data.train_x.max() <= 1.0


def test_labels_preserved(balanced_dataset):
    data = preprocess(balanced_dataset)
    assert np.array_equal(data.train_y, balanced_dataset.train_labels)
    assert np.array_equal(data.test_y, balanced_dataset.test_labels)


def test_subset_keeps_test_split(easy_data):
    mask = np.zeros(easy_data.train_x.shape[0], dtype=bool)
    mask[:10] = True
    sub = easy_data.subset(mask)
    assert sub.train_x.shape[0] == 10
    assert sub.test_x.shape == easy_data.test_x.shape
