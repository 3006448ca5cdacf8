"""Backpropagation against the central finite-difference oracle."""

import numpy as np
import pytest

from ppml_audit.errors import InputError
from ppml_audit.nn import (central_difference, finite_difference_gradient,
                           loss_and_per_example_gradients)
from ppml_audit.nn.params import get_flat_coordinate


def test_central_difference_on_quadratic():
    grad = central_difference(lambda t: t * t, 3.0, h=1e-4)
    assert grad == pytest.approx(6.0, abs=1e-6)


def test_central_difference_rejects_zero_step():
    with pytest.raises(InputError):
        central_difference(lambda t: t, 1.0, h=0.0)


def test_finite_difference_index_out_of_range(small_params, rng):
    x = rng.random((32, 32, 3))
    with pytest.raises(InputError):
        finite_difference_gradient(small_params, x, 0,
                                   small_params.num_coordinates, h=1e-4)


def _layer_offsets(params):
    offsets, off = {}, 0
    for key, arr in params.arrays.items():
        offsets[key] = off
        off += arr.size
    return offsets


def test_backprop_matches_finite_differences(small_params, rng):
    """>= 100 random coordinates spread over conv, group-norm and dense
    layers, relative error < 1e-3 against the oracle."""
    x = rng.random((1, 32, 32, 3))
    label = 2
    _, grads = loss_and_per_example_gradients(small_params, x, np.array([label]))
    offsets = _layer_offsets(small_params)

    per_layer = {
        "conv1_w": 12, "conv2_w": 12, "conv3_w": 12,
        "conv1_b": 4, "conv3_b": 4,
        "gn1_gamma": 4, "gn2_gamma": 4, "gn3_beta": 4, "gn1_beta": 4,
        "fc1_w": 20, "fc1_b": 8, "out_w": 12, "out_b": 3,
    }
    assert sum(per_layer.values()) >= 100

    checked = 0
    for key, count in per_layer.items():
        size = small_params.arrays[key].size
        coords = rng.choice(size, size=min(count, size), replace=False)
        for sub in coords:
            flat = offsets[key] + int(sub)
            fd = finite_difference_gradient(small_params, x[0], label, flat, h=1e-4)
            k, s = get_flat_coordinate(small_params.arrays, flat)
            bp = float(grads[k][0][s])
            rel = abs(bp - fd) / max(abs(bp), abs(fd), 1e-8)
            assert rel < 1e-3, f"{key}[{sub}]: bp={bp} fd={fd} rel={rel}"
            checked += 1
    assert checked >= 100


def test_finite_difference_self_consistent_step_sizes(small_params, rng):
    """The oracle itself is stable under halving the step."""
    x = rng.random((32, 32, 3))
    idx = _layer_offsets(small_params)["fc1_w"] + 5
    g1 = finite_difference_gradient(small_params, x, 1, idx, h=1e-4)
    g2 = finite_difference_gradient(small_params, x, 1, idx, h=5e-5)
    assert g1 == pytest.approx(g2, rel=1e-4, abs=1e-9)
