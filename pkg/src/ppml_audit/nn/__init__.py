from .config import ModelConfig
from .gradcheck import central_difference, finite_difference_gradient
from .network import (ForwardCache, apply_random_flip, example_loss, forward,
                      loss_and_per_example_gradients)
from .params import (ModelParams, flatten_tree, get_flat_coordinate,
                     init_params, map_arrays, tree_l2_norm, zeros_like_tree)

__all__ = [
    "ModelConfig",
    "ModelParams",
    "ForwardCache",
    "init_params",
    "forward",
    "apply_random_flip",
    "example_loss",
    "loss_and_per_example_gradients",
    "central_difference",
    "finite_difference_gradient",
    "map_arrays",
    "zeros_like_tree",
    "flatten_tree",
    "tree_l2_norm",
    "get_flat_coordinate",
]
