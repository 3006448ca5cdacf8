"""Architecture description for the convolutional classifier."""

from dataclasses import dataclass, field

from ..errors import ConfigurationError


@dataclass(frozen=True)
class ModelConfig:
    """Three conv blocks (conv, group norm, ReLU, 2x2 max pool), then a
    hidden dense layer and a softmax output layer.

    Spatial input must be divisible by 8 so the three pooling stages land on
    integer sizes.
    """

    conv_channels: tuple = (32, 64, 128)
    kernel_size: int = 3
    groupnorm_groups: int = 8
    hidden_units: int = 128
    num_classes: int = 10
    input_shape: tuple = (32, 32, 3)

    def __post_init__(self):
        if len(self.conv_channels) != 3:
            raise ConfigurationError("conv_channels must list exactly 3 layer widths")
        if any(c < 1 for c in self.conv_channels):
            raise ConfigurationError("conv channel counts must be >= 1")
        if self.num_classes < 2:
            raise ConfigurationError("num_classes must be >= 2")
        if self.kernel_size < 1 or self.kernel_size % 2 == 0:
            raise ConfigurationError("kernel_size must be odd (same padding)")
        if self.groupnorm_groups < 1:
            raise ConfigurationError("groupnorm_groups must be >= 1")
        for c in self.conv_channels:
            if c % self.groupnorm_groups != 0:
                raise ConfigurationError(
                    f"groupnorm_groups={self.groupnorm_groups} does not divide "
                    f"channel count {c}"
                )
        if self.hidden_units < 1:
            raise ConfigurationError("hidden_units must be >= 1")
        h, w, ch = self.input_shape
        if h % 8 != 0 or w % 8 != 0:
            raise ConfigurationError("input height/width must be divisible by 8")
        if ch < 1:
            raise ConfigurationError("input channel count must be >= 1")

    @property
    def flattened_units(self) -> int:
        h, w, _ = self.input_shape
        return (h // 8) * (w // 8) * self.conv_channels[2]

    def to_dict(self) -> dict:
        return {
            "conv_channels": list(self.conv_channels),
            "kernel_size": self.kernel_size,
            "groupnorm_groups": self.groupnorm_groups,
            "hidden_units": self.hidden_units,
            "num_classes": self.num_classes,
            "input_shape": list(self.input_shape),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ModelConfig":
        d = dict(d)
        for key in ("conv_channels", "input_shape"):
            if key in d:
                d[key] = tuple(d[key])
        return cls(**d)
