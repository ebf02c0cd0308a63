"""The lens: attention and replacement U-Nets coupled by a convex blend.

The attention net emits a single-channel mask A in [0,1]; the
replacement net emits an image-shaped R. The lensed image is

    A * R + (1 - A) * I

so A = 0 passes the input through untouched and A = 1 substitutes the
replacement outright. A hinge on the mean mask value caps how much area
the lens may edit without penalty.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

from .errors import ConfigurationError

# Both activations squash to [0,1]; "image_range" is the semantic alias for
# image-valued outputs (this package keeps images in unit range throughout).
ACTIVATIONS = {
    "unit_interval_squash": torch.sigmoid,
    "image_range": torch.sigmoid,
}


@dataclass(frozen=True)
class UNetConfig:
    downsampling_steps: int
    base_channels: int
    output_channels: int
    output_activation: str = "unit_interval_squash"

    def __post_init__(self):
        if self.downsampling_steps < 1:
            raise ConfigurationError(
                f"downsampling_steps must be >= 1, got {self.downsampling_steps}"
            )
        if self.base_channels < 1:
            raise ConfigurationError(f"base_channels must be >= 1, got {self.base_channels}")
        if self.output_channels < 1:
            raise ConfigurationError(f"output_channels must be >= 1, got {self.output_channels}")
        if self.output_activation not in ACTIVATIONS:
            raise ConfigurationError(
                f"unknown output_activation {self.output_activation!r}"
            )


@dataclass(frozen=True)
class LensConfig:
    attention: UNetConfig
    replacement: UNetConfig
    rho: float = 0.025
    lambda_repr: float = 15.0

    def __post_init__(self):
        if not 0.0 <= self.rho <= 1.0:
            raise ConfigurationError(f"rho {self.rho} outside [0, 1]")
        if self.lambda_repr < 0.0:
            raise ConfigurationError(f"lambda_repr {self.lambda_repr} must be >= 0")
        if self.attention.output_channels != 1:
            raise ConfigurationError("attention net must emit a 1-channel mask")
        if self.attention.downsampling_steps > self.replacement.downsampling_steps:
            raise ConfigurationError(
                "attention capacity must not exceed replacement capacity "
                f"({self.attention.downsampling_steps} > "
                f"{self.replacement.downsampling_steps} downsampling steps)"
            )

    @classmethod
    def default(cls, image_channels: int = 3, *, rho: float = 0.025,
                lambda_repr: float = 15.0, attention_steps: int = 3,
                replacement_steps: int = 5, base_channels: int = 16) -> "LensConfig":
        return cls(
            attention=UNetConfig(attention_steps, base_channels, 1,
                                 "unit_interval_squash"),
            replacement=UNetConfig(replacement_steps, base_channels,
                                   image_channels, "image_range"),
            rho=rho, lambda_repr=lambda_repr,
        )

    def to_json(self) -> dict:
        from dataclasses import asdict

        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "LensConfig":
        return cls(attention=UNetConfig(**d["attention"]),
                   replacement=UNetConfig(**d["replacement"]),
                   rho=d.get("rho", 0.025),
                   lambda_repr=d.get("lambda_repr", 15.0))


class _DoubleConv(nn.Module):
    def __init__(self, in_ch: int, out_ch: int):
        super().__init__()
        groups = 4 if out_ch % 4 == 0 else 1
        self.block = nn.Sequential(
            nn.Conv2d(in_ch, out_ch, 3, padding=1),
            nn.GroupNorm(groups, out_ch),
            nn.LeakyReLU(0.1, inplace=True),
            nn.Conv2d(out_ch, out_ch, 3, padding=1),
            nn.GroupNorm(groups, out_ch),
            nn.LeakyReLU(0.1, inplace=True),
        )

    def forward(self, x):
        return self.block(x)


class _Up(nn.Module):
    def __init__(self, in_ch: int, skip_ch: int, out_ch: int):
        super().__init__()
        self.reduce = nn.Conv2d(in_ch, out_ch, 1)
        self.conv = _DoubleConv(out_ch + skip_ch, out_ch)

    def forward(self, x, skip):
        x = F.interpolate(x, scale_factor=2, mode="nearest")
        x = self.reduce(x)
        return self.conv(torch.cat([x, skip], dim=1))


class UNet(nn.Module):
    """Encoder-decoder with skip connections at every scale.

    Channel width doubles per downsampling step from `base_channels`.
    Inputs whose spatial dims are not divisible by 2^steps are reflect-
    padded up and the output cropped back.
    """

    def __init__(self, in_channels: int, config: UNetConfig):
        super().__init__()
        self.config = config
        steps = config.downsampling_steps
        widths = [config.base_channels * 2**k for k in range(steps + 1)]

        self.stem = _DoubleConv(in_channels, widths[0])
        self.down = nn.ModuleList(
            _DoubleConv(widths[k], widths[k + 1]) for k in range(steps)
        )
        self.up = nn.ModuleList(
            _Up(widths[k + 1], widths[k], widths[k]) for k in reversed(range(steps))
        )
        self.head = nn.Conv2d(widths[0], config.output_channels, 1)
        self._activation = ACTIVATIONS[config.output_activation]

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.ndim != 4:
            raise ConfigurationError(f"expected (N, C, H, W) input, got {tuple(x.shape)}")
        n, _, h, w = x.shape
        multiple = 2**self.config.downsampling_steps
        pad_h = (-h) % multiple
        pad_w = (-w) % multiple
        if pad_h or pad_w:
            x = F.pad(x, (0, pad_w, 0, pad_h), mode="replicate")

        skips = []
        x = self.stem(x)
        for block in self.down:
            skips.append(x)
            x = block(F.max_pool2d(x, 2))
        for block, skip in zip(self.up, reversed(skips)):
            x = block(x, skip)
        x = self._activation(self.head(x))
        if pad_h or pad_w:
            x = x[:, :, :h, :w]
        return x


def compose(image: torch.Tensor, mask: torch.Tensor,
            replacement: torch.Tensor) -> torch.Tensor:
    """mask * replacement + (1 - mask) * image, mask broadcast over channels."""
    if mask.shape[-2:] != image.shape[-2:] or replacement.shape != image.shape:
        raise ValueError(
            f"shape mismatch: image {tuple(image.shape)}, mask {tuple(mask.shape)}, "
            f"replacement {tuple(replacement.shape)}"
        )
    return mask * replacement + (1.0 - mask) * image


def reproduction_loss(mask: torch.Tensor, rho: float) -> torch.Tensor:
    """Hinge on mean mask value: max(rho, mean(A)) - rho, per image, batch-averaged.

    Zero exactly when every image's mean attention is at or below the
    budget rho; gradient is 1/(w*h) per pixel above it.
    """
    if not 0.0 <= rho <= 1.0:
        raise ConfigurationError(f"rho {rho} outside [0, 1]")
    per_image = mask.flatten(1).mean(dim=1)
    return F.relu(per_image - rho).mean()


class Lens(nn.Module):
    """Attention + replacement pair producing an edited image."""

    def __init__(self, image_channels: int, config: LensConfig):
        super().__init__()
        self.config = config
        self.image_channels = image_channels
        if config.replacement.output_channels != image_channels:
            raise ConfigurationError(
                f"replacement net emits {config.replacement.output_channels} "
                f"channels for {image_channels}-channel images"
            )
        self.attention_net = UNet(image_channels, config.attention)
        self.replacement_net = UNet(image_channels, config.replacement)

    def attention(self, images: torch.Tensor) -> torch.Tensor:
        return self.attention_net(images)

    def replacement(self, images: torch.Tensor) -> torch.Tensor:
        return self.replacement_net(images)

    def forward(self, images: torch.Tensor):
        """Returns (mask, replacement, lensed image)."""
        a = self.attention_net(images)
        r = self.replacement_net(images)
        return a, r, compose(images, a, r)
