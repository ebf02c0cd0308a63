"""Classifier architectures.

`small_resnet` is a three-stage residual CNN sized for 32x32 desk
experiments; `resnet18` wraps the torchvision model for full-scale
runs. Both expose `cam_target` (their last convolutional block) for
class-activation mapping.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import torch
import torch.nn as nn
import torch.nn.functional as F

from .errors import ConfigurationError

ARCHITECTURES = ("small_resnet", "resnet18")


@dataclass(frozen=True)
class ClassifierConfig:
    architecture: str = "small_resnet"
    num_classes: int = 10
    width_multiplier: float = 1.0
    in_channels: int = 3

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ConfigurationError(f"unknown architecture {self.architecture!r}")
        if self.num_classes < 2:
            raise ConfigurationError(f"num_classes must be >= 2, got {self.num_classes}")
        if self.width_multiplier <= 0:
            raise ConfigurationError(
                f"width_multiplier must be > 0, got {self.width_multiplier}"
            )

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, d: dict) -> "ClassifierConfig":
        return cls(**d)


class _BasicBlock(nn.Module):
    def __init__(self, in_ch: int, out_ch: int, stride: int = 1):
        super().__init__()
        self.conv1 = nn.Conv2d(in_ch, out_ch, 3, stride=stride, padding=1, bias=False)
        self.bn1 = nn.BatchNorm2d(out_ch)
        self.conv2 = nn.Conv2d(out_ch, out_ch, 3, padding=1, bias=False)
        self.bn2 = nn.BatchNorm2d(out_ch)
        if stride != 1 or in_ch != out_ch:
            self.shortcut = nn.Sequential(
                nn.Conv2d(in_ch, out_ch, 1, stride=stride, bias=False),
                nn.BatchNorm2d(out_ch),
            )
        else:
            self.shortcut = nn.Identity()

    def forward(self, x):
        out = F.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return F.relu(out + self.shortcut(x))


class SmallResNet(nn.Module):
    """Stem + 3 residual stages (strides 1, 2, 2) + GAP head.

    At 32x32 input the final feature map is 8x8, which keeps CAM
    heatmaps usefully localized.
    """

    def __init__(self, num_classes: int, width_multiplier: float = 1.0,
                 in_channels: int = 3):
        super().__init__()
        w = max(4, int(round(32 * width_multiplier)))
        self.stem = nn.Sequential(
            nn.Conv2d(in_channels, w, 3, padding=1, bias=False),
            nn.BatchNorm2d(w),
            nn.ReLU(inplace=True),
        )
        self.stage1 = _BasicBlock(w, w)
        self.stage2 = _BasicBlock(w, 2 * w, stride=2)
        self.stage3 = _BasicBlock(2 * w, 4 * w, stride=2)
        self.fc = nn.Linear(4 * w, num_classes)

    @property
    def cam_target(self) -> nn.Module:
        return self.stage3

    def forward(self, x):
        x = self.stem(x)
        x = self.stage1(x)
        x = self.stage2(x)
        x = self.stage3(x)
        x = F.adaptive_avg_pool2d(x, 1).flatten(1)
        return self.fc(x)


def build_classifier(config: ClassifierConfig) -> nn.Module:
    if config.architecture == "small_resnet":
        return SmallResNet(config.num_classes, config.width_multiplier,
                           config.in_channels)
    from torchvision.models import resnet18

    model = resnet18(num_classes=config.num_classes)
    if config.in_channels != 3:
        model.conv1 = nn.Conv2d(config.in_channels, 64, kernel_size=7, stride=2,
                                padding=3, bias=False)
    # expose the CAM hook point uniformly
    model.__class__.cam_target = property(lambda self: self.layer4)
    return model
