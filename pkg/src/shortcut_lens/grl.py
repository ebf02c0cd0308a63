"""Gradient reversal: identity forward, negated gradients backward.

Placing this between the lens output and the classifier turns one
backward pass into a min-max step: the classifier descends the
cross-entropy while everything upstream ascends it.
"""

from __future__ import annotations

import torch


class _ReverseGrad(torch.autograd.Function):
    @staticmethod
    def forward(ctx, x):
        return x.view_as(x)

    @staticmethod
    def backward(ctx, grad_output):
        return grad_output.neg()


def gradient_reversal(x: torch.Tensor) -> torch.Tensor:
    return _ReverseGrad.apply(x)
