"""Perceptual losses: Gram-matrix style reconstruction and feature content
reconstruction."""

import torch


def gram_matrix(activation: torch.Tensor) -> torch.Tensor:
    """Channel inner-product statistic, normalized by C*H*W.

    activation: (B, C, H, W) -> (B, C, C), symmetric positive semi-definite.
    """
    b, c, h, w = activation.shape
    flat = activation.reshape(b, c, h * w)
    return torch.bmm(flat, flat.transpose(1, 2)) / (c * h * w)


def style_loss(generated: torch.Tensor, target_gram: torch.Tensor) -> torch.Tensor:
    """Squared Frobenius distance between Gram matrices."""
    diff = gram_matrix(generated) - target_gram
    return (diff ** 2).sum(dim=(1, 2)).mean()


def content_loss(generated: torch.Tensor, target: torch.Tensor) -> torch.Tensor:
    """Mean squared feature distance, normalized by the tensor size."""
    b, c, h, w = generated.shape
    return ((generated - target) ** 2).sum(dim=(1, 2, 3)).mean() / (c * h * w)
