"""Residual convolutional image-to-image transform network.

The network predicts a residual on top of a global skip connection; with the
default zero-initialized output layer it is an exact identity map, so an
untrained model passes inputs through unchanged.
"""

import torch
from torch import nn


class ConvBlock(nn.Module):
    def __init__(self, cin, cout, kernel, stride=1):
        super().__init__()
        self.pad = nn.ReflectionPad2d(kernel // 2)
        self.conv = nn.Conv2d(cin, cout, kernel, stride=stride)
        self.norm = nn.InstanceNorm2d(cout, affine=True)

    def forward(self, x):
        return self.norm(self.conv(self.pad(x)))


class ResidualBlock(nn.Module):
    def __init__(self, channels):
        super().__init__()
        self.block1 = ConvBlock(channels, channels, 3)
        self.block2 = ConvBlock(channels, channels, 3)

    def forward(self, x):
        return x + self.block2(torch.relu(self.block1(x)))


class TransformNetwork(nn.Module):
    """Downsample, residual body, upsample, with a global input skip.

    init="identity" zeroes the output layer (f(x) = x exactly);
    init="random" leaves the default initialization for training studies.
    """

    def __init__(self, base_channels: int = 16, n_residual: int = 3,
                 init: str = "identity"):
        super().__init__()
        c = base_channels
        self.head = ConvBlock(3, c, 9)
        self.down = ConvBlock(c, 2 * c, 3, stride=2)
        self.body = nn.Sequential(*[ResidualBlock(2 * c) for _ in range(n_residual)])
        self.up = nn.Upsample(scale_factor=2, mode="nearest")
        self.post = ConvBlock(2 * c, c, 3)
        self.out = nn.Conv2d(c, 3, 9, padding=4, padding_mode="reflect")
        if init == "identity":
            nn.init.zeros_(self.out.weight)
            nn.init.zeros_(self.out.bias)
        elif init != "random":
            raise ValueError("init must be 'identity' or 'random'")

    def forward(self, x):
        h, w = x.shape[-2:]
        y = torch.relu(self.head(x))
        y = torch.relu(self.down(y))
        y = self.body(y)
        y = self.up(y)
        y = y[..., :h, :w]
        y = torch.relu(self.post(y))
        return torch.clamp(x + self.out(y), 0.0, 1.0)
