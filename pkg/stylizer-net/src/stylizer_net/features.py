"""Loss network: a 16-layer VGG feature stack with named relu taps.

Pretrained classification weights are used when available in the
environment; otherwise the stack is seeded deterministically and the model
file records which variant produced the features.
"""

import torch
from torch import nn
from torchvision import models

# relu tap name -> index into torchvision's vgg16().features
RELU_INDEX = {
    "relu1_1": 1, "relu1_2": 3,
    "relu2_1": 6, "relu2_2": 8,
    "relu3_1": 11, "relu3_2": 13, "relu3_3": 15,
    "relu4_1": 18, "relu4_2": 20, "relu4_3": 22,
}

# Feature-reconstruction layer selections: the adapted configuration pulls
# both style and content taps from one relu per scale, favoring the early
# localized textures that match dense module patterns.
LAYER_CONFIGS = {
    "adapted": {
        "style": ("relu1_2", "relu2_1", "relu3_1", "relu4_3"),
        "content": ("relu1_2", "relu2_1", "relu3_1", "relu4_3"),
    },
    "original": {
        "style": ("relu1_2", "relu2_2", "relu3_3", "relu4_3"),
        "content": ("relu3_3",),
    },
}

IMAGENET_MEAN = (0.485, 0.456, 0.406)
IMAGENET_STD = (0.229, 0.224, 0.225)
_FALLBACK_SEED = 1234


class LossNetwork(nn.Module):
    """Frozen VGG-16 feature extractor returning the requested relu taps."""

    def __init__(self, taps, weights_source: str = "auto"):
        super().__init__()
        self.taps = tuple(taps)
        last = max(RELU_INDEX[t] for t in self.taps)
        source = weights_source
        if source == "auto":
            try:
                vgg = models.vgg16(weights=models.VGG16_Weights.IMAGENET1K_V1)
                source = "imagenet"
            except Exception:
                torch.manual_seed(_FALLBACK_SEED)
                vgg = models.vgg16(weights=None)
                source = "random-seed-%d" % _FALLBACK_SEED
        elif source == "imagenet":
            vgg = models.vgg16(weights=models.VGG16_Weights.IMAGENET1K_V1)
        else:
            torch.manual_seed(_FALLBACK_SEED)
            vgg = models.vgg16(weights=None)
            source = "random-seed-%d" % _FALLBACK_SEED
        self.weights_source = source
        self.features = vgg.features[:last + 1]
        for p in self.features.parameters():
            p.requires_grad_(False)
        self.features.eval()
        mean = torch.tensor(IMAGENET_MEAN).view(1, 3, 1, 1)
        std = torch.tensor(IMAGENET_STD).view(1, 3, 1, 1)
        self.register_buffer("mean", mean)
        self.register_buffer("std", std)

    def forward(self, x):
        """x in [0, 1] -> {tap name: activation tensor}."""
        wanted = {RELU_INDEX[t]: t for t in self.taps}
        out = {}
        y = (x - self.mean) / self.std
        for i, layer in enumerate(self.features):
            y = layer(y)
            if i in wanted:
                out[wanted[i]] = y
        return out
