"""Toy-scale feed-forward training against the perceptual loss, plus the
self-describing model file format."""

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .features import LAYER_CONFIGS, LossNetwork
from .losses import content_loss, gram_matrix, style_loss
from .transform import TransformNetwork

MODEL_FORMAT = 1


@dataclass
class TrainConfig:
    layer_config: str = "adapted"
    content_weight: float = 1.0
    style_weight: float = 5.0
    crop: int = 96
    batch_size: int = 2
    epochs: int = 2
    lr: float = 1e-3
    seed: int = 0
    base_channels: int = 16
    n_residual: int = 3
    init: str = "identity"
    weights_source: str = "auto"
    max_images: int = 0  # 0 = use the whole corpus
    extra: dict = field(default_factory=dict)


def _load_corpus(corpus_dir, crop, max_images, rng):
    paths = sorted(Path(corpus_dir).glob("*.png")) + sorted(Path(corpus_dir).glob("*.jpg"))
    if max_images:
        paths = paths[:max_images]
    if not paths:
        raise FileNotFoundError("no images in corpus %s" % corpus_dir)
    crops = []
    for p in paths:
        img = np.asarray(Image.open(p).convert("RGB"), dtype=np.float32) / 255.0
        h, w = img.shape[:2]
        if h < crop or w < crop:
            img = np.asarray(Image.open(p).convert("RGB").resize((max(crop, w), max(crop, h)),
                                                                  Image.BILINEAR),
                             dtype=np.float32) / 255.0
            h, w = img.shape[:2]
        r = rng.integers(0, h - crop + 1)
        c = rng.integers(0, w - crop + 1)
        crops.append(img[r:r + crop, c:c + crop])
    arr = np.stack(crops).transpose(0, 3, 1, 2)
    return torch.from_numpy(arr)


def _load_style(style_path, crop):
    img = Image.open(style_path).convert("RGB").resize((crop, crop), Image.BILINEAR)
    arr = np.asarray(img, dtype=np.float32).transpose(2, 0, 1) / 255.0
    return torch.from_numpy(arr)[None]


def train(style_path, corpus_dir, out_path, config: TrainConfig = None):
    """Optimize the transform network and persist a self-describing model.

    Writes ``out_path`` (torch archive) and ``out_path.losses.csv`` with the
    per-step loss curve. Returns the recorded history.
    """
    cfg = config or TrainConfig()
    torch.manual_seed(cfg.seed)
    rng = np.random.default_rng(cfg.seed)

    layers = LAYER_CONFIGS[cfg.layer_config]
    taps = tuple(dict.fromkeys(layers["style"] + layers["content"]))
    # the transform net draws from the cfg.seed stream; the loss network may
    # reseed internally for its fallback weights, so build it second
    net = TransformNetwork(cfg.base_channels, cfg.n_residual, cfg.init)
    loss_net = LossNetwork(taps, cfg.weights_source)
    optimizer = torch.optim.Adam(net.parameters(), lr=cfg.lr)

    data = _load_corpus(corpus_dir, cfg.crop, cfg.max_images, rng)
    style = _load_style(style_path, cfg.crop)
    with torch.no_grad():
        style_feats = loss_net(style)
        style_grams = {t: gram_matrix(style_feats[t]) for t in layers["style"]}

    history = []
    step = 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(data))
        for start in range(0, len(data), cfg.batch_size):
            batch = data[order[start:start + cfg.batch_size]]
            optimizer.zero_grad()
            out = net(batch)
            gen_feats = loss_net(out)
            with torch.no_grad():
                ref_feats = loss_net(batch)
            l_content = sum(content_loss(gen_feats[t], ref_feats[t])
                            for t in layers["content"])
            l_style = sum(style_loss(gen_feats[t],
                                     style_grams[t].expand(batch.shape[0], -1, -1))
                          for t in layers["style"])
            loss = cfg.content_weight * l_content + cfg.style_weight * l_style
            loss.backward()
            optimizer.step()
            history.append({"step": step, "epoch": epoch,
                            "loss": float(loss.detach()),
                            "content": float(l_content.detach()),
                            "style": float(l_style.detach())})
            step += 1

    save_model(out_path, net, cfg, loss_net.weights_source)
    curve = Path(str(out_path) + ".losses.csv")
    with curve.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["step", "epoch", "loss", "content", "style"])
        writer.writeheader()
        writer.writerows(history)
    return history


def save_model(path, net: TransformNetwork, cfg: TrainConfig, weights_source: str):
    layers = LAYER_CONFIGS[cfg.layer_config]
    meta = {
        "format": MODEL_FORMAT,
        "layer_config": cfg.layer_config,
        "style_layers": list(layers["style"]),
        "content_layers": list(layers["content"]),
        "content_weight": cfg.content_weight,
        "style_weight": cfg.style_weight,
        "feature_weights": weights_source,
        "base_channels": cfg.base_channels,
        "n_residual": cfg.n_residual,
        "seed": cfg.seed,
        "optimizer": "adam",
        "normalization": "imagenet-mean-std",
    }
    torch.save({"meta": meta, "state_dict": net.state_dict()}, path)


def load_model(path):
    """Returns (network in eval mode, metadata dict)."""
    blob = torch.load(path, map_location="cpu", weights_only=True)
    meta = blob["meta"]
    if meta.get("format") != MODEL_FORMAT:
        raise ValueError("unsupported model format %r" % meta.get("format"))
    net = TransformNetwork(meta["base_channels"], meta["n_residual"], init="random")
    net.load_state_dict(blob["state_dict"])
    net.eval()
    return net, meta


def describe_model(path) -> str:
    _, meta = load_model(path)
    return json.dumps(meta, indent=2, sort_keys=True)
