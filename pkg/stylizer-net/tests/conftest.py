"""Shared fixtures: a tiny deterministic content corpus and a toy-trained model."""

import numpy as np
import pytest
from PIL import Image

from stylizer_net import TrainConfig, train


def synth_image(index: int, side: int = 96) -> np.ndarray:
    rng = np.random.default_rng(500 + index)
    yy, xx = np.meshgrid(np.linspace(0, 1, side), np.linspace(0, 1, side), indexing="ij")
    base = 0.5 + 0.4 * np.sin(2 * np.pi * (xx * rng.uniform(1, 3) + yy * rng.uniform(1, 3)))
    img = np.stack([np.clip(base + rng.uniform(-0.2, 0.2), 0, 1) for _ in range(3)], axis=-1)
    return (img * 255).astype(np.uint8)


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    d = tmp_path_factory.mktemp("content")
    for i in range(16):
        Image.fromarray(synth_image(i)).save(d / ("img_%02d.png" % i))
    return d


@pytest.fixture(scope="session")
def style_png(tmp_path_factory):
    d = tmp_path_factory.mktemp("style")
    rng = np.random.default_rng(7)
    side = 96
    yy, xx = np.meshgrid(np.arange(side), np.arange(side), indexing="ij")
    swirl = (np.sin(xx / 5.0) + np.cos(yy / 7.0) + np.sin((xx + yy) / 11.0)) / 3.0
    img = np.stack([
        np.clip(128 + 120 * swirl, 0, 255),
        np.clip(128 + 120 * np.roll(swirl, 13, axis=0), 0, 255),
        np.clip(128 - 120 * swirl, 0, 255),
    ], axis=-1).astype(np.uint8)
    path = d / "style.png"
    Image.fromarray(img).save(path)
    return path


@pytest.fixture(scope="session")
def toy_model(tmp_path_factory, corpus_dir, style_png):
    """A briefly trained adapted-config model plus its loss history."""
    out = tmp_path_factory.mktemp("models") / "adapted.pt"
    cfg = TrainConfig(layer_config="adapted", epochs=2, crop=96, batch_size=2, seed=0)
    history = train(style_png, corpus_dir, out, cfg)
    return {"path": out, "history": history}


def artqr_cli(*args):
    """Invoke the primary toolkit strictly through its CLI."""
    import subprocess, sys
    return subprocess.run([sys.executable, "-m", "artqr.cli", *args],
                          capture_output=True, text=True)


@pytest.fixture(scope="session")
def composed_corpus(tmp_path_factory):
    """Two composed codes with sidecars, built by the primary CLI."""
    d = tmp_path_factory.mktemp("qa_corpus")
    for i in range(2):
        src = d / ("src_%d.png" % i)
        Image.fromarray(synth_image(60 + i, side=512)).save(src)
        proc = artqr_cli("generate", "https://example.org/item/%d" % i, str(src),
                         "-o", str(d / ("qa_%d.png" % i)))
        assert proc.returncode == 0, proc.stderr
        src.unlink()  # keep only codes + sidecars in the corpus dir
    return d
