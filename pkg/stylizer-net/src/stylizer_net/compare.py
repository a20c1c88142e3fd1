"""Error-module comparison of two layer configurations over a composed-code
corpus, measured through the primary toolkit's CLI (its batch eval emits the
error-module counts)."""

import csv
import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from .training import load_model


def apply_model(net, image: np.ndarray) -> np.ndarray:
    """Forward one uint8 RGB raster through the transform, deterministically."""
    x = torch.from_numpy(image.astype(np.float32).transpose(2, 0, 1) / 255.0)[None]
    with torch.no_grad():
        y = net(x)[0]
    return np.clip(np.rint(y.numpy().transpose(1, 2, 0) * 255.0), 0, 255).astype(np.uint8)


def _eval_error_modules(corpus_dir: Path) -> dict:
    """Run the primary CLI's batch eval and parse error modules per image."""
    out_csv = corpus_dir / "eval.csv"
    cmd = [sys.executable, "-m", "artqr.cli", "eval", str(corpus_dir), "--out", str(out_csv)]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError("primary eval failed: %s" % proc.stderr.strip()[:500])
    counts = {}
    with out_csv.open() as fh:
        rows = [line for line in fh if not line.startswith("#")]
    for row in csv.DictReader(rows):
        if row.get("error_modules"):
            counts[row["image"]] = int(row["error_modules"])
    return counts


def compare_layer_configs(model_a_path, model_b_path, qa_corpus_dir, report_path=None):
    """Stylize a composed-code corpus with both models and compare mean
    error-module counts (a / b ratio). Report-only: no quality gate at toy
    scale."""
    net_a, meta_a = load_model(model_a_path)
    net_b, meta_b = load_model(model_b_path)
    corpus = sorted(Path(qa_corpus_dir).glob("*.png"))
    if not corpus:
        raise FileNotFoundError("no composed codes in %s" % qa_corpus_dir)

    results = {}
    with tempfile.TemporaryDirectory(prefix="stylizer-compare-") as tmp:
        for tag, net in (("a", net_a), ("b", net_b)):
            outdir = Path(tmp) / tag
            outdir.mkdir()
            for png in corpus:
                meta_file = png.with_suffix(".meta")
                if not meta_file.exists():
                    continue
                img = np.asarray(Image.open(png).convert("RGB"))
                Image.fromarray(apply_model(net, img)).save(outdir / png.name)
                shutil.copy(meta_file, outdir / meta_file.name)
            results[tag] = _eval_error_modules(outdir)

    mean_a = float(np.mean(list(results["a"].values()))) if results["a"] else float("nan")
    mean_b = float(np.mean(list(results["b"].values()))) if results["b"] else float("nan")
    ratio = mean_a / mean_b if mean_b > 0 else (1.0 if mean_a == mean_b else float("inf"))
    report = {
        "model_a": {"path": str(model_a_path), "layer_config": meta_a["layer_config"],
                    "mean_error_modules": mean_a, "per_image": results["a"]},
        "model_b": {"path": str(model_b_path), "layer_config": meta_b["layer_config"],
                    "mean_error_modules": mean_b, "per_image": results["b"]},
        "ratio_a_over_b": ratio,
        "note": "toy-scale measurement; not comparable to full-scale training",
    }
    if report_path:
        Path(report_path).write_text(json.dumps(report, indent=2))
    return report
