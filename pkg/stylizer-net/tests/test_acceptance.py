"""Secondary acceptance criteria, one PASS line each (run with -s)."""

import sys

import torch

from stylizer_net import compare_layer_configs, gram_matrix, load_model, style_loss
from conftest import artqr_cli


def _report(name, ok, detail=""):
    print("[%s] %s%s" % ("PASS" if ok else "FAIL", name, " - " + detail if detail else ""))
    assert ok, "%s: %s" % (name, detail)


def test_layer_config_and_gradient_check(toy_model):
    _, meta = load_model(toy_model["path"])
    config_ok = (meta["style_layers"] == ["relu1_2", "relu2_1", "relu3_1", "relu4_3"]
                 and meta["content_layers"] == ["relu1_2", "relu2_1", "relu3_1", "relu4_3"])

    torch.manual_seed(5)
    a = torch.randn(1, 3, 5, 5, dtype=torch.float64, requires_grad=True)
    target = gram_matrix(torch.randn(1, 3, 5, 5, dtype=torch.float64))
    style_loss(a, target).backward()
    analytic = a.grad.detach().clone()
    eps = 1e-6
    numeric = torch.zeros_like(analytic)
    flat = a.detach().reshape(-1)
    for i in range(flat.numel()):
        hi, lo = flat.clone(), flat.clone()
        hi[i] += eps
        lo[i] -= eps
        numeric.reshape(-1)[i] = (float(style_loss(hi.reshape(a.shape), target))
                                  - float(style_loss(lo.reshape(a.shape), target))) / (2 * eps)
    rel = float(torch.norm(analytic - numeric) / torch.norm(analytic))
    _report("Loss-layer configuration and style-gradient check",
            config_ok and rel <= 1e-4,
            "layers from model file, gradient rel err %.2e" % rel)


def test_compare_produces_ratio_report(toy_model, composed_corpus, tmp_path):
    report = compare_layer_configs(toy_model["path"], toy_model["path"],
                                   composed_corpus, tmp_path / "ratio.json")
    ok = "ratio_a_over_b" in report and (tmp_path / "ratio.json").exists()
    _report("Toy-scale layer-config comparison report",
            ok, "ratio %.3f (identical models)" % report["ratio_a_over_b"])


def test_end_to_end_subprocess_contract(toy_model, composed_corpus, tmp_path):
    qa = composed_corpus / "qa_1.png"
    qb = tmp_path / "qb.png"
    qc = tmp_path / "qc.png"
    s = artqr_cli("stylize", str(qa), str(qa.with_suffix(".meta")), "-o", str(qb),
                  "--external",
                  "%s -m stylizer_net.cli apply %s" % (sys.executable, toy_model["path"]))
    c = artqr_cli("correct", str(qb), str(qb.with_suffix(".meta")), "-o", str(qc))
    v = artqr_cli("verify", str(qc), str(qc.with_suffix(".meta")))
    ok = (s.returncode == 0 and c.returncode == 0 and v.returncode == 0
          and "rs-corrections: 0" in v.stdout and "non-robust modules: 0" in v.stdout)
    _report("End-to-end integration through the stylizer contract", ok,
            "stylize/correct/verify exit codes %d/%d/%d"
            % (s.returncode, c.returncode, v.returncode))
