"""Layer configuration, Gram properties, and the style-loss gradient check."""

import torch

from stylizer_net import LAYER_CONFIGS, gram_matrix, load_model, style_loss


def test_adapted_layer_config_from_model_file(toy_model):
    _, meta = load_model(toy_model["path"])
    assert meta["style_layers"] == ["relu1_2", "relu2_1", "relu3_1", "relu4_3"]
    assert meta["content_layers"] == ["relu1_2", "relu2_1", "relu3_1", "relu4_3"]
    assert meta["layer_config"] == "adapted"
    assert meta["content_weight"] == 1.0 and meta["style_weight"] == 5.0
    assert "feature_weights" in meta and meta["normalization"] == "imagenet-mean-std"


def test_original_layer_config_registry():
    original = LAYER_CONFIGS["original"]
    assert original["style"] == ("relu1_2", "relu2_2", "relu3_3", "relu4_3")
    assert original["content"] == ("relu3_3",)


def test_gram_symmetric_psd():
    torch.manual_seed(3)
    for _ in range(5):
        act = torch.randn(2, 8, 12, 12, dtype=torch.float64)
        g = gram_matrix(act)
        assert torch.allclose(g, g.transpose(1, 2), atol=1e-12)
        eig = torch.linalg.eigvalsh(g)
        assert float(eig.min()) >= -1e-10


def test_style_loss_gradient_check():
    # analytic gradient of the Gram style loss w.r.t. a small activation
    # tensor vs central finite differences, 1e-4 relative
    torch.manual_seed(11)
    a = torch.randn(1, 3, 5, 5, dtype=torch.float64, requires_grad=True)
    target = gram_matrix(torch.randn(1, 3, 5, 5, dtype=torch.float64))
    loss = style_loss(a, target)
    loss.backward()
    analytic = a.grad.detach().clone()

    eps = 1e-6
    numeric = torch.zeros_like(analytic)
    flat = a.detach().clone().reshape(-1)
    for i in range(flat.numel()):
        for sign in (1.0, -1.0):
            probe = flat.clone()
            probe[i] += sign * eps
            val = style_loss(probe.reshape(a.shape), target)
            numeric.reshape(-1)[i] += sign * float(val) / (2 * eps)
    rel = torch.norm(analytic - numeric) / torch.norm(analytic)
    assert float(rel) <= 1e-4


def test_identical_grams_zero_loss():
    act = torch.randn(1, 4, 8, 8)
    assert float(style_loss(act, gram_matrix(act))) == 0.0
