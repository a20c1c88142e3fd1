"""Command-line surface.

``apply`` follows the external stylizer protocol of the primary toolkit:
the final two arguments are the input and output PNG paths and the exit
status is 0 on success, nonzero on any I/O or model error.
"""

import argparse
import json
import sys

import numpy as np
from PIL import Image

from .compare import apply_model, compare_layer_configs
from .training import TrainConfig, describe_model, load_model, train


def cmd_train(args):
    cfg = TrainConfig(layer_config=args.layer_config,
                      content_weight=args.content_weight,
                      style_weight=args.style_weight,
                      crop=args.crop, batch_size=args.batch_size,
                      epochs=args.epochs, lr=args.lr, seed=args.seed,
                      max_images=args.max_images)
    history = train(args.style, args.corpus, args.output, cfg)
    print("trained %d steps, final loss %.4f -> %s"
          % (len(history), history[-1]["loss"], args.output))
    return 0


def cmd_apply(args):
    net, _ = load_model(args.model)
    image = np.asarray(Image.open(args.input).convert("RGB"))
    Image.fromarray(apply_model(net, image)).save(args.output)
    return 0


def cmd_describe(args):
    print(describe_model(args.model))
    return 0


def cmd_compare(args):
    report = compare_layer_configs(args.model_a, args.model_b, args.corpus,
                                   args.out)
    print(json.dumps({k: report[k] for k in ("ratio_a_over_b", "note")}, indent=2))
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="stylizer-net", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="fit a style transform at toy scale")
    t.add_argument("style", help="style target image")
    t.add_argument("corpus", help="directory of content images")
    t.add_argument("-o", "--output", required=True, help="model file path")
    t.add_argument("--layer-config", choices=("adapted", "original"), default="adapted")
    t.add_argument("--content-weight", type=float, default=1.0)
    t.add_argument("--style-weight", type=float, default=5.0)
    t.add_argument("--crop", type=int, default=96)
    t.add_argument("--batch-size", type=int, default=2)
    t.add_argument("--epochs", type=int, default=2)
    t.add_argument("--lr", type=float, default=1e-3)
    t.add_argument("--seed", type=int, default=0)
    t.add_argument("--max-images", type=int, default=0)
    t.set_defaults(func=cmd_train)

    a = sub.add_parser("apply", help="stylize input.png into output.png")
    a.add_argument("model")
    a.add_argument("input")
    a.add_argument("output")
    a.set_defaults(func=cmd_apply)

    d = sub.add_parser("describe", help="print the model file metadata")
    d.add_argument("model")
    d.set_defaults(func=cmd_describe)

    c = sub.add_parser("compare", help="error-module ratio of two models over a corpus")
    c.add_argument("model_a")
    c.add_argument("model_b")
    c.add_argument("corpus", help="directory of composed codes with sidecars")
    c.add_argument("--out", help="JSON report path")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args)
    except Exception as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
