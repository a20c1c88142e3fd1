"""Command-line pipeline: generate -> stylize -> correct -> verify / eval.

Every raster is exported with the quiet zone and a sidecar carrying the
scheduled bits and geometry; downstream stages refuse to run blind.

Exit codes: 0 success, 1 usage error, 2 decode/verification failure,
3 non-convergence.
"""

import argparse
import csv
import shlex
import sys
import time
from pathlib import Path

import numpy as np
from PIL import Image

from .correction import RobustnessParams, run_stage_c
from .decoder import binarize_field, decode_check, to_gray
from .errors import ArtqrError, NonConvergence, StylizerFailure
from .geometry import ModuleGrid, gaussian_module_kernel
from .metrics import DistortionSpec, decode_rate_trial, error_module_count, ssim
from .qr import build_matrix, encode_message, matrix_size
from .scheduling import compose_qa, compute_plan, schedule
from .sidecar import (
    SidecarMeta,
    bits_to_hex,
    load_core,
    payload_digest,
    read_sidecar,
    save_png,
    write_sidecar,
)
from .stylizers import apply_external, apply_stylizer, builtin_stylizers

USAGE_ERROR, VERIFY_ERROR, NONCONVERGENCE_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _load_image(path, side):
    img = Image.open(path).convert("RGB")
    if img.size != (side, side):
        img = img.resize((side, side), Image.BILINEAR)
    return np.asarray(img)


def _meta_path(image_path, explicit):
    if explicit:
        return Path(explicit)
    return Path(image_path).with_suffix(".meta")


def cmd_generate(args):
    version = args.version
    m = matrix_size(version)
    a = args.module_px
    side = m * a
    image = _load_image(args.image, side)

    frame = encode_message(args.message.encode("utf-8"), version, args.level)
    layout = build_matrix(frame, args.mask)
    kernel = gaussian_module_kernel(a)
    grid = ModuleGrid(a, m)
    plan = compute_plan(to_gray(image), kernel, layout)
    scheduled = schedule(frame, plan, layout)
    radius = args.spot_radius if args.spot_radius is not None else a // 4
    qa = compose_qa(image, scheduled, grid, radius)

    meta = SidecarMeta(
        qr_version=version, ec_level=args.level, mask_index=args.mask,
        m=m, a=a, quiet_zone=args.quiet_zone,
        scheduled_bits_hex=bits_to_hex(scheduled.bits),
        payload_sha256=payload_digest(args.message.encode("utf-8")),
        delta=args.delta, eta=args.eta, spot_radius=radius,
        provenance=["generate@%d" % int(time.time())],
    )
    save_png(args.output, qa, meta)
    write_sidecar(_meta_path(args.output, args.meta), meta)
    print("wrote %s (%d px core + %d module quiet zone)"
          % (args.output, side, args.quiet_zone))
    return 0


def cmd_stylize(args):
    meta = read_sidecar(args.meta)
    core = load_core(args.image, meta)
    if args.external:
        styled = apply_external(core, shlex.split(args.external))
        meta.provenance.append("stylize:external=%s" % args.external)
    else:
        styled = apply_stylizer(core, args.stylizer)
        meta.provenance.append("stylize:%s" % args.stylizer)
    save_png(args.output, styled, meta)
    write_sidecar(_meta_path(args.output, args.out_meta), meta)
    print("wrote %s (stylizer: %s)" % (args.output, args.external or args.stylizer))
    return 0


def cmd_correct(args):
    meta = read_sidecar(args.meta)
    core = load_core(args.image, meta)
    meta.delta = args.delta if args.delta is not None else meta.delta
    meta.eta = args.eta if args.eta is not None else meta.eta
    meta.spot_radius = args.radius if args.radius is not None else meta.spot_radius
    params = RobustnessParams(meta.delta, meta.eta, meta.spot_radius, args.max_iterations)
    grid = meta.grid()
    kernel = gaussian_module_kernel(meta.a)
    scheduled = meta.scheduled_matrix()

    result = run_stage_c(core, scheduled, grid, kernel, params)
    meta.provenance.append("correct:delta=%g,eta=%g,r=%d"
                           % (meta.delta, meta.eta, meta.spot_radius))
    save_png(args.output, result.qc_color, meta)
    write_sidecar(_meta_path(args.output, args.out_meta), meta)

    rep = result.report
    print("iterations: %d" % rep.iterations_used)
    print("registry: %d modules (%d lifted, %d raster repairs)"
          % (len(rep.registry), len(rep.lifted), rep.quantization_repairs))
    print("per-iteration non-robust counts: %s" % rep.omega_history)
    print("final non-robust set size: %d" % len(rep.non_robust))
    return 0


def cmd_verify(args):
    meta = read_sidecar(args.meta)
    core = load_core(args.image, meta)
    grid = meta.grid()
    result = decode_check(core, grid, meta.mask_index)
    if not result.ok:
        print("decode FAILED (%s stage)" % result.failure)
        return VERIFY_ERROR
    print("payload: %s" % result.payload.decode("utf-8", "replace"))
    print("rs-corrections: %d" % result.corrections)
    digest_ok = payload_digest(result.payload) == meta.payload_sha256
    print("payload-digest-match: %s" % ("yes" if digest_ok else "NO"))

    from .correction import RobustnessParams, evaluate, ideal_bits
    from .decoder import psi
    gray = to_gray(core)
    field = binarize_field(gray)
    current = psi(gray, field.thresholds)
    scheduled = meta.scheduled_matrix()
    ideal = ideal_bits(scheduled, grid, meta.spot_radius, current)
    params = RobustnessParams(meta.delta, meta.eta, meta.spot_radius)
    report = evaluate(gray, field, ideal, gaussian_module_kernel(meta.a), params)
    hist, edges = np.histogram(report.scores, bins=10, range=(0.0, 1.0))
    print("robustness histogram (delta=%g):" % meta.delta)
    for lo, hi, count in zip(edges[:-1], edges[1:], hist):
        print("  [%.1f, %.1f): %d" % (lo, hi, count))
    print("non-robust modules: %d" % len(report.non_robust))
    return 0 if digest_ok else VERIFY_ERROR


def cmd_eval(args):
    corpus = sorted(Path(args.corpus).glob("*.png"))
    if not corpus:
        print("no PNG files in %s" % args.corpus, file=sys.stderr)
        return USAGE_ERROR
    spec = DistortionSpec(brightness_shift=args.brightness, gamma=args.gamma,
                          scale_factor=args.scale, tilt_degrees=args.tilt,
                          noise_sigma=args.noise)
    field_map = {"brightness": "brightness_shift", "gamma": "gamma",
                 "scale": "scale_factor", "tilt": "tilt_degrees",
                 "noise": "noise_sigma"}
    for pair in args.distortion or ():
        key, _, value = pair.partition("=")
        if key not in field_map or not value:
            print("bad --distortion %r (known: %s)" % (pair, ", ".join(field_map)),
                  file=sys.stderr)
            return USAGE_ERROR
        setattr(spec, field_map[key], float(value))
    rows = []
    for png in corpus:
        meta_path = png.with_suffix(".meta")
        row = {"image": png.name}
        try:
            meta = read_sidecar(meta_path)
            core = load_core(png, meta)
            grid = meta.grid()
            scheduled = meta.scheduled_matrix()
            row["error_modules"] = error_module_count(core, scheduled, grid)
            if args.trials:
                payload = None
                rate, _ = decode_rate_trial(core, grid, spec, args.trials, args.seed, payload)
                row["decode_rate"] = "%.3f" % rate
            if args.reference:
                ref = _load_image(args.reference, core.shape[0])
                row["ssim"] = "%.4f" % ssim(to_gray(core), to_gray(ref))
                if args.compare_standard:
                    from .geometry import expand_modules
                    plain = expand_modules(
                        (1 - scheduled.bits).astype(np.uint8) * 255, meta.a).astype(np.float64)
                    delta_ssim = ssim(to_gray(core), to_gray(ref)) - ssim(plain, to_gray(ref))
                    row["delta_ssim_vs_plain"] = "%.4f" % delta_ssim
        except Exception as exc:  # per-item errors are logged, not fatal
            row["error"] = str(exc)
        rows.append(row)

    fields = ["image", "error_modules", "decode_rate", "ssim", "delta_ssim_vs_plain", "error"]
    out = Path(args.out) if args.out else None
    stream = out.open("w", newline="") if out else sys.stdout
    try:
        stream.write("# format-version: %d\n" % 1)
        writer = csv.DictWriter(stream, fieldnames=fields, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
    finally:
        if out:
            stream.close()
            print("wrote %s (%d rows)" % (out, len(rows)))
    return 0


def build_parser():
    p = _Parser(prog="artqr", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="blend a message and an image into a baseline code")
    g.add_argument("message")
    g.add_argument("image")
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--meta", help="sidecar path (default: output with .meta)")
    g.add_argument("--version", type=int, default=5)
    g.add_argument("--level", choices="LMQH", default="L")
    g.add_argument("--mask", type=int, choices=range(8), default=0)
    g.add_argument("--module-px", type=int, default=13)
    g.add_argument("--spot-radius", type=int, default=None)
    g.add_argument("--quiet-zone", type=int, default=4)
    g.add_argument("--delta", type=float, default=0.1)
    g.add_argument("--eta", type=float, default=0.8)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("stylize", help="apply a built-in or external stylizer")
    s.add_argument("image")
    s.add_argument("meta")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--out-meta")
    s.add_argument("--stylizer", default="identity",
                   help="built-in name[:arg]; built-ins: %s" % ", ".join(builtin_stylizers()))
    s.add_argument("--external", metavar="CMD",
                   help="external command (one shell-quoted string); gets the "
                        "input and output PNG paths appended")
    s.set_defaults(func=cmd_stylize)

    c = sub.add_parser("correct", help="repair non-robust modules until decodable")
    c.add_argument("image")
    c.add_argument("meta")
    c.add_argument("-o", "--output", required=True)
    c.add_argument("--out-meta")
    c.add_argument("--delta", type=float, default=None)
    c.add_argument("--eta", type=float, default=None)
    c.add_argument("--radius", type=int, default=None)
    c.add_argument("--max-iterations", type=int, default=20)
    c.set_defaults(func=cmd_correct)

    v = sub.add_parser("verify", help="decode a raster against its sidecar")
    v.add_argument("image")
    v.add_argument("meta")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="batch metrics over a corpus directory")
    e.add_argument("corpus")
    e.add_argument("--out", help="CSV output path (default: stdout)")
    e.add_argument("--reference", help="blended source image for SSIM columns")
    e.add_argument("--compare-standard", action="store_true")
    e.add_argument("--distortion", action="append", metavar="NAME=VALUE",
                   help="distortion parameter, e.g. brightness=40 (repeatable)")
    e.add_argument("--trials", type=int, default=0)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--brightness", type=float, default=0.0)
    e.add_argument("--gamma", type=float, default=1.0)
    e.add_argument("--scale", type=float, default=1.0)
    e.add_argument("--tilt", type=float, default=0.0)
    e.add_argument("--noise", type=float, default=2.0)
    e.set_defaults(func=cmd_eval)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        return args.func(args)
    except NonConvergence as exc:
        print("error: %s" % exc, file=sys.stderr)
        return NONCONVERGENCE_ERROR
    except StylizerFailure as exc:
        print("error: %s" % exc, file=sys.stderr)
        return VERIFY_ERROR
    except (ArtqrError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_ERROR if isinstance(exc, (OSError, ValueError)) else VERIFY_ERROR


if __name__ == "__main__":
    sys.exit(main())
