"""Sidecar round trips and the command-line pipeline end to end."""

import numpy as np
import pytest
from PIL import Image

from artqr.cli import main
from artqr.sidecar import (
    SidecarMeta,
    bits_from_hex,
    bits_to_hex,
    load_core,
    payload_digest,
    read_sidecar,
    save_png,
    write_sidecar,
)
from conftest import MODULE_PX, MODULES, SIDE, corpus_image


@pytest.fixture()
def source_png(tmp_path):
    path = tmp_path / "source.png"
    Image.fromarray(corpus_image(3, side=512)).save(path)
    return path


def test_sidecar_roundtrip(tmp_path):
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, size=(MODULES, MODULES)).astype(np.uint8)
    meta = SidecarMeta(5, "L", 2, MODULES, MODULE_PX, 4, bits_to_hex(bits),
                       payload_digest(b"x"), 0.15, 0.8, 3, ["generate@0"])
    path = tmp_path / "x.meta"
    write_sidecar(path, meta)
    back = read_sidecar(path)
    assert back == meta
    assert np.array_equal(bits_from_hex(back.scheduled_bits_hex, MODULES), bits)
    grid = back.grid()
    assert grid.a == MODULE_PX and grid.m == MODULES


def test_png_quiet_zone_roundtrip(tmp_path):
    img = corpus_image(1)
    meta = SidecarMeta(5, "L", 0, MODULES, MODULE_PX, 4,
                       bits_to_hex(np.zeros((MODULES, MODULES), dtype=np.uint8)),
                       payload_digest(b"y"))
    path = tmp_path / "img.png"
    save_png(path, img, meta)
    loaded = np.asarray(Image.open(path))
    assert loaded.shape[0] == SIDE + 2 * 4 * MODULE_PX  # 585 at defaults
    core = load_core(path, meta)
    assert np.array_equal(core, img)


def _run(args):
    return main(args)


def test_cli_full_pipeline(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    qb = tmp_path / "qb.png"
    qc = tmp_path / "qc.png"
    msg = "https://example.org/cli-pipeline"

    assert _run(["generate", msg, str(source_png), "-o", str(qa)]) == 0
    meta = read_sidecar(qa.with_suffix(".meta"))
    assert meta.m == MODULES and meta.a == MODULE_PX
    loaded = np.asarray(Image.open(qa))
    assert loaded.shape[0] == (MODULES + 8) * MODULE_PX  # 585 px with quiet zone

    assert _run(["verify", str(qa), str(qa.with_suffix(".meta"))]) == 0

    assert _run(["stylize", str(qa), str(qa.with_suffix(".meta")),
                 "-o", str(qb), "--stylizer", "posterize:5"]) == 0
    assert _run(["correct", str(qb), str(qb.with_suffix(".meta")),
                 "-o", str(qc), "--delta", "0.1"]) == 0
    assert _run(["verify", str(qc), str(qc.with_suffix(".meta"))]) == 0

    meta_c = read_sidecar(qc.with_suffix(".meta"))
    assert any(p.startswith("stylize:posterize") for p in meta_c.provenance)
    assert any(p.startswith("correct:") for p in meta_c.provenance)


def test_cli_identity_stylizer_is_noop(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    qb = tmp_path / "qb.png"
    assert _run(["generate", "msg", str(source_png), "-o", str(qa)]) == 0
    assert _run(["stylize", str(qa), str(qa.with_suffix(".meta")),
                 "-o", str(qb), "--stylizer", "identity"]) == 0
    a = np.asarray(Image.open(qa))
    b = np.asarray(Image.open(qb))
    assert np.array_equal(a, b)


def test_cli_mask_and_module_px_options(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    assert _run(["generate", "masked", str(source_png), "-o", str(qa),
                 "--mask", "3", "--module-px", "9"]) == 0
    meta = read_sidecar(qa.with_suffix(".meta"))
    assert meta.mask_index == 3 and meta.a == 9
    core = load_core(qa, meta)
    assert core.shape[0] == 37 * 9  # 333 px core
    assert _run(["verify", str(qa), str(qa.with_suffix(".meta"))]) == 0


def test_cli_capacity_error(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    rc = _run(["generate", "x" * 200, str(source_png), "-o", str(qa)])
    assert rc == 2  # CapacityExceeded surfaces as a pipeline failure


def test_cli_missing_sidecar(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    _run(["generate", "m", str(source_png), "-o", str(qa)])
    rc = _run(["stylize", str(qa), str(tmp_path / "nope.meta"), "-o", str(tmp_path / "qb.png")])
    assert rc != 0


def test_cli_truncated_png(tmp_path, source_png):
    qa = tmp_path / "qa.png"
    _run(["generate", "m", str(source_png), "-o", str(qa)])
    data = qa.read_bytes()
    qa.write_bytes(data[:100])
    rc = _run(["verify", str(qa), str(qa.with_suffix(".meta"))])
    assert rc != 0


def test_cli_usage_error():
    assert main(["generate"]) == 1
    assert main([]) == 1


def test_cli_eval_csv(tmp_path, source_png, capsys):
    qa = tmp_path / "qa.png"
    _run(["generate", "eval me", str(source_png), "-o", str(qa)])
    out_csv = tmp_path / "report.csv"
    rc = _run(["eval", str(tmp_path), "--out", str(out_csv),
               "--reference", str(source_png), "--compare-standard",
               "--trials", "3", "--seed", "7", "--brightness", "20"])
    assert rc == 0
    lines = out_csv.read_text().splitlines()
    assert lines[0].startswith("# format-version:")
    assert lines[1].split(",")[0] == "image"
    # version line + header + a row per PNG (source.png lacks a sidecar and
    # gets an error row instead of aborting the batch)
    assert len(lines) == 4
    qa_row = next(l for l in lines[2:] if l.startswith("qa.png"))
    src_row = next(l for l in lines[2:] if l.startswith("source.png"))
    assert qa_row.split(",")[1] == "0"  # zero error modules
    assert src_row.rstrip(",") != "source.png"  # error column populated


def test_cli_external_stylizer(tmp_path, source_png):
    import sys as _sys
    import textwrap
    qa = tmp_path / "qa.png"
    qb = tmp_path / "qb.png"
    _run(["generate", "ext", str(source_png), "-o", str(qa)])
    script = tmp_path / "noop.py"
    script.write_text(textwrap.dedent("""\
        import shutil, sys
        shutil.copy(sys.argv[1], sys.argv[2])
    """))
    rc = _run(["stylize", str(qa), str(qa.with_suffix(".meta")), "-o", str(qb),
               "--external", "%s %s" % (_sys.executable, script)])
    assert rc == 0
    assert np.array_equal(np.asarray(Image.open(qa)), np.asarray(Image.open(qb)))
