"""Binding-versus-CLI parity on golden fixtures.

Every test drives the installed command line through a subprocess, then
reproduces the same artifact in process through the bindings and compares
at the byte level. A single ``[PASS]``/``[FAIL]`` line per fixture is
printed (run with ``-s`` to see them).
"""

import struct
import subprocess
import sys

import numpy as np
import pytest
from PIL import Image

from radfuse import load_image, to_uint8
from radfuse_bindings import bind_build_plan, bind_fuse, bind_preprocess, bind_transform


def _check(ok, label):
    print(f"[{'PASS' if ok else 'FAIL'}] {label}")
    assert ok, label


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "radfuse.cli", *map(str, args)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return proc


def sinogram_payload(path):
    raw = path.read_bytes()
    assert raw[:8] == b"RADEXSG1"
    rows, cols = struct.unpack("<II", raw[8:16])
    return raw[16:16 + rows * cols * 4], (rows, cols)


@pytest.fixture(scope="session")
def cli_artifacts(fixture_dir, tmp_path_factory):
    """One CLI run per artifact, shared across the parity tests."""
    work = tmp_path_factory.mktemp("cli")
    plan_path = work / "plan64.json"
    run_cli("plan", "--size", "64", "--out", plan_path)

    sino_dir = work / "sino"
    run_cli("transform", "--plan", plan_path, "--in", fixture_dir / "gray.png",
            "--out", sino_dir)

    pre_dir = work / "pre"
    run_cli("preprocess", "--in", fixture_dir / "fundus.png", "--out", pre_dir,
            "--side", "64")
    pre_png = pre_dir / "fundus_pre.png"

    render_dir = work / "render"
    run_cli("transform", "--plan", plan_path, "--in", pre_png,
            "--out", render_dir, "--render")

    fused_png = work / "fused.png"
    run_cli("fuse", "--image", pre_png,
            "--sinogram", render_dir / "fundus_pre.radexsg",
            "--out", fused_png)

    return {
        "plan": plan_path,
        "sinogram": sino_dir / "gray.radexsg",
        "pre": pre_png,
        "render": render_dir / "fundus_pre_sino.png",
        "fused": fused_png,
    }


def test_plan_json_parity(cli_artifacts):
    handle = bind_build_plan({"m": 64})
    file_bytes = cli_artifacts["plan"].read_bytes()
    _check(
        handle.json.encode("utf-8") == file_bytes,
        "criterion 10: bind_build_plan canonical JSON byte-equal to the CLI "
        "plan file",
    )


def test_transform_parity(fixture_dir, cli_artifacts):
    handle = bind_build_plan({"m": 64})
    image = load_image(fixture_dir / "gray.png")
    out = bind_transform(image, handle)
    payload, shape = sinogram_payload(cli_artifacts["sinogram"])
    _check(
        out.shape == shape and out.tobytes() == payload,
        "criterion 10: bind_transform output byte-equal to the CLI sinogram "
        "payload on the gray fixture",
    )


def test_preprocess_parity(fixture_dir, cli_artifacts):
    out = bind_preprocess(load_image(fixture_dir / "fundus.png"),
                          {"target_side": 64})
    cli_png = Image.open(cli_artifacts["pre"])
    ok = cli_png.mode == "L"
    ok = ok and to_uint8(out).tobytes() == cli_png.tobytes()
    ok = ok and np.array_equal(out, load_image(cli_artifacts["pre"]))
    _check(
        ok,
        "criterion 10: bind_preprocess output byte-equal to the CLI "
        "preprocessed PNG on the fundus fixture",
    )


def test_fuse_parity(cli_artifacts):
    out = bind_fuse(load_image(cli_artifacts["pre"]),
                    load_image(cli_artifacts["render"]))
    cli_png = Image.open(cli_artifacts["fused"])
    _check(
        out.shape == (64, 128) and to_uint8(out).tobytes() == cli_png.tobytes(),
        "criterion 10: bind_fuse output byte-equal to the CLI fused PNG on "
        "the fundus fixture",
    )
