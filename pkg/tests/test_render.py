"""SVG/PNG rendering output structure."""

from __future__ import annotations

import struct
import zlib

import numpy as np

from polydescent import FactoredPolynomial, PolynomialTarget
from polydescent.levelset import build_level_grid
from polydescent.render import (
    component_image,
    encode_png,
    phase_image,
    render_levelset_svg,
    render_tree_svg,
)
from polydescent.tree import build_descent_tree
from polydescent import convex_hull

PM1 = FactoredPolynomial([(-1, 1), (1, 1)])


def test_png_encoder_well_formed():
    rgb = np.zeros((4, 5, 3), dtype=np.uint8)
    rgb[..., 0] = 200
    data = encode_png(rgb)
    assert data.startswith(b"\x89PNG\r\n\x1a\n")
    # IHDR width/height
    w, h = struct.unpack(">II", data[16:24])
    assert (w, h) == (5, 4)
    # decodable scanlines
    idat_start = data.index(b"IDAT") + 4
    length = struct.unpack(">I", data[idat_start - 8 : idat_start - 4])[0]
    raw = zlib.decompress(data[idat_start : idat_start + length])
    assert len(raw) == 4 * (1 + 5 * 3)


def test_phase_image_shape():
    def value_fn(zs):
        return (zs - 1) * (zs + 1)

    img = phase_image(value_fn, 0j, 1.5, resolution=32)
    assert img.shape == (32, 32, 3)
    assert img.dtype == np.uint8


def test_tree_svg_contains_elements():
    target = PolynomialTarget(PM1)
    tree = build_descent_tree(target)
    hull = convex_hull([-1, 1])
    svg = render_tree_svg(tree, hull)
    assert svg.startswith("<svg ")
    assert svg.count("<circle") == 2  # two roots
    assert "<polyline" in svg
    assert svg.rstrip().endswith("</svg>")


def test_tree_svg_with_phase_background():
    target = PolynomialTarget(PM1)
    tree = build_descent_tree(target)

    def value_fn(zs):
        zs = np.asarray(zs, dtype=np.complex128)
        return (zs - 1) * (zs + 1)

    svg = render_tree_svg(
        tree, None, value_fn=value_fn, phase_background=True, phase_resolution=32
    )
    assert "data:image/png;base64," in svg


def test_levelset_svg():
    grid = build_level_grid(PM1, 0.5, 128)
    img = component_image(grid)
    assert img.shape == (128, 128, 3)
    svg = render_levelset_svg(grid, [-1 + 0j, 1 + 0j])
    assert "data:image/png;base64," in svg
    assert svg.count("<circle") == 2
