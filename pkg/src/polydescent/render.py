"""Static SVG rendering: descent paths, hull, markers, and optional raster
backgrounds (phase coloring or sublevel components) embedded as PNG."""

from __future__ import annotations

import base64
import math
import struct
import zlib

import numpy as np

from . import geometry
from .levelset import LevelSetGrid
from .tree import DescentTree

_VIEW = 800  # rendered viewport edge in px


def encode_png(rgb: np.ndarray) -> bytes:
    """Minimal 8-bit RGB PNG encoder (filter 0 scanlines, one IDAT)."""
    rgb = np.ascontiguousarray(rgb, dtype=np.uint8)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected an (h, w, 3) uint8 array")
    h, w, _ = rgb.shape

    def chunk(tag: bytes, payload: bytes) -> bytes:
        return (
            struct.pack(">I", len(payload))
            + tag
            + payload
            + struct.pack(">I", zlib.crc32(tag + payload) & 0xFFFFFFFF)
        )

    raw = b"".join(b"\x00" + rgb[y].tobytes() for y in range(h))
    return (
        b"\x89PNG\r\n\x1a\n"
        + chunk(b"IHDR", struct.pack(">IIBBBBB", w, h, 8, 2, 0, 0, 0))
        + chunk(b"IDAT", zlib.compress(raw, 6))
        + chunk(b"IEND", b"")
    )


def _hsv_to_rgb(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    h6 = (h % 1.0) * 6.0
    i = np.floor(h6).astype(int) % 6
    f = h6 - np.floor(h6)
    p = v * (1 - s)
    q = v * (1 - f * s)
    t = v * (1 - (1 - f) * s)
    out = np.zeros(h.shape + (3,))
    choices = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)]
    for idx, (r, g, b) in enumerate(choices):
        mask = i == idx
        out[mask, 0] = r[mask]
        out[mask, 1] = g[mask]
        out[mask, 2] = b[mask]
    return out


def phase_image(
    value_fn,
    center: complex,
    half_width: float,
    resolution: int = 256,
) -> np.ndarray:
    """Phase coloring of f/|f| on a grid: hue = argument, light shading by
    modulus bands.  Returns an (res, res, 3) uint8 array, row 0 at top."""
    step = 2.0 * half_width / resolution
    xs = center.real - half_width + step * (np.arange(resolution) + 0.5)
    ys = center.imag + half_width - step * (np.arange(resolution) + 0.5)
    zs = xs[None, :] + 1j * ys[:, None]
    vals = np.asarray(value_fn(zs), dtype=np.complex128)
    vals = np.where(np.isfinite(vals), vals, 0)  # poles render as the origin hue
    hue = (np.angle(vals) / (2 * math.pi)) % 1.0
    with np.errstate(divide="ignore"):
        logmod = np.log(np.abs(vals))
    logmod[~np.isfinite(logmod)] = 0.0
    shade = 0.75 + 0.25 * ((logmod / math.log(2)) % 1.0)
    rgb = _hsv_to_rgb(hue, np.full_like(hue, 0.55), shade)
    return (np.clip(rgb, 0, 1) * 255).astype(np.uint8)


_PALETTE = [
    (31, 119, 180),
    (255, 127, 14),
    (44, 160, 44),
    (214, 39, 40),
    (148, 103, 189),
    (140, 86, 75),
    (227, 119, 194),
    (127, 127, 127),
    (188, 189, 34),
    (23, 190, 207),
]


def component_image(grid: LevelSetGrid) -> np.ndarray:
    """Color the labeled sublevel components; outside cells stay white."""
    labels = grid.labels[::-1, :]  # row 0 at top
    rgb = np.full(labels.shape + (3,), 255, dtype=np.uint8)
    for lab in range(1, int(labels.max()) + 1):
        color = _PALETTE[(lab - 1) % len(_PALETTE)]
        rgb[labels == lab] = color
    return rgb


class _Frame:
    """Maps complex coordinates to the SVG viewport (y axis flipped)."""

    def __init__(self, center: complex, half_width: float):
        self.center = center
        self.half_width = half_width

    def x(self, z: complex) -> float:
        return (z.real - self.center.real + self.half_width) * _VIEW / (
            2 * self.half_width
        )

    def y(self, z: complex) -> float:
        return (self.center.imag + self.half_width - z.imag) * _VIEW / (
            2 * self.half_width
        )

    def pt(self, z: complex) -> str:
        return f"{self.x(z):.2f},{self.y(z):.2f}"


def _frame_for(points: list[complex], pad: float = 0.15) -> _Frame:
    xs = [p.real for p in points]
    ys = [p.imag for p in points]
    cx = 0.5 * (max(xs) + min(xs))
    cy = 0.5 * (max(ys) + min(ys))
    hw = 0.5 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    return _Frame(complex(cx, cy), hw * (1 + pad))


def _svg_header(background: bytes | None = None) -> list[str]:
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_VIEW}" '
        f'height="{_VIEW}" viewBox="0 0 {_VIEW} {_VIEW}">',
        f'<rect width="{_VIEW}" height="{_VIEW}" fill="white"/>',
    ]
    if background is not None:
        b64 = base64.b64encode(background).decode("ascii")
        lines.append(
            f'<image x="0" y="0" width="{_VIEW}" height="{_VIEW}" '
            f'href="data:image/png;base64,{b64}" preserveAspectRatio="none"/>'
        )
    return lines


def render_tree_svg(
    tree: DescentTree,
    hull: geometry.ConvexHull | None = None,
    value_fn=None,
    phase_background: bool = False,
    phase_resolution: int = 256,
) -> str:
    """Paths as polylines, hull outline, root dots and critical crosses."""
    pts = [v.location for v in tree.vertices]
    for e in tree.edges:
        pts.extend([complex(e.path.zs[0]), complex(e.path.zs[-1])])
    if hull is not None:
        pts.extend(hull.vertices)
    frame = _frame_for(pts)

    background = None
    if phase_background and value_fn is not None:
        img = phase_image(value_fn, frame.center, frame.half_width, phase_resolution)
        background = encode_png(img)
    out = _svg_header(background)

    if hull is not None and len(hull.vertices) >= 2:
        shape = " ".join(frame.pt(v) for v in hull.vertices)
        tag = "polygon" if not hull.degenerate else "polyline"
        out.append(
            f'<{tag} points="{shape}" fill="none" stroke="#888888" '
            f'stroke-width="1.5" stroke-dasharray="6,4"/>'
        )
    for e in tree.edges:
        zs = e.path.zs
        stride = max(1, zs.size // 400)
        sampled = list(zs[::stride]) + [zs[-1]]
        shape = " ".join(frame.pt(complex(z)) for z in sampled)
        out.append(
            f'<polyline points="{shape}" fill="none" stroke="#1f77b4" '
            f'stroke-width="2"/>'
        )
    for v in tree.vertices:
        x, y = frame.x(v.location), frame.y(v.location)
        if v.kind == "root":
            out.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="5" fill="black"/>')
        else:
            out.append(
                f'<g stroke="#d62728" stroke-width="2">'
                f'<line x1="{x - 5:.2f}" y1="{y - 5:.2f}" x2="{x + 5:.2f}" y2="{y + 5:.2f}"/>'
                f'<line x1="{x - 5:.2f}" y1="{y + 5:.2f}" x2="{x + 5:.2f}" y2="{y - 5:.2f}"/>'
                f"</g>"
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_levelset_svg(
    grid: LevelSetGrid, roots: list[complex] | None = None
) -> str:
    """Sublevel components as a colored raster with root markers on top."""
    frame = _Frame(grid.center, grid.half_width)
    background = encode_png(component_image(grid))
    out = _svg_header(background)
    for z in roots or []:
        out.append(
            f'<circle cx="{frame.x(z):.2f}" cy="{frame.y(z):.2f}" r="5" '
            f'fill="black" stroke="white" stroke-width="1.5"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
