"""Software framebuffer and the drawing primitives everything else paints with.

Two pixel modes: 256-color indexed (one palette byte per pixel) and hicolor
(packed 16-bit 5-6-5 RGB). A color value is an int validated against the
buffer's mode; palette resolution happens only when exporting or displaying.
Every primitive clips to the buffer bounds and to an optional clip rect, and
is deterministic: the same op sequence always produces the same pixels.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from . import font
from .palette import RGB, default_palette, unpack565
from .rect import Rect


class Mode(Enum):
    INDEXED = "indexed"
    HICOLOR = "hicolor"


class FormatError(ValueError):
    """Color or buffer incompatible with a pixel format."""


@dataclass(frozen=True)
class PixelFormat:
    mode: Mode
    palette: Optional[tuple[RGB, ...]] = None

    def __post_init__(self):
        if self.mode is Mode.INDEXED:
            pal = self.palette if self.palette is not None else default_palette()
            if len(pal) != 256:
                raise FormatError(f"palette must have 256 entries, got {len(pal)}")
            object.__setattr__(self, "palette", tuple(pal))
        elif self.palette is not None:
            raise FormatError("palette only valid for indexed mode")

    @property
    def dtype(self):
        return np.uint8 if self.mode is Mode.INDEXED else np.uint16

    @property
    def max_color(self) -> int:
        return 255 if self.mode is Mode.INDEXED else 0xFFFF

    def check_color(self, c: int) -> int:
        if not isinstance(c, (int, np.integer)):
            raise FormatError(f"color must be an int, got {type(c).__name__}")
        if not 0 <= c <= self.max_color:
            raise FormatError(f"color {c} out of range for {self.mode.value} mode")
        return int(c)


def make_format(mode: Mode | str, palette: Optional[tuple[RGB, ...]] = None) -> PixelFormat:
    if isinstance(mode, str):
        mode = Mode(mode)
    return PixelFormat(mode, palette if mode is Mode.INDEXED else None)


class FrameBuffer:
    """A width x height grid of color values in one pixel format."""

    __slots__ = ("width", "height", "format", "pixels")

    def __init__(self, width: int, height: int, fmt: PixelFormat, fill: int = 0):
        if width <= 0 or height <= 0:
            raise ValueError(f"framebuffer size must be positive, got {width}x{height}")
        self.width = width
        self.height = height
        self.format = fmt
        self.pixels = np.full((height, width), fmt.check_color(fill), dtype=fmt.dtype)

    @property
    def bounds(self) -> Rect:
        return Rect(0, 0, self.width, self.height)

    def clone(self) -> "FrameBuffer":
        fb = FrameBuffer.__new__(FrameBuffer)
        fb.width = self.width
        fb.height = self.height
        fb.format = self.format
        fb.pixels = self.pixels.copy()
        return fb

    def get(self, x: int, y: int) -> int:
        return int(self.pixels[y, x])

    def _clip_rect(self, r: Rect, clip: Optional[Rect]) -> Rect:
        target = r.intersect(self.bounds)
        if clip is not None:
            target = target.intersect(clip)
        return target


def fill_rect(fb: FrameBuffer, r: Rect, c: int, clip: Optional[Rect] = None) -> None:
    c = fb.format.check_color(c)
    t = fb._clip_rect(r, clip)
    if t.empty:
        return
    fb.pixels[t.y:t.bottom, t.x:t.right] = c


def frame_rect(fb: FrameBuffer, r: Rect, c: int, clip: Optional[Rect] = None,
               thickness: int = 1) -> None:
    """Rectangle outline drawn inward from r's edge."""
    d = thickness
    fill_rect(fb, Rect(r.x, r.y, r.w, d), c, clip)
    fill_rect(fb, Rect(r.x, r.bottom - d, r.w, d), c, clip)
    fill_rect(fb, Rect(r.x, r.y, d, r.h), c, clip)
    fill_rect(fb, Rect(r.right - d, r.y, d, r.h), c, clip)


def blit(dst: FrameBuffer, src: FrameBuffer, at: tuple[int, int],
         clip: Optional[Rect] = None) -> None:
    if src.format.mode is not dst.format.mode:
        raise FormatError(
            f"blit format mismatch: {src.format.mode.value} -> {dst.format.mode.value}")
    ax, ay = at
    t = dst._clip_rect(Rect(ax, ay, src.width, src.height), clip)
    if t.empty:
        return
    sx, sy = t.x - ax, t.y - ay
    # copy() keeps the blit overlap-safe when src and dst alias
    region = src.pixels[sy:sy + t.h, sx:sx + t.w].copy()
    dst.pixels[t.y:t.bottom, t.x:t.right] = region


def draw_text(fb: FrameBuffer, s: str, at: tuple[int, int], fg: int,
              bg: Optional[int] = None, clip: Optional[Rect] = None) -> None:
    fg = fb.format.check_color(fg)
    if bg is not None:
        bg = fb.format.check_color(bg)
    x, y = at
    for i, ch in enumerate(s):
        gx = x + i * font.GLYPH_W
        t = fb._clip_rect(Rect(gx, y, font.GLYPH_W, font.GLYPH_H), clip)
        if t.empty:
            continue
        mask = font.glyph_mask(ch)[t.y - y:t.bottom - y, t.x - gx:t.right - gx]
        region = fb.pixels[t.y:t.bottom, t.x:t.right]
        if bg is not None:
            region[~mask] = bg
        region[mask] = fg


def snapshot_hash(fb: FrameBuffer) -> str:
    """64-bit content digest as 16 hex chars.

    Pure function of (width, height, format, pixels); stable across runs
    and platforms.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(f"{fb.format.mode.value}:{fb.width}x{fb.height}:".encode())
    if fb.format.mode is Mode.INDEXED:
        h.update(bytes(v for rgb in fb.format.palette for v in rgb))
    h.update(np.ascontiguousarray(fb.pixels).tobytes())
    return h.hexdigest()


def resolve_rgb(fb: FrameBuffer) -> np.ndarray:
    """(height, width, 3) uint8 RGB grid after palette / 5-6-5 resolution."""
    if fb.format.mode is Mode.INDEXED:
        table = np.array(fb.format.palette, dtype=np.uint8)
        return table[fb.pixels]
    p = fb.pixels.astype(np.uint16)
    r5 = (p >> 11) & 0x1F
    g6 = (p >> 5) & 0x3F
    b5 = p & 0x1F
    out = np.empty((fb.height, fb.width, 3), dtype=np.uint8)
    out[..., 0] = (r5 << 3) | (r5 >> 2)
    out[..., 1] = (g6 << 2) | (g6 >> 4)
    out[..., 2] = (b5 << 3) | (b5 >> 2)
    return out


def export_image(fb: FrameBuffer, path) -> None:
    """Write a binary portable pixmap: "P6\\n<w> <h>\\n255\\n" + RGB triples."""
    rgb = resolve_rgb(fb)
    header = f"P6\n{fb.width} {fb.height}\n255\n".encode("ascii")
    with open(path, "wb") as f:
        f.write(header)
        f.write(rgb.tobytes())


def read_p6(path) -> np.ndarray:
    """Read back a maxval-255 binary pixmap as an (h, w, 3) uint8 grid."""
    with open(path, "rb") as f:
        data = f.read()
    fields: list[bytes] = []
    pos = 0
    while len(fields) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    if fields[0] != b"P6":
        raise ValueError(f"not a P6 pixmap: {fields[0]!r}")
    w, h, maxval = int(fields[1]), int(fields[2]), int(fields[3])
    if maxval != 255:
        raise ValueError(f"unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after maxval
    raw = data[pos:pos + w * h * 3]
    return np.frombuffer(raw, dtype=np.uint8).reshape(h, w, 3)


def touched_mask(before: FrameBuffer, after: FrameBuffer) -> np.ndarray:
    """Boolean mask of pixels whose values differ between two buffers."""
    return before.pixels != after.pixels
