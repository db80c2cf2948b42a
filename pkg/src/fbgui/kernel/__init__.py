"""Drawing kernel: framebuffer, rects, palette, bitmap font, image export."""

from .font import GLYPH_H, GLYPH_W, glyph_mask, text_width
from .framebuffer import (
    FormatError,
    FrameBuffer,
    Mode,
    PixelFormat,
    blit,
    draw_text,
    export_image,
    fill_rect,
    frame_rect,
    make_format,
    read_p6,
    resolve_rgb,
    snapshot_hash,
    touched_mask,
)
from .palette import default_palette, nearest_index, pack565, unpack565
from .rect import Rect

__all__ = [
    "FormatError", "FrameBuffer", "Mode", "PixelFormat", "Rect",
    "GLYPH_H", "GLYPH_W", "glyph_mask", "text_width",
    "blit", "draw_text", "export_image", "fill_rect", "frame_rect",
    "make_format", "read_p6", "resolve_rgb", "snapshot_hash", "touched_mask",
    "default_palette", "nearest_index", "pack565", "unpack565",
]
