#!/usr/bin/env python3
"""Regenerate src/fbgui/kernel/fontdata.py from a monospaced TTF.

Requires Pillow. The output is a frozen bitmap table so the package has no
font dependency at runtime and renders identically everywhere.

Usage: python scripts/gen_fontdata.py [path-to-mono-ttf]
"""

import sys
from pathlib import Path

from PIL import Image, ImageDraw, ImageFont

CELL_W, CELL_H = 8, 16
SIZE = 12  # advance <= 8 and ascent+descent <= 16 for DejaVu Sans Mono

DEFAULT_TTF = (
    "/usr/local/lib/python3.10/dist-packages/matplotlib/"
    "mpl-data/fonts/ttf/DejaVuSansMono.ttf"
)


def render_glyph(font: ImageFont.FreeTypeFont, ch: str) -> bytes:
    img = Image.new("L", (CELL_W, CELL_H), 0)
    draw = ImageDraw.Draw(img)
    ascent, _ = font.getmetrics()
    draw.text((0, 0), ch, fill=255, font=font, anchor=None)
    rows = []
    px = img.load()
    for y in range(CELL_H):
        bits = 0
        for x in range(CELL_W):
            if px[x, y] >= 128:
                bits |= 0x80 >> x
        rows.append(bits)
    return bytes(rows)


def replacement_glyph() -> bytes:
    # hollow box, distinct from every real glyph
    rows = [0x00, 0x00, 0x7E, 0x42, 0x42, 0x42, 0x42, 0x42,
            0x42, 0x42, 0x42, 0x7E, 0x00, 0x00, 0x00, 0x00]
    return bytes(rows)


def main() -> None:
    ttf = sys.argv[1] if len(sys.argv) > 1 else DEFAULT_TTF
    font = ImageFont.truetype(ttf, SIZE)
    out = Path(__file__).resolve().parent.parent / "src/fbgui/kernel/fontdata.py"
    lines = [
        '"""Frozen 8x16 glyph bitmaps for printable ASCII (generated file).',
        "",
        "One entry per code point 32..126; 16 bytes per glyph, one byte per row,",
        "most significant bit = leftmost pixel. Regenerate with",
        'scripts/gen_fontdata.py."""',
        "",
        f"GLYPH_W = {CELL_W}",
        f"GLYPH_H = {CELL_H}",
        "",
        "REPLACEMENT = bytes.fromhex(\"" + replacement_glyph().hex() + "\")",
        "",
        "GLYPHS = {",
    ]
    for cp in range(32, 127):
        data = render_glyph(font, chr(cp))
        comment = chr(cp) if cp != 32 else "space"
        lines.append(f'    {cp}: bytes.fromhex("{data.hex()}"),  # {comment}')
    lines.append("}")
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
