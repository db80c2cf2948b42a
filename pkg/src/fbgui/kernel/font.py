"""Built-in monospaced bitmap font (8x16, printable ASCII)."""

from __future__ import annotations

import numpy as np

from . import fontdata

GLYPH_W = fontdata.GLYPH_W
GLYPH_H = fontdata.GLYPH_H

_MASKS: dict[int, np.ndarray] = {}


def _to_mask(rows: bytes) -> np.ndarray:
    mask = np.zeros((GLYPH_H, GLYPH_W), dtype=bool)
    for y, row in enumerate(rows):
        for x in range(GLYPH_W):
            if row & (0x80 >> x):
                mask[y, x] = True
    mask.setflags(write=False)
    return mask


def glyph_mask(ch: str) -> np.ndarray:
    """Boolean (16, 8) pixel mask for one character.

    Characters outside printable ASCII render as the replacement box.
    """
    cp = ord(ch)
    cached = _MASKS.get(cp)
    if cached is not None:
        return cached
    rows = fontdata.GLYPHS.get(cp, fontdata.REPLACEMENT)
    mask = _to_mask(rows)
    _MASKS[cp] = mask
    return mask


def text_width(s: str) -> int:
    return GLYPH_W * len(s)
