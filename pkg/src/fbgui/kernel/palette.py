"""Default 256-color palette and color packing for the two pixel modes."""

from __future__ import annotations

from functools import lru_cache

RGB = tuple[int, int, int]

# 16 classic base colors, then a 6x6x6 cube, then a 24-step gray ramp.
_BASE16: list[RGB] = [
    (0, 0, 0), (128, 0, 0), (0, 128, 0), (128, 128, 0),
    (0, 0, 128), (128, 0, 128), (0, 128, 128), (192, 192, 192),
    (128, 128, 128), (255, 0, 0), (0, 255, 0), (255, 255, 0),
    (0, 0, 255), (255, 0, 255), (0, 255, 255), (255, 255, 255),
]

_CUBE_LEVELS = (0, 95, 135, 175, 215, 255)


def default_palette() -> tuple[RGB, ...]:
    colors: list[RGB] = list(_BASE16)
    for r in _CUBE_LEVELS:
        for g in _CUBE_LEVELS:
            for b in _CUBE_LEVELS:
                colors.append((r, g, b))
    for i in range(24):
        v = 8 + i * 10
        colors.append((v, v, v))
    assert len(colors) == 256
    return tuple(colors)


def pack565(r: int, g: int, b: int) -> int:
    """Pack 8-bit channels into 16-bit 5-6-5 RGB."""
    return ((r >> 3) << 11) | ((g >> 2) << 5) | (b >> 3)


def unpack565(value: int) -> RGB:
    """Expand 5-6-5 back to 8-bit channels (bit-replicated rounding)."""
    r5 = (value >> 11) & 0x1F
    g6 = (value >> 5) & 0x3F
    b5 = value & 0x1F
    return ((r5 << 3) | (r5 >> 2), (g6 << 2) | (g6 >> 4), (b5 << 3) | (b5 >> 2))


@lru_cache(maxsize=4096)
def nearest_index(rgb: RGB, palette: tuple[RGB, ...]) -> int:
    """Lowest palette index at minimal squared distance (deterministic)."""
    r, g, b = rgb
    best = 0
    best_d = 1 << 30
    for i, (pr, pg, pb) in enumerate(palette):
        d = (r - pr) ** 2 + (g - pg) ** 2 + (b - pb) ** 2
        if d < best_d:
            best, best_d = i, d
    return best
