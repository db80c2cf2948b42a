"""Skinning: every painter takes its colors from the active theme.

A theme maps twelve fixed roles to concrete color values for one pixel
mode. Theme files use the record-store text format: one atom named "theme"
(fields name, mode), then one atom named "color" per role (fields role,
value).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..chemical import ChemSystem, deserialize
from ..kernel import Mode, default_palette, nearest_index, pack565

ROLES = (
    "desktop", "window-face", "title-active", "title-inactive",
    "border-light", "border-dark", "button-face", "text",
    "text-disabled", "highlight", "shadow", "selection",
)


class ThemeError(ValueError):
    pass


@dataclass(frozen=True)
class Theme:
    name: str
    mode: Mode
    colors: dict[str, int]

    def __post_init__(self):
        for role in ROLES:
            if role not in self.colors:
                raise ThemeError(f"theme {self.name!r} missing role {role!r}")
        limit = 255 if self.mode is Mode.INDEXED else 0xFFFF
        for role, value in self.colors.items():
            if role not in ROLES:
                raise ThemeError(f"theme {self.name!r} has unknown role {role!r}")
            if not 0 <= value <= limit:
                raise ThemeError(
                    f"theme {self.name!r}: color {value} out of range for {role}")

    def color(self, role: str) -> int:
        try:
            return self.colors[role]
        except KeyError:
            raise ThemeError(f"unknown color role {role!r}") from None


# role -> 8-bit RGB; resolved per mode below
_BUILTIN_RGB = {
    "classic": {
        "desktop": (0, 128, 128), "window-face": (192, 192, 192),
        "title-active": (0, 0, 128), "title-inactive": (128, 128, 128),
        "border-light": (255, 255, 255), "border-dark": (64, 64, 64),
        "button-face": (192, 192, 192), "text": (0, 0, 0),
        "text-disabled": (128, 128, 128), "highlight": (0, 0, 255),
        "shadow": (0, 0, 0), "selection": (0, 0, 128),
    },
    "ocean": {
        "desktop": (16, 48, 96), "window-face": (210, 225, 240),
        "title-active": (24, 96, 160), "title-inactive": (110, 130, 150),
        "border-light": (240, 250, 255), "border-dark": (40, 60, 90),
        "button-face": (180, 205, 230), "text": (10, 20, 40),
        "text-disabled": (120, 140, 160), "highlight": (255, 160, 0),
        "shadow": (8, 16, 32), "selection": (60, 130, 200),
    },
    # the bare, unskinned look
    "mono": {
        "desktop": (88, 88, 88), "window-face": (216, 216, 216),
        "title-active": (0, 0, 0), "title-inactive": (136, 136, 136),
        "border-light": (255, 255, 255), "border-dark": (0, 0, 0),
        "button-face": (216, 216, 216), "text": (0, 0, 0),
        "text-disabled": (136, 136, 136), "highlight": (0, 0, 0),
        "shadow": (0, 0, 0), "selection": (0, 0, 0),
    },
}

BUILTIN_THEMES = tuple(_BUILTIN_RGB)


def rgb_to_mode(rgb: tuple[int, int, int], mode: Mode) -> int:
    if mode is Mode.INDEXED:
        return nearest_index(rgb, default_palette())
    return pack565(*rgb)


def builtin_theme(name: str, mode: Mode) -> Theme:
    try:
        table = _BUILTIN_RGB[name]
    except KeyError:
        raise ThemeError(f"no builtin theme {name!r}") from None
    return Theme(name, mode, {role: rgb_to_mode(rgb, mode)
                              for role, rgb in table.items()})


def save_theme(theme: Theme) -> str:
    sys = ChemSystem()
    sys.add_atom("theme", {"name": theme.name, "mode": theme.mode.value})
    for role in ROLES:
        sys.add_atom("color", {"role": role, "value": theme.colors[role]})
    return sys.serialize()


def load_theme(text: str) -> Theme:
    sys = deserialize(text)
    header = sys.select("theme")
    if not header:
        raise ThemeError("theme file has no 'theme' atom")
    head = sys.atom(header[0])
    try:
        mode = Mode(head.value("mode"))
    except ValueError:
        raise ThemeError(f"bad theme mode {head.value('mode')!r}") from None
    colors: dict[str, int] = {}
    for aid in sys.select("color"):
        atom = sys.atom(aid)
        role = atom.value("role")
        value = atom.value("value")
        if not isinstance(value, int):
            raise ThemeError(f"role {role!r} has non-integer value")
        colors[role] = value
    for role in ROLES:
        if role not in colors:
            raise ThemeError(f"theme file missing role {role!r}")
    return Theme(head.value("name") or "unnamed", mode, colors)


def load_theme_file(path) -> Theme:
    with open(path, "r", encoding="utf-8") as f:
        return load_theme(f.read())
