"""Built-in colormaps and the categorical palette.

Self-contained definitions; no external colormap dependency. Each colormap
is a list of (position, "#rrggbb") anchors with positions ascending from
0 to 1, interpolated linearly per sRGB channel.
"""

from __future__ import annotations

DEFAULT_COLORMAP = "ocean"

COLORMAPS: dict[str, tuple[tuple[float, str], ...]] = {
    # dark blue -> teal -> green -> yellow-green -> yellow
    "ocean": (
        (0.00, "#132b6b"),
        (0.25, "#15787d"),
        (0.50, "#2fa352"),
        (0.75, "#9fc431"),
        (1.00, "#f6e61f"),
    ),
    # near-black purple -> magenta -> orange -> pale yellow
    "ember": (
        (0.00, "#1b0b34"),
        (0.33, "#7c1f6e"),
        (0.66, "#e0583f"),
        (1.00, "#f9e05a"),
    ),
    "ice": (
        (0.00, "#f3f8fd"),
        (0.50, "#5b9bd5"),
        (1.00, "#0c2d6b"),
    ),
    "grays": (
        (0.00, "#f5f5f5"),
        (1.00, "#1c1c1c"),
    ),
}

# 12 fixed high-contrast colors for samples / cell types; assignment repeats
# (with a surfaced warning) past 12 and can be overridden per id.
CATEGORY_PALETTE: tuple[str, ...] = (
    "#4e79a7",
    "#f28e2b",
    "#e15759",
    "#76b7b2",
    "#59a14f",
    "#edc948",
    "#b07aa1",
    "#ff9da7",
    "#9c755f",
    "#bab0ac",
    "#86bcb6",
    "#d37295",
)


def hex_to_rgb(color: str) -> tuple[int, int, int]:
    color = color.lstrip("#")
    return int(color[0:2], 16), int(color[2:4], 16), int(color[4:6], 16)


def rgb_to_hex(r: int, g: int, b: int) -> str:
    return f"#{r:02x}{g:02x}{b:02x}"
