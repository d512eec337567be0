"""Value-to-color mapping: piecewise-linear interpolation over anchor colors."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .palettes import COLORMAPS, hex_to_rgb

_HEX2 = tuple(f"{i:02x}" for i in range(256))


@dataclass(frozen=True, eq=False)
class ColorScale:
    """Maps values in [vmin, vmax] onto a colormap's anchor path.

    Interpolation is linear per sRGB channel between consecutive anchors.
    A collapsed domain (vmin = vmax) maps everything to the first anchor.
    """

    colormap: str
    anchors: tuple[tuple[float, str], ...]
    vmin: float
    vmax: float

    def __post_init__(self):
        if len(self.anchors) < 2:
            raise ValueError("need at least 2 anchors")
        positions = [p for p, _ in self.anchors]
        if positions[0] != 0.0 or positions[-1] != 1.0:
            raise ValueError("anchor positions must start at 0 and end at 1")
        if any(a >= b for a, b in zip(positions, positions[1:])):
            raise ValueError("anchor positions must be strictly ascending")
        if self.vmin > self.vmax:
            raise ValueError("vmin must not exceed vmax")

    @classmethod
    def from_colormap(cls, name: str, vmin: float, vmax: float) -> "ColorScale":
        if name not in COLORMAPS:
            raise KeyError(f"unknown colormap {name!r}")
        return cls(colormap=name, anchors=COLORMAPS[name],
                   vmin=float(vmin), vmax=float(vmax))

    def map_values(self, values: np.ndarray) -> list[str]:
        """Hex color per value; values are clipped into [vmin, vmax]."""
        v = np.asarray(values, dtype=np.float64).ravel()
        if self.vmax == self.vmin:
            return [self.anchors[0][1]] * v.size
        t = np.clip((v - self.vmin) / (self.vmax - self.vmin), 0.0, 1.0)
        positions = np.array([p for p, _ in self.anchors])
        rgb = np.array([hex_to_rgb(c) for _, c in self.anchors], dtype=np.float64)
        r = np.rint(np.interp(t, positions, rgb[:, 0])).astype(np.int64)
        g = np.rint(np.interp(t, positions, rgb[:, 1])).astype(np.int64)
        b = np.rint(np.interp(t, positions, rgb[:, 2])).astype(np.int64)
        return [
            "#" + _HEX2[ri] + _HEX2[gi] + _HEX2[bi]
            for ri, gi, bi in zip(r.tolist(), g.tolist(), b.tolist())
        ]

    def color_at(self, value: float) -> str:
        return self.map_values(np.array([value]))[0]

    def ticks(self, count: int = 5) -> list[float]:
        """Evenly spaced tick values from vmin to vmax inclusive."""
        if count < 2:
            raise ValueError("need at least 2 ticks")
        span = self.vmax - self.vmin
        return [self.vmin + span * i / (count - 1) for i in range(count)]
