"""Deterministic SVG output for a RenderModel.

Every numeric attribute is written with exactly 3 decimal places and colors
are lowercase hex, so identical inputs produce byte-identical documents on
any platform. Element order is fixed: grid cells row-major, then expanded
bars, then panels, then legend, then labels.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DegenerateSizeError
from .colors import ColorScale
from .model import Panel, RenderModel

MIN_SIZE = 64
MAX_AXIS_LABELS = 64
LEGEND_STEPS = 64

THEME_STYLES = {
    "light": {"bg": "#ffffff", "fg": "#1a1a1a", "frame": "#888888", "bar": "#94a7bd"},
    "dark": {"bg": "#1e1e1e", "fg": "#e0e0e0", "frame": "#aaaaaa", "bar": "#5c718a"},
}

FONT = "sans-serif"


def _f(x: float) -> str:
    value = f"{x:.3f}"
    return "0.000" if value == "-0.000" else value


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _rect(x: float, y: float, w: float, h: float, fill: str, extra: str = "") -> str:
    return (
        f'<rect x="{_f(x)}" y="{_f(y)}" width="{_f(w)}" height="{_f(h)}" '
        f'fill="{fill}"{extra}/>'
    )


def _text(x: float, y: float, content: str, size: float, fill: str,
          anchor: str = "start", extra: str = "") -> str:
    return (
        f'<text x="{_f(x)}" y="{_f(y)}" font-family="{FONT}" '
        f'font-size="{_f(size)}" fill="{fill}" text-anchor="{anchor}"'
        f'{extra}>{_esc(content)}</text>'
    )


def _label_stride(count: int) -> int:
    return max(1, math.ceil(count / MAX_AXIS_LABELS))


def _px(region: tuple[float, float, float, float], width: float, height: float):
    x, y, w, h = region
    return x * width, y * height, w * width, h * height


def _row_panel_parts(panel: Panel, region, n_rows: int, style) -> list[str]:
    x, y, w, h = region
    parts = []
    if n_rows == 0 or panel.kind == "none":
        return parts
    band = h / n_rows
    pad = w * 0.02
    if panel.kind == "bars":
        for i, entry in enumerate(panel.entries):
            parts.append(_rect(
                x + pad, y + i * band + band * 0.15,
                entry.length * w * 0.96, band * 0.70, style["bar"],
            ))
    elif panel.kind == "stacked_bars":
        for i, entry in enumerate(panel.entries):
            bar_len = entry.length * w * 0.96
            offset = x + pad
            for _, value, color in entry.segments:
                seg = bar_len * (value / entry.total) if entry.total > 0 else 0.0
                parts.append(_rect(
                    offset, y + i * band + band * 0.15, seg, band * 0.70, color,
                ))
                offset += seg
    else:
        for i, entry in enumerate(panel.entries):
            cy = y + i * band + band * 0.5
            if entry.curve is None:
                parts.append(_rect(
                    x + w * 0.5 - 0.75, y + i * band + band * 0.2,
                    1.5, band * 0.6, style["fg"],
                ))
                continue
            grid = entry.curve.grid
            dens = entry.curve.density
            span = float(grid[-1] - grid[0]) or 1.0
            peak = float(dens.max()) or 1.0
            points = []
            xs = x + pad + (grid - grid[0]) / span * (w - 2 * pad)
            half = dens / peak * band * 0.45
            for px_, hy in zip(xs.tolist(), half.tolist()):
                points.append(f"{_f(px_)},{_f(cy - hy)}")
            for px_, hy in zip(xs.tolist()[::-1], half.tolist()[::-1]):
                points.append(f"{_f(px_)},{_f(cy + hy)}")
            parts.append(
                f'<polygon points="{" ".join(points)}" fill="{style["bar"]}"/>'
            )
    return parts


def _col_panel_parts(panel: Panel, region, n_cols: int, style) -> list[str]:
    x, y, w, h = region
    parts = []
    if n_cols == 0 or panel.kind == "none":
        return parts
    band = w / n_cols
    pad = h * 0.02
    if panel.kind == "bars":
        for j, entry in enumerate(panel.entries):
            bar_h = entry.length * h * 0.96
            parts.append(_rect(
                x + j * band + band * 0.15, y + h - pad - bar_h,
                band * 0.70, bar_h, style["bar"],
            ))
    elif panel.kind == "stacked_bars":
        for j, entry in enumerate(panel.entries):
            bar_h = entry.length * h * 0.96
            offset = y + h - pad
            for _, value, color in entry.segments:
                seg = bar_h * (value / entry.total) if entry.total > 0 else 0.0
                offset -= seg
                parts.append(_rect(
                    x + j * band + band * 0.15, offset, band * 0.70, seg, color,
                ))
    else:
        for j, entry in enumerate(panel.entries):
            cx = x + j * band + band * 0.5
            if entry.curve is None:
                parts.append(_rect(
                    x + j * band + band * 0.2, y + h * 0.5 - 0.75,
                    band * 0.6, 1.5, style["fg"],
                ))
                continue
            grid = entry.curve.grid
            dens = entry.curve.density
            span = float(grid[-1] - grid[0]) or 1.0
            peak = float(dens.max()) or 1.0
            ys = y + h - pad - (grid - grid[0]) / span * (h - 2 * pad)
            half = dens / peak * band * 0.45
            points = []
            for py, hx in zip(ys.tolist(), half.tolist()):
                points.append(f"{_f(cx - hx)},{_f(py)}")
            for py, hx in zip(ys.tolist()[::-1], half.tolist()[::-1]):
                points.append(f"{_f(cx + hx)},{_f(py)}")
            parts.append(
                f'<polygon points="{" ".join(points)}" fill="{style["bar"]}"/>'
            )
    return parts


def render_svg(model: RenderModel, width_px: int, height_px: int) -> bytes:
    """Standalone SVG 1.1 document; byte-identical for identical inputs."""
    if width_px < MIN_SIZE or height_px < MIN_SIZE:
        raise DegenerateSizeError(width_px, height_px)
    width, height = float(width_px), float(height_px)
    style = THEME_STYLES[model.theme]
    n_rows, n_cols = len(model.row_labels), len(model.col_labels)
    empty = n_rows == 0 or n_cols == 0
    layout = model.layout_units

    parts = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        '<g id="background">',
        _rect(0.0, 0.0, width, height, style["bg"]),
        "</g>",
    ]

    heatmap_px = _px(layout["heatmap"], width, height) if "heatmap" in layout else None

    parts.append('<g id="heatmap">')
    if empty:
        frame_region = heatmap_px
        if frame_region is None:
            named = layout.get("col_panel", (0.1, 0.1, 0.8, 0.8))
            frame_region = _px(named, width, height)
        fx, fy, fw, fh = frame_region
        parts.append(_rect(
            fx, fy, fw, fh, "none",
            extra=f' stroke="{style["frame"]}" stroke-width="1.000"',
        ))
        parts.append(_text(
            fx + fw / 2, fy + fh / 2, "no data", 14.0, style["fg"], anchor="middle",
        ))
    elif heatmap_px is not None and model.grid_cells:
        hx, hy, hw, hh = heatmap_px
        cw, ch = hw / n_cols, hh / n_rows
        for row, col, _value, _raw, color in model.grid_cells:
            parts.append(_rect(hx + col * cw, hy + row * ch, cw, ch, color))
    parts.append("</g>")

    parts.append('<g id="expanded">')
    if not empty and heatmap_px is not None and model.expanded_rows:
        hx, hy, hw, hh = heatmap_px
        cw, ch = hw / n_cols, hh / n_rows
        row_index = {r: i for i, r in enumerate(model.row_labels)}
        for row_id, bars in model.expanded_rows:
            band_y = hy + row_index[row_id] * ch
            for j, (_col_id, length, color) in enumerate(bars):
                bar_h = length * ch * 0.9
                parts.append(_rect(
                    hx + j * cw + cw * 0.1, band_y + ch - bar_h,
                    cw * 0.8, bar_h, color,
                ))
    parts.append("</g>")

    parts.append('<g id="row-panel">')
    if not empty and "row_panel" in layout:
        parts.extend(_row_panel_parts(
            model.row_panel, _px(layout["row_panel"], width, height), n_rows, style,
        ))
    parts.append("</g>")

    parts.append('<g id="col-panel">')
    if not empty and "col_panel" in layout:
        parts.extend(_col_panel_parts(
            model.col_panel, _px(layout["col_panel"], width, height), n_cols, style,
        ))
    parts.append("</g>")

    parts.append('<g id="legend">')
    if not empty and model.legend is not None and "legend" in layout:
        lx, ly, lw, lh = _px(layout["legend"], width, height)
        legend = model.legend
        scale = ColorScale(
            colormap=legend.colormap,
            anchors=legend.anchors,
            vmin=legend.vmin,
            vmax=legend.vmax,
        )
        samples = (
            np.linspace(legend.vmin, legend.vmax, LEGEND_STEPS)
            if legend.vmax > legend.vmin
            else np.full(LEGEND_STEPS, legend.vmin)
        )
        colors = scale.map_values(samples)
        step_w = lw * 0.7 / LEGEND_STEPS
        for i, color in enumerate(colors):
            parts.append(_rect(
                lx + i * step_w, ly + lh * 0.1, step_w, lh * 0.4, color,
            ))
        for i, tick in enumerate(legend.ticks):
            tick_x = lx + lw * 0.7 * i / (len(legend.ticks) - 1)
            parts.append(_text(
                tick_x, ly + lh * 0.9, _f(tick), 9.0, style["fg"], anchor="middle",
            ))
    parts.append("</g>")

    parts.append('<g id="labels">')
    if not empty:
        if heatmap_px is not None and "row_labels" in layout:
            rx, ry, rw, rh = _px(layout["row_labels"], width, height)
            band = rh / n_rows
            size = min(11.0, band * 0.7)
            stride = _label_stride(n_rows)
            for i in range(0, n_rows, stride):
                parts.append(_text(
                    rx + rw - 3.0, ry + i * band + band * 0.5 + size * 0.35,
                    model.row_labels[i], size, style["fg"], anchor="end",
                ))
        if "col_labels" in layout:
            cx, cy, cw_, ch_ = _px(layout["col_labels"], width, height)
            band = cw_ / n_cols
            size = min(11.0, band * 0.7)
            stride = _label_stride(n_cols)
            for j in range(0, n_cols, stride):
                anchor_x = cx + j * band + band * 0.5
                anchor_y = cy + 4.0
                parts.append(_text(
                    anchor_x, anchor_y, model.col_labels[j], size, style["fg"],
                    anchor="start",
                    extra=(
                        f' transform="rotate(45.000 {_f(anchor_x)} {_f(anchor_y)})"'
                    ),
                ))
    parts.append("</g>")

    parts.append("</svg>")
    return "\n".join(parts).encode("utf-8")
