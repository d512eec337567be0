"""PNG rasterization of a RenderModel with Pillow.

The canvas is a fixed 1200x900 base scaled by an integer factor, so the
output stays deterministic for a given Pillow build. Geometry follows the
same abstract layout units the SVG renderer uses.
"""

from __future__ import annotations

import io

from PIL import Image, ImageDraw

from .errors import DegenerateSizeError
from .render.model import Panel, RenderModel
from .render.svg import THEME_STYLES

BASE_WIDTH = 1200
BASE_HEIGHT = 900


def _px(region, width: float, height: float):
    x, y, w, h = region
    return x * width, y * height, w * width, h * height


def _draw_row_panel(draw: ImageDraw.ImageDraw, panel: Panel, region, n_rows, style):
    x, y, w, h = region
    if n_rows == 0 or panel.kind == "none":
        return
    band = h / n_rows
    pad = w * 0.02
    if panel.kind == "bars":
        for i, entry in enumerate(panel.entries):
            top = y + i * band + band * 0.15
            draw.rectangle(
                [x + pad, top, x + pad + entry.length * w * 0.96, top + band * 0.70],
                fill=style["bar"],
            )
    elif panel.kind == "stacked_bars":
        for i, entry in enumerate(panel.entries):
            top = y + i * band + band * 0.15
            bar_len = entry.length * w * 0.96
            offset = x + pad
            for _, value, color in entry.segments:
                seg = bar_len * (value / entry.total) if entry.total > 0 else 0.0
                draw.rectangle(
                    [offset, top, offset + seg, top + band * 0.70], fill=color
                )
                offset += seg
    else:
        for i, entry in enumerate(panel.entries):
            cy = y + i * band + band * 0.5
            if entry.curve is None:
                draw.rectangle(
                    [x + w * 0.5 - 1, y + i * band + band * 0.2,
                     x + w * 0.5 + 1, y + i * band + band * 0.8],
                    fill=style["fg"],
                )
                continue
            grid = entry.curve.grid
            dens = entry.curve.density
            span = float(grid[-1] - grid[0]) or 1.0
            peak = float(dens.max()) or 1.0
            xs = x + pad + (grid - grid[0]) / span * (w - 2 * pad)
            half = dens / peak * band * 0.45
            top = list(zip(xs.tolist(), (cy - half).tolist()))
            bottom = list(zip(xs.tolist()[::-1], (cy + half).tolist()[::-1]))
            draw.polygon(top + bottom, fill=style["bar"])


def _draw_col_panel(draw: ImageDraw.ImageDraw, panel: Panel, region, n_cols, style):
    x, y, w, h = region
    if n_cols == 0 or panel.kind == "none":
        return
    band = w / n_cols
    pad = h * 0.02
    if panel.kind == "bars":
        for j, entry in enumerate(panel.entries):
            bar_h = entry.length * h * 0.96
            left = x + j * band + band * 0.15
            draw.rectangle(
                [left, y + h - pad - bar_h, left + band * 0.70, y + h - pad],
                fill=style["bar"],
            )
    elif panel.kind == "stacked_bars":
        for j, entry in enumerate(panel.entries):
            bar_h = entry.length * h * 0.96
            left = x + j * band + band * 0.15
            offset = y + h - pad
            for _, value, color in entry.segments:
                seg = bar_h * (value / entry.total) if entry.total > 0 else 0.0
                draw.rectangle(
                    [left, offset - seg, left + band * 0.70, offset], fill=color
                )
                offset -= seg
    else:
        for j, entry in enumerate(panel.entries):
            cx = x + j * band + band * 0.5
            if entry.curve is None:
                draw.rectangle(
                    [x + j * band + band * 0.2, y + h * 0.5 - 1,
                     x + j * band + band * 0.8, y + h * 0.5 + 1],
                    fill=style["fg"],
                )
                continue
            grid = entry.curve.grid
            dens = entry.curve.density
            span = float(grid[-1] - grid[0]) or 1.0
            peak = float(dens.max()) or 1.0
            ys = y + h - pad - (grid - grid[0]) / span * (h - 2 * pad)
            half = dens / peak * band * 0.45
            left = list(zip((cx - half).tolist(), ys.tolist()))
            right = list(zip((cx + half).tolist()[::-1], ys.tolist()[::-1]))
            draw.polygon(left + right, fill=style["bar"])


def render_png(model: RenderModel, scale: int = 2) -> bytes:
    """Rasterize at scale x (1200 x 900); returns PNG bytes."""
    if scale < 1:
        raise DegenerateSizeError(BASE_WIDTH * scale, BASE_HEIGHT * scale)
    width, height = float(BASE_WIDTH * scale), float(BASE_HEIGHT * scale)
    style = THEME_STYLES[model.theme]
    image = Image.new("RGB", (int(width), int(height)), style["bg"])
    draw = ImageDraw.Draw(image)
    layout = model.layout_units
    n_rows, n_cols = len(model.row_labels), len(model.col_labels)
    empty = n_rows == 0 or n_cols == 0
    heatmap_px = _px(layout["heatmap"], width, height) if "heatmap" in layout else None

    if empty:
        region = heatmap_px or _px(
            layout.get("col_panel", (0.1, 0.1, 0.8, 0.8)), width, height
        )
        fx, fy, fw, fh = region
        draw.rectangle([fx, fy, fx + fw, fy + fh], outline=style["frame"])
        draw.text((fx + fw / 2, fy + fh / 2), "no data", fill=style["fg"], anchor="mm")
    else:
        if heatmap_px is not None and model.grid_cells:
            hx, hy, hw, hh = heatmap_px
            cw, ch = hw / n_cols, hh / n_rows
            for row, col, _value, _raw, color in model.grid_cells:
                left, top = hx + col * cw, hy + row * ch
                draw.rectangle([left, top, left + cw, top + ch], fill=color)
        if heatmap_px is not None and model.expanded_rows:
            hx, hy, hw, hh = heatmap_px
            cw, ch = hw / n_cols, hh / n_rows
            row_index = {r: i for i, r in enumerate(model.row_labels)}
            for row_id, bars in model.expanded_rows:
                band_y = hy + row_index[row_id] * ch
                for j, (_col_id, length, color) in enumerate(bars):
                    bar_h = length * ch * 0.9
                    left = hx + j * cw + cw * 0.1
                    draw.rectangle(
                        [left, band_y + ch - bar_h, left + cw * 0.8, band_y + ch],
                        fill=color,
                    )
        if "row_panel" in layout:
            _draw_row_panel(
                draw, model.row_panel, _px(layout["row_panel"], width, height),
                n_rows, style,
            )
        if "col_panel" in layout:
            _draw_col_panel(
                draw, model.col_panel, _px(layout["col_panel"], width, height),
                n_cols, style,
            )
        if model.legend is not None and "legend" in layout:
            from .render.colors import ColorScale
            import numpy as np

            lx, ly, lw, lh = _px(layout["legend"], width, height)
            legend = model.legend
            scale_obj = ColorScale(
                colormap=legend.colormap, anchors=legend.anchors,
                vmin=legend.vmin, vmax=legend.vmax,
            )
            steps = 64
            samples = (
                np.linspace(legend.vmin, legend.vmax, steps)
                if legend.vmax > legend.vmin else np.full(steps, legend.vmin)
            )
            colors = scale_obj.map_values(samples)
            step_w = lw * 0.7 / steps
            for i, color in enumerate(colors):
                draw.rectangle(
                    [lx + i * step_w, ly + lh * 0.1,
                     lx + (i + 1) * step_w, ly + lh * 0.5],
                    fill=color,
                )
            for i, tick in enumerate(legend.ticks):
                tick_x = lx + lw * 0.7 * i / (len(legend.ticks) - 1)
                draw.text(
                    (tick_x, ly + lh * 0.7), f"{tick:.3f}",
                    fill=style["fg"], anchor="ma",
                )
        if heatmap_px is not None and "row_labels" in layout:
            rx, ry, rw, rh = _px(layout["row_labels"], width, height)
            band = rh / n_rows
            stride = max(1, -(-n_rows // 64))
            for i in range(0, n_rows, stride):
                draw.text(
                    (rx + rw - 3, ry + i * band + band * 0.5),
                    model.row_labels[i], fill=style["fg"], anchor="rm",
                )
        if "col_labels" in layout:
            cx, cy, cw_, _ch = _px(layout["col_labels"], width, height)
            band = cw_ / n_cols
            stride = max(1, -(-n_cols // 64))
            for j in range(0, n_cols, stride):
                draw.text(
                    (cx + j * band + band * 0.5, cy + 4),
                    model.col_labels[j], fill=style["fg"], anchor="ma",
                )

    buffer = io.BytesIO()
    image.save(buffer, format="PNG")
    return buffer.getvalue()
