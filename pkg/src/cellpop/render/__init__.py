"""Rendering: color scales, the abstract render model, and SVG output.

Import from the submodules directly (colors, model, svg, palettes); this
package intentionally re-exports nothing so that core modules can depend
on palettes without a cycle.
"""
