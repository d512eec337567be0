"""Core data model: the immutable dataset bundle and the declarative view config.

Every other module consumes these types. Matrices are dense (paper-scale
data stays well under thousands x hundreds), datasets are immutable after
construction, and ViewConfig is a plain value object mutated by replacement.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field, fields, replace
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .errors import DuplicateIdError, InvalidConfigError, NegativeCountError
from .render.palettes import COLORMAPS, DEFAULT_COLORMAP

AXES = ("samples", "cell_types")
NORMALIZATIONS = ("none", "row_proportion", "col_proportion")
PANEL_KINDS = ("none", "bars", "stacked_bars", "violins")
THEMES = ("light", "dark")
SORT_DIRECTIONS = ("asc", "desc")
FILTER_OPS = ("equals", "in_set", "range")
MISSING_POLICIES = ("exclude", "include")

FIELD_CATEGORICAL = "categorical"
FIELD_NUMERIC = "numeric"
FIELD_HIERARCHY = "hierarchy"

COUNT_TOTAL = "count_total"

_HEX_COLOR_RE = re.compile(r"^#[0-9a-f]{6}$")
_SORT_FIELD_RE = re.compile(
    r"^(?:count_total|alphabetical|metadata\((?P<name>[^()]+)\)"
    r"|hierarchy_level\((?P<level>[1-9][0-9]*)\))$"
)


def _check_ids(axis: str, ids: Sequence[str]) -> tuple[str, ...]:
    out = tuple(ids)
    seen = set()
    for entity_id in out:
        if not isinstance(entity_id, str) or not entity_id:
            raise ValueError(f"{axis} ids must be non-empty strings")
        if entity_id in seen:
            raise DuplicateIdError(axis, entity_id)
        seen.add(entity_id)
    return out


class CountsMatrix:
    """Dense samples x cell-types grid of non-negative integer counts.

    Axis ids are unique within their axis and keep their given order. The
    container itself tolerates empty axes so filtered-to-nothing views can
    flow through the pipeline; Dataset construction is where non-emptiness
    is enforced.
    """

    __slots__ = ("row_ids", "col_ids", "values", "_row_pos", "_col_pos")

    def __init__(
        self,
        row_ids: Sequence[str],
        col_ids: Sequence[str],
        values: Any,
    ):
        self.row_ids = _check_ids("rows", row_ids)
        self.col_ids = _check_ids("cols", col_ids)
        arr = np.asarray(values, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(len(self.row_ids), len(self.col_ids))
        if arr.shape != (len(self.row_ids), len(self.col_ids)):
            raise ValueError(
                f"values shape {arr.shape} does not match "
                f"{len(self.row_ids)}x{len(self.col_ids)} ids"
            )
        if arr.size and arr.min() < 0:
            r, c = np.argwhere(arr < 0)[0]
            raise NegativeCountError(self.row_ids[r], self.col_ids[c], int(arr[r, c]))
        arr = arr.copy()
        arr.setflags(write=False)
        self.values = arr
        self._row_pos = {r: i for i, r in enumerate(self.row_ids)}
        self._col_pos = {c: i for i, c in enumerate(self.col_ids)}

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def row_index(self, row_id: str) -> int:
        return self._row_pos[row_id]

    def col_index(self, col_id: str) -> int:
        return self._col_pos[col_id]

    def row_totals(self) -> np.ndarray:
        return self.values.sum(axis=1)

    def col_totals(self) -> np.ndarray:
        return self.values.sum(axis=0)

    def grand_total(self) -> int:
        return int(self.values.sum())

    def submatrix(self, row_mask: np.ndarray, col_mask: np.ndarray) -> "CountsMatrix":
        rows = [r for r, keep in zip(self.row_ids, row_mask) if keep]
        cols = [c for c, keep in zip(self.col_ids, col_mask) if keep]
        return CountsMatrix(rows, cols, self.values[np.ix_(row_mask, col_mask)])

    def reordered(self, row_ids: Sequence[str], col_ids: Sequence[str]) -> "CountsMatrix":
        ri = [self._row_pos[r] for r in row_ids]
        ci = [self._col_pos[c] for c in col_ids]
        return CountsMatrix(row_ids, col_ids, self.values[np.ix_(ri, ci)])

    def transposed(self) -> "CountsMatrix":
        return CountsMatrix(self.col_ids, self.row_ids, self.values.T)

    def sliced(self, row_window: tuple[int, int] | None, col_window: tuple[int, int] | None) -> "CountsMatrix":
        rs = slice(*row_window) if row_window else slice(None)
        cs = slice(*col_window) if col_window else slice(None)
        return CountsMatrix(self.row_ids[rs], self.col_ids[cs], self.values[rs, cs])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CountsMatrix):
            return NotImplemented
        return (
            self.row_ids == other.row_ids
            and self.col_ids == other.col_ids
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):  # pragma: no cover - mutable-adjacent container
        raise TypeError("CountsMatrix is not hashable")

    def __repr__(self) -> str:
        return f"CountsMatrix({len(self.row_ids)}x{len(self.col_ids)})"

    def to_csv(self, row_axis_name: str = "sample") -> str:
        """Serialize to the counts-CSV wire format (header + integer rows)."""
        lines = [",".join([_csv_quote(row_axis_name)] + [_csv_quote(c) for c in self.col_ids])]
        for i, row_id in enumerate(self.row_ids):
            cells = [str(int(v)) for v in self.values[i]]
            lines.append(",".join([_csv_quote(row_id)] + cells))
        return "\n".join(lines) + "\n"


def _csv_quote(text: str) -> str:
    if any(ch in text for ch in ',"\n\r'):
        return '"' + text.replace('"', '""') + '"'
    return text


class ValueMatrix:
    """Dense grid of finite non-negative reals plus how they were derived.

    value_kind is carried as base_kind (raw_count / row_proportion /
    col_proportion) plus a log_applied flag, since the log transform
    composes with either proportion mode.
    """

    __slots__ = ("row_ids", "col_ids", "values", "base_kind", "log_applied",
                 "_row_pos", "_col_pos")

    BASE_KINDS = ("raw_count", "row_proportion", "col_proportion")

    def __init__(
        self,
        row_ids: Sequence[str],
        col_ids: Sequence[str],
        values: Any,
        base_kind: str = "raw_count",
        log_applied: bool = False,
    ):
        self.row_ids = _check_ids("rows", row_ids)
        self.col_ids = _check_ids("cols", col_ids)
        if base_kind not in self.BASE_KINDS:
            raise ValueError(f"unknown base_kind {base_kind!r}")
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(len(self.row_ids), len(self.col_ids))
        if arr.shape != (len(self.row_ids), len(self.col_ids)):
            raise ValueError(
                f"values shape {arr.shape} does not match "
                f"{len(self.row_ids)}x{len(self.col_ids)} ids"
            )
        if arr.size and not np.isfinite(arr).all():
            raise ValueError("values must be finite")
        if arr.size and arr.min() < 0:
            raise ValueError("values must be non-negative")
        arr = arr.copy()
        arr.setflags(write=False)
        self.values = arr
        self.base_kind = base_kind
        self.log_applied = bool(log_applied)
        self._row_pos = {r: i for i, r in enumerate(self.row_ids)}
        self._col_pos = {c: i for i, c in enumerate(self.col_ids)}

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    def reordered(self, row_ids: Sequence[str], col_ids: Sequence[str]) -> "ValueMatrix":
        ri = [self._row_pos[r] for r in row_ids]
        ci = [self._col_pos[c] for c in col_ids]
        return ValueMatrix(row_ids, col_ids, self.values[np.ix_(ri, ci)],
                           self.base_kind, self.log_applied)

    def transposed(self) -> "ValueMatrix":
        # row-normalized data becomes column-normalized once transposed
        swap = {"row_proportion": "col_proportion",
                "col_proportion": "row_proportion"}
        kind = swap.get(self.base_kind, self.base_kind)
        return ValueMatrix(self.col_ids, self.row_ids, self.values.T,
                           kind, self.log_applied)

    def sliced(self, row_window: tuple[int, int] | None, col_window: tuple[int, int] | None) -> "ValueMatrix":
        rs = slice(*row_window) if row_window else slice(None)
        cs = slice(*col_window) if col_window else slice(None)
        return ValueMatrix(self.row_ids[rs], self.col_ids[cs], self.values[rs, cs],
                           self.base_kind, self.log_applied)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ValueMatrix):
            return NotImplemented
        return (
            self.row_ids == other.row_ids
            and self.col_ids == other.col_ids
            and self.base_kind == other.base_kind
            and self.log_applied == other.log_applied
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):  # pragma: no cover
        raise TypeError("ValueMatrix is not hashable")

    def __repr__(self) -> str:
        tag = self.base_kind + ("+log" if self.log_applied else "")
        return f"ValueMatrix({len(self.row_ids)}x{len(self.col_ids)}, {tag})"


@dataclass(frozen=True)
class FieldSpec:
    """One metadata column: its name and declared kind."""

    name: str
    kind: str  # categorical | numeric | hierarchy
    level: int | None = None  # hierarchy fields only, 1-based from the root

    def __post_init__(self):
        if self.kind not in (FIELD_CATEGORICAL, FIELD_NUMERIC, FIELD_HIERARCHY):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if (self.kind == FIELD_HIERARCHY) != (self.level is not None):
            raise ValueError("level is set iff kind is hierarchy")


class MetadataTable:
    """Per-entity key/value records for one axis.

    Missing values are represented as None; entities without a record are
    treated as all-missing. Hierarchy fields must form a contiguous level
    prefix 1..k (a deeper level without its shallower parents is rejected).
    """

    __slots__ = ("axis", "records", "field_catalog", "_by_name")

    def __init__(
        self,
        axis: str,
        records: Mapping[str, Mapping[str, Any]] | None = None,
        field_catalog: Iterable[FieldSpec] = (),
    ):
        if axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        self.axis = axis
        self.field_catalog = tuple(field_catalog)
        names = [f.name for f in self.field_catalog]
        if len(set(names)) != len(names):
            raise ValueError("duplicate field names in catalog")
        levels = sorted(f.level for f in self.field_catalog if f.kind == FIELD_HIERARCHY)
        for i, lvl in enumerate(levels, start=1):
            if lvl != i:
                from .errors import NonContiguousHierarchyError
                raise NonContiguousHierarchyError(present=lvl, missing=i)
        self._by_name = {f.name: f for f in self.field_catalog}
        recs: dict[str, dict[str, Any]] = {}
        for entity_id, rec in (records or {}).items():
            recs[entity_id] = {k: rec[k] for k in rec if k in self._by_name}
        self.records = recs

    @classmethod
    def empty(cls, axis: str) -> "MetadataTable":
        return cls(axis)

    def __bool__(self) -> bool:
        return bool(self.field_catalog)

    def has_field(self, name: str) -> bool:
        return name in self._by_name

    def field(self, name: str) -> FieldSpec:
        return self._by_name[name]

    def hierarchy_field(self, level: int) -> FieldSpec | None:
        for f in self.field_catalog:
            if f.kind == FIELD_HIERARCHY and f.level == level:
                return f
        return None

    def value(self, entity_id: str, field_name: str) -> Any:
        """Value for an entity, or None when missing."""
        rec = self.records.get(entity_id)
        if rec is None:
            return None
        return rec.get(field_name)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MetadataTable):
            return NotImplemented
        return (
            self.axis == other.axis
            and self.field_catalog == other.field_catalog
            and self.records == other.records
        )

    def __repr__(self) -> str:
        return (
            f"MetadataTable({self.axis}, {len(self.records)} records, "
            f"{len(self.field_catalog)} fields)"
        )


@dataclass(frozen=True)
class Dataset:
    """Immutable bundle of counts plus per-axis metadata."""

    counts: CountsMatrix
    sample_meta: MetadataTable
    cell_type_meta: MetadataTable
    name: str = "dataset"
    source_descriptor: str = ""

    def __post_init__(self):
        if not self.counts.row_ids or not self.counts.col_ids:
            raise ValueError("dataset counts must have at least one row and column")
        if self.sample_meta.axis != "samples":
            raise ValueError("sample_meta must have axis 'samples'")
        if self.cell_type_meta.axis != "cell_types":
            raise ValueError("cell_type_meta must have axis 'cell_types'")

    def meta_for_axis(self, axis: str) -> MetadataTable:
        return self.sample_meta if axis == "samples" else self.cell_type_meta


@dataclass(frozen=True)
class SortKey:
    """One sort criterion for an axis.

    `field` is one of: "count_total", "alphabetical", "metadata(<name>)",
    "hierarchy_level(<i>)".
    """

    field: str
    direction: str = "asc"

    def __post_init__(self):
        if self.direction not in SORT_DIRECTIONS:
            raise ValueError(f"direction must be one of {SORT_DIRECTIONS}")
        if not _SORT_FIELD_RE.match(self.field):
            raise ValueError(f"malformed sort field {self.field!r}")

    @property
    def kind(self) -> str:
        if self.field == COUNT_TOTAL:
            return "count_total"
        if self.field == "alphabetical":
            return "alphabetical"
        if self.field.startswith("metadata("):
            return "metadata"
        return "hierarchy"

    @property
    def metadata_name(self) -> str | None:
        m = _SORT_FIELD_RE.match(self.field)
        return m.group("name") if m else None

    @property
    def hierarchy_level(self) -> int | None:
        m = _SORT_FIELD_RE.match(self.field)
        lvl = m.group("level") if m else None
        return int(lvl) if lvl else None

    def to_dict(self) -> dict[str, str]:
        return {"field": self.field, "direction": self.direction}


@dataclass(frozen=True)
class FilterPredicate:
    """One conjunct of the view filter.

    `field` is a metadata field name or "count_total". The operand slots in
    use depend on `op`: equals -> value; in_set -> values; range -> low /
    high / inclusive. missing_policy says whether entities with a missing
    field value are dropped ("exclude") or kept ("include").
    """

    axis: str
    field: str
    op: str
    value: Any = None
    values: tuple = ()
    low: float | None = None
    high: float | None = None
    inclusive: bool = True
    missing_policy: str = "exclude"

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}")
        if self.op not in FILTER_OPS:
            raise ValueError(f"op must be one of {FILTER_OPS}")
        if self.missing_policy not in MISSING_POLICIES:
            raise ValueError(f"missing_policy must be one of {MISSING_POLICIES}")
        object.__setattr__(self, "values", tuple(self.values))

    def to_dict(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"axis": self.axis, "field": self.field, "op": self.op}
        if self.op == "equals":
            doc["value"] = self.value
        elif self.op == "in_set":
            doc["values"] = list(self.values)
        else:
            doc["min"] = self.low
            doc["max"] = self.high
            doc["inclusive"] = self.inclusive
        doc["missing_policy"] = self.missing_policy
        return doc


@dataclass(frozen=True)
class ZoomState:
    """Half-open [start, end) windows in displayed-order indices."""

    row_window: tuple[int, int] | None = None
    col_window: tuple[int, int] | None = None

    def __post_init__(self):
        for name in ("row_window", "col_window"):
            win = getattr(self, name)
            if win is not None:
                object.__setattr__(self, name, (int(win[0]), int(win[1])))

    def to_dict(self) -> dict[str, Any]:
        return {
            "row_window": list(self.row_window) if self.row_window else None,
            "col_window": list(self.col_window) if self.col_window else None,
        }


@dataclass(frozen=True)
class ViewConfig:
    """Complete declarative description of one view.

    Equality is structural and insensitive to expanded_rows / category_colors
    iteration order, which is what history de-duplication relies on.
    """

    normalization: str = "none"
    log_applied: bool = False
    transpose: bool = False
    row_sort: tuple[SortKey, ...] = ()
    col_sort: tuple[SortKey, ...] = ()
    filters: tuple[FilterPredicate, ...] = ()
    row_group_by: str | None = None
    expanded_rows: frozenset[str] = frozenset()
    row_side_panel: str = "bars"
    col_side_panel: str = "bars"
    heatmap_visible: bool = True
    zoom: ZoomState | None = None
    theme: str = "light"
    heatmap_colormap: str = DEFAULT_COLORMAP
    category_colors: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.normalization not in NORMALIZATIONS:
            raise ValueError(f"normalization must be one of {NORMALIZATIONS}")
        if self.row_side_panel not in PANEL_KINDS:
            raise ValueError(f"row_side_panel must be one of {PANEL_KINDS}")
        if self.col_side_panel not in PANEL_KINDS:
            raise ValueError(f"col_side_panel must be one of {PANEL_KINDS}")
        if self.theme not in THEMES:
            raise ValueError(f"theme must be one of {THEMES}")
        object.__setattr__(self, "row_sort", tuple(self.row_sort))
        object.__setattr__(self, "col_sort", tuple(self.col_sort))
        object.__setattr__(self, "filters", tuple(self.filters))
        object.__setattr__(self, "expanded_rows", frozenset(self.expanded_rows))
        object.__setattr__(self, "category_colors", dict(self.category_colors))

    def replace(self, **changes: Any) -> "ViewConfig":
        """Copy with the given fields changed."""
        return replace(self, **changes)

    def to_dict(self) -> dict[str, Any]:
        """Canonical JSON document (stable key and element order)."""
        return {
            "normalization": self.normalization,
            "log_applied": self.log_applied,
            "transpose": self.transpose,
            "row_sort": [k.to_dict() for k in self.row_sort],
            "col_sort": [k.to_dict() for k in self.col_sort],
            "filters": [p.to_dict() for p in self.filters],
            "row_group_by": self.row_group_by,
            "expanded_rows": sorted(self.expanded_rows),
            "row_side_panel": self.row_side_panel,
            "col_side_panel": self.col_side_panel,
            "heatmap_visible": self.heatmap_visible,
            "zoom": self.zoom.to_dict() if self.zoom else None,
            "theme": self.theme,
            "heatmap_colormap": self.heatmap_colormap,
            "category_colors": {
                k: self.category_colors[k] for k in sorted(self.category_colors)
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass(frozen=True)
class Violation:
    """One reason a config cannot be applied to a dataset."""

    field: str
    reason: str

    def __str__(self) -> str:
        return f"{self.field}: {self.reason}"

    def to_dict(self) -> dict[str, str]:
        return {"field": self.field, "reason": self.reason}


def default_config(dataset: Dataset) -> ViewConfig:
    """The out-of-the-box view: raw counts, totals-descending, bar panels."""
    del dataset  # defaults do not depend on the data
    order = (SortKey(COUNT_TOTAL, "desc"),)
    return ViewConfig(row_sort=order, col_sort=order)


# --- config JSON decoding ---------------------------------------------------

class _FieldError(ValueError):
    def __init__(self, field_name: str, reason: str):
        super().__init__(f"{field_name}: {reason}")
        self.field_name = field_name
        self.reason = reason


def _decode_sort_list(name: str, raw: Any) -> tuple[SortKey, ...]:
    if not isinstance(raw, list):
        raise _FieldError(name, "expected a list of sort keys")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise _FieldError(name, f"entry {i} is not an object")
        try:
            out.append(SortKey(
                field=item.get("field", ""),
                direction=item.get("direction", "asc"),
            ))
        except ValueError as exc:
            raise _FieldError(name, f"entry {i}: {exc}") from exc
    return tuple(out)


def _decode_filters(raw: Any) -> tuple[FilterPredicate, ...]:
    if not isinstance(raw, list):
        raise _FieldError("filters", "expected a list of predicates")
    out = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise _FieldError("filters", f"entry {i} is not an object")
        try:
            out.append(FilterPredicate(
                axis=item.get("axis", ""),
                field=item.get("field", ""),
                op=item.get("op", ""),
                value=item.get("value"),
                values=tuple(item.get("values", ())),
                low=item.get("min"),
                high=item.get("max"),
                inclusive=bool(item.get("inclusive", True)),
                missing_policy=item.get("missing_policy", "exclude"),
            ))
        except (ValueError, TypeError) as exc:
            raise _FieldError("filters", f"entry {i}: {exc}") from exc
    return tuple(out)


def _decode_zoom(raw: Any) -> ZoomState | None:
    if raw is None:
        return None
    if not isinstance(raw, dict):
        raise _FieldError("zoom", "expected an object or null")
    windows = {}
    for key in ("row_window", "col_window"):
        win = raw.get(key)
        if win is None:
            windows[key] = None
            continue
        if (not isinstance(win, (list, tuple)) or len(win) != 2
                or not all(isinstance(v, int) and not isinstance(v, bool) for v in win)):
            raise _FieldError("zoom", f"{key} must be [start, end] integers")
        windows[key] = (win[0], win[1])
    return ZoomState(**windows)


def _decode_bool(name: str, raw: Any) -> bool:
    if not isinstance(raw, bool):
        raise _FieldError(name, "expected a boolean")
    return raw


def _decode_str(name: str, raw: Any, allowed: tuple[str, ...] | None = None) -> str:
    if not isinstance(raw, str):
        raise _FieldError(name, "expected a string")
    if allowed is not None and raw not in allowed:
        raise _FieldError(name, f"must be one of {', '.join(allowed)}")
    return raw


def _decode_category_colors(raw: Any) -> dict[str, str]:
    if not isinstance(raw, dict):
        raise _FieldError("category_colors", "expected an object of id -> #rrggbb")
    out = {}
    for key, val in raw.items():
        if not isinstance(val, str) or not _HEX_COLOR_RE.match(val):
            raise _FieldError(
                "category_colors", f"{key!r}: expected lowercase #rrggbb, got {val!r}"
            )
        out[str(key)] = val
    return out


_CONFIG_DECODERS = {
    "normalization": lambda v: _decode_str("normalization", v, NORMALIZATIONS),
    "log_applied": lambda v: _decode_bool("log_applied", v),
    "transpose": lambda v: _decode_bool("transpose", v),
    "row_sort": lambda v: _decode_sort_list("row_sort", v),
    "col_sort": lambda v: _decode_sort_list("col_sort", v),
    "filters": _decode_filters,
    "row_group_by": lambda v: None if v is None else _decode_str("row_group_by", v),
    "expanded_rows": lambda v: frozenset(
        _decode_str("expanded_rows", s) for s in (
            v if isinstance(v, list) else _bad_list("expanded_rows")
        )
    ),
    "row_side_panel": lambda v: _decode_str("row_side_panel", v, PANEL_KINDS),
    "col_side_panel": lambda v: _decode_str("col_side_panel", v, PANEL_KINDS),
    "heatmap_visible": lambda v: _decode_bool("heatmap_visible", v),
    "zoom": _decode_zoom,
    "theme": lambda v: _decode_str("theme", v, THEMES),
    "heatmap_colormap": lambda v: _decode_str("heatmap_colormap", v),
    "category_colors": _decode_category_colors,
}


def _bad_list(name: str):
    raise _FieldError(name, "expected a list")


def decode_config_fields(doc: Mapping[str, Any]) -> dict[str, Any]:
    """Decode a (possibly partial) config JSON document to constructor kwargs.

    Raises InvalidConfigError carrying one Violation per bad or unknown field.
    """
    decoded: dict[str, Any] = {}
    violations: list[Violation] = []
    for key, raw in doc.items():
        decoder = _CONFIG_DECODERS.get(key)
        if decoder is None:
            violations.append(Violation(key, "unknown config field"))
            continue
        try:
            decoded[key] = decoder(raw)
        except _FieldError as exc:
            violations.append(Violation(exc.field_name, exc.reason))
    if violations:
        raise InvalidConfigError(violations)
    return decoded


def config_from_dict(doc: Mapping[str, Any]) -> ViewConfig:
    """Full or partial document over defaults -> ViewConfig."""
    return ViewConfig(**decode_config_fields(doc))


def config_from_json(text: str) -> ViewConfig:
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise InvalidConfigError([Violation("$", "top-level JSON must be an object")])
    return config_from_dict(doc)


# --- validation --------------------------------------------------------------

def _check_sort_keys(
    name: str, keys: tuple[SortKey, ...], meta: MetadataTable, out: list[Violation]
) -> None:
    for key in keys:
        if key.kind == "metadata" and not meta.has_field(key.metadata_name):
            out.append(Violation(
                name, f"metadata field {key.metadata_name!r} not found for {meta.axis}"
            ))
        elif key.kind == "hierarchy" and meta.hierarchy_field(key.hierarchy_level) is None:
            out.append(Violation(
                name, f"hierarchy level {key.hierarchy_level} not found for {meta.axis}"
            ))


def _check_filter(pred: FilterPredicate, dataset: Dataset, out: list[Violation]) -> None:
    if pred.field == COUNT_TOTAL:
        kind = FIELD_NUMERIC
    else:
        meta = dataset.meta_for_axis(pred.axis)
        if not meta.has_field(pred.field):
            out.append(Violation(
                "filters", f"field {pred.field!r} not found for {pred.axis}"
            ))
            return
        kind = meta.field(pred.field).kind
    if pred.op == "range":
        if kind not in (FIELD_NUMERIC,):
            out.append(Violation(
                "filters",
                f"range filter needs a numeric field or count_total, "
                f"{pred.field!r} is {kind}",
            ))
        elif pred.low is None and pred.high is None:
            out.append(Violation("filters", "range filter needs min and/or max"))
        else:
            for bound_name, bound in (("min", pred.low), ("max", pred.high)):
                if bound is not None and not isinstance(bound, (int, float)):
                    out.append(Violation(
                        "filters", f"range {bound_name} must be numeric"
                    ))
    elif pred.op == "equals":
        if kind == FIELD_NUMERIC and not isinstance(pred.value, (int, float)):
            out.append(Violation(
                "filters", f"equals on numeric field {pred.field!r} needs a number"
            ))
    elif pred.op == "in_set" and not pred.values:
        out.append(Violation("filters", "in_set filter needs a non-empty value set"))


def validate_config(dataset: Dataset, config: ViewConfig) -> list[Violation]:
    """Check every config reference against the dataset and displayed view.

    Violations are data, not faults: an empty list means the config can be
    applied as-is.
    """
    out: list[Violation] = []
    _check_sort_keys("row_sort", config.row_sort, dataset.sample_meta, out)
    _check_sort_keys("col_sort", config.col_sort, dataset.cell_type_meta, out)
    for pred in config.filters:
        _check_filter(pred, dataset, out)
    if config.row_group_by is not None:
        meta = dataset.sample_meta
        if not meta.has_field(config.row_group_by):
            out.append(Violation(
                "row_group_by", f"field {config.row_group_by!r} not found for samples"
            ))
        elif meta.field(config.row_group_by).kind == FIELD_NUMERIC:
            out.append(Violation(
                "row_group_by", f"numeric field {config.row_group_by!r} is not groupable"
            ))
    if config.heatmap_colormap not in COLORMAPS:
        out.append(Violation(
            "heatmap_colormap", f"unknown colormap {config.heatmap_colormap!r}"
        ))
    for key, val in config.category_colors.items():
        if not _HEX_COLOR_RE.match(val):
            out.append(Violation(
                "category_colors", f"{key!r}: expected lowercase #rrggbb, got {val!r}"
            ))

    if out:
        # axis-shaping fields are broken; displayed-view checks would lie
        return out

    from .transform import displayed_axis_ids  # local import, avoids a cycle

    disp_rows, disp_cols = displayed_axis_ids(dataset, config)
    row_set = set(disp_rows)
    for row_id in sorted(config.expanded_rows):
        if row_id not in row_set:
            out.append(Violation(
                "expanded_rows", f"{row_id!r} is not a displayed row"
            ))
    if config.zoom is not None:
        for win_name, win, size in (
            ("row_window", config.zoom.row_window, len(disp_rows)),
            ("col_window", config.zoom.col_window, len(disp_cols)),
        ):
            if win is None:
                continue
            start, end = win
            if start >= end:
                out.append(Violation("zoom", f"empty zoom window {win_name}"))
            elif start < 0 or end > size:
                out.append(Violation(
                    "zoom",
                    f"{win_name} [{start},{end}) outside displayed bounds 0..{size}",
                ))
    return out


_AXIS_SHAPING_FIELDS = frozenset(
    {"row_sort", "col_sort", "filters", "row_group_by", "transpose"}
)


def merge_config_patch(
    dataset: Dataset, config: ViewConfig, patch: Mapping[str, Any]
) -> ViewConfig:
    """Shallow-merge a partial config document over the present config.

    Lists and sets replace wholesale. Changing any axis-shaping field
    (sorts, filters, grouping, transpose) clears the zoom unless the patch
    itself sets one, because zoom windows are displayed-order indices.
    Expanded rows that fall out of the displayed set are pruned unless the
    patch sets expanded_rows explicitly. Raises InvalidConfigError (with
    violations) and leaves the present config untouched on any failure.
    """
    decoded = decode_config_fields(patch)
    merged = replace(config, **decoded)
    if _AXIS_SHAPING_FIELDS & decoded.keys() and "zoom" not in decoded:
        merged = replace(merged, zoom=None)
    if "expanded_rows" not in decoded and merged.expanded_rows:
        from .transform import displayed_axis_ids
        from .errors import CellpopError

        try:
            disp_rows, _ = displayed_axis_ids(dataset, merged)
        except CellpopError:
            pass  # field violations below will explain
        else:
            merged = replace(
                merged, expanded_rows=merged.expanded_rows & set(disp_rows)
            )
    violations = validate_config(dataset, merged)
    if violations:
        raise InvalidConfigError(violations)
    return merged


CONFIG_FIELD_NAMES = tuple(f.name for f in fields(ViewConfig))
