"""Exception types shared across the engine."""

from __future__ import annotations


class CellpopError(Exception):
    """Base class for all engine errors."""


class IngestWarning(UserWarning):
    """Non-fatal data irregularities surfaced during ingestion."""


# --- construction / parsing ---

class DuplicateIdError(CellpopError):
    def __init__(self, axis: str, entity_id: str):
        super().__init__(f"duplicate {axis} id {entity_id!r}")
        self.axis = axis
        self.entity_id = entity_id


class NonNumericCellError(CellpopError):
    def __init__(self, row: str, col: str, text: str):
        super().__init__(f"non-numeric count at ({row!r}, {col!r}): {text!r}")
        self.row = row
        self.col = col
        self.text = text


class RaggedRowError(CellpopError):
    def __init__(self, line_no: int, expected: int, got: int):
        super().__init__(
            f"line {line_no}: expected {expected} value(s), got {got}"
        )
        self.line_no = line_no
        self.expected = expected
        self.got = got


class NegativeCountError(CellpopError):
    def __init__(self, row: str, col: str, value: int):
        super().__init__(f"negative count at ({row!r}, {col!r}): {value}")
        self.row = row
        self.col = col
        self.value = value


class EmptyFileError(CellpopError):
    pass


class EmptyHeaderError(CellpopError):
    pass


class EmptyTableError(CellpopError):
    pass


class NonContiguousHierarchyError(CellpopError):
    def __init__(self, present: int, missing: int):
        super().__init__(
            f"hierarchy level_{present} present but level_{missing} missing"
        )
        self.present = present
        self.missing = missing


class UnknownEntityError(CellpopError):
    def __init__(self, axis: str, ids: list[str]):
        super().__init__(f"metadata ids not in counts {axis}: {ids}")
        self.axis = axis
        self.ids = ids


# --- zarr / anndata ---

class MissingKeyError(CellpopError):
    def __init__(self, path: str):
        super().__init__(f"missing key: {path}")
        self.path = path


class UnsupportedDtypeError(CellpopError):
    def __init__(self, dtype: str):
        super().__init__(f"unsupported dtype: {dtype!r}")
        self.dtype = dtype


class UnsupportedCompressorError(CellpopError):
    def __init__(self, name: str):
        super().__init__(f"unsupported compressor: {name!r}")
        self.name = name


class CodeOutOfRangeError(CellpopError):
    def __init__(self, index: int, code: int, n_categories: int):
        super().__init__(
            f"categorical code {code} at cell {index} outside "
            f"0..{n_categories - 1}"
        )
        self.index = index
        self.code = code
        self.n_categories = n_categories


class CorruptChunkError(CellpopError):
    def __init__(self, path: str, reason: str):
        super().__init__(f"corrupt chunk {path}: {reason}")
        self.path = path
        self.reason = reason


# --- transform / config ---

class UnknownFieldError(CellpopError):
    def __init__(self, field: str):
        super().__init__(f"unknown field: {field!r}")
        self.field = field


class NumericFieldNotGroupableError(CellpopError):
    def __init__(self, field: str):
        super().__init__(f"cannot group by numeric field {field!r}")
        self.field = field


class InvalidConfigError(CellpopError):
    """Raised when a view config fails validation; carries the violations."""

    def __init__(self, violations):
        super().__init__(
            "invalid config: " + "; ".join(str(v) for v in violations)
        )
        self.violations = list(violations)


# --- stats ---

class TooFewValuesError(CellpopError):
    pass


class DegenerateValuesError(CellpopError):
    """All input values identical; no density can be estimated."""


class ZeroGrandTotalError(CellpopError):
    pass


class EmptyInputError(CellpopError):
    pass


# --- rendering ---

class InconsistentViewConfigError(CellpopError):
    pass


class DegenerateSizeError(CellpopError):
    def __init__(self, width: int, height: int):
        super().__init__(f"render size {width}x{height} below 64x64 minimum")
        self.width = width
        self.height = height


class DatasetLoadError(CellpopError):
    """Wraps a parse failure with the file it came from."""

    def __init__(self, source: str, cause: Exception):
        super().__init__(f"{source}: {cause}")
        self.source = source
        self.cause = cause
