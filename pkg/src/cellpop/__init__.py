"""cellpop: interactive cell population views over samples x cell-types counts."""

from .errors import CellpopError
from .model import (
    CountsMatrix,
    Dataset,
    FieldSpec,
    FilterPredicate,
    MetadataTable,
    SortKey,
    ValueMatrix,
    ViewConfig,
    Violation,
    ZoomState,
    config_from_dict,
    config_from_json,
    default_config,
    merge_config_patch,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [
    "CellpopError",
    "CountsMatrix",
    "Dataset",
    "FieldSpec",
    "FilterPredicate",
    "MetadataTable",
    "SortKey",
    "ValueMatrix",
    "ViewConfig",
    "Violation",
    "ZoomState",
    "config_from_dict",
    "config_from_json",
    "default_config",
    "merge_config_patch",
    "validate_config",
    "__version__",
]
