from .report import (
    build_classification_text,
    build_counts_text,
    build_oracle_text,
    build_strata_text,
    build_weyl_text,
    classification,
    export_json,
    export_text,
    strata_table,
    weyl_table,
)

__all__ = [
    "build_classification_text",
    "build_counts_text",
    "build_oracle_text",
    "build_strata_text",
    "build_weyl_text",
    "classification",
    "export_json",
    "export_text",
    "strata_table",
    "weyl_table",
]
