"""Execution-reasoning benchmark tooling."""

from ._core import (
    __version__,
    build_dsl_list,
    depth,
    execute,
    extract_prediction,
    jaccard,
    mutants,
    normalize,
    prediction_prompt,
    sample_program,
    translate,
)

__all__ = [
    "__version__",
    "build_dsl_list",
    "depth",
    "execute",
    "extract_prediction",
    "jaccard",
    "mutants",
    "normalize",
    "prediction_prompt",
    "sample_program",
    "translate",
]
