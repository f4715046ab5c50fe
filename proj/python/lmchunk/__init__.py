from ._core import (
    build_prompt,
    check_monotonicity,
    chunk_text,
    detect_minima,
    g_k,
    normalize_text,
    renormalized_margin,
    split_sentences,
)

__all__ = [
    "build_prompt",
    "check_monotonicity",
    "chunk_text",
    "detect_minima",
    "g_k",
    "normalize_text",
    "renormalized_margin",
    "split_sentences",
]
