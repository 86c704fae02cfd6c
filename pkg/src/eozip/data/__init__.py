from .codec import (
    decode_matrix,
    display_from_json,
    display_to_json,
    encode_matrix,
    field_from_json,
    field_to_json,
    triple_from_json,
    triple_to_json,
    zip_from_json,
    zip_to_json,
)
from .loader import GoldenRepository, GoldenTable, get_repository

__all__ = [
    "GoldenRepository",
    "GoldenTable",
    "decode_matrix",
    "display_from_json",
    "display_to_json",
    "encode_matrix",
    "field_from_json",
    "field_to_json",
    "get_repository",
    "triple_from_json",
    "triple_to_json",
    "zip_from_json",
    "zip_to_json",
]
