from __future__ import annotations

from typing import Dict, Mapping, Optional, Tuple

import numpy as np

from ..algebra.field import FiniteField, field_create
from ..algebra.linalg import Subspace
from ..algebra.symplectic import SymplecticSpace
from ..display import GroupTriple, SplitDisplay
from ..errors import SchemaError
from ..fzip import SymplecticFZip
from ..witt import WittRing, witt_ring
from ..zipmodel import ZipPoint

__all__ = [
    "field_to_json",
    "field_from_json",
    "encode_matrix",
    "decode_matrix",
    "dump_matrices",
    "load_matrices",
    "zip_to_json",
    "zip_from_json",
    "ring_to_json",
    "ring_from_json",
    "display_to_json",
    "display_from_json",
    "triple_to_json",
    "triple_from_json",
    "point_to_json",
]


def _require(payload: Mapping, key: str):
    if not isinstance(payload, Mapping):
        raise SchemaError(f"expected a JSON object, got {type(payload).__name__}")
    try:
        return payload[key]
    except KeyError as exc:
        raise SchemaError(f"missing key {key!r}") from exc


def _int(value, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{name} must be an integer, got {value!r}")
    return value


# ----------------------------------------------------------------------
# Fields and matrices
# ----------------------------------------------------------------------
def field_to_json(field: FiniteField) -> dict:
    return {"p": field.p, "k": field.k, "modulus": list(field.modulus)}


def field_from_json(payload: Mapping) -> FiniteField:
    p = _int(_require(payload, "p"), "p")
    k = _int(payload.get("k", 1), "k")
    modulus = payload.get("modulus")
    if modulus is not None:
        if not isinstance(modulus, list):
            raise SchemaError("modulus must be a list of coefficients")
        modulus = [_int(c, "modulus coefficient") for c in modulus]
    return field_create(p, k, modulus)


def encode_matrix(field: FiniteField, matrix) -> list:
    """Nested lists of coefficient vectors (length k, low degree first)."""

    matrix = np.asarray(matrix, dtype=np.int64)
    return [[list(field.coeffs(int(code))) for code in row] for row in matrix]


def decode_matrix(field: FiniteField, data, shape: Optional[Tuple[int, int]] = None) -> np.ndarray:
    try:
        array = np.asarray(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"matrix entries must be integer coefficient vectors: {exc}") from exc
    if array.size == 0 and shape is not None and 0 in shape:
        return np.zeros(shape, dtype=np.int64)
    if array.ndim != 3 or array.shape[2] != field.k:
        raise SchemaError(f"matrix must be rows of length-{field.k} coefficient vectors, got shape {array.shape}")
    if np.any(array < 0) or np.any(array >= field.p):
        raise SchemaError(f"coefficients must lie in [0, {field.p})")
    codes = array @ (field.p ** np.arange(field.k, dtype=np.int64))
    if shape is not None and codes.shape != tuple(shape):
        raise SchemaError(f"expected a {shape[0]}x{shape[1]} matrix, got {codes.shape[0]}x{codes.shape[1]}")
    return codes


def dump_matrices(field: FiniteField, matrices: Mapping[str, np.ndarray]) -> dict:
    payload = field_to_json(field)
    payload["matrices"] = {name: encode_matrix(field, matrix) for name, matrix in matrices.items()}
    return payload


def load_matrices(payload: Mapping) -> Tuple[FiniteField, Dict[str, np.ndarray]]:
    field = field_from_json(payload)
    matrices = _require(payload, "matrices")
    if not isinstance(matrices, Mapping):
        raise SchemaError("matrices must be an object")
    return field, {name: decode_matrix(field, data) for name, data in matrices.items()}


# ----------------------------------------------------------------------
# Zips
# ----------------------------------------------------------------------
def zip_to_json(z: SymplecticFZip, compl_c: Optional[Subspace] = None, compl_d: Optional[Subspace] = None) -> dict:
    """Subspaces as basis rows; phi0 and phi1 as g x g blocks against the complements."""

    compl_c = compl_c if compl_c is not None else z.C.complement()
    compl_d = compl_d if compl_d is not None else z.D.complement()
    block0, block1 = z.to_blocks(compl_c, compl_d)
    field = z.field
    return {
        "field": field_to_json(field),
        "g": z.g,
        "gram": encode_matrix(field, z.sp.gram),
        "C": encode_matrix(field, z.C.basis),
        "D": encode_matrix(field, z.D.basis),
        "phi0": encode_matrix(field, block0),
        "phi1": encode_matrix(field, block1),
        "complC": encode_matrix(field, compl_c.basis),
        "complD": encode_matrix(field, compl_d.basis),
    }


def zip_from_json(payload: Mapping) -> SymplecticFZip:
    field = field_from_json(_require(payload, "field"))
    g = _int(_require(payload, "g"), "g")
    if g < 1:
        raise SchemaError(f"g must be positive, got {g}")
    n = 2 * g
    gram = decode_matrix(field, _require(payload, "gram"), (n, n))
    sp = SymplecticSpace(field, gram)

    def subspace(key: str) -> Subspace:
        return Subspace.span(field, decode_matrix(field, _require(payload, key), (g, n)), n)

    return SymplecticFZip.from_blocks(
        sp,
        subspace("C"),
        subspace("D"),
        decode_matrix(field, _require(payload, "phi0"), (g, g)),
        decode_matrix(field, _require(payload, "phi1"), (g, g)),
        subspace("complC"),
        subspace("complD"),
    )


# ----------------------------------------------------------------------
# Rings, displays and triples
# ----------------------------------------------------------------------
def ring_to_json(ring: WittRing) -> dict:
    return {"p": ring.p, "k": ring.k, "n": ring.n, "modulus": list(ring.modulus)}


def ring_from_json(payload: Mapping) -> WittRing:
    p = _int(_require(payload, "p"), "p")
    k = _int(payload.get("k", 1), "k")
    n = _int(_require(payload, "n"), "n")
    modulus = payload.get("modulus")
    if modulus is not None:
        modulus = [_int(c, "modulus coefficient") for c in modulus]
    return witt_ring(p, k, n, modulus)


def _decode_ring_matrix(ring: WittRing, data, name: str) -> np.ndarray:
    try:
        array = np.asarray(data, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"{name} entries must be integer coefficient vectors") from exc
    if array.ndim != 3 or array.shape[2] != ring.k:
        raise SchemaError(f"{name} must be rows of length-{ring.k} coefficient vectors")
    if np.any(array < 0) or np.any(array >= ring.characteristic):
        raise SchemaError(f"{name} coefficients must lie in [0, {ring.characteristic})")
    return array


def display_to_json(d: SplitDisplay) -> dict:
    return {
        "ring": ring_to_json(d.ring),
        "gram": d.gram.tolist(),
        "S": d.S.tolist(),
        "T": d.T.tolist(),
        "F": d.F_lin.tolist(),
        "Vinv": d.Vinv.tolist(),
    }


def display_from_json(payload: Mapping) -> SplitDisplay:
    ring = ring_from_json(_require(payload, "ring"))
    arrays = [_decode_ring_matrix(ring, _require(payload, key), key) for key in ("gram", "S", "T", "F", "Vinv")]
    return SplitDisplay(ring, *arrays)


def triple_to_json(t: GroupTriple) -> dict:
    return {
        "ring": ring_to_json(t.ring),
        "gram": t.gram.tolist(),
        "S": t.S.tolist(),
        "T": t.T.tolist(),
        "gmat": t.gmat.tolist(),
    }


def triple_from_json(payload: Mapping) -> GroupTriple:
    ring = ring_from_json(_require(payload, "ring"))
    arrays = [_decode_ring_matrix(ring, _require(payload, key), key) for key in ("gram", "S", "T", "gmat")]
    return GroupTriple(ring, *arrays)


def point_to_json(pt: ZipPoint) -> dict:
    field = pt.field
    return {
        "field": field_to_json(field),
        "g": pt.g,
        "P": encode_matrix(field, pt.P.L.basis),
        "Q": encode_matrix(field, pt.Q.L.basis),
        "gmat": encode_matrix(field, pt.gmat),
    }
