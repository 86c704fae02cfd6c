from .field import FieldElem, FiniteField, field_create, field_of_order, frobenius
from .linalg import (
    MatrixF,
    SemilinearMap,
    Subspace,
    image,
    intersect,
    inverse,
    kernel,
    projection,
    rank,
    rref,
    solve,
    subspace_sum,
)
from .symplectic import (
    SymplecticSpace,
    lagrangian_complement,
    lagrangians,
    perp,
    random_symplectic,
    standard_symplectic_space,
    symplectic_basis_complete,
    symplectic_group,
    unipotent_radical,
)

__all__ = [
    "FieldElem",
    "FiniteField",
    "MatrixF",
    "SemilinearMap",
    "Subspace",
    "SymplecticSpace",
    "field_create",
    "field_of_order",
    "frobenius",
    "image",
    "intersect",
    "inverse",
    "kernel",
    "lagrangian_complement",
    "lagrangians",
    "perp",
    "projection",
    "random_symplectic",
    "rank",
    "rref",
    "solve",
    "standard_symplectic_space",
    "subspace_sum",
    "symplectic_basis_complete",
    "symplectic_group",
    "unipotent_radical",
]
