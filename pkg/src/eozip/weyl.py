from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Tuple

from .constants import MAX_RANK_WEYL
from .errors import IndexOutOfRange, NotMinimalRep, RankMismatch, RankTooLarge

__all__ = [
    "WeylElem",
    "SimpleSet",
    "EOType",
    "WeylGroup",
    "simple_reflection",
    "compose",
    "inverse",
    "identity",
    "length",
    "weyl_group",
    "enumerate_group",
    "longest_element",
    "min_double_coset_rep",
    "enumerate_JW",
    "siegel",
    "eo_to_weyl",
    "weyl_to_eo",
    "opposition_x",
    "all_eo_types",
    "elementary_sequence_of",
    "final_sequence",
    "a_number",
    "p_rank",
    "parse_window",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class WeylElem:
    """A permutation of {1..2g} with perm(i) + perm(2g+1-i) = 2g+1."""

    g: int
    perm: Tuple[int, ...]

    def __post_init__(self) -> None:
        n = 2 * self.g
        if self.g < 1 or len(self.perm) != n or sorted(self.perm) != list(range(1, n + 1)):
            raise ValueError(f"{list(self.perm)} is not a permutation of 1..{n}")
        for i in range(1, self.g + 1):
            if self(i) + self(n + 1 - i) != n + 1:
                raise ValueError(f"{list(self.perm)} violates the symplectic constraint at i={i}")

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def window(self) -> str:
        return "[" + ",".join(str(v) for v in self.perm) + "]"

    def __repr__(self) -> str:
        return f"WeylElem{self.window()}"


def parse_window(text: str) -> WeylElem:
    values = tuple(int(part) for part in text.strip().strip("[]").split(",") if part.strip())
    return WeylElem(len(values) // 2, values)


@dataclass(frozen=True)
class SimpleSet:
    g: int
    indices: FrozenSet[int]

    def __post_init__(self) -> None:
        bad = [i for i in self.indices if not 1 <= i <= self.g]
        if bad:
            raise IndexOutOfRange(f"simple reflection indices {sorted(bad)} outside 1..{self.g}")

    @classmethod
    def of(cls, g: int, indices: Iterable[int] = ()) -> "SimpleSet":
        return cls(g, frozenset(indices))

    def reflections(self) -> List[WeylElem]:
        return [simple_reflection(self.g, i) for i in sorted(self.indices)]


def siegel(g: int) -> SimpleSet:
    return SimpleSet.of(g, range(1, g))


@dataclass(frozen=True, order=True)
class EOType:
    bits: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.bits or any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"an EO type is a nonempty 0/1 vector, got {self.bits}")

    @property
    def g(self) -> int:
        return len(self.bits)

    def bitstring(self) -> str:
        return "".join(str(b) for b in self.bits)

    @classmethod
    def parse(cls, text: str) -> "EOType":
        return cls(tuple(int(ch) for ch in text.strip()))

    def __repr__(self) -> str:
        return f"EOType({self.bitstring()})"


def all_eo_types(g: int) -> List[EOType]:
    return [EOType(bits) for bits in itertools.product((0, 1), repeat=g)]


# ----------------------------------------------------------------------
# Group operations
# ----------------------------------------------------------------------
def identity(g: int) -> WeylElem:
    return WeylElem(g, tuple(range(1, 2 * g + 1)))


def _transposition(n: int, j: int) -> List[int]:
    perm = list(range(1, n + 1))
    perm[j - 1], perm[j] = perm[j], perm[j - 1]
    return perm


def simple_reflection(g: int, i: int) -> WeylElem:
    """s_i = tau_i tau_{2g-i} for i < g and s_g = tau_g, tau_j = (j j+1)."""

    if not 1 <= i <= g:
        raise IndexOutOfRange(f"simple reflection index {i} outside 1..{g}")
    n = 2 * g
    perm = _transposition(n, i)
    if i < g:
        j = n - i
        perm[j - 1], perm[j] = perm[j], perm[j - 1]
    return WeylElem(g, tuple(perm))


def compose(a: WeylElem, b: WeylElem) -> WeylElem:
    """(a o b)(i) = a(b(i))."""

    if a.g != b.g:
        raise RankMismatch(f"cannot compose elements of W(C_{a.g}) and W(C_{b.g})")
    return WeylElem(a.g, tuple(a(b(i)) for i in range(1, 2 * a.g + 1)))


def inverse(a: WeylElem) -> WeylElem:
    result = [0] * (2 * a.g)
    for i, value in enumerate(a.perm, start=1):
        result[value - 1] = i
    return WeylElem(a.g, tuple(result))


# ----------------------------------------------------------------------
# Coxeter structure by breadth-first search
# ----------------------------------------------------------------------
class WeylGroup:
    """W(C_g) with word lengths and reduced words computed by BFS from the identity."""

    def __init__(self, g: int) -> None:
        if g < 1:
            raise ValueError(f"rank must be positive, got {g}")
        if g > MAX_RANK_WEYL:
            raise RankTooLarge(f"W(C_{g}) is beyond the supported rank {MAX_RANK_WEYL}")
        self.g = g
        self.generators = [simple_reflection(g, i) for i in range(1, g + 1)]
        start = identity(g)
        self.lengths: Dict[WeylElem, int] = {start: 0}
        self.words: Dict[WeylElem, Tuple[int, ...]] = {start: ()}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for i, s in enumerate(self.generators, start=1):
                nxt = compose(w, s)
                if nxt not in self.lengths:
                    self.lengths[nxt] = self.lengths[w] + 1
                    self.words[nxt] = self.words[w] + (i,)
                    queue.append(nxt)
        self.elements = sorted(self.lengths, key=lambda w: (self.lengths[w], w.perm))
        logger.debug("W(C_%d): %d elements", g, len(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def length(self, w: WeylElem) -> int:
        return self.lengths[w]

    def left_descents(self, w: WeylElem) -> FrozenSet[int]:
        return frozenset(
            i for i, s in enumerate(self.generators, start=1) if self.lengths[compose(s, w)] < self.lengths[w]
        )

    def right_descents(self, w: WeylElem) -> FrozenSet[int]:
        return frozenset(
            i for i, s in enumerate(self.generators, start=1) if self.lengths[compose(w, s)] < self.lengths[w]
        )

    def parabolic_subgroup(self, subset: SimpleSet) -> List[WeylElem]:
        """W_J, generated by BFS inside the subgroup."""

        start = identity(self.g)
        members = {start}
        queue = deque([start])
        gens = subset.reflections()
        while queue:
            w = queue.popleft()
            for s in gens:
                nxt = compose(w, s)
                if nxt not in members:
                    members.add(nxt)
                    queue.append(nxt)
        return sorted(members, key=lambda w: (self.lengths[w], w.perm))


@lru_cache(maxsize=None)
def weyl_group(g: int) -> WeylGroup:
    return WeylGroup(g)


def length(w: WeylElem) -> int:
    return weyl_group(w.g).length(w)


def enumerate_group(g: int) -> List[Tuple[WeylElem, int]]:
    group = weyl_group(g)
    return [(w, group.length(w)) for w in group.elements]


def longest_element(g: int) -> WeylElem:
    w0 = WeylElem(g, tuple(range(2 * g, 0, -1)))
    if length(w0) != g * g:  # pragma: no cover
        raise ArithmeticError(f"longest element of W(C_{g}) has length {length(w0)}")
    return w0


def min_double_coset_rep(w: WeylElem, left: SimpleSet, right: SimpleSet) -> WeylElem:
    """Minimal element of W_left w W_right, by stripping descents until none remain."""

    if left.g != w.g or right.g != w.g:
        raise RankMismatch("simple sets and element have different ranks")
    group = weyl_group(w.g)
    left_gens = left.reflections()
    right_gens = right.reflections()
    current = w
    reduced = True
    while reduced:
        reduced = False
        for s in left_gens:
            candidate = compose(s, current)
            if group.length(candidate) < group.length(current):
                current, reduced = candidate, True
        for s in right_gens:
            candidate = compose(current, s)
            if group.length(candidate) < group.length(current):
                current, reduced = candidate, True
    return current


def enumerate_JW(g: int, subset: SimpleSet) -> List[WeylElem]:
    """Elements without left descents in the subset."""

    group = weyl_group(g)
    return [w for w in group.elements if not (group.left_descents(w) & subset.indices)]


def opposition_x(g: int) -> WeylElem:
    return min_double_coset_rep(longest_element(g), SimpleSet.of(g), siegel(g))


# ----------------------------------------------------------------------
# EO types and Siegel-minimal representatives
# ----------------------------------------------------------------------
def eo_to_weyl(eo: EOType) -> WeylElem:
    """Sigma = {i : e_i = 0} u {2g+1-i : e_i = 1}; perm^-1 lists Sigma in order."""

    g = eo.g
    n = 2 * g
    sigma = sorted([i for i in range(1, g + 1) if eo.bits[i - 1] == 0] + [n + 1 - i for i in range(1, g + 1) if eo.bits[i - 1] == 1])
    inv = [0] * n
    for t, j in enumerate(sigma, start=1):
        inv[t - 1] = j
        inv[n - t] = n + 1 - j
    return inverse(WeylElem(g, tuple(inv)))


def weyl_to_eo(w: WeylElem) -> EOType:
    group = weyl_group(w.g)
    if group.left_descents(w) & siegel(w.g).indices:
        raise NotMinimalRep(f"{w.window()} is not minimal in its W_J coset")
    sigma = {inverse(w)(t) for t in range(1, w.g + 1)}
    return EOType(tuple(0 if i in sigma else 1 for i in range(1, w.g + 1)))


def elementary_sequence_of(eo: EOType) -> Tuple[int, ...]:
    """phi(0..g) with phi(i) = e_1 + ... + e_i."""

    return tuple(itertools.accumulate(eo.bits, initial=0))


def final_sequence(eo: EOType) -> Tuple[int, ...]:
    """psi(0..2g): psi(i) = phi(i) for i <= g and psi(2g-i) = g - i + phi(i)."""

    g = eo.g
    phi = elementary_sequence_of(eo)
    psi = [0] * (2 * g + 1)
    for i in range(g + 1):
        psi[i] = phi[i]
        psi[2 * g - i] = g - i + phi[i]
    return tuple(psi)


def a_number(eo: EOType) -> int:
    return eo.g - elementary_sequence_of(eo)[-1]


def p_rank(eo: EOType) -> int:
    phi = elementary_sequence_of(eo)
    return max(i for i in range(eo.g + 1) if phi[i] == i)
