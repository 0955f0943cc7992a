"""Finite abelian groups, characters, and the discrete Fourier transform.

A group is presented by its invariant factors ``(n_1, ..., n_k)``; an
element is a k-tuple of residues added componentwise.  The dual group is
identified with the group itself through the pairing

    (gamma, alpha) = exp(2*pi*i * sum_j gamma_j*alpha_j / n_j),

so dual points use the same tuple representation.  Enumeration order is
lexicographic everywhere, which makes every derived object (transversals,
fiber indexing, reports) reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FiniteAbelianGroup",
    "Subgroup",
    "character",
    "character_table",
    "dft",
    "idft",
    "subgroup_from_generators",
    "annihilator",
    "coset_transversal",
]

Element = tuple[int, ...]

# Unimodular values are compared to 1 at this absolute tolerance when we
# decide whether a character is trivial on a subgroup.
CHARACTER_TOL = 1e-9


class FiniteAbelianGroup:
    """Direct sum Z_{n_1} x ... x Z_{n_k} given by its invariant factors."""

    def __init__(self, invariant_factors: Sequence[int]):
        factors = tuple(int(n) for n in invariant_factors)
        if not factors:
            raise ValueError("invariant factor list must be non-empty")
        for j, n in enumerate(factors):
            if n < 1:
                raise ValueError(f"invariant_factors[{j}] must be >= 1, got {n}")
        self.invariant_factors: Element = factors
        self.rank = len(factors)
        self.order = int(np.prod(factors))
        # mixed-radix place values for index(); lexicographic == C order
        self._places = tuple(
            int(np.prod(factors[j + 1 :], initial=1)) for j in range(len(factors))
        )
        self._elements: list[Element] | None = None

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({list(self.invariant_factors)})"

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, FiniteAbelianGroup)
            and other.invariant_factors == self.invariant_factors
        )

    def __hash__(self) -> int:
        return hash(self.invariant_factors)

    @property
    def zero(self) -> Element:
        return (0,) * self.rank

    def check(self, el: Iterable[int]) -> Element:
        """Validate arity and residue ranges; return the canonical tuple."""
        t = tuple(int(v) for v in el)
        if len(t) != self.rank:
            raise ValueError(
                f"element {t} has arity {len(t)}, expected {self.rank}"
            )
        for v, n in zip(t, self.invariant_factors):
            if not (0 <= v < n):
                raise ValueError(f"element {t} out of range for factors "
                                 f"{self.invariant_factors}")
        return t

    def reduce(self, el: Iterable[int]) -> Element:
        """Reduce an integer tuple componentwise into canonical residues."""
        t = tuple(int(v) for v in el)
        if len(t) != self.rank:
            raise ValueError(
                f"element {t} has arity {len(t)}, expected {self.rank}"
            )
        return tuple(v % n for v, n in zip(t, self.invariant_factors))

    def add(self, a: Iterable[int], b: Iterable[int]) -> Element:
        a = self.check(a)
        b = self.check(b)
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def sub(self, a: Iterable[int], b: Iterable[int]) -> Element:
        a = self.check(a)
        b = self.check(b)
        return tuple((x - y) % n for x, y, n in zip(a, b, self.invariant_factors))

    def neg(self, a: Iterable[int]) -> Element:
        a = self.check(a)
        return tuple((-x) % n for x, n in zip(a, self.invariant_factors))

    def elements(self) -> list[Element]:
        """All elements in lexicographic order (cached)."""
        if self._elements is None:
            self._elements = list(
                itertools.product(*(range(n) for n in self.invariant_factors))
            )
        return self._elements

    def index(self, el: Iterable[int]) -> int:
        """Position of ``el`` in the lexicographic enumeration."""
        t = self.check(el)
        return sum(v * p for v, p in zip(t, self._places))

    def element(self, index: int) -> Element:
        if not (0 <= index < self.order):
            raise ValueError(f"index {index} out of range for order {self.order}")
        out = []
        for p, n in zip(self._places, self.invariant_factors):
            out.append((index // p) % n)
        return tuple(out)

    def neg_index_table(self) -> np.ndarray:
        """Flat-index permutation sending index(gamma) to index(-gamma)."""
        table = np.empty(self.order, dtype=np.intp)
        for i, el in enumerate(self.elements()):
            table[i] = self.index(self.neg(el))
        return table


def character(G: FiniteAbelianGroup, gamma: Iterable[int], alpha: Iterable[int]) -> complex:
    """Pairing (gamma, alpha) = exp(2*pi*i * sum_j gamma_j*alpha_j / n_j)."""
    g = G.check(gamma)
    a = G.check(alpha)
    phase = sum(gj * aj / nj for gj, aj, nj in zip(g, a, G.invariant_factors))
    return complex(np.exp(2j * np.pi * phase))


def character_table(G: FiniteAbelianGroup) -> np.ndarray:
    """Matrix (gamma, alpha) indexed [index(gamma), index(alpha)]."""
    mats = []
    for n in G.invariant_factors:
        w = np.exp(2j * np.pi * np.outer(np.arange(n), np.arange(n)) / n)
        mats.append(w)
    out = mats[0]
    for m in mats[1:]:
        out = np.kron(out, m)
    return out


def dft(G: FiniteAbelianGroup, values: Sequence[complex]) -> np.ndarray:
    """Forward transform F(alpha) = sum_gamma c_gamma * conj((gamma, alpha)).

    Computed with the FFT over the factor axes; enumeration is
    lexicographic on both sides.
    """
    c = np.asarray(values, dtype=complex)
    if c.shape != (G.order,):
        raise ValueError(f"expected {G.order} coefficients, got shape {c.shape}")
    return np.fft.fftn(c.reshape(G.invariant_factors)).ravel()


def idft(G: FiniteAbelianGroup, values: Sequence[complex]) -> np.ndarray:
    """Inverse transform c_gamma = (1/|G|) sum_alpha F(alpha) * (gamma, alpha)."""
    F = np.asarray(values, dtype=complex)
    if F.shape != (G.order,):
        raise ValueError(f"expected {G.order} values, got shape {F.shape}")
    return np.fft.ifftn(F.reshape(G.invariant_factors)).ravel()


@dataclass(frozen=True)
class Subgroup:
    """A subgroup stored by its sorted member list.

    ``generators`` is a generating set (possibly redundant); derived
    subgroups such as annihilators use their full member list.
    """

    parent: FiniteAbelianGroup
    members: tuple[Element, ...]
    generators: tuple[Element, ...]
    _member_set: frozenset[Element] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_member_set", frozenset(self.members))

    @property
    def order(self) -> int:
        return len(self.members)

    def __contains__(self, el: Iterable[int]) -> bool:
        return tuple(int(v) for v in el) in self._member_set


def subgroup_from_generators(
    G: FiniteAbelianGroup, generators: Iterable[Iterable[int]]
) -> Subgroup:
    """Closure of the generators under addition (BFS from the identity)."""
    gens = [G.check(g) for g in generators]
    members = {G.zero}
    frontier = [G.zero]
    while frontier:
        nxt = []
        for m in frontier:
            for g in gens:
                s = G.add(m, g)
                if s not in members:
                    members.add(s)
                    nxt.append(s)
        frontier = nxt
    return Subgroup(parent=G, members=tuple(sorted(members)), generators=tuple(gens))


def annihilator(G: FiniteAbelianGroup, sub: Subgroup) -> Subgroup:
    """Dual points that pair trivially with every generator of ``sub``.

    Returns {delta : |(g, delta) - 1| <= 1e-9 for every generator g}; the
    result lives in the dual group, represented by the same factor list.
    """
    if sub.parent != G:
        raise ValueError("subgroup does not belong to this group")
    gens = sub.generators if sub.generators else sub.members
    members = []
    for delta in G.elements():
        if all(abs(character(G, g, delta) - 1.0) <= CHARACTER_TOL for g in gens):
            members.append(delta)
    members = tuple(members)  # elements() is lexicographic, so already sorted
    return Subgroup(parent=G, members=members, generators=members)


def coset_transversal(G: FiniteAbelianGroup, sub: Subgroup) -> list[Element]:
    """Lexicographically smallest representative of each coset of ``sub``.

    Greedy scan in lexicographic order: the first unseen element is the
    smallest member of its coset, so the output is sorted and canonical.
    """
    if sub.parent != G:
        raise ValueError("subgroup does not belong to this group")
    seen: set[Element] = set()
    reps: list[Element] = []
    for el in G.elements():
        if el in seen:
            continue
        reps.append(el)
        for m in sub.members:
            seen.add(G.add(el, m))
    return reps
