"""Weighted point sets and quasi-invariant group actions on them.

An action of a finite abelian group on a finite weighted set is a table
with one permutation row per group element.  The weights play the role of
a measure with point masses, and the Jacobian of the action is the ratio

    J(gamma, x) = mu(sigma_gamma(x)) / mu(x),

which satisfies the cocycle identity whenever the table is a genuine
action.  The associated unitary representation on the weighted space is

    (Pi(gamma) psi)(x) = J(-gamma, x)^(1/2) * psi(sigma_{-gamma}(x)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .group import FiniteAbelianGroup

__all__ = [
    "WeightedSpace",
    "QuasiInvariantAction",
    "ActionReport",
    "TilingTransversal",
    "NotFreeError",
    "affine_action",
    "validate_action",
    "tiling_transversal",
]

# relative tolerance for the Jacobian cocycle check; the ratio of two
# positive weights is exact up to one rounding each, so this is generous
COCYCLE_TOL = 1e-12


class NotFreeError(RuntimeError):
    """Raised when an orbit has a nontrivial stabilizer; carries a witness."""

    def __init__(self, point: int, message: str | None = None):
        self.point = int(point)
        super().__init__(message or f"action is not free: point {point} has a "
                                    "nontrivial stabilizer")


class WeightedSpace:
    """Finite point set {0, ..., N-1} with strictly positive atom weights."""

    def __init__(self, weights: Sequence[float]):
        w = np.asarray(weights, dtype=float)
        if w.ndim != 1 or w.size == 0:
            raise ValueError("weights must be a non-empty 1-d sequence")
        if not np.all(w > 0):
            bad = int(np.flatnonzero(~(w > 0))[0])
            raise ValueError(f"weights[{bad}] must be > 0, got {w[bad]}")
        self.weights = w
        self.size = int(w.size)

    def __repr__(self) -> str:
        return f"WeightedSpace(size={self.size})"

    def norm_sq(self, psi: Sequence[complex]) -> float:
        v = np.asarray(psi, dtype=complex)
        if v.shape != (self.size,):
            raise ValueError(f"expected {self.size} values, got shape {v.shape}")
        return float(np.sum(np.abs(v) ** 2 * self.weights))

    def inner(self, f: Sequence[complex], g: Sequence[complex]) -> complex:
        a = np.asarray(f, dtype=complex)
        b = np.asarray(g, dtype=complex)
        if a.shape != (self.size,) or b.shape != (self.size,):
            raise ValueError("function length does not match the space")
        return complex(np.sum(a * np.conj(b) * self.weights))


class QuasiInvariantAction:
    """Permutation table of a group on a weighted space.

    ``table[i]`` is the permutation sigma_gamma for the i-th group element
    in lexicographic order: ``table[i][x] = sigma_gamma(x)``.  The
    constructor checks structure only (shape, rows are permutations);
    whether the table is an action is decided by :func:`validate_action`.
    """

    def __init__(
        self,
        group: FiniteAbelianGroup,
        space: WeightedSpace,
        table: Sequence[Sequence[int]],
    ):
        t = np.asarray(table, dtype=np.intp)
        if t.shape != (group.order, space.size):
            raise ValueError(
                f"table shape {t.shape} does not match "
                f"(group order, space size) = ({group.order}, {space.size})"
            )
        ident = np.arange(space.size)
        for i in range(group.order):
            row = np.sort(t[i])
            if not np.array_equal(row, ident):
                raise ValueError(
                    f"table row {i} is not a permutation of 0..{space.size - 1}"
                )
        self.group = group
        self.space = space
        self.table = t

    def __repr__(self) -> str:
        return (f"QuasiInvariantAction(group={self.group!r}, "
                f"space={self.space!r})")

    def sigma(self, gamma: Iterable[int]) -> np.ndarray:
        """Permutation row for the group element ``gamma``."""
        return self.table[self.group.index(gamma)]

    def jacobian(self, gamma: Iterable[int], x: int) -> float:
        """J(gamma, x) = mu(sigma_gamma(x)) / mu(x)."""
        mu = self.space.weights
        return float(mu[self.sigma(gamma)[x]] / mu[x])

    def jacobian_row(self, gamma: Iterable[int]) -> np.ndarray:
        mu = self.space.weights
        return mu[self.sigma(gamma)] / mu

    def apply(self, gamma: Iterable[int], psi: Sequence[complex]) -> np.ndarray:
        """(Pi(gamma) psi)(x) = J(-gamma, x)^(1/2) psi(sigma_{-gamma}(x))."""
        v = np.asarray(psi, dtype=complex)
        if v.shape != (self.space.size,):
            raise ValueError(
                f"expected {self.space.size} values, got shape {v.shape}"
            )
        neg = self.group.neg(gamma)
        perm = self.sigma(neg)
        mu = self.space.weights
        return np.sqrt(mu[perm] / mu) * v[perm]


def affine_action(
    group: FiniteAbelianGroup,
    space: WeightedSpace,
    multipliers: Sequence[int],
) -> QuasiInvariantAction:
    """Expand the shorthand sigma_gamma(x) = x + sum_j m_j*gamma_j mod N.

    Well-definedness on residues requires m_j * n_j to vanish mod N for
    every invariant factor n_j.
    """
    ms = [int(m) for m in multipliers]
    if len(ms) != group.rank:
        raise ValueError(
            f"expected {group.rank} multipliers, got {len(ms)}"
        )
    N = space.size
    for m, n in zip(ms, group.invariant_factors):
        if (m * n) % N != 0:
            raise ValueError(
                f"multiplier {m} is incompatible: {m}*{n} is not 0 mod {N}"
            )
    xs = np.arange(N)
    rows = []
    for el in group.elements():
        shift = sum(m * g for m, g in zip(ms, el))
        rows.append((xs + shift) % N)
    return QuasiInvariantAction(group, space, np.stack(rows))


@dataclass
class ActionReport:
    """Outcome of validating an action table against the group laws."""

    ok: bool
    violations: list[str]


def validate_action(a: QuasiInvariantAction) -> ActionReport:
    """Check identity, composition, and the Jacobian cocycle.

    Structural defects (non-permutation rows, wrong shape) raise at
    construction time; this reports law violations with witnesses.
    """
    G = a.group
    violations: list[str] = []

    ident = np.arange(a.space.size)
    zero_row = a.table[G.index(G.zero)]
    if not np.array_equal(zero_row, ident):
        x = int(np.flatnonzero(zero_row != ident)[0])
        violations.append(f"(iii) sigma_0 is not the identity: witness x={x}")

    elements = G.elements()
    for i, g1 in enumerate(elements):
        for j, g2 in enumerate(elements):
            composed = a.table[i][a.table[j]]
            direct = a.table[G.index(G.add(g1, g2))]
            if not np.array_equal(composed, direct):
                x = int(np.flatnonzero(composed != direct)[0])
                violations.append(
                    f"(ii) sigma_{g1} o sigma_{g2} != sigma_{G.add(g1, g2)}: "
                    f"witness x={x}"
                )

    # cocycle J(g1+g2, x) = J(g1, sigma_g2(x)) * J(g2, x); holds exactly for
    # weight ratios when (ii) does, so this guards against rounding surprises
    mu = a.space.weights
    for i, g1 in enumerate(elements):
        j1 = mu[a.table[i]] / mu
        for j, g2 in enumerate(elements):
            j2 = mu[a.table[j]] / mu
            lhs = mu[a.table[G.index(G.add(g1, g2))]] / mu
            rhs = j1[a.table[j]] * j2
            dev = np.abs(lhs - rhs) / np.maximum(np.abs(lhs), 1e-300)
            if np.any(dev > COCYCLE_TOL):
                x = int(np.argmax(dev))
                violations.append(
                    f"cocycle J({G.add(g1, g2)}, x) != "
                    f"J({g1}, sigma_{g2}(x)) * J({g2}, x): witness x={x}"
                )

    return ActionReport(ok=not violations, violations=violations)


@dataclass
class TilingTransversal:
    """One representative per orbit of a free action.

    ``points[k]`` is the smallest point index in orbit k (orbits appear in
    order of first appearance, so ``points`` is increasing).  For every
    point x, ``orbit_of[x]`` names its orbit and ``shift_of[x]`` is the
    flat group index of the unique gamma with sigma_gamma(rep) = x.
    """

    points: np.ndarray
    orbit_of: np.ndarray
    shift_of: np.ndarray

    @property
    def count(self) -> int:
        return int(self.points.size)


def tiling_transversal(a: QuasiInvariantAction) -> TilingTransversal:
    """Orbit representatives of a validated action; raises NotFreeError.

    Freeness means every orbit has exactly |group| distinct points.
    """
    N = a.space.size
    order = a.group.order
    orbit_of = np.full(N, -1, dtype=np.intp)
    shift_of = np.full(N, -1, dtype=np.intp)
    reps: list[int] = []
    for x in range(N):
        if orbit_of[x] >= 0:
            continue
        k = len(reps)
        reps.append(x)
        for gi in range(order):
            y = int(a.table[gi, x])
            if orbit_of[y] >= 0:
                raise NotFreeError(point=x)
            orbit_of[y] = k
            shift_of[y] = gi
    return TilingTransversal(
        points=np.asarray(reps, dtype=np.intp),
        orbit_of=orbit_of,
        shift_of=shift_of,
    )
