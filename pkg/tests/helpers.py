"""Shared builders and naive reference implementations for the tests.

The naive routines evaluate defining sums term by term, with no FFT and
no shared code with the package internals, so they can serve as an
independent check of the transform pipeline.
"""

from __future__ import annotations

import numpy as np

from zakfiber import (
    FiniteAbelianGroup,
    QuasiInvariantAction,
    TranslationScenario,
    WeightedSpace,
    ZakTransform,
    affine_action,
    build_scenario,
    character,
)


def s1_action() -> QuasiInvariantAction:
    """Z_4 on 8 unweighted points, sigma_gamma(x) = x + 2*gamma mod 8."""
    G = FiniteAbelianGroup([4])
    space = WeightedSpace(np.ones(8))
    return affine_action(G, space, [2])


def s2_action() -> QuasiInvariantAction:
    """Z_2 on 4 points with masses 1, 2, 3, 4 and the flip x -> 3 - x."""
    G = FiniteAbelianGroup([2])
    space = WeightedSpace([1.0, 2.0, 3.0, 4.0])
    return QuasiInvariantAction(G, space, [[0, 1, 2, 3], [3, 2, 1, 0]])


def s3_scenario() -> TranslationScenario:
    """The subgroup generated by 3 inside Z_12."""
    return build_scenario(FiniteAbelianGroup([12]), [[3]])


def star_generator() -> np.ndarray:
    """Single generator on the s1 space whose fibers are the indicator of
    the zero fiber: 1/4 on the even points, 0 on the odd ones."""
    psi = np.zeros(8, dtype=complex)
    psi[[0, 2, 4, 6]] = 0.25
    return psi


def delta(n: int, i: int) -> np.ndarray:
    v = np.zeros(n, dtype=complex)
    v[i] = 1.0
    return v


def random_complex(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.standard_normal(n) + 1j * rng.standard_normal(n)


def naive_apply(a: QuasiInvariantAction, gamma, psi) -> np.ndarray:
    """(Pi(gamma) psi)(x) term by term."""
    G = a.group
    mu = a.space.weights
    neg = G.neg(gamma)
    perm = a.table[G.index(neg)]
    out = np.zeros(a.space.size, dtype=complex)
    for x in range(a.space.size):
        out[x] = np.sqrt(mu[perm[x]] / mu[x]) * psi[perm[x]]
    return out


def naive_zak(a: QuasiInvariantAction, zk: ZakTransform, psi) -> np.ndarray:
    """Defining triple sum of the fiberization, one term at a time."""
    G = a.group
    C = zk.transversal.points
    out = np.zeros((G.order, C.size), dtype=complex)
    for ai, alpha in enumerate(G.elements()):
        for ci, c in enumerate(C):
            total = 0.0 + 0.0j
            for gamma in G.elements():
                total += naive_apply(a, gamma, psi)[c] * \
                    np.conj(character(G, gamma, alpha))
            out[ai, ci] = total
    return out


def naive_zakG(s: TranslationScenario, f) -> np.ndarray:
    """Defining sum of the subgroup-translation Zak transform."""
    G = s.G
    out = np.zeros((s.n_dual, s.n_cosets), dtype=complex)
    for wi, om in enumerate(s.dual_reps):
        for ci, x in enumerate(s.coset_reps):
            total = 0.0 + 0.0j
            for g in s.gamma.members:
                total += f[G.index(G.sub(x, g))] * \
                    np.conj(character(G, g, om))
            out[wi, ci] = total
    return out
