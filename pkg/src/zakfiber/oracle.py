"""Dense linear-algebra reference route for orbit systems.

Everything here works on the synthesis matrix of the full orbit system
{Pi(gamma) phi : gamma in Gamma, phi generator} assembled column by column
in the weighted geometry (rows scaled by sqrt(mu)), with no fiberization.
Frame bounds come from the frame operator M M^H, Riesz bounds from the
Gram matrix M^H M, and membership from a least-squares solve.  These are
deliberately independent of the transform modules so the two routes can
be played against each other.
"""

from __future__ import annotations

import numpy as np

from .action import QuasiInvariantAction

__all__ = [
    "synthesis_matrix",
    "translation_synthesis_matrix",
    "dense_frame_bounds",
    "dense_riesz_bounds",
    "brute_membership",
    "frame_bounds_of_matrix",
    "riesz_bounds_of_matrix",
    "membership_of_matrix",
]

# eigenvalues below RANK_REL * (largest) are treated as zero when locating
# the lower frame bound; the same ratio decides linear independence
RANK_REL = 1e-9


def synthesis_matrix(a: QuasiInvariantAction, gens) -> np.ndarray:
    """Columns sqrt(mu) * Pi(gamma) phi, generator-major, gamma lexicographic."""
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        raise ValueError("at least one generator is required")
    N = a.space.size
    for g in gens:
        if g.shape != (N,):
            raise ValueError(f"generator shape {g.shape} does not match space "
                             f"size {N}")
    sqrtw = np.sqrt(a.space.weights)
    cols = []
    for phi in gens:
        for gamma in a.group.elements():
            cols.append(sqrtw * a.apply(gamma, phi))
    return np.stack(cols, axis=1)


def translation_synthesis_matrix(s, gens) -> np.ndarray:
    """Columns T_gamma phi of a translation system on G, generator-major.

    ``s`` is a TranslationScenario; the ambient measure is counting, so no
    weight scaling is applied.  gamma runs over the subgroup members in
    sorted order.
    """
    gens = [np.asarray(g, dtype=complex) for g in gens]
    if not gens:
        raise ValueError("at least one generator is required")
    G = s.G
    for g in gens:
        if g.shape != (G.order,):
            raise ValueError(f"generator shape {g.shape} does not match "
                             f"group order {G.order}")
    # index map for translation: (T_gamma phi)(x) = phi(x - gamma)
    cols = []
    for phi in gens:
        for gamma in s.gamma.members:
            shifted = np.empty(G.order, dtype=complex)
            for xi, x in enumerate(G.elements()):
                shifted[xi] = phi[G.index(G.sub(x, gamma))]
            cols.append(shifted)
    return np.stack(cols, axis=1)


def frame_bounds_of_matrix(M: np.ndarray, rel_tol: float = RANK_REL):
    """(A, B) from the spectrum of M M^H, ignoring eigenvalues below
    rel_tol * max; (None, None) when the system is zero."""
    S = M @ M.conj().T
    eig = np.linalg.eigvalsh(S)
    emax = float(eig[-1])
    if emax <= 0.0:
        return None, None
    kept = eig[eig > rel_tol * emax]
    return float(kept[0]), emax


def riesz_bounds_of_matrix(M: np.ndarray, rel_tol: float = RANK_REL):
    """(A, B, independent) from the full spectrum of the Gram M^H M."""
    G = M.conj().T @ M
    eig = np.linalg.eigvalsh(G)
    A = max(float(eig[0]), 0.0)  # clip spurious negatives from rounding
    B = float(eig[-1])
    independent = bool(B > 0.0 and A > rel_tol * B)
    return A, B, independent


def membership_of_matrix(M: np.ndarray, b: np.ndarray,
                         threshold: float = 1e-9):
    """Least-squares residual of b against the column span of M.

    Returns (member, residual) with residual in the ambient (already
    weighted) Euclidean norm; the verdict compares against
    threshold * max(1, ||b||).
    """
    x, *_ = np.linalg.lstsq(M, b, rcond=None)
    residual = float(np.linalg.norm(b - M @ x))
    member = residual <= threshold * max(1.0, float(np.linalg.norm(b)))
    return member, residual


def dense_frame_bounds(a: QuasiInvariantAction, gens,
                       rel_tol: float = RANK_REL):
    """Frame bounds of the orbit system on its span, computed densely."""
    return frame_bounds_of_matrix(synthesis_matrix(a, gens), rel_tol)


def dense_riesz_bounds(a: QuasiInvariantAction, gens,
                       rel_tol: float = RANK_REL):
    """Riesz bounds and linear independence of the orbit system."""
    return riesz_bounds_of_matrix(synthesis_matrix(a, gens), rel_tol)


def brute_membership(a: QuasiInvariantAction, f, gens,
                     threshold: float = 1e-9):
    """Membership of f in the span of the orbit system, by least squares."""
    v = np.asarray(f, dtype=complex)
    if v.shape != (a.space.size,):
        raise ValueError(f"expected {a.space.size} values, got shape {v.shape}")
    M = synthesis_matrix(a, gens)
    b = np.sqrt(a.space.weights) * v
    return membership_of_matrix(M, b, threshold)
