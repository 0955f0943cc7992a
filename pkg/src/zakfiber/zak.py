"""Fiberization of weighted-space functions over a free group action.

For a free action of Gamma with tiling transversal C, the transform

    Z[psi](alpha)(x) = sum_gamma (Pi(gamma) psi)(x) * conj((gamma, alpha)),
    x in C, alpha in the dual group,

is an isometric isomorphism onto the space of fibers {alpha -> l2(C, mu)}
carrying the normalized counting measure on the dual group:

    ||psi||^2 = (1/|Gamma|) sum_alpha ||Z[psi](alpha)||^2_mu.

Per representative x, the orbit sequence gamma -> (Pi(gamma) psi)(x) is
transformed with the FFT over the factor axes, so fibers are enumerated in
lexicographic dual order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .action import QuasiInvariantAction, TilingTransversal, tiling_transversal

__all__ = ["FiberedVector", "ZakTransform", "zak_forward", "zak_inverse"]


@dataclass
class FiberedVector:
    """Stack of fibers, one row per dual point, plus the atom weights on C.

    The fiber inner product is <u, v> = sum_x u(x) conj(v(x)) mu(x); the
    global square norm averages fiber square norms over the dual group.
    """

    fibers: np.ndarray        # (n_fibers, n_points) complex
    fiber_weights: np.ndarray  # (n_points,) positive

    def __post_init__(self):
        self.fibers = np.asarray(self.fibers, dtype=complex)
        self.fiber_weights = np.asarray(self.fiber_weights, dtype=float)
        if self.fibers.ndim != 2:
            raise ValueError("fibers must be a 2-d array")
        if self.fiber_weights.shape != (self.fibers.shape[1],):
            raise ValueError("fiber_weights length does not match fibers")

    @property
    def n_fibers(self) -> int:
        return int(self.fibers.shape[0])

    @property
    def n_points(self) -> int:
        return int(self.fibers.shape[1])

    def fiber(self, i: int) -> np.ndarray:
        return self.fibers[i]

    def fiber_inner(self, other: "FiberedVector") -> np.ndarray:
        """Per-fiber weighted inner products <self(alpha), other(alpha)>."""
        if other.fibers.shape != self.fibers.shape:
            raise ValueError("fiber shapes do not match")
        return np.sum(self.fibers * np.conj(other.fibers) * self.fiber_weights,
                      axis=1)

    def fiber_norms_sq(self) -> np.ndarray:
        return np.sum(np.abs(self.fibers) ** 2 * self.fiber_weights, axis=1)

    def norm_sq(self) -> float:
        return float(np.sum(self.fiber_norms_sq()) / self.n_fibers)

    def inner(self, other: "FiberedVector") -> complex:
        return complex(np.sum(self.fiber_inner(other)) / self.n_fibers)


class ZakTransform:
    """Forward/inverse fiberization for one validated free action.

    Precomputes, per group element gamma and representative x: the source
    point sigma_{-gamma}(x) with amplitude J(-gamma, x)^(1/2) for analysis,
    and the destination sigma_gamma(x) with amplitude J(gamma, x)^(-1/2)
    for synthesis.
    """

    def __init__(self, action: QuasiInvariantAction,
                 transversal: TilingTransversal | None = None):
        self.action = action
        self.group = action.group
        self.transversal = transversal or tiling_transversal(action)
        G = self.group
        mu = action.space.weights
        C = self.transversal.points
        neg = G.neg_index_table()
        # src[gi, ci] = sigma_{-gamma_gi}(C[ci]);  dst[gi, ci] = sigma_{gamma_gi}(C[ci])
        self._src = action.table[neg][:, C]
        self._dst = action.table[:, C]
        self._amp_fwd = np.sqrt(mu[self._src] / mu[C])
        self._amp_inv = np.sqrt(mu[C] / mu[self._dst])
        self._neg = neg
        self.fiber_weights = mu[C].copy()

    @property
    def n_fibers(self) -> int:
        return self.group.order

    @property
    def n_points(self) -> int:
        return self.transversal.count

    def forward(self, psi) -> FiberedVector:
        v = np.asarray(psi, dtype=complex)
        if v.shape != (self.action.space.size,):
            raise ValueError(
                f"expected {self.action.space.size} values, got shape {v.shape}"
            )
        orbit = self._amp_fwd * v[self._src]          # (|Gamma|, |C|)
        shaped = orbit.reshape(*self.group.invariant_factors, self.n_points)
        fibers = np.fft.fftn(shaped, axes=tuple(range(self.group.rank)))
        return FiberedVector(fibers.reshape(self.group.order, self.n_points),
                             self.fiber_weights)

    def inverse(self, Phi: FiberedVector) -> np.ndarray:
        if Phi.fibers.shape != (self.n_fibers, self.n_points):
            raise ValueError(
                f"fiber shape {Phi.fibers.shape} does not match "
                f"({self.n_fibers}, {self.n_points})"
            )
        shaped = Phi.fibers.reshape(*self.group.invariant_factors,
                                    self.n_points)
        u = np.fft.ifftn(shaped, axes=tuple(range(self.group.rank)))
        u = u.reshape(self.group.order, self.n_points)
        # u[gi] = (1/|Gamma|) sum_alpha Phi(alpha) (gamma, alpha); the
        # synthesis formula needs the value at -gamma
        t = u[self._neg]
        psi = np.empty(self.action.space.size, dtype=complex)
        psi[self._dst] = self._amp_inv * t
        return psi

    def lift(self, fibers: np.ndarray) -> FiberedVector:
        """Wrap a raw fiber array with this transform's weights."""
        return FiberedVector(fibers, self.fiber_weights)


def zak_forward(action: QuasiInvariantAction, psi,
                transversal: TilingTransversal | None = None) -> FiberedVector:
    return ZakTransform(action, transversal).forward(psi)


def zak_inverse(action: QuasiInvariantAction, Phi: FiberedVector,
                transversal: TilingTransversal | None = None) -> np.ndarray:
    return ZakTransform(action, transversal).inverse(Phi)
