"""Fiberwise frame and Riesz analysis of orbit systems.

The orbit system E(A) = {Pi(gamma) phi} is a frame for the invariant
space it spans exactly when the generator fibers {Z[phi](alpha)} form
frames of J(alpha) with uniform bounds, and a Riesz system exactly when
the fiber Gram matrices are uniformly invertible over the whole dual
group.  Both criteria reduce to per-fiber singular values of the
weight-scaled fiber matrix B(alpha) = diag(sqrt(mu)) [Z[phi](alpha)]_phi:

  frame bounds  A = min over supported fibers of the smallest retained
                    squared singular value,  B = max of the largest;
  Riesz bounds  A = min over ALL fibers of the smallest Gram eigenvalue
                    (zero-padded when there are more generators than
                    points),  B = max of the largest.

A fiber belongs to the support when its largest squared singular value
exceeds the tolerance; for a single generator that is the set
Omega_psi = {alpha : ||Z[psi](alpha)||^2 > tolerance}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._util import fiber_map, stack_generator_fibers
from .zak import FiberedVector, ZakTransform

__all__ = [
    "BracketFunction",
    "FrameReport",
    "bracket",
    "frame_check",
    "frame_check_fibers",
    "riesz_check",
    "riesz_check_fibers",
    "single_generator_report",
]

SUPPORT_TOL = 1e-10
RANK_TOL = 1e-10
# linear independence requires the smallest Gram eigenvalue to clear this
# fraction of the largest
RIESZ_REL = 1e-9


@dataclass
class BracketFunction:
    """[psi, phi](alpha) = <Z[psi](alpha), Z[phi](alpha)> per fiber."""

    values: np.ndarray

    @property
    def n_fibers(self) -> int:
        return int(self.values.size)

    def mean(self) -> complex:
        """Equals <psi, phi> by the isometry."""
        return complex(np.mean(self.values))


def bracket(zak: ZakTransform, psi, phi) -> BracketFunction:
    Zpsi = zak.forward(psi)
    Zphi = zak.forward(phi)
    return BracketFunction(values=Zpsi.fiber_inner(Zphi))


@dataclass
class FrameReport:
    """Per-fiber spectra plus global bounds and verdicts.

    ``lower``/``upper`` are None exactly when the report is degenerate
    (every generator fiber vanishes).  ``smin2`` holds the smallest
    retained squared singular value per fiber (0 where the fiber is
    empty), ``smax2`` the largest, and ``gram_min`` the smallest
    eigenvalue of the zero-padded fiber Gram matrix.
    """

    dims: np.ndarray
    smin2: np.ndarray
    smax2: np.ndarray
    gram_min: np.ndarray
    support: np.ndarray
    lower: float | None
    upper: float | None
    is_bessel: bool
    is_frame: bool
    is_parseval: bool
    is_riesz: bool
    tolerance: float
    degenerate: bool

    @property
    def n_fibers(self) -> int:
        return int(self.dims.size)


def _fiber_spectra(fibered: Sequence[FiberedVector],
                   rank_tolerance: float, workers: int):
    """Squared singular values of the weight-scaled fiber matrices.

    Returns (s2, dims) where s2 has one row per fiber, padded with zeros
    to the number of generators (the fiber Gram spectrum), in descending
    order; dims counts the values retained by the rank rule.
    """
    stack, weights = stack_generator_fibers(fibered)
    sqrtw = np.sqrt(weights)
    n_gens = stack.shape[2]

    def one(i: int) -> np.ndarray:
        B = sqrtw[:, None] * stack[i]
        s = np.linalg.svd(B, compute_uv=False)
        s2 = np.zeros(n_gens)
        s2[: s.size] = s ** 2
        return s2

    rows = fiber_map(one, stack.shape[0], workers)
    s2 = np.stack(rows)
    smax = np.sqrt(s2[:, 0])
    dims = np.sum(np.sqrt(s2) > rank_tolerance * smax[:, None], axis=1)
    dims[smax <= 0.0] = 0
    return s2, dims.astype(int)


def _assemble(s2: np.ndarray, dims: np.ndarray, tolerance: float,
              riesz_style: bool) -> FrameReport:
    n_fibers, n_gens = s2.shape
    smax2 = s2[:, 0].copy()
    gram_min = s2[:, -1].copy()
    idx = np.arange(n_fibers)
    smin2 = np.where(dims > 0, s2[idx, np.maximum(dims, 1) - 1], 0.0)
    support = smax2 > tolerance

    degenerate = not bool(support.any())
    if degenerate:
        lower = upper = None
        is_frame = is_parseval = is_riesz = False
    else:
        frame_lower = float(np.min(smin2[support]))
        frame_upper = float(np.max(smax2))
        riesz_lower = float(np.min(gram_min))
        riesz_upper = frame_upper
        is_frame = True
        is_riesz = riesz_lower > RIESZ_REL * riesz_upper
        if riesz_style:
            lower, upper = riesz_lower, riesz_upper
        else:
            lower, upper = frame_lower, frame_upper
        is_parseval = (
            is_frame
            and abs(frame_lower - 1.0) <= tolerance
            and abs(frame_upper - 1.0) <= tolerance
        )
    return FrameReport(
        dims=dims,
        smin2=smin2,
        smax2=smax2,
        gram_min=gram_min,
        support=support,
        lower=lower,
        upper=upper,
        is_bessel=True,
        is_frame=is_frame,
        is_parseval=is_parseval,
        is_riesz=is_riesz,
        tolerance=tolerance,
        degenerate=degenerate,
    )


def frame_check_fibers(fibered: Sequence[FiberedVector],
                       tolerance: float = SUPPORT_TOL,
                       rank_tolerance: float = RANK_TOL,
                       workers: int = 1) -> FrameReport:
    s2, dims = _fiber_spectra(fibered, rank_tolerance, workers)
    return _assemble(s2, dims, tolerance, riesz_style=False)


def frame_check(zak: ZakTransform, gens,
                tolerance: float = SUPPORT_TOL,
                rank_tolerance: float = RANK_TOL,
                workers: int = 1) -> FrameReport:
    """Frame bounds of the orbit system of ``gens`` on the space it spans."""
    fibered = [zak.forward(g) for g in gens]
    return frame_check_fibers(fibered, tolerance, rank_tolerance, workers)


def riesz_check_fibers(fibered: Sequence[FiberedVector],
                       tolerance: float = SUPPORT_TOL,
                       rank_tolerance: float = RANK_TOL,
                       workers: int = 1) -> FrameReport:
    s2, dims = _fiber_spectra(fibered, rank_tolerance, workers)
    return _assemble(s2, dims, tolerance, riesz_style=True)


def riesz_check(zak: ZakTransform, gens,
                tolerance: float = SUPPORT_TOL,
                rank_tolerance: float = RANK_TOL,
                workers: int = 1) -> FrameReport:
    """Riesz bounds of the orbit system: extremes of the fiber Gram spectra."""
    fibered = [zak.forward(g) for g in gens]
    return riesz_check_fibers(fibered, tolerance, rank_tolerance, workers)


def single_generator_report(zak: ZakTransform, psi,
                            tolerance: float = SUPPORT_TOL):
    """Frame/Riesz verdicts for one generator, plus its bracket.

    The orbit of psi is a frame for its span with bounds
    (min over Omega_psi, max over the dual group) of ||Z[psi](alpha)||^2,
    and a Riesz system iff that square norm clears the tolerance on every
    fiber.
    """
    Zpsi = zak.forward(psi)
    norms = Zpsi.fiber_norms_sq()
    support = norms > tolerance
    degenerate = not bool(support.any())
    if degenerate:
        lower = upper = None
        is_frame = is_parseval = is_riesz = False
    else:
        lower = float(np.min(norms[support]))
        upper = float(np.max(norms))
        is_frame = True
        is_parseval = abs(lower - 1.0) <= tolerance and \
            abs(upper - 1.0) <= tolerance
        is_riesz = bool(np.min(norms) > tolerance)
    report = FrameReport(
        dims=support.astype(int),
        smin2=np.where(support, norms, 0.0),
        smax2=norms.copy(),
        gram_min=norms.copy(),
        support=support,
        lower=lower,
        upper=upper,
        is_bessel=True,
        is_frame=is_frame,
        is_parseval=is_parseval,
        is_riesz=is_riesz,
        tolerance=tolerance,
        degenerate=degenerate,
    )
    brk = BracketFunction(values=Zpsi.fiber_inner(Zpsi))
    return report, brk
