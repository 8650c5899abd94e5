"""Decision procedure for the spectral order on positive semidefinite
matrices: A precedes B when every power of A sits below the same power of B,
equivalently when the half-line spectral projections of A are contained in
those of B at every threshold.

The projections are piecewise constant in the threshold, so checking at the
merged distinct levels of both matrices plus the midpoints between
consecutive levels decides the order exactly (up to clustering tolerance).
Range inclusion is measured by the operator norm of the excluded component,
which stays robust near degenerate eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    SymMatrix,
    Tolerances,
    eig_sym,
    spectral_projection,
)

__all__ = ["OrderCertificate", "spectral_leq"]


@dataclass(frozen=True)
class OrderCertificate:
    """Outcome of a spectral-order comparison.

    worst_residual is the largest range-inclusion defect over the tested
    thresholds; holds is true exactly when it stays within meet_tol.
    witness_lambda records a threshold where inclusion fails, if any.
    """

    holds: bool
    witness_lambda: float | None
    worst_residual: float


def _threshold_grid(da, db, tol: Tolerances) -> list[float]:
    cuts = []
    for d in (da, db):
        cut = tol.rank_abs(d.norm2)
        cuts.extend(float(v) for v in d.level_values if v > cut)
    grid = sorted(set(cuts))
    mids = [(a + b) / 2.0 for a, b in zip(grid, grid[1:])]
    return sorted(set(grid + mids))


def spectral_leq(
    A: SymMatrix, B: SymMatrix, tol: Tolerances = DEFAULT_TOL
) -> OrderCertificate:
    """Certify (or refute) that A precedes B in the spectral order."""
    if A.n != B.n:
        raise DimensionMismatchError(f"dimensions differ: {A.n} vs {B.n}")
    A.assert_psd(tol)
    B.assert_psd(tol)
    da = eig_sym(A, tol)
    db = eig_sym(B, tol)
    worst = 0.0
    worst_lambda: float | None = None
    for lam in _threshold_grid(da, db, tol):
        qa = spectral_projection(da, lam, tol)
        if qa.dim == 0:
            continue
        qb = spectral_projection(db, lam, tol)
        residual = qa.containment_residual(qb)
        if residual > worst:
            worst = residual
            worst_lambda = lam
    holds = worst <= tol.meet_tol
    return OrderCertificate(
        holds=holds,
        witness_lambda=None if holds else worst_lambda,
        worst_residual=worst,
    )
