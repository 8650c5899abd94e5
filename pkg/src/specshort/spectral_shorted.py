"""The spectral shorted operator: the decreasing limit of rooted powers of
shorted operators, by two independent routes.

Closed form (the canonical algorithm): with the distinct positive levels of A
sorted descending, meet each half-line spectral projection of A with the
target subspace; the nested chain of meets is the left spectral resolution of
the result, so the operator is the telescoping sum of level values times
projection increments.

Iterative (kept as an oracle and for trace pedagogy): root-of-shorted-power
iterates B_k = (shorted(A^{2^k}, S))^{1/2^k}.  A is normalized to unit
spectral norm before powering (the result scales linearly in A, so this is
exact) and powers reuse the one eigendecomposition of A, but the approach is
still precision-limited: level content of A^{m} below roughly 1e-14 of the
top retained level is indistinguishable from rounding noise, and the
iteration refuses to power past that wall rather than return noise dressed
up as an iterate.  Convergence of the iterates toward the limit is generally
only O(1/m) in the power m, so slow runs stop at the wall or at k_max with
converged=False; that is a flagged outcome, not an error.

The one-dimensional scalar admits additional formulas (largest half-line
projection containing the vector; inverse-power-norm limits through the
pseudo-inverse) implemented here as spectral_short_vector and
spectral_short_vector_power.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (
    DEFAULT_TOL,
    DimensionMismatchError,
    DomainError,
    Subspace,
    SymMatrix,
    Tolerances,
    eig_sym,
    matrix_function,
    projection_meet,
    pseudo_inverse,
    spectral_projection,
)

__all__ = [
    "TraceStep",
    "ConvergenceTrace",
    "SpectralShortResult",
    "spectral_short_closed",
    "spectral_short_iterative",
    "spectral_short_vector",
    "spectral_short_vector_power",
    "spectral_short_min",
    "monotone_calculus_residual",
    "scalar_short_spectrum",
]

# Relative level content below this floor picks up enough rounding noise,
# once a power is materialized as a dense matrix and re-rooted, to disturb
# the iterates beyond the 1e-9 monotonicity budget; the iterative route
# stops powering there.
_POWER_NOISE_FLOOR = 1e-8


@dataclass(frozen=True)
class TraceStep:
    power: float
    value: object  # float for scalar iterations, ndarray for matrix ones
    delta: float | None


@dataclass(frozen=True)
class ConvergenceTrace:
    """Iterates of a limit-based algorithm with per-step deltas."""

    iterates: tuple[TraceStep, ...]
    converged: bool
    final_delta: float
    stop_reason: str  # "converged" | "max_iterations" | "power_limit" | "exact"

    def last_value(self):
        return self.iterates[-1].value

    def extrapolated(self):
        """Richardson extrapolation of the last two matrix iterates under the
        O(1/power) error model (2*B_k - B_{k-1} for doubling powers)."""
        if len(self.iterates) < 2:
            return self.iterates[-1].value
        return 2 * np.asarray(self.iterates[-1].value) - np.asarray(
            self.iterates[-2].value
        )


@dataclass(frozen=True)
class SpectralShortResult:
    """A spectral shorted operator with its construction data.

    levels lists (level value, projection increment) pairs for the closed
    form (empty for the iterative route); trace carries the iterates for the
    iterative route (None for the closed form).
    """

    value: SymMatrix
    levels: tuple[tuple[float, np.ndarray], ...]
    method: str
    subspace: Subspace
    trace: ConvergenceTrace | None = None

    def compressed(self) -> np.ndarray:
        b = self.subspace.basis
        return b.T @ self.value.entries @ b

    def scalar(self) -> float:
        if self.subspace.dim != 1:
            raise DomainError(
                f"scalar() needs a one-dimensional subspace, got dim {self.subspace.dim}"
            )
        return float(self.compressed()[0, 0])


def _check_pair(A: SymMatrix, S: Subspace, tol: Tolerances) -> None:
    if A.n != S.n:
        raise DimensionMismatchError(f"ambient dimensions differ: {A.n} vs {S.n}")
    A.assert_psd(tol)


def _new_directions(Q: Subspace, prev: Subspace) -> np.ndarray:
    """Orthonormal basis of the part of Q orthogonal to prev (Q contains prev)."""
    if Q.dim == 0:
        return np.zeros((Q.n, 0))
    d = Q.basis - prev.basis @ (prev.basis.T @ Q.basis)
    u, s, _ = np.linalg.svd(d, full_matrices=False)
    return u[:, s > 0.5]


def spectral_short_closed(
    A: SymMatrix, S: Subspace, tol: Tolerances = DEFAULT_TOL
) -> SpectralShortResult:
    """Closed-form spectral shorted operator from the meet construction."""
    _check_pair(A, S, tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    descending = [
        (float(d.level_values[i]), i)
        for i in reversed(range(len(d.level_values)))
        if d.level_values[i] > cut
    ]
    n = A.n
    prev = Subspace.zero(n)
    prev_proj = np.zeros((n, n))
    levels: list[tuple[float, np.ndarray]] = []
    eigvals: list[float] = []
    eigvecs: list[np.ndarray] = []
    for mu, level_idx in descending:
        q = projection_meet(spectral_projection(d, mu, tol), S, tol)
        increment = q.projection() - prev_proj
        levels.append((mu, increment))
        fresh = _new_directions(q, prev)
        for j in range(fresh.shape[1]):
            eigvals.append(mu)
            eigvecs.append(fresh[:, j])
        prev = q
        prev_proj = q.projection()
    null = prev.complement()
    for j in range(null.dim):
        eigvals.append(0.0)
        eigvecs.append(null.basis[:, j])
    value = SymMatrix.from_eigens(
        np.array(eigvals), np.column_stack(eigvecs) if eigvecs else np.zeros((n, 0))
    )
    return SpectralShortResult(
        value=value,
        levels=tuple(levels),
        method="closed_form",
        subspace=S,
    )


def _power_limit(min_positive_ratio: float) -> float:
    """Largest power m such that min_positive_ratio**m stays above the
    dense-representation noise floor."""
    if min_positive_ratio >= 1.0:
        return math.inf
    return math.log(_POWER_NOISE_FLOOR) / math.log(min_positive_ratio)


def spectral_short_iterative(
    A: SymMatrix,
    S: Subspace,
    k_max: int = 20,
    tol: Tolerances = DEFAULT_TOL,
) -> SpectralShortResult:
    """Iterated root-of-shorted-power route to the spectral shorted operator.

    Iterates are non-increasing in the semidefinite order and bound the limit
    from above.  Stops on a small step (converged), at k_max, or at the
    precision wall described in the module docstring (power_limit).
    """
    _check_pair(A, S, tol)
    d = eig_sym(A, tol)
    scale = d.norm2
    n = A.n
    if scale <= 0.0 or S.dim == 0:
        zero = SymMatrix(np.zeros((n, n)))
        trace = ConvergenceTrace(
            iterates=(TraceStep(1, zero.entries, None),),
            converged=True,
            final_delta=0.0,
            stop_reason="exact",
        )
        return SpectralShortResult(zero, (), "iterative", S, trace)

    lam_hat = d.eigenvalues / scale
    cut = tol.rank_tol
    positive = lam_hat > cut
    lam_pos = np.where(positive, lam_hat, 0.0)
    min_ratio = float(lam_pos[positive].min())
    m_limit = _power_limit(min_ratio)

    # Rank of every iterate and of the limit: dimension of S meet range(A).
    range_plus = Subspace(d.vectors[:, positive]) if positive.any() else Subspace.zero(n)
    rank = projection_meet(S, range_plus, tol).dim

    comp = S.complement()
    steps: list[TraceStep] = []
    prev: np.ndarray | None = None
    converged = False
    reason = "max_iterations"
    for k in range(k_max + 1):
        m = 2.0**k
        if k > 0 and m > m_limit:
            reason = "power_limit"
            break
        # sqrt(A^m) from the one decomposition of A: exact per eigenvalue.
        root_m = SymMatrix.from_eigens(lam_pos ** (m / 2.0), d.vectors)
        proj_m = _image_complement_projector(root_m, comp, tol)
        raw = root_m.entries @ proj_m @ root_m.entries
        raw = (raw + raw.T) / 2.0
        b_hat = _rank_aware_root(raw, rank, 1.0 / m)
        b = scale * b_hat
        delta = None if prev is None else float(np.abs(b - prev).max())
        steps.append(TraceStep(m, b, delta))
        if delta is not None and delta <= tol.conv_tol * max(1.0, scale):
            converged = True
            reason = "converged"
            break
        prev = b
    final = steps[-1]
    trace = ConvergenceTrace(
        iterates=tuple(steps),
        converged=converged,
        final_delta=0.0 if final.delta is None else final.delta,
        stop_reason=reason,
    )
    return SpectralShortResult(
        value=SymMatrix(final.value),
        levels=(),
        method="iterative",
        subspace=S,
        trace=trace,
    )


def _image_complement_projector(
    root: SymMatrix, comp: Subspace, tol: Tolerances
) -> np.ndarray:
    """Projection onto the complement of root(comp); the M-projector of the
    geometric shorted-operator construction."""
    if comp.dim == 0:
        return np.eye(root.n)
    g = root.entries @ comp.basis
    u, s, _ = np.linalg.svd(g, full_matrices=False)
    keep = s > tol.rank_tol * float(s[0]) if s.size else np.zeros(0, bool)
    t = u[:, keep]
    return np.eye(root.n) - t @ t.T


def _rank_aware_root(sigma: np.ndarray, rank: int, exponent: float) -> np.ndarray:
    """sigma**exponent keeping exactly `rank` top eigenvalues.

    The rank of every iterate is known in advance (it equals the dimension
    of S meet range(A)), so eigenvalues outside the top block are structural
    zeros; zeroing them prevents tiny rounding noise from being amplified to
    order one by the small exponent.
    """
    w, v = np.linalg.eigh(sigma)
    vals = np.zeros_like(w)
    if rank > 0:
        top = w[-rank:]
        vals[-rank:] = np.where(top > 0.0, top**exponent, 0.0)
    out = (v * vals) @ v.T
    return (out + out.T) / 2.0


def spectral_short_vector(
    A: SymMatrix, xi, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Scalar spectral shorted value for a one-dimensional subspace: the
    largest level of A whose half-line projection contains the vector (so the
    smallest level carrying any of its spectral weight), and 0 if the vector
    leans outside the range of A."""
    v = _unit_vector(xi, tol)
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    coeffs = d.vectors.T @ v
    best = 0.0
    below = 0.0  # squared norm of the component strictly below the candidate level
    for group, rep in zip(d.levels, d.level_values):
        if rep > cut:
            if math.sqrt(below) <= tol.orth_tol:
                best = float(rep)
            else:
                break
        below += float(np.sum(coeffs[list(group)] ** 2))
    return best


def spectral_short_vector_power(
    A: SymMatrix,
    xi,
    m_max: int = 200,
    tol: Tolerances = DEFAULT_TOL,
) -> tuple[float, ConvergenceTrace]:
    """Scalar spectral shorted value by pseudo-inverse power iteration.

    Vectors off the range of A give exactly 0.  Otherwise the iteration
    eta_m = pinv(A) eta_{m-1} is run with per-step renormalization; the trace
    records the non-increasing root sequence ||eta_m||^{-1/m} (an infimum),
    while the returned value is the Rayleigh-quotient estimate
    1 / <pinv(A) u, u>, whose convergence is geometric in the level gap and
    therefore reaches tight tolerances the slow root sequence cannot.
    """
    v = _unit_vector(xi, tol)
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    keep = np.zeros(d.n, dtype=bool)
    for group, rep in zip(d.levels, d.level_values):
        if rep > cut:
            keep[list(group)] = True
    range_plus = Subspace(d.vectors[:, keep]) if keep.any() else Subspace.zero(d.n)
    if range_plus.dim == 0 or range_plus.member_residual(v) > tol.orth_tol:
        trace = ConvergenceTrace(
            iterates=(TraceStep(0, 0.0, None),),
            converged=True,
            final_delta=0.0,
            stop_reason="exact",
        )
        return 0.0, trace

    pinv = pseudo_inverse(A, tol).entries
    eta = v
    log_norm = 0.0
    steps: list[TraceStep] = []
    prev_s: float | None = None
    prev_r: float | None = None
    value = 0.0
    converged = False
    reason = "max_iterations"
    for m in range(1, m_max + 1):
        w = pinv @ eta
        rayleigh = float(w @ eta)
        growth = float(np.linalg.norm(w))
        if growth <= 0.0 or rayleigh <= 0.0:  # pragma: no cover - defensive
            reason = "exact"
            converged = True
            value = 0.0
            break
        log_norm += math.log(growth)
        s_m = math.exp(-log_norm / m)
        r_m = 1.0 / rayleigh
        delta_s = None if prev_s is None else abs(s_m - prev_s)
        steps.append(TraceStep(m, s_m, delta_s))
        # The root sequence decreases to the limit, so it bounds any honest
        # estimate from above; a quotient sitting beyond that bound is still
        # on a transient plateau of a higher level.
        consistent = r_m <= s_m + tol.conv_tol * max(1.0, s_m)
        if (
            prev_r is not None
            and consistent
            and abs(r_m - prev_r) <= tol.conv_tol * max(1.0, r_m)
        ):
            value = r_m
            converged = True
            reason = "converged"
            break
        prev_s = s_m
        prev_r = r_m
        value = r_m
        eta = w / growth
    trace = ConvergenceTrace(
        iterates=tuple(steps),
        converged=converged,
        final_delta=0.0 if not steps or steps[-1].delta is None else steps[-1].delta,
        stop_reason=reason,
    )
    return value, trace


def spectral_short_min(
    A: SymMatrix, S: Subspace, tol: Tolerances = DEFAULT_TOL
) -> float:
    """Smallest spectrum point of the spectral shorted operator viewed on S:
    the largest level of A whose half-line projection contains all of S
    (0 when only the trivial threshold works)."""
    _check_pair(A, S, tol)
    if S.dim == 0:
        raise DomainError("the zero subspace has no compressed spectrum")
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    best = 0.0
    for rep in sorted((float(r) for r in d.level_values if r > cut), reverse=True):
        q = spectral_projection(d, rep, tol)
        if S.containment_residual(q) <= tol.orth_tol:
            best = rep
            break
    return best


def monotone_calculus_residual(
    A: SymMatrix,
    S: Subspace,
    f: Callable[[float], float],
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Max-norm gap between f applied to the spectral shorted operator and
    the spectral shorted operator of f(A).

    f must be nondecreasing and nonnegative on the sampled eigenvalues
    (checked; right continuity cannot be checked pointwise and is assumed).
    """
    _check_pair(A, S, tol)
    d = eig_sym(A, tol)
    samples = sorted({0.0, *(float(r) for r in d.level_values)})
    images = []
    for x in samples:
        y = float(f(x))
        if not np.isfinite(y):
            raise DomainError(f"function not finite at {x!r}")
        if y < -tol.psd_tol:
            raise DomainError(f"function must be nonnegative, got f({x!r}) = {y!r}")
        images.append(y)
    for (x0, y0), (x1, y1) in zip(zip(samples, images), zip(samples[1:], images[1:])):
        if y1 < y0 - 1e-12 * max(1.0, abs(y0)):
            raise DomainError(
                f"function is not nondecreasing: f({x0!r}) = {y0!r} > f({x1!r}) = {y1!r}"
            )
    rho = spectral_short_closed(A, S, tol)
    lhs = matrix_function(rho.value, lambda x: max(float(f(x)), 0.0), tol)
    fa = matrix_function(A, f, tol)
    fa.assert_psd(tol)
    rhs = spectral_short_closed(fa, S, tol)
    return float(np.abs(lhs.entries - rhs.value.entries).max())


def scalar_short_spectrum(A: SymMatrix, tol: Tolerances = DEFAULT_TOL) -> list[float]:
    """The set of scalar spectral shorted values over unit vectors.

    For a finite-dimensional matrix this is exactly the set of distinct
    eigenvalue levels, each certified by one of its eigenvectors.
    """
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    return [float(r) for r in d.level_values]


def _unit_vector(xi, tol: Tolerances) -> np.ndarray:
    v = np.asarray(xi, dtype=float).reshape(-1)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise DomainError("xi must be a nonzero vector")
    if abs(nrm - 1.0) > max(tol.orth_tol, 1e-9):
        raise DomainError(f"xi must be a unit vector, got norm {nrm!r}")
    return v / nrm
