"""Vector complexity of a positive semidefinite matrix: the limit of
<A^n xi, xi>^(1/n), the top of the spectral support of xi under A.

Kept on the exponential scale so the value is always a nonnegative real (the
log scale would need -inf for vectors with no positive spectral support);
the log form is exposed as KolmogorovResult.log_value.

Two routes:

- kolmogorov_closed: the largest distinct level of A whose half-line
  spectral projection still sees a component of xi.
- kolmogorov_power: honest power iteration.  Magnitudes are tracked as
  accumulated logs with per-step renormalization (the raw inner products
  overflow for spectral norm above one near n = 700).  The trace records the
  nondecreasing root sequence <A^n xi, xi>^(1/n); the returned value is the
  successive-quotient estimate <A^n xi, xi> / <A^{n-1} xi, xi>, which
  converges geometrically in the level gap where the root sequence only
  converges like 1/n.

kolmogorov_duality checks the reciprocal relation with the scalar spectral
shorted value of the pseudo-inverse at the range-projected vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    DomainError,
    Subspace,
    SymMatrix,
    Tolerances,
    eig_sym,
    pseudo_inverse,
)
from .spectral_shorted import ConvergenceTrace, TraceStep, spectral_short_vector

__all__ = ["KolmogorovResult", "kolmogorov_closed", "kolmogorov_power", "kolmogorov_duality"]


@dataclass(frozen=True)
class KolmogorovResult:
    value: float
    method: str
    trace: ConvergenceTrace | None = None

    @property
    def log_value(self) -> float:
        """Log-scale complexity; -inf marks a vector with no positive
        spectral support."""
        return -math.inf if self.value == 0.0 else math.log(self.value)


def _direction(xi) -> np.ndarray:
    v = np.asarray(xi, dtype=float).reshape(-1)
    nrm = float(np.linalg.norm(v))
    if nrm == 0.0:
        raise DomainError("xi must be a nonzero vector")
    return v / nrm


def kolmogorov_closed(
    A: SymMatrix, xi, tol: Tolerances = DEFAULT_TOL
) -> KolmogorovResult:
    """Largest level of A whose half-line projection keeps a component of xi
    (0 when no positive level does).  Invariant under scaling of xi."""
    v = _direction(xi)
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    coeffs = d.vectors.T @ v
    above = 0.0  # squared norm of the component at or above the candidate level
    value = 0.0
    for group, rep in zip(reversed(d.levels), reversed(d.level_values)):
        above += float(np.sum(coeffs[list(group)] ** 2))
        if rep > cut and math.sqrt(above) > tol.orth_tol:
            value = float(rep)
            break
    return KolmogorovResult(value=value, method="closed_form")


def kolmogorov_power(
    A: SymMatrix, xi, n_max: int = 200, tol: Tolerances = DEFAULT_TOL
) -> KolmogorovResult:
    """Power-iteration route; see the module docstring for the estimator."""
    v = _direction(xi)
    A.assert_psd(tol)
    scale = A.spectral_norm(tol)
    floor = tol.rank_abs(scale)
    m = A.entries
    u = v
    log_norm = 0.0  # log ||A^n xi|| for the current n
    prev_inner = 1.0  # <u_{n-1}, xi> with u the renormalized iterate
    prev_s: float | None = None
    prev_r: float | None = None
    steps: list[TraceStep] = []
    value = 0.0
    converged = False
    reason = "max_iterations"
    # A stabilized quotient may still sit on a plateau of a lower level when
    # the top supported coefficient is tiny, so a stability candidate is only
    # accepted after surviving to about twice the step where it appeared.
    candidate: tuple[float, int] | None = None
    for n in range(1, n_max + 1):
        w = m @ u
        growth = float(np.linalg.norm(w))
        if growth <= floor:
            # xi has no positive spectral support; every power pairing is 0.
            value = 0.0
            converged = True
            reason = "exact"
            break
        u = w / growth
        log_norm += math.log(growth)
        inner = float(u @ v)
        if inner <= 0.0:  # pragma: no cover - defensive: pairing is nonnegative
            value = 0.0
            converged = True
            reason = "exact"
            break
        s_n = math.exp((log_norm + math.log(inner)) / n)
        r_n = growth * inner / prev_inner
        delta = None if prev_s is None else s_n - prev_s
        steps.append(TraceStep(n, s_n, delta))
        band = tol.conv_tol * max(1.0, r_n)
        if candidate is not None and abs(r_n - candidate[0]) > band:
            candidate = None  # plateau escaped; keep iterating
        if (
            candidate is None
            and prev_r is not None
            and abs(r_n - prev_r) <= band
            and r_n >= s_n - band  # the root sequence bounds the limit from below
        ):
            candidate = (r_n, n)
        if candidate is not None and n >= min(n_max, 2 * candidate[1] + 10):
            value = candidate[0]
            converged = True
            reason = "converged"
            break
        prev_s = s_n
        prev_r = r_n
        prev_inner = inner
        value = r_n
    trace = ConvergenceTrace(
        iterates=tuple(steps),
        converged=converged,
        final_delta=0.0 if not steps or steps[-1].delta is None else abs(steps[-1].delta),
        stop_reason=reason,
    )
    return KolmogorovResult(value=value, method="power", trace=trace)


def kolmogorov_duality(
    A: SymMatrix, xi, tol: Tolerances = DEFAULT_TOL
) -> tuple[float, float]:
    """Return (complexity of xi, reciprocal of the scalar spectral shorted
    value of pinv(A) at the range-projected direction).

    The two agree for matrices (which always have closed range); when the
    range projection of xi vanishes both are 0 by convention.
    """
    v = _direction(xi)
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    keep = np.zeros(d.n, dtype=bool)
    for group, rep in zip(d.levels, d.level_values):
        if rep > cut:
            keep[list(group)] = True
    if not keep.any():
        return 0.0, 0.0
    range_plus = Subspace(d.vectors[:, keep])
    projected = range_plus.projection() @ v
    pnorm = float(np.linalg.norm(projected))
    if pnorm <= tol.orth_tol:
        return 0.0, 0.0
    k_value = kolmogorov_closed(A, v, tol).value
    rho = spectral_short_vector(pseudo_inverse(A, tol), projected / pnorm, tol)
    dual = 0.0 if rho == 0.0 else 1.0 / rho
    return k_value, dual
