"""Dense symmetric-matrix primitives.

Eigendecomposition with level clustering, spectral projections, functional
calculus, real matrix powers, Moore-Penrose pseudo-inverse, and the
projection-lattice operations (meet, image, complement) that the rest of the
package is built on.

All values are immutable after construction and every operation is a pure
function of its inputs, so everything here is safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Callable

import numpy as np

__all__ = [
    "DomainError",
    "DimensionMismatchError",
    "EigenConvergenceError",
    "Tolerances",
    "DEFAULT_TOL",
    "STRICT_TOL",
    "SymMatrix",
    "SpectralDecomposition",
    "Subspace",
    "eig_sym",
    "spectral_projection",
    "matrix_function",
    "matrix_power",
    "pseudo_inverse",
    "projection_meet",
    "image_subspace",
    "in_range",
]


class DomainError(ValueError):
    """Input lies outside an operation's mathematical domain."""


class DimensionMismatchError(ValueError):
    """Operands live in different ambient dimensions."""


class EigenConvergenceError(RuntimeError):
    """The eigensolver did not converge; carries the off-diagonal residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every operation.

    cluster_tol and rank_tol are relative (scaled by max(1, ||A||_2) and
    ||A||_2 respectively at the point of use); the others are absolute on
    quantities that are O(1) by construction (projection eigenvalues,
    orthonormality residuals, unit vectors).
    """

    cluster_tol: float = 1e-8
    rank_tol: float = 1e-10
    meet_tol: float = 1e-8
    conv_tol: float = 1e-9
    orth_tol: float = 1e-10
    sym_tol: float = 1e-8
    psd_tol: float = 1e-8

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) < 0:
                raise DomainError(f"tolerance {f.name} must be nonnegative")

    def cluster_abs(self, norm: float) -> float:
        return self.cluster_tol * max(1.0, norm)

    def rank_abs(self, norm: float) -> float:
        return self.rank_tol * norm


DEFAULT_TOL = Tolerances()
STRICT_TOL = Tolerances(
    cluster_tol=1e-10,
    rank_tol=1e-12,
    meet_tol=1e-10,
    conv_tol=1e-11,
    orth_tol=1e-12,
    sym_tol=1e-10,
    psd_tol=1e-10,
)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip column signs so each column's first nonzero entry is positive."""
    out = np.array(vectors)
    if out.size == 0:
        return out
    absv = np.abs(out)
    for j in range(out.shape[1]):
        col_max = absv[:, j].max()
        if col_max == 0.0:
            continue
        lead = int(np.argmax(absv[:, j] > 1e-8 * col_max))
        if out[lead, j] < 0:
            out[:, j] = -out[:, j]
    return out


def _cluster(eigenvalues: np.ndarray, tol_abs: float) -> tuple[tuple[int, ...], ...]:
    """Partition sorted eigenvalue indices into maximal groups whose members
    pairwise differ by at most tol_abs."""
    groups: list[tuple[int, ...]] = []
    current = [0]
    for i in range(1, len(eigenvalues)):
        if eigenvalues[i] - eigenvalues[current[0]] <= tol_abs:
            current.append(i)
        else:
            groups.append(tuple(current))
            current = [i]
    groups.append(tuple(current))
    return tuple(groups)


class SymMatrix:
    """Real symmetric n x n matrix, stored canonically symmetrized.

    The entry array is made read-only on construction.  Construction rejects
    inputs whose asymmetry exceeds sym_tol relative to the largest entry.
    Matrices built from a known eigendecomposition (matrix_function,
    matrix_power, pseudo_inverse) keep the exact eigenvalue list attached so
    downstream spectral logic never re-diagonalizes a powered matrix; this is
    what keeps extreme powers accurate per eigenvalue.
    """

    __slots__ = ("entries", "_eigens", "_decomps")

    def __init__(self, entries, tol: Tolerances = DEFAULT_TOL):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError(f"expected a square matrix, got shape {arr.shape}")
        if arr.size and not np.all(np.isfinite(arr)):
            raise DomainError("matrix entries must be finite")
        scale = max(1.0, float(np.abs(arr).max())) if arr.size else 1.0
        asym = float(np.abs(arr - arr.T).max()) if arr.size else 0.0
        if asym > tol.sym_tol * scale:
            raise DomainError(f"matrix is not symmetric: max asymmetry {asym:.3e}")
        arr = (arr + arr.T) / 2.0
        arr.setflags(write=False)
        self.entries = arr
        self._eigens: tuple[np.ndarray, np.ndarray] | None = None
        self._decomps: dict[float, "SpectralDecomposition"] = {}

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_eigens(cls, eigenvalues, vectors) -> "SymMatrix":
        """Build V diag(w) V^T and attach (w, V) as the exact decomposition."""
        w = np.asarray(eigenvalues, dtype=float)
        v = np.asarray(vectors, dtype=float)
        order = np.argsort(w, kind="stable")
        w = w[order]
        v = _fix_signs(v[:, order])
        entries = (v * w) @ v.T
        out = cls((entries + entries.T) / 2.0)
        w.setflags(write=False)
        v.setflags(write=False)
        out._eigens = (w, v)
        return out

    def spectral_norm(self, tol: Tolerances = DEFAULT_TOL) -> float:
        return eig_sym(self, tol).norm2

    def assert_psd(self, tol: Tolerances = DEFAULT_TOL) -> None:
        # Scaled by max(1, norm) so matrices that are zero up to rounding
        # (e.g. shorted operators of disjoint ranges) count as positive.
        d = eig_sym(self, tol)
        if d.lambda_min < -tol.psd_tol * max(1.0, d.norm2):
            raise DomainError(
                f"matrix is not positive semidefinite: eigenvalue {d.lambda_min:.6e}"
            )

    def __repr__(self) -> str:
        return f"SymMatrix(n={self.n})"


@dataclass(frozen=True)
class SpectralDecomposition:
    """Ascending eigenvalues, orthonormal eigenvector columns, and the
    clustering of indices into distinct numerical levels."""

    eigenvalues: np.ndarray
    vectors: np.ndarray
    levels: tuple[tuple[int, ...], ...]
    level_values: np.ndarray
    lambda_min: float
    lambda_max: float

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    @property
    def norm2(self) -> float:
        return max(abs(self.lambda_min), abs(self.lambda_max))

    def positive_levels(self, tol: Tolerances = DEFAULT_TOL) -> list[int]:
        """Indices (into levels) whose representative exceeds the rank cutoff."""
        cut = tol.rank_abs(self.norm2)
        return [i for i, v in enumerate(self.level_values) if v > cut]


def eig_sym(A: SymMatrix, tol: Tolerances = DEFAULT_TOL) -> SpectralDecomposition:
    """Symmetric eigendecomposition with deterministic sign convention and
    one-shot eigenvalue clustering.

    Clustering happens here, once; every downstream notion of "distinct
    eigenvalue" reuses the same partition.  Results are cached per matrix
    and clustering tolerance.
    """
    cached = A._decomps.get(tol.cluster_tol)
    if cached is not None:
        return cached
    if A._eigens is not None:
        w, v = A._eigens
    else:
        try:
            w, v = np.linalg.eigh(A.entries)
        except np.linalg.LinAlgError as exc:  # pragma: no cover - eigh is robust
            off = A.entries - np.diag(np.diag(A.entries))
            residual = float(np.abs(off).max()) if off.size else 0.0
            raise EigenConvergenceError(
                f"eigendecomposition failed: {exc}", residual
            ) from exc
        v = _fix_signs(v)
        w = np.array(w)
        w.setflags(write=False)
        v.setflags(write=False)
        A._eigens = (w, v)
    norm = max(abs(float(w[0])), abs(float(w[-1]))) if len(w) else 0.0
    groups = _cluster(w, tol.cluster_abs(norm))
    reps = np.array([float(np.mean(w[list(g)])) for g in groups])
    reps.setflags(write=False)
    decomp = SpectralDecomposition(
        eigenvalues=w,
        vectors=v,
        levels=groups,
        level_values=reps,
        lambda_min=float(w[0]),
        lambda_max=float(w[-1]),
    )
    A._decomps[tol.cluster_tol] = decomp
    return decomp


class Subspace:
    """Closed subspace of R^n carried as an orthonormal n x k basis.

    k may be zero (the zero subspace).  Construction validates orthonormality;
    use Subspace.span to orthonormalize an arbitrary spanning set.
    """

    __slots__ = ("basis",)

    def __init__(self, basis, tol: Tolerances = DEFAULT_TOL):
        b = np.array(basis, dtype=float)
        if b.ndim != 2:
            raise DomainError(f"basis must be a 2-d array, got shape {b.shape}")
        if b.shape[1] > b.shape[0]:
            raise DomainError(
                f"basis has {b.shape[1]} columns in dimension {b.shape[0]}"
            )
        if b.size:
            gram = b.T @ b
            resid = float(np.abs(gram - np.eye(b.shape[1])).max())
            if resid > max(tol.orth_tol, 1e-12):
                raise DomainError(
                    f"basis columns are not orthonormal (residual {resid:.3e}); "
                    "use Subspace.span to orthonormalize"
                )
        b.setflags(write=False)
        self.basis = b

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(np.zeros((n, 0)))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(np.eye(n))

    @classmethod
    def span(cls, vectors, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        """Orthonormal basis of the span of the given column vectors, with
        rank decided on the singular values."""
        m = np.asarray(vectors, dtype=float)
        if m.ndim == 1:
            m = m.reshape(-1, 1)
        if m.size == 0:
            return cls.zero(m.shape[0])
        u, s, _ = np.linalg.svd(m, full_matrices=False)
        cut = max(tol.rank_tol * float(s[0]), 0.0) if len(s) else 0.0
        keep = s > cut
        return cls(_fix_signs(u[:, keep]))

    def projection(self) -> np.ndarray:
        return self.basis @ self.basis.T

    def complement(self) -> "Subspace":
        """Orthogonal complement."""
        n, k = self.n, self.dim
        if k == 0:
            return Subspace.full(n)
        if k == n:
            return Subspace.zero(n)
        q, _ = np.linalg.qr(self.basis, mode="complete")
        return Subspace(_fix_signs(q[:, k:]))

    def containment_residual(self, other: "Subspace") -> float:
        """||(I - P_other) restricted to self||_2; 0 means self is inside other."""
        if self.n != other.n:
            raise DimensionMismatchError(
                f"ambient dimensions differ: {self.n} vs {other.n}"
            )
        if self.dim == 0:
            return 0.0
        rest = self.basis - other.basis @ (other.basis.T @ self.basis)
        if rest.size == 0:
            return 0.0
        return float(np.linalg.svd(rest, compute_uv=False)[0])

    def member_residual(self, xi: np.ndarray) -> float:
        """Distance of the normalized vector xi from this subspace."""
        v = np.asarray(xi, dtype=float).reshape(-1)
        nrm = float(np.linalg.norm(v))
        if nrm == 0.0:
            raise DomainError("zero vector has no direction")
        v = v / nrm
        return float(np.linalg.norm(v - self.basis @ (self.basis.T @ v)))

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, dim={self.dim})"


def in_range(Q: Subspace, xi: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> bool:
    """Membership test xi in R(Q), decided by ||(I - P_Q) xi|| <= orth_tol.

    Single definition shared by every range-membership decision in the
    package.
    """
    return Q.member_residual(xi) <= tol.orth_tol


def spectral_projection(
    D: SpectralDecomposition, lam: float, tol: Tolerances = DEFAULT_TOL
) -> Subspace:
    """Projection onto the span of eigenvectors with eigenvalue >= lam,
    up to the clustering tolerance.

    Whole levels are kept or dropped together, so the result is monotone in
    lam exactly (as index sets).
    """
    cut = lam - tol.cluster_abs(D.norm2)
    idx: list[int] = []
    for group, rep in zip(D.levels, D.level_values):
        if rep >= cut:
            idx.extend(group)
    if not idx:
        return Subspace.zero(D.n)
    return Subspace(D.vectors[:, idx])


def matrix_function(
    D: SpectralDecomposition | SymMatrix,
    f: Callable[[float], float],
    tol: Tolerances = DEFAULT_TOL,
) -> SymMatrix:
    """Apply f through the spectral theorem: V diag(f(level)) V^T.

    f is evaluated once per level, on the level representative, so all
    members of a cluster receive the same image.
    """
    if isinstance(D, SymMatrix):
        D = eig_sym(D, tol)
    values = np.empty(D.n)
    for group, rep in zip(D.levels, D.level_values):
        try:
            y = float(f(float(rep)))
        except (ValueError, ZeroDivisionError, OverflowError) as exc:
            raise DomainError(f"function undefined at eigenvalue {rep!r}: {exc}") from exc
        if not np.isfinite(y):
            raise DomainError(f"function not finite at eigenvalue {rep!r}")
        values[list(group)] = y
    return SymMatrix.from_eigens(values, D.vectors)


def matrix_power(
    A: SymMatrix, t: float, tol: Tolerances = DEFAULT_TOL
) -> SymMatrix:
    """A**t for t > 0 on a positive semidefinite matrix.

    Eigenvalues at or below the rank cutoff map to zero, so fractional powers
    of singular matrices stay meaningful.  Inverse powers go through
    pseudo_inverse.
    """
    if not t > 0:
        raise DomainError(f"exponent must be positive, got {t}")
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    values = np.empty(d.n)
    for group, rep in zip(d.levels, d.level_values):
        values[list(group)] = 0.0 if rep <= cut else float(rep) ** t
    return SymMatrix.from_eigens(values, d.vectors)


def pseudo_inverse(A: SymMatrix, tol: Tolerances = DEFAULT_TOL) -> SymMatrix:
    """Moore-Penrose pseudo-inverse of a positive semidefinite matrix:
    eigenvalues above the rank cutoff are inverted, the rest are zeroed."""
    A.assert_psd(tol)
    d = eig_sym(A, tol)
    cut = tol.rank_abs(d.norm2)
    values = np.empty(d.n)
    for group, rep in zip(d.levels, d.level_values):
        values[list(group)] = 0.0 if rep <= cut else 1.0 / float(rep)
    return SymMatrix.from_eigens(values, d.vectors)


def projection_meet(
    P: Subspace, Q: Subspace, tol: Tolerances = DEFAULT_TOL
) -> Subspace:
    """Orthogonal projection onto R(P) intersect R(Q).

    Computed as the eigenvalue-2 eigenspace of P + Q, which is deterministic
    and symmetric in its arguments (an eigenvalue of P + Q equals 2 exactly
    on the intersection).
    """
    if P.n != Q.n:
        raise DimensionMismatchError(f"ambient dimensions differ: {P.n} vs {Q.n}")
    if P.dim == 0 or Q.dim == 0:
        return Subspace.zero(P.n)
    w, v = np.linalg.eigh(P.projection() + Q.projection())
    keep = w >= 2.0 - tol.meet_tol
    if not np.any(keep):
        return Subspace.zero(P.n)
    return Subspace(_fix_signs(v[:, keep]))


def image_subspace(
    A: SymMatrix, S: Subspace, tol: Tolerances = DEFAULT_TOL
) -> Subspace:
    """Orthonormal basis of A(S); rank decided by rank_tol relative to
    ||A||_2 on the singular values of A times the basis of S."""
    if A.n != S.n:
        raise DimensionMismatchError(f"ambient dimensions differ: {A.n} vs {S.n}")
    if S.dim == 0:
        return Subspace.zero(A.n)
    g = A.entries @ S.basis
    u, s, _ = np.linalg.svd(g, full_matrices=False)
    cut = tol.rank_abs(A.spectral_norm(tol))
    keep = s > cut
    if not np.any(keep):
        return Subspace.zero(A.n)
    return Subspace(_fix_signs(u[:, keep]))
