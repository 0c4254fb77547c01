"""Symmetric matrices and partial sums of their smallest eigenvalues.

The central quantity is ``smallest_eigen_sum(M, k)``: the sum of the k
smallest eigenvalues of a real symmetric matrix.  Applied to Hessians it is a
degenerate elliptic operator; it is monotone under the semidefinite order,
reduces to the trace at k = dim, and ignores rank-one pushes along a top
eigenvector as long as k < dim.

Eigenvalues are computed by cyclic Jacobi rotations, chosen for determinism
and because the matrices here are tiny.  All types are frozen dataclasses and
every function is pure, so instances are safe to share across threads.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

#: A Jacobi pass is converged once the off-diagonal Frobenius norm falls below
#: this fraction of the Frobenius norm of the input.
JACOBI_TOL = 1e-13

#: Base absolute tolerance for comparing derived values; see :func:`match_tol`.
MATCH_TOL = 1e-10

_MAX_SWEEPS = 64


class MatrixInputError(ValueError):
    """Raised for malformed matrix data or out-of-range operator indices."""


@dataclass(frozen=True)
class SymmetricMatrix:
    """N x N real symmetric matrix stored as its row-major upper triangle."""

    dim: int
    upper: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise MatrixInputError(f"dim must be at least 1, got {self.dim}")
        expected = self.dim * (self.dim + 1) // 2
        if len(self.upper) != expected:
            raise MatrixInputError(
                f"upper triangle of a {self.dim}x{self.dim} matrix needs "
                f"{expected} entries, got {len(self.upper)}"
            )
        if not all(math.isfinite(x) for x in self.upper):
            raise MatrixInputError("matrix entries must be finite")

    @classmethod
    def from_dense(cls, a) -> SymmetricMatrix:
        """Build from a dense square array, reading only the upper triangle."""
        a = np.asarray(a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise MatrixInputError(f"expected a square matrix, got shape {a.shape}")
        n = a.shape[0]
        iu = np.triu_indices(n)
        return cls(n, tuple(float(x) for x in a[iu]))

    @classmethod
    def diagonal(cls, values) -> SymmetricMatrix:
        return cls.from_dense(np.diag(np.asarray(values, dtype=float)))

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.dim, self.dim))
        iu = np.triu_indices(self.dim)
        a[iu] = self.upper
        a.T[iu] = self.upper
        return a

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.to_dense()))

    def to_json(self) -> str:
        return json.dumps({"dim": self.dim, "upper": list(self.upper)})

    @classmethod
    def from_json(cls, text: str) -> SymmetricMatrix:
        data = json.loads(text)
        return cls(int(data["dim"]), tuple(float(x) for x in data["upper"]))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(b < a for a, b in zip(self.values, self.values[1:])):
            raise MatrixInputError("spectrum values must be ascending")

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


def match_tol(m: SymmetricMatrix) -> float:
    """Absolute comparison tolerance for quantities derived from ``m``."""
    return MATCH_TOL * (1.0 + m.frobenius())


def _jacobi(a: np.ndarray, want_vectors: bool):
    """Run cyclic Jacobi sweeps in place on a dense copy.

    Returns the unsorted diagonal and, when requested, the accumulated
    rotation whose columns are the matching eigenvectors.
    """
    n = a.shape[0]
    a = a.copy()
    vec = np.eye(n) if want_vectors else None
    # The Frobenius norm is rotation invariant, so the goal is fixed up front.
    goal = JACOBI_TOL * float(np.linalg.norm(a))
    # Summed directly over off-diagonal entries: the subtraction trick
    # trace(A*A) - sum(diag^2) cancels catastrophically near convergence.
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(_MAX_SWEEPS):
        if math.sqrt(float(np.sum(a[off_mask] ** 2))) <= goal:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                num = a[q, q] - a[p, p]
                if abs(num) > 2.0 * abs(apq) * 1e300:
                    # The rotation angle underflows; dropping the coupling
                    # perturbs the spectrum by less than 1e-300 * scale.
                    a[p, q] = a[q, p] = 0.0
                    continue
                tau = num / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                app, aqq = a[p, p], a[q, q]
                for i in range(n):
                    if i == p or i == q:
                        continue
                    aip, aiq = a[i, p], a[i, q]
                    a[i, p] = a[p, i] = aip * c - aiq * s
                    a[i, q] = a[q, i] = aiq * c + aip * s
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
                if want_vectors:
                    for i in range(n):
                        vip, viq = vec[i, p], vec[i, q]
                        vec[i, p] = vip * c - viq * s
                        vec[i, q] = viq * c + vip * s
    else:
        raise ArithmeticError("Jacobi iteration did not converge")
    return np.diag(a).copy(), vec


def eigenvalues_ascending(m: SymmetricMatrix) -> Spectrum:
    d, _ = _jacobi(m.to_dense(), want_vectors=False)
    d.sort()
    return Spectrum(tuple(float(x) for x in d))


def eigen_decomposition(m: SymmetricMatrix) -> tuple[Spectrum, np.ndarray]:
    """All eigenpairs, ascending; tied values keep the rotation-produced order."""
    d, vec = _jacobi(m.to_dense(), want_vectors=True)
    order = np.argsort(d, kind="stable")
    return Spectrum(tuple(float(x) for x in d[order])), vec[:, order]


def smallest_eigen_sum(m: SymmetricMatrix, k: int) -> float:
    """Sum of the k smallest eigenvalues of ``m`` (the trace when k = dim)."""
    if not 1 <= k <= m.dim:
        raise MatrixInputError(f"k must lie in [1, {m.dim}], got {k}")
    values = eigenvalues_ascending(m).values
    return float(sum(values[:k]))


def add_rank_one_top(m: SymmetricMatrix, t: float) -> SymmetricMatrix:
    """Add ``t`` times the outer square of a top eigenvector of ``m``.

    For t >= 0 this raises the largest eigenvalue by t and leaves the rest of
    the spectrum alone, so sums over the k < dim smallest eigenvalues are
    unchanged.  Among tied top eigenvalues the rotation output with the lowest
    column index is used, which keeps the result deterministic.
    """
    if not t >= 0.0:
        raise MatrixInputError(f"t must be nonnegative, got {t}")
    d, vec = _jacobi(m.to_dense(), want_vectors=True)
    top = int(np.flatnonzero(d == d.max())[0])
    v = vec[:, top]
    return SymmetricMatrix.from_dense(m.to_dense() + t * np.outer(v, v))
