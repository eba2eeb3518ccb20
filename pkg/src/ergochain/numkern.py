"""Deterministic numerical kernels: dense symmetric eigensolver, seeded
Lanczos ground-state solver, and Schmidt coefficients via SVD.

All entry points fix the gauge freedom LAPACK leaves open, so repeated runs
(and runs on different BLAS builds, up to roundoff) produce identical output:

* every eigenvector is scaled so its first component above ``1e-12`` in
  magnitude is positive;
* within a numerically degenerate eigenvalue cluster, vectors are ordered by
  the index of their largest-magnitude component.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, InputError

_SIGN_TOL = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues in ascending order with orthonormal column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class LinearOperator:
    """Matrix-free symmetric operator: ``apply`` maps v to A v."""

    dim: int
    apply: Callable[[np.ndarray], np.ndarray]


def fix_gauge(values: np.ndarray, vectors: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Apply the deterministic sign/ordering convention to an eigensystem.

    ``values`` must already be ascending (as returned by LAPACK).  Vectors in
    a degenerate cluster (spacing below ``1e-12 * max(1, |values|))``) are
    reordered by dominant-component index; then every vector has the sign of
    its first non-negligible component forced positive.
    """
    values = np.asarray(values, dtype=float)
    vectors = np.array(vectors, dtype=float)
    n = values.size
    if n == 0:
        return values, vectors
    tol = 1e-12 * max(1.0, float(np.abs(values).max()))
    # Reorder inside degenerate clusters.
    start = 0
    order = np.arange(n)
    for i in range(1, n + 1):
        if i == n or values[i] - values[i - 1] > tol:
            if i - start > 1:
                block = order[start:i]
                dominant = np.argmax(np.abs(vectors[:, block]), axis=0)
                order[start:i] = block[np.argsort(dominant, kind="stable")]
            start = i
    vectors = vectors[:, order]
    # Sign convention.
    for k in range(n):
        col = vectors[:, k]
        nz = np.nonzero(np.abs(col) > _SIGN_TOL)[0]
        if nz.size and col[nz[0]] < 0.0:
            vectors[:, k] = -col
    return values, vectors


def fix_vector_sign(v: np.ndarray) -> np.ndarray:
    """Return ``v`` or ``-v`` so its first component above 1e-12 is positive."""
    nz = np.nonzero(np.abs(v) > _SIGN_TOL)[0]
    if nz.size and v[nz[0]] < 0.0:
        return -v
    return v


def eigh(matrix: np.ndarray) -> EigenSystem:
    """Full decomposition of a real symmetric matrix with fixed gauge.

    Raises InputError for non-square, non-finite, or (beyond roundoff)
    non-symmetric input.  Roundoff-level asymmetry from upstream matrix
    products is symmetrized away.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InputError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InputError("matrix entries must be finite")
    asym = float(np.abs(a - a.T).max())
    if asym > 1e-12 * max(1.0, float(np.abs(a).max())):
        raise InputError(f"matrix is not symmetric (max asymmetry {asym:.3e})")
    if asym:
        a = 0.5 * (a + a.T)
    values, vectors = np.linalg.eigh(a)
    values, vectors = fix_gauge(values, vectors)
    return EigenSystem(values=values, vectors=vectors)


def lowest_pair(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two lowest eigenvalues and the (sign-fixed) ground eigenvector.

    Uses the LAPACK subset driver; cheaper than :func:`eigh` when only the
    ground state and the gap are needed.  Returns ``(values[:2], vector)``;
    for a 1x1 matrix the second value is ``nan``.
    """
    a = np.asarray(matrix, dtype=float)
    if a.shape[0] == 1:
        return np.array([float(a[0, 0]), np.nan]), np.ones(1)
    hi = min(1, a.shape[0] - 1)
    values, vectors = scipy.linalg.eigh(a, subset_by_index=(0, hi))
    return values, fix_vector_sign(vectors[:, 0].copy())


def lanczos_ground(op: LinearOperator, seed: int = 42, tol: float = 1e-12,
                   max_iter: int = 600) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of a symmetric operator by Lanczos iteration.

    Full reorthogonalization against the stored Krylov basis keeps the
    tridiagonal projection faithful.  The start vector is drawn from
    ``numpy.random.default_rng(seed)`` so results are reproducible.
    Convergence is declared when the residual bound ``|beta_k * s_k|``
    (last component of the Ritz vector in the Krylov basis) drops below
    ``tol * max(1, |theta|)``.  Raises ConvergenceError with the best
    estimate attached if ``max_iter`` steps are not enough.
    """
    n = op.dim
    if n < 1:
        raise InputError(f"operator dimension must be positive, got {n}")
    if n == 1:
        e = float(op.apply(np.ones(1))[0])
        return e, np.ones(1)

    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)

    steps = min(max_iter, n)
    cap = min(steps, 32)
    basis = np.empty((cap, n))
    basis[0] = v
    alphas: list[float] = []
    betas: list[float] = []
    theta = np.nan
    bound = np.inf

    w = np.asarray(op.apply(v), dtype=float)
    if w.shape != (n,) or not np.all(np.isfinite(w)):
        raise InputError("operator.apply must return a finite vector of matching length")

    for k in range(steps):
        alphas.append(float(basis[k] @ w))
        w = w - alphas[-1] * basis[k]
        if k > 0:
            w = w - betas[-1] * basis[k - 1]
        # Two-pass full reorthogonalization.
        for _ in range(2):
            w -= basis[: k + 1].T @ (basis[: k + 1] @ w)
        beta = float(np.linalg.norm(w))

        evals, evecs = scipy.linalg.eigh_tridiagonal(alphas, betas)
        theta = float(evals[0])
        bound = abs(beta * evecs[-1, 0])
        if bound <= tol * max(1.0, abs(theta)) or k + 1 == n:
            vec = basis[: k + 1].T @ evecs[:, 0]
            vec /= np.linalg.norm(vec)
            return theta, fix_vector_sign(vec)

        betas.append(beta)
        if k + 1 == steps:  # iteration budget spent; report non-convergence
            break
        if k + 1 == cap:  # grow the stored basis geometrically
            cap = min(steps, 2 * cap)
            grown = np.empty((cap, n))
            grown[: k + 1] = basis[: k + 1]
            basis = grown
        basis[k + 1] = w / beta
        w = np.asarray(op.apply(basis[k + 1]), dtype=float)

    raise ConvergenceError(
        f"Lanczos did not converge in {steps} iterations "
        f"(best estimate {theta:.12g}, residual bound {bound:.3e})",
        energy=theta, residual=bound)


def schmidt_values(psi: np.ndarray, dim_a: int, dim_b: int,
                   cutoff: float = 1e-14) -> np.ndarray:
    """Squared Schmidt coefficients of a unit vector across a bipartition.

    ``psi`` is reshaped to ``(dim_a, dim_b)`` (subsystem A on the slow index)
    and singular-value decomposed.  Returns probabilities in descending
    order with values at or below ``cutoff`` discarded.
    """
    v = np.asarray(psi)
    if v.ndim != 1 or v.size != dim_a * dim_b:
        raise InputError(
            f"state length {v.size} does not match bipartition {dim_a}x{dim_b}")
    nrm = float(np.linalg.norm(v))
    if abs(nrm - 1.0) > 1e-12:
        raise InputError(f"state must be normalized, got |psi| = {nrm:.12g}")
    s = np.linalg.svd(v.reshape(dim_a, dim_b), compute_uv=False)
    p = s * s
    return p[p > cutoff]
