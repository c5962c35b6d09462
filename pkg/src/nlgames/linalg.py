"""Dense Hermitian eigendecomposition by cyclic Jacobi rotations.

Matrices handled here are small (strategies on a few qubits, certificate
blocks of size |S|+|T|), so a robust rotation method is preferred over speed.
Each rotation first removes the phase of the pivot entry with a diagonal
unitary and then applies a real Givens rotation, which together form a
unitary 2x2 block annihilating the pair (p, q).
"""

from __future__ import annotations

import numpy as np

from .config import tolerances
from .errors import NonHermitian


def hermitian_residual(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a - a.conj().T))) if a.size else 0.0


def jacobi_eigh(a, tol=None, max_sweeps=100):
    """Eigenvalues (ascending) and unitary eigenvector matrix of Hermitian ``a``.

    Converges when the off-diagonal Frobenius norm drops below
    ``tol * ||a||_F``.  Real symmetric input stays real throughout.
    """
    a = np.array(a, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if not np.iscomplexobj(a):
        a = a.astype(float)
    if hermitian_residual(a) > tolerances().measurement * max(1.0, np.abs(a).max(initial=0.0)):
        raise NonHermitian(f"matrix is not Hermitian (residual {hermitian_residual(a):.3e})")
    a = (a + a.conj().T) / 2
    if tol is None:
        tol = tolerances().jacobi
    v = np.eye(n, dtype=a.dtype)
    scale = np.linalg.norm(a)
    if n < 2 or scale == 0.0:
        w = np.real(np.diag(a)).copy()
        order = np.argsort(w, kind="stable")
        return w[order], v[:, order]

    threshold = tol * scale
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                app, aqq = a[p, p].real, a[q, q].real
                theta = (aqq - app) / (2.0 * mag)
                t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                phase = np.conj(apq) / mag  # e^{-i phi}; equals +-1 for real input
                g = np.array([[c, s], [-s * phase, c * phase]], dtype=a.dtype)
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                a[p, q] = a[q, p] = 0.0
                v[:, cols] = v[:, cols] @ g
    w = np.real(np.diag(a)).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigvalsh(a, tol=None):
    return jacobi_eigh(a, tol=tol)[0]


def min_eigenvalue(a) -> float:
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(jacobi_eigvalsh(a)[0])


def is_projector(p, tol) -> bool:
    p = np.asarray(p)
    return hermitian_residual(p) <= tol and float(np.max(np.abs(p @ p - p))) <= tol
