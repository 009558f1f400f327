"""Dense linear algebra used by the network code.

Matrices are plain ``float64`` numpy arrays. The only nontrivial routine is
:func:`solve_ridge`, which solves the output-layer least-squares problem with
the bias column folded into the design matrix.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


@dataclass(frozen=True)
class RidgeSolution:
    """Output layer fitted by :func:`solve_ridge`.

    ``weights`` has shape ``(K, O)`` so that predictions are
    ``A @ weights - bias``.
    """

    weights: np.ndarray
    bias: np.ndarray
    residual_norm: float


def as_matrix(a, name: str = "matrix", *, check_finite: bool = True) -> np.ndarray:
    """Convert ``a`` to a 2-D float64 array, promoting vectors to columns."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if check_finite and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, "A", check_finite=False)
    b = as_matrix(b, "B", check_finite=False)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"inner dimensions differ: A is {a.shape}, B is {b.shape}")
    return a @ b


def row_norms(a: np.ndarray, ord: str = "l2") -> np.ndarray:
    """Row-wise ``l2`` or ``linf`` norms."""
    if ord == "l2":
        return np.sqrt(np.einsum("ij,ij->i", a, a))
    if ord == "linf":
        return np.max(np.abs(a), axis=1) if a.shape[1] else np.zeros(a.shape[0])
    raise ValueError(f"unknown norm {ord!r}; expected 'l2' or 'linf'")


def solve_ridge(A, B, lam: float = 0.0, *, fit_bias: bool = True) -> RidgeSolution:
    """Minimise ``||[A | 1] theta - B||_F^2 + lam * ||theta||_F^2``.

    The intercept row of ``theta`` is returned negated as ``bias`` so that the
    fitted map is ``A @ weights - bias``. With ``lam == 0`` the minimum-norm
    solution is computed from an SVD (rank-deficient designs are fine). With
    ``lam > 0`` the thin SVD ``U S V^T`` of the design gives
    ``theta = V diag(s / (s^2 + lam)) U^T B``; this never forms ``A.T @ A`` and
    stays cheap when the design is much wider than it is tall.

    ``fit_bias=False`` drops the ones column; ``bias`` is then all zeros.
    """
    A = as_matrix(A, "design matrix")
    B = as_matrix(B, "targets")
    if A.shape[0] != B.shape[0]:
        raise ValueError(f"row counts differ: design {A.shape}, targets {B.shape}")
    if A.shape[0] < 1:
        raise ValueError("need at least one row")
    if not np.isfinite(lam) or lam < 0:
        raise ValueError(f"ridge lambda must be finite and >= 0, got {lam}")

    design = np.hstack([A, np.ones((A.shape[0], 1))]) if fit_bias else A
    if lam == 0:
        theta = scipy.linalg.lstsq(design, B, lapack_driver="gelsd", check_finite=False)[0]
    else:
        U, s, Vt = scipy.linalg.svd(design, full_matrices=False, check_finite=False,
                                    lapack_driver="gesdd")
        theta = Vt.T @ ((s / (s * s + lam))[:, None] * (U.T @ B))

    residual = design @ theta - B
    if fit_bias:
        weights, bias = theta[:-1], -theta[-1]
    else:
        weights, bias = theta, np.zeros(B.shape[1])
    return RidgeSolution(
        weights=np.ascontiguousarray(weights),
        bias=np.ascontiguousarray(bias),
        residual_norm=float(np.linalg.norm(residual)),
    )
