"""Dense complex matrix substrate shared by all modules.

Operators are plain ``numpy`` complex128 square arrays; this module adds the
shape and Hermiticity guards, the handful of structural constructions
(Kronecker product, direct sum), eigenvalue helpers for positivity checks,
and the JSON wire format used by every other module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_operator",
    "identity",
    "zero_matrix",
    "add",
    "sub",
    "scale",
    "matmul",
    "kron",
    "direct_sum",
    "max_abs",
    "is_hermitian",
    "hermitian_eigenvalues",
    "is_psd",
    "matrix_to_json",
    "matrix_from_json",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used across the package.

    eq_tol bounds entrywise equality residuals, psd_tol bounds how negative
    an eigenvalue may be while still counting as nonnegative, and feas_tol
    bounds feasibility residuals in the numerical oracle.
    """

    eq_tol: float = 1e-10
    psd_tol: float = 1e-9
    feas_tol: float = 1e-7

    def __post_init__(self) -> None:
        for name in ("eq_tol", "psd_tol", "feas_tol"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")


DEFAULT_TOL = Tolerance()


def as_operator(m) -> np.ndarray:
    """Coerce ``m`` to a square complex128 matrix with finite entries."""
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a.real).all() or not np.isfinite(a.imag).all():
        raise ValueError("matrix entries must be finite")
    return a


def identity(dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return np.eye(dim, dtype=np.complex128)


def zero_matrix(dim: int) -> np.ndarray:
    if dim < 1:
        raise ValueError(f"dimension must be positive, got {dim}")
    return np.zeros((dim, dim), dtype=np.complex128)


def _require_same_dim(a: np.ndarray, b: np.ndarray, op: str) -> None:
    if a.shape != b.shape:
        raise ValueError(f"{op}: dimension mismatch {a.shape[0]} vs {b.shape[0]}")


def add(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _require_same_dim(a, b, "add")
    return a + b


def sub(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _require_same_dim(a, b, "sub")
    return a - b


def scale(c, m) -> np.ndarray:
    return complex(c) * as_operator(m)


def matmul(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _require_same_dim(a, b, "matmul")
    return a @ b


def kron(a, b) -> np.ndarray:
    """Kronecker product; output dimension is the product of the inputs'."""
    return np.kron(as_operator(a), as_operator(b))


def direct_sum(blocks) -> np.ndarray:
    """Block-diagonal matrix assembled from ``blocks``; off-diagonal blocks zero."""
    blocks = [as_operator(b) for b in blocks]
    if not blocks:
        raise ValueError("direct_sum requires at least one block")
    dim = sum(b.shape[0] for b in blocks)
    out = np.zeros((dim, dim), dtype=np.complex128)
    offset = 0
    for b in blocks:
        d = b.shape[0]
        out[offset : offset + d, offset : offset + d] = b
        offset += d
    return out


def max_abs(m) -> float:
    """Largest entrywise magnitude; the equality residual used everywhere."""
    return float(np.max(np.abs(np.asarray(m))))


def is_hermitian(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_operator(m)
    return max_abs(a - a.conj().T) <= tol.eq_tol


def _require_hermitian(a: np.ndarray, tol: Tolerance, op: str) -> None:
    residual = max_abs(a - a.conj().T)
    if residual > tol.eq_tol:
        raise ValueError(f"{op}: matrix is not Hermitian (residual {residual:.3e})")


def hermitian_eigenvalues(m, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Real spectrum of a Hermitian matrix, ascending. Rejects non-Hermitian input."""
    a = as_operator(m)
    _require_hermitian(a, tol, "hermitian_eigenvalues")
    return np.linalg.eigvalsh(a)


def is_psd(m, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff the (Hermitian) matrix has no eigenvalue below -psd_tol."""
    eigenvalues = hermitian_eigenvalues(m, tol)
    return bool(eigenvalues[0] >= -tol.psd_tol)


def matrix_to_json(m) -> dict:
    """Encode as ``{"dim": d, "entries": [[re, im], ...]}``, row-major."""
    a = as_operator(m)
    entries = [[float(z.real), float(z.imag)] for z in a.ravel()]
    return {"dim": int(a.shape[0]), "entries": entries}


def matrix_from_json(doc) -> np.ndarray:
    """Decode the matrix wire format, preserving values to full double precision."""
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise ValueError("matrix document must be an object with 'dim' and 'entries'")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise ValueError(f"matrix dim must be a positive integer, got {dim!r}")
    entries = doc["entries"]
    if not isinstance(entries, list) or len(entries) != dim * dim:
        raise ValueError(f"matrix entries must hold dim^2 = {dim * dim} pairs")
    flat = np.empty(dim * dim, dtype=np.complex128)
    for i, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValueError(f"entry {i} is not an [re, im] pair")
        flat[i] = complex(float(pair[0]), float(pair[1]))
    return as_operator(flat.reshape(dim, dim))
