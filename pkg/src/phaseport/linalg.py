"""Dense complex linear-algebra kernel.

Kronecker products, column-stacking vectorization, Hermitian
eigendecomposition, SVD-based numerical rank, and orthonormal Hermitian
operator bases.  Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, NotHermitian

__all__ = [
    "RankTolerance",
    "HermitianBasis",
    "kron",
    "vec",
    "unvec",
    "hs_inner",
    "herm_eig",
    "numerical_rank",
    "gell_mann_basis",
]


@dataclass(frozen=True)
class RankTolerance:
    """Cutoff policy for numerical rank decisions.

    A singular value counts toward the rank when it exceeds
    ``max(absolute_floor, relative_factor * sigma_max)``.  When
    ``relative_factor`` is None, ``max(rows, cols) * machine_eps`` of the
    matrix at hand is used.
    """

    absolute_floor: float = 1e-10
    relative_factor: float | None = None

    def __post_init__(self):
        if self.absolute_floor <= 0:
            raise DomainError("absolute_floor must be strictly positive")
        if self.relative_factor is not None and self.relative_factor <= 0:
            raise DomainError("relative_factor must be strictly positive")

    def cutoff(self, shape: tuple[int, int], sigma_max: float) -> float:
        rel = self.relative_factor
        if rel is None:
            rel = max(shape) * np.finfo(np.float64).eps
        return max(self.absolute_floor, rel * sigma_max)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with entry ((i,k),(j,l)) = a[i,j] * b[k,l]."""
    return np.kron(np.asarray(a), np.asarray(b))


def vec(x: np.ndarray) -> np.ndarray:
    """Column-stacking vectorization: entry x[a, b] lands at index b*rows + a.

    With this convention vec(A X B) = kron(B.T, A) @ vec(X).
    """
    return np.asarray(x).flatten(order="F")


def unvec(v: np.ndarray, rows: int, cols: int | None = None) -> np.ndarray:
    """Inverse of :func:`vec` for a rows x cols matrix."""
    if cols is None:
        cols = rows
    return np.asarray(v).reshape((rows, cols), order="F")


def hs_inner(x: np.ndarray, y: np.ndarray) -> complex:
    """Hilbert-Schmidt inner product <X, Y> = Tr(Y* X)."""
    return complex(np.trace(y.conj().T @ x))


def herm_eig(h: np.ndarray, atol: float = 1e-8) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    The input is symmetrized as (h + h*)/2 before factorization; inputs
    further than ``atol`` (entrywise) from Hermitian are rejected.

    Returns
    -------
    (eigenvalues, eigenvectors)
        Eigenvalues ascending; eigenvectors as columns, so that
        ``h @ V[:, k] == w[k] * V[:, k]``.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {h.shape}")
    defect = np.abs(h - h.conj().T).max() if h.size else 0.0
    if defect >= atol:
        raise NotHermitian(f"matrix is {defect:.3e} from Hermitian (tolerance {atol:.1e})")
    w, v = np.linalg.eigh((h + h.conj().T) / 2)
    return w, v


def numerical_rank(m: np.ndarray, tol: RankTolerance | None = None) -> int:
    """Count of singular values above the :class:`RankTolerance` cutoff."""
    m = np.asarray(m, dtype=np.complex128)
    if m.size == 0:
        return 0
    tol = tol or RankTolerance()
    s = np.linalg.svd(m, compute_uv=False)
    return int(np.count_nonzero(s > tol.cutoff(m.shape, float(s[0]))))


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal basis of Hermitian d x d operators.

    Element 0 is I/sqrt(d); elements 1..d^2-1 are traceless.  Orthonormal
    under the Hilbert-Schmidt inner product Tr(Y* X).
    """

    dim: int
    elements: tuple[np.ndarray, ...]

    def __post_init__(self):
        d = self.dim
        if len(self.elements) != d * d:
            raise DomainError(f"expected {d * d} basis elements, got {len(self.elements)}")
        for k, e in enumerate(self.elements):
            if np.abs(e - e.conj().T).max() >= 1e-12:
                raise NotHermitian(f"basis element {k} is not Hermitian")
            if k >= 1 and abs(np.trace(e)) >= 1e-12:
                raise DomainError(f"basis element {k} is not traceless")
        gram = np.array(
            [[hs_inner(a, b) for a in self.elements] for b in self.elements]
        )
        if np.abs(gram - np.eye(d * d)).max() >= 1e-10:
            raise DomainError("basis elements are not orthonormal")

    @property
    def traceless(self) -> tuple[np.ndarray, ...]:
        """The d^2 - 1 traceless elements (basis of the traceless sector)."""
        return self.elements[1:]


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.complex128)
    a.setflags(write=False)
    return a


@lru_cache(maxsize=64)
def gell_mann_basis(d: int) -> HermitianBasis:
    """Generalized Gell-Mann basis of Hermitian d x d operators.

    Deterministic ordering: I/sqrt(d) first, then symmetric pair elements
    (E_ab + E_ba)/sqrt(2) for a < b, then antisymmetric elements
    (-i E_ab + i E_ba)/sqrt(2) for a < b, then the d-1 diagonal traceless
    elements sqrt(1/(k(k+1))) (sum_{j<=k} E_jj - k E_{k+1,k+1}).
    Pairs are enumerated lexicographically in (a, b).
    """
    if d < 1:
        raise DomainError("dimension must be >= 1")
    elements = [_readonly(np.eye(d) / np.sqrt(d))]
    for a in range(d):
        for b in range(a + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[a, b] = 1 / np.sqrt(2)
            m[b, a] = 1 / np.sqrt(2)
            elements.append(_readonly(m))
    for a in range(d):
        for b in range(a + 1, d):
            m = np.zeros((d, d), dtype=np.complex128)
            m[a, b] = -1j / np.sqrt(2)
            m[b, a] = 1j / np.sqrt(2)
            elements.append(_readonly(m))
    for k in range(1, d):
        diag = np.zeros(d, dtype=np.complex128)
        diag[:k] = 1
        diag[k] = -k
        elements.append(_readonly(np.diag(diag) * np.sqrt(1 / (k * (k + 1)))))
    return HermitianBasis(dim=d, elements=tuple(elements))
