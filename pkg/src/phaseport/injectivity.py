"""Quantitative injectivity indices for CP maps.

Differences of states are exactly the traceless Hermitian operators (up
to positive scale), so injectivity on states is controlled by the action
on that sector.  Expanding in orthonormal Hermitian bases turns the map
into a real matrix; its smallest singular value is the injectivity index,
its root-mean-square singular value the average index.  For qubit inputs
a positive index is equivalent to injectivity on pure states; in higher
dimension a numerical search over pure-state pairs supplements it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .channels import KrausFamily, PureState, apply
from .errors import DomainError, NotPOVM
from .linalg import HermitianBasis, RankTolerance, gell_mann_basis

__all__ = [
    "TransferMatrix",
    "InjectivityReport",
    "CollisionResult",
    "transfer_matrix",
    "cp_injectivity",
    "avg_injectivity",
    "op_norm_0to2",
    "kernel_h0",
    "pure_collision_search",
    "povm_injectivity",
    "injectivity_report",
]


@dataclass(frozen=True)
class TransferMatrix:
    """Real matrix of a CP map restricted to traceless Hermitian inputs.

    Entry (mu, i) is <G_mu, Phi(F_i)> over the full output basis {G_mu}
    (identity included) and the traceless input basis {F_i}, so the matrix
    is n^2 x (d^2 - 1) and |Phi(X)|_2 = |mat @ coords(X)|_2.
    """

    in_dim: int
    out_dim: int
    mat: np.ndarray
    basis_in: HermitianBasis
    basis_out: HermitianBasis


def transfer_matrix(
    fam: KrausFamily,
    basis_in: HermitianBasis | None = None,
    basis_out: HermitianBasis | None = None,
) -> TransferMatrix:
    """Expand the channel action in Hermitian operator bases.

    Bases default to the generalized Gell-Mann bases; custom orthonormal
    Hermitian bases may be supplied (the indices are basis-independent).
    """
    d, n = fam.in_dim, fam.out_dim
    if d < 2:
        raise DomainError("transfer matrix needs input dimension >= 2")
    basis_in = basis_in or gell_mann_basis(d)
    basis_out = basis_out or gell_mann_basis(n)
    if basis_in.dim != d or basis_out.dim != n:
        raise DomainError("basis dimensions do not match the family")
    cols = []
    for f in basis_in.traceless:
        image = apply(fam, f)
        col = np.array([np.trace(g.conj().T @ image) for g in basis_out.elements])
        if np.abs(col.imag).max() >= 1e-10:
            raise DomainError(
                "transfer entries have imaginary parts; the map does not "
                "preserve Hermiticity"
            )
        cols.append(col.real)
    mat = np.column_stack(cols) if cols else np.zeros((n * n, 0))
    return TransferMatrix(
        in_dim=d, out_dim=n, mat=mat, basis_in=basis_in, basis_out=basis_out
    )


def _as_transfer(obj: KrausFamily | TransferMatrix) -> TransferMatrix:
    if isinstance(obj, TransferMatrix):
        return obj
    return transfer_matrix(obj)


def _singular_values(tm: TransferMatrix) -> np.ndarray:
    """All d^2 - 1 singular values of the transfer matrix, zero-padded when
    the output space is too small to carry them."""
    k = tm.in_dim**2 - 1
    s = np.linalg.svd(tm.mat, compute_uv=False)
    if s.size < k:
        s = np.concatenate([s, np.zeros(k - s.size)])
    return s


def cp_injectivity(obj: KrausFamily | TransferMatrix) -> float:
    """Smallest gain of the map on traceless Hermitians (Hilbert-Schmidt
    norms); positive exactly when the map is injective on states."""
    return float(_singular_values(_as_transfer(obj)).min())


def avg_injectivity(obj: KrausFamily | TransferMatrix) -> float:
    """Root-mean-square gain: Frobenius norm of the transfer matrix over
    sqrt(d^2 - 1).  Independent of the basis choice."""
    tm = _as_transfer(obj)
    return float(np.linalg.norm(tm.mat) / np.sqrt(tm.in_dim**2 - 1))


def op_norm_0to2(obj: KrausFamily | TransferMatrix) -> float:
    """Largest gain on traceless Hermitians (spectral norm of the
    transfer matrix)."""
    return float(_singular_values(_as_transfer(obj)).max())


def kernel_h0(
    obj: KrausFamily | TransferMatrix, tol: RankTolerance | None = None
) -> list[np.ndarray]:
    """Orthonormal traceless Hermitian basis of the numerical kernel of
    the map on the traceless sector; empty iff the index is positive."""
    tm = _as_transfer(obj)
    tol = tol or RankTolerance()
    u, s, vt = np.linalg.svd(tm.mat, full_matrices=True)
    k = tm.in_dim**2 - 1
    full = np.concatenate([s, np.zeros(k - s.size)]) if s.size < k else s
    cutoff = tol.cutoff(tm.mat.shape, float(full.max(initial=0.0)))
    out = []
    for idx in range(k):
        if full[idx] <= cutoff:
            coords = vt[idx, :]
            out.append(
                sum(c * f for c, f in zip(coords, tm.basis_in.traceless))
            )
    return out


@dataclass(frozen=True)
class InjectivityReport:
    """Summary of the injectivity indices of one map."""

    i_min: float
    i_avg: float
    op_norm: float
    kernel_dim: int
    witness: np.ndarray | None = None

    def to_json_dict(self) -> dict:
        data = {
            "i_min": self.i_min,
            "i_avg": self.i_avg,
            "op_norm": self.op_norm,
            "kernel_dim": self.kernel_dim,
        }
        if self.witness is not None:
            data["witness"] = [
                [[float(z.real), float(z.imag)] for z in row] for row in self.witness
            ]
        return data


def _report_from_transfer(tm: TransferMatrix, tol: RankTolerance) -> InjectivityReport:
    u, s, vt = np.linalg.svd(tm.mat, full_matrices=True)
    k = tm.in_dim**2 - 1
    full = np.concatenate([s, np.zeros(k - s.size)]) if s.size < k else s
    cutoff = tol.cutoff(tm.mat.shape, float(full.max(initial=0.0)))
    kernel_dim = int(np.count_nonzero(full <= cutoff))
    coords = vt[int(np.argmin(full)), :]
    witness = sum(c * f for c, f in zip(coords, tm.basis_in.traceless))
    return InjectivityReport(
        i_min=float(full.min()),
        i_avg=float(np.linalg.norm(full) / np.sqrt(k)),
        op_norm=float(full.max()),
        kernel_dim=kernel_dim,
        witness=witness,
    )


def injectivity_report(
    fam: KrausFamily, tol: RankTolerance | None = None
) -> InjectivityReport:
    """All indices of a Kraus family, with a minimizing witness."""
    return _report_from_transfer(transfer_matrix(fam), tol or RankTolerance())


def povm_injectivity(
    effects: Sequence[np.ndarray], tol: RankTolerance | None = None
) -> InjectivityReport:
    """Indices of the measurement map X -> (Tr(X F_j))_j on the traceless
    sector; quantifies how well the effects separate states."""
    tol = tol or RankTolerance()
    effects = [np.asarray(f, dtype=np.complex128) for f in effects]
    if not effects:
        raise NotPOVM("need at least one effect")
    d = effects[0].shape[0]
    total = np.zeros((d, d), dtype=np.complex128)
    for k, f in enumerate(effects):
        if f.shape != (d, d):
            raise NotPOVM(f"effect {k} has shape {f.shape}, expected ({d}, {d})")
        if np.abs(f - f.conj().T).max() >= 1e-8:
            raise NotPOVM(f"effect {k} is not Hermitian")
        if np.linalg.eigvalsh((f + f.conj().T) / 2).min() < -1e-8:
            raise NotPOVM(f"effect {k} is not positive semidefinite")
        total += f
    if np.abs(total - np.eye(d)).max() >= 1e-8:
        raise NotPOVM("effects do not sum to the identity")
    if d < 2:
        raise DomainError("effects must act on dimension >= 2")
    basis = gell_mann_basis(d)
    rows = []
    for f in effects:
        row = np.array([np.trace(b @ f) for b in basis.traceless])
        rows.append(row.real)
    mat = np.array(rows)
    tm = TransferMatrix(
        in_dim=d, out_dim=1, mat=mat, basis_in=basis, basis_out=gell_mann_basis(1)
    )
    return _report_from_transfer(tm, tol)


class CollisionResult(NamedTuple):
    min_value: float
    x: PureState
    y: PureState


def _superoperator(fam: KrausFamily) -> np.ndarray:
    """Matrix of the map on column-stacked operators."""
    s = np.zeros((fam.out_dim**2, fam.in_dim**2), dtype=np.complex128)
    for a in fam.ops:
        s += np.kron(a.conj(), a)
    return s


def pure_collision_search(
    fam: KrausFamily, restarts: int = 32, seed: int = 0
) -> CollisionResult:
    """Search for a pair of pure states the map fails to separate.

    Minimizes |Phi(rho_x - rho_y)|_2^2 / |rho_x - rho_y|_2^2 over unit
    vectors by projected gradient descent with backtracking line search
    and random restarts, keeping |rho_x - rho_y|_2 >= 0.1 to exclude the
    trivial x = y solution (a search parameter, not a claim about the
    map).  Deterministic for a fixed seed.  A value near zero exhibits an
    approximate collision; the exact infimum is not certified.
    """
    if restarts < 1:
        raise DomainError("restarts must be >= 1")
    d = fam.in_dim
    if d < 2:
        raise DomainError("collision search needs input dimension >= 2")
    rng = np.random.default_rng(seed)
    q = _superoperator(fam)
    q = q.conj().T @ q  # action of (adjoint o map) on vectorized operators
    min_gap_sq = 0.01  # |rho_x - rho_y|_2^2 >= 0.1^2

    def split(z):
        return z[:d], z[d:]

    def delta(z):
        x, y = split(z)
        return np.outer(x, x.conj()) - np.outer(y, y.conj())

    def value(z):
        v = delta(z).flatten(order="F")
        h = float((v.conj() @ v).real)
        g = float((v.conj() @ (q @ v)).real)
        return g, h

    def objective(z):
        g, h = value(z)
        return g / h

    def gradient(z):
        x, y = split(z)
        dmat = delta(z)
        v = dmat.flatten(order="F")
        h = float((v.conj() @ v).real)
        g = float((v.conj() @ (q @ v)).real)
        kmat = (q @ v).reshape((d, d), order="F")
        kmat = (kmat + kmat.conj().T) / 2
        p = (kmat * h - g * dmat) / (h * h)
        return np.concatenate([4 * (p @ x), -4 * (p @ y)]), g / h

    def renormalize(z):
        x, y = split(z)
        return np.concatenate([x / np.linalg.norm(x), y / np.linalg.norm(y)])

    best_val = np.inf
    best_z = None
    for _ in range(restarts):
        z = rng.standard_normal(2 * d) + 1j * rng.standard_normal(2 * d)
        z = renormalize(z)
        for _ in range(100):
            _, h = value(z)
            if h >= min_gap_sq:
                break
            z = renormalize(rng.standard_normal(2 * d) + 1j * rng.standard_normal(2 * d))
        step = 0.5
        f_cur = objective(z)
        for _ in range(400):
            grad, f_cur = gradient(z)
            grad_sq = float(np.linalg.norm(grad) ** 2)
            if f_cur < 1e-16 or grad_sq < 1e-20:
                break
            accepted = False
            for _ in range(40):
                cand = renormalize(z - step * grad)
                _, h_cand = value(cand)
                if h_cand >= min_gap_sq:
                    f_cand = objective(cand)
                    if f_cand <= f_cur - 1e-4 * step * grad_sq:
                        z = cand
                        f_cur = f_cand
                        accepted = True
                        break
                step /= 2
            if not accepted:
                break
            step = min(step * 2, 1e3)
        if f_cur < best_val:
            best_val = f_cur
            best_z = z
    x, y = split(best_z)
    return CollisionResult(
        min_value=max(float(best_val), 0.0),
        x=PureState.from_vec(x),
        y=PureState.from_vec(y),
    )
