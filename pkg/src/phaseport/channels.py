"""Kraus families and the basic channel calculus.

A completely positive map from d x d to n x n operators is represented by
an ordered list of n x d Kraus operators.  Trace preservation is a flag,
not an invariant: interferometric port maps are CP but generally not TP.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ChannelFormatError, DimensionMismatch, DomainError, NotUnitary
from .linalg import _readonly

__all__ = [
    "KrausFamily",
    "DensityMatrix",
    "PureState",
    "apply",
    "adjoint_apply",
    "frame_operator",
    "mix_kraus",
    "stinespring",
    "complementary",
    "pad",
    "random_kraus_family",
    "random_unitary",
    "to_json_dict",
    "from_json_dict",
    "save_channel",
    "load_channel",
]

TP_TOLERANCE = 1e-8


@dataclass(frozen=True)
class KrausFamily:
    """Ordered family of equally-shaped complex Kraus operators.

    ``ops[i]`` maps the d-dimensional input space into the n-dimensional
    output space, so each operator is an n x d matrix.
    """

    in_dim: int
    out_dim: int
    ops: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not self.ops:
            raise DomainError("a Kraus family needs at least one operator")
        shape = (self.out_dim, self.in_dim)
        clean = []
        for k, op in enumerate(self.ops):
            a = np.asarray(op, dtype=np.complex128)
            if a.shape != shape:
                raise DimensionMismatch(
                    f"operator {k} has shape {a.shape}, expected {shape}"
                )
            if not np.all(np.isfinite(a)):
                raise DomainError(f"operator {k} contains non-finite entries")
            clean.append(_readonly(a))
        object.__setattr__(self, "ops", tuple(clean))

    @classmethod
    def from_ops(cls, ops: Iterable[np.ndarray]) -> "KrausFamily":
        ops = [np.asarray(op, dtype=np.complex128) for op in ops]
        n, d = ops[0].shape
        return cls(in_dim=d, out_dim=n, ops=tuple(ops))

    @property
    def num_ops(self) -> int:
        return len(self.ops)

    @property
    def trace_defect(self) -> float:
        """Spectral-norm distance of sum A_i* A_i from the identity."""
        return float(np.linalg.norm(frame_operator(self) - np.eye(self.in_dim), 2))

    @property
    def is_trace_preserving(self) -> bool:
        return self.trace_defect < TP_TOLERANCE

    # Kraus lists of channels are Parseval operator-valued frames, so the
    # Parseval defect coincides with the trace defect.
    parseval_defect = trace_defect

    @property
    def is_parseval(self) -> bool:
        return self.is_trace_preserving


@dataclass(frozen=True)
class DensityMatrix:
    """Positive semidefinite unit-trace operator."""

    dim: int
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=np.complex128)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"expected {(self.dim, self.dim)}, got {m.shape}")
        if np.abs(m - m.conj().T).max() >= 1e-10:
            raise DomainError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1) >= 1e-10:
            raise DomainError("density matrix trace differs from 1")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -1e-10:
            raise DomainError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "mat", _readonly(m))

    @classmethod
    def from_mat(cls, m: np.ndarray) -> "DensityMatrix":
        m = np.asarray(m)
        return cls(dim=m.shape[0], mat=m)


@dataclass(frozen=True)
class PureState:
    """Unit vector representing the pure state |x><x|."""

    dim: int
    vec: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vec, dtype=np.complex128).reshape(-1)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"expected length {self.dim}, got {v.shape}")
        if abs(np.linalg.norm(v) - 1) >= 1e-12:
            raise DomainError("pure state vector is not normalized")
        object.__setattr__(self, "vec", _readonly(v))

    @classmethod
    def from_vec(cls, v: np.ndarray) -> "PureState":
        v = np.asarray(v, dtype=np.complex128).reshape(-1)
        return cls(dim=v.shape[0], vec=v / np.linalg.norm(v))

    def projector(self) -> np.ndarray:
        return np.outer(self.vec, self.vec.conj())


def _as_square(x: np.ndarray, dim: int, what: str) -> np.ndarray:
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (dim, dim):
        raise DimensionMismatch(f"{what} must be {dim} x {dim}, got {x.shape}")
    return x


def apply(phi: KrausFamily, rho: np.ndarray) -> np.ndarray:
    """Channel action sum_i A_i rho A_i*."""
    rho = _as_square(rho, phi.in_dim, "input operator")
    out = np.zeros((phi.out_dim, phi.out_dim), dtype=np.complex128)
    for a in phi.ops:
        out += a @ rho @ a.conj().T
    return out


def adjoint_apply(phi: KrausFamily, x: np.ndarray) -> np.ndarray:
    """Adjoint action sum_i A_i* x A_i (unital iff the family is TP)."""
    x = _as_square(x, phi.out_dim, "input operator")
    out = np.zeros((phi.in_dim, phi.in_dim), dtype=np.complex128)
    for a in phi.ops:
        out += a.conj().T @ x @ a
    return out


def frame_operator(fam: KrausFamily) -> np.ndarray:
    """Frame operator sum_i A_i* A_i; equals I_d exactly when Parseval."""
    s = np.zeros((fam.in_dim, fam.in_dim), dtype=np.complex128)
    for a in fam.ops:
        s += a.conj().T @ a
    return s


def _check_unitary(u: np.ndarray, atol: float = 1e-8) -> np.ndarray:
    u = np.asarray(u, dtype=np.complex128)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {u.shape}")
    defect = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if defect >= atol:
        raise NotUnitary(f"matrix is {defect:.3e} from unitary")
    return u


def mix_kraus(fam: KrausFamily, u: np.ndarray) -> KrausFamily:
    """Unitary mixing of the operator list: A_i' = sum_j u[i, j] A_j.

    Leaves the channel action unchanged.  ``u`` must be m x m where m is
    the number of operators; pad the family first if needed.
    """
    u = _check_unitary(u)
    if u.shape[0] != fam.num_ops:
        raise DimensionMismatch(
            f"mixing matrix is {u.shape[0]} x {u.shape[0]} but family has {fam.num_ops} operators"
        )
    new_ops = [
        sum(u[i, j] * fam.ops[j] for j in range(fam.num_ops))
        for i in range(fam.num_ops)
    ]
    return KrausFamily(in_dim=fam.in_dim, out_dim=fam.out_dim, ops=tuple(new_ops))


def stinespring(fam: KrausFamily) -> np.ndarray:
    """Stacked dilation matrix V with block i (rows i*n .. (i+1)*n) = A_i.

    V maps the input space into output (x) environment with the environment
    index as the leading block index: V x = sum_i |i> (x) (A_i x).  Always
    V* V = frame_operator(fam), so V is an isometry iff the family is
    Parseval.
    """
    return np.vstack(fam.ops)


def complementary(fam: KrausFamily) -> KrausFamily:
    """Canonical complementary family.

    The complementary map sends rho to the environment matrix with entries
    Tr(A_i rho A_j*).  Its canonical Kraus operators, one per output basis
    vector |a>, are R_a = sum_i |i><a| A_i, i.e. R_a stacks row a of every
    A_i.  The result has in_dim d and out_dim m (the operator count of the
    input family).
    """
    m = fam.num_ops
    ops = []
    for a in range(fam.out_dim):
        r = np.zeros((m, fam.in_dim), dtype=np.complex128)
        for i, op in enumerate(fam.ops):
            r[i, :] = op[a, :]
        ops.append(r)
    return KrausFamily(in_dim=fam.in_dim, out_dim=m, ops=tuple(ops))


def pad(fam: KrausFamily, m: int) -> KrausFamily:
    """Append zero operators until the family has m of them."""
    if m < fam.num_ops:
        raise DomainError(f"cannot pad {fam.num_ops} operators down to {m}")
    if m == fam.num_ops:
        return fam
    zero = np.zeros((fam.out_dim, fam.in_dim), dtype=np.complex128)
    return KrausFamily(
        in_dim=fam.in_dim,
        out_dim=fam.out_dim,
        ops=fam.ops + (zero,) * (m - fam.num_ops),
    )


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR with phase-fixed diagonal."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_kraus_family(
    in_dim: int, out_dim: int, num_ops: int, rng: np.random.Generator
) -> KrausFamily:
    """Random trace-preserving family.

    Draws an (out_dim * num_ops) x in_dim Gaussian matrix, orthonormalizes
    its columns into a Stinespring isometry, and slices it into num_ops
    blocks of out_dim rows.  Requires out_dim * num_ops >= in_dim.
    """
    if out_dim * num_ops < in_dim:
        raise DomainError("out_dim * num_ops must be >= in_dim for a TP family")
    g = rng.standard_normal((out_dim * num_ops, in_dim)) + 1j * rng.standard_normal(
        (out_dim * num_ops, in_dim)
    )
    q, _ = np.linalg.qr(g)
    ops = [q[i * out_dim : (i + 1) * out_dim, :] for i in range(num_ops)]
    return KrausFamily(in_dim=in_dim, out_dim=out_dim, ops=tuple(ops))


def to_json_dict(fam: KrausFamily) -> dict:
    """Channel JSON schema: each matrix entry is a [re, im] pair."""
    return {
        "in_dim": fam.in_dim,
        "out_dim": fam.out_dim,
        "ops": [
            [[[float(z.real), float(z.imag)] for z in row] for row in op]
            for op in fam.ops
        ],
    }


def from_json_dict(data: dict) -> KrausFamily:
    try:
        d = int(data["in_dim"])
        n = int(data["out_dim"])
        raw_ops = data["ops"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ChannelFormatError(f"missing or malformed channel field: {exc}") from exc
    if not isinstance(raw_ops, list) or not raw_ops:
        raise ChannelFormatError("'ops' must be a nonempty list of matrices")
    ops = []
    for k, raw in enumerate(raw_ops):
        try:
            op = np.array(
                [[complex(entry[0], entry[1]) for entry in row] for row in raw],
                dtype=np.complex128,
            )
        except (TypeError, ValueError, IndexError) as exc:
            raise ChannelFormatError(f"operator {k} is malformed: {exc}") from exc
        if op.shape != (n, d):
            raise ChannelFormatError(
                f"operator {k} has shape {op.shape}, expected ({n}, {d})"
            )
        ops.append(op)
    return KrausFamily(in_dim=d, out_dim=n, ops=tuple(ops))


def save_channel(fam: KrausFamily, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(fam), fh, indent=1)
        fh.write("\n")


def load_channel(path) -> KrausFamily:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ChannelFormatError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise ChannelFormatError(f"{path}: {exc}") from exc
    return from_json_dict(data)
