"""Two-arm coherent coupling of Kraus families.

Feeding one input through a beam splitter, applying the arm channels
coherently, and recombining yields a port CP map with Kraus operators
(A_i + e^{i theta} B_i) / 2.  The cross operator T = sum A_i* B_i controls
when the unnormalized port operators still form an operator-valued frame:
the frame degenerates exactly when -e^{-i theta} is an eigenvalue of T.

The coupling depends on the chosen Kraus realizations of the two arms,
not only on their channel actions; mixing an arm's operator list changes
the port map.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channels import DensityMatrix, KrausFamily, pad
from .errors import (
    DimensionMismatch,
    DomainError,
    NotParseval,
    NotTracePreservingWarning,
    NotUnitary,
)
from .linalg import RankTolerance, herm_eig, numerical_rank

__all__ = [
    "CouplingSpec",
    "PortMap",
    "Visibility",
    "AdjointParts",
    "couple",
    "port_map",
    "cross_operator",
    "e_theta",
    "is_frame",
    "degenerate_thetas",
    "port_adjoint_decomposition",
    "port_system_terms",
    "port_system_matrix",
    "port_system_dim",
    "classical_mix",
    "visibility",
]

PARSEVAL_TOLERANCE = 1e-8


def _common_shape(a: KrausFamily, b: KrausFamily) -> tuple[KrausFamily, KrausFamily]:
    """Pad the shorter operator list with zeros; dims must already agree."""
    if a.in_dim != b.in_dim:
        raise DimensionMismatch(
            f"arm input dimensions differ: {a.in_dim} vs {b.in_dim}"
        )
    if a.out_dim != b.out_dim:
        raise DimensionMismatch(
            f"arm output dimensions differ: {a.out_dim} vs {b.out_dim}"
        )
    m = max(a.num_ops, b.num_ops)
    return pad(a, m), pad(b, m)


def _require_parseval(fam: KrausFamily, which: str) -> None:
    if fam.parseval_defect >= PARSEVAL_TOLERANCE:
        raise NotParseval(
            f"{which} arm has frame-operator defect {fam.parseval_defect:.3e}"
        )


@dataclass(frozen=True)
class CouplingSpec:
    """Coefficient vector for a general frame coupling {A_i + c_i B_i}."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(complex(c) for c in self.coefficients)
        )


def couple(a: KrausFamily, b: KrausFamily, spec: CouplingSpec) -> KrausFamily:
    """General frame coupling {A_i + c_i B_i} (no physical normalization).

    The uniform coherent case c_i = e^{i theta} gives twice the physical
    port operators of :func:`port_map`.
    """
    a, b = _common_shape(a, b)
    if len(spec.coefficients) != a.num_ops:
        raise DimensionMismatch(
            f"coupling has {len(spec.coefficients)} coefficients for "
            f"{a.num_ops} padded operators"
        )
    ops = tuple(
        a.ops[i] + spec.coefficients[i] * b.ops[i] for i in range(a.num_ops)
    )
    return KrausFamily(in_dim=a.in_dim, out_dim=a.out_dim, ops=ops)


@dataclass(frozen=True)
class PortMap:
    """Port-0 CP map of a two-arm interferometer at relative phase theta.

    ``ops`` are the physical Kraus operators (A_i + e^{i theta} B_i) / 2 of
    the padded arms; ``t_cross`` caches T = sum A_i* B_i.
    """

    arm_a: KrausFamily
    arm_b: KrausFamily
    theta: float
    ops: tuple[np.ndarray, ...]
    t_cross: np.ndarray

    @property
    def family(self) -> KrausFamily:
        """The port map as a Kraus family (CP, generally not TP)."""
        return KrausFamily(
            in_dim=self.arm_a.in_dim, out_dim=self.arm_a.out_dim, ops=self.ops
        )

    @property
    def unnormalized_ops(self) -> tuple[np.ndarray, ...]:
        """The operators A_i + e^{i theta} B_i without the 1/2 factor."""
        return tuple(2 * m for m in self.ops)


def port_map(a: KrausFamily, b: KrausFamily, theta: float) -> PortMap:
    """Build the port map of arms a (lower) and b (upper) at phase theta."""
    for fam, which in ((a, "lower"), (b, "upper")):
        if not fam.is_trace_preserving:
            warnings.warn(
                f"port_map: {which} arm is not trace-preserving "
                f"(defect {fam.trace_defect:.3e})",
                NotTracePreservingWarning,
                stacklevel=2,
            )
    a, b = _common_shape(a, b)
    phase = np.exp(1j * theta)
    ops = tuple((a.ops[i] + phase * b.ops[i]) / 2 for i in range(a.num_ops))
    return PortMap(
        arm_a=a, arm_b=b, theta=float(theta), ops=ops, t_cross=cross_operator(a, b)
    )


def cross_operator(a: KrausFamily, b: KrausFamily) -> np.ndarray:
    """T = sum_i A_i* B_i; a contraction when both arms are Parseval."""
    a, b = _common_shape(a, b)
    t = np.zeros((a.in_dim, a.in_dim), dtype=np.complex128)
    for i in range(a.num_ops):
        t += a.ops[i].conj().T @ b.ops[i]
    return t


def e_theta(a: KrausFamily, b: KrausFamily, theta: float) -> np.ndarray:
    """Frame operator of the unnormalized port family,
    2 I + e^{i theta} T + e^{-i theta} T*.

    The closed form uses the Parseval identity of both arms, so non-
    Parseval arms are rejected; compute sum M_i* M_i directly for those.
    """
    _require_parseval(a, "lower")
    _require_parseval(b, "upper")
    t = cross_operator(a, b)
    phase = np.exp(1j * theta)
    return 2 * np.eye(a.in_dim) + phase * t + np.conj(phase) * t.conj().T


def is_frame(
    a: KrausFamily, b: KrausFamily, theta: float, tol: RankTolerance | None = None
) -> bool:
    """Whether the port operators at theta form an operator-valued frame,
    decided by positivity of the smallest eigenvalue of E_theta."""
    tol = tol or RankTolerance()
    w, _ = herm_eig(e_theta(a, b, theta))
    return bool(w[0] > tol.absolute_floor)


def degenerate_thetas(
    a: KrausFamily, b: KrausFamily, tol: RankTolerance | None = None
) -> list[float]:
    """Phases in [0, 2 pi) at which the port family fails to be a frame.

    E_theta is singular exactly when -e^{-i theta} is an eigenvalue of T,
    which requires a unimodular eigenvalue.  Eigenvalues within 1e-8 of
    the unit circle are accepted and the resulting theta is refined by a
    golden-section minimization of lambda_min(E_theta).
    """
    _require_parseval(a, "lower")
    _require_parseval(b, "upper")
    t = cross_operator(a, b)
    eigs = np.linalg.eigvals(t)
    candidates = []
    for lam in eigs:
        if abs(abs(lam) - 1) < 1e-8:
            theta = float(np.angle(-np.conj(lam))) % (2 * np.pi)
            w, _ = herm_eig(e_theta(a, b, theta))
            # Refining inside the numerically flat bottom of the quadratic
            # well would only add noise; keep the closed-form angle there.
            if w[0] > 1e-12:
                theta = _refine_degenerate_theta(a, b, theta) % (2 * np.pi)
            if theta > 2 * np.pi - 1e-9:  # 0 and 2 pi are the same phase
                theta = 0.0
            candidates.append(theta)
    candidates.sort()
    out: list[float] = []
    for theta in candidates:
        if not out or theta - out[-1] > 1e-9:
            out.append(theta)
    return out


def _refine_degenerate_theta(
    a: KrausFamily, b: KrausFamily, theta: float, width: float = 1e-6
) -> float:
    """Golden-section refinement of a local minimum of lambda_min(E_theta)."""

    def lam_min(th: float) -> float:
        w, _ = herm_eig(e_theta(a, b, th))
        return float(w[0])

    lo, hi = theta - width, theta + width
    invphi = (np.sqrt(5) - 1) / 2
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = lam_min(x1), lam_min(x2)
    while hi - lo > 1e-12:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = lam_min(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = lam_min(x2)
    return ((lo + hi) / 2) % (2 * np.pi)


class AdjointParts(NamedTuple):
    total: np.ndarray
    arm_a_part: np.ndarray
    arm_b_part: np.ndarray
    cross_ab: np.ndarray
    cross_ba: np.ndarray


def port_adjoint_decomposition(
    a: KrausFamily, b: KrausFamily, theta: float, x: np.ndarray
) -> AdjointParts:
    """Adjoint of the port map split into arm and interference parts.

    total = (arm_a_part + arm_b_part + e^{i theta} cross_ab
             + e^{-i theta} cross_ba) / 4
    with cross_ab = sum A_i* X B_i and cross_ba = sum B_i* X A_i.  The two
    cross sums are the interferometric contributions that classical mixing
    of the arms never produces.
    """
    a, b = _common_shape(a, b)
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (a.out_dim, a.out_dim):
        raise DimensionMismatch(
            f"operator must be {a.out_dim} x {a.out_dim}, got {x.shape}"
        )
    d = a.in_dim
    arm_a_part = np.zeros((d, d), dtype=np.complex128)
    arm_b_part = np.zeros((d, d), dtype=np.complex128)
    cross_ab = np.zeros((d, d), dtype=np.complex128)
    cross_ba = np.zeros((d, d), dtype=np.complex128)
    for i in range(a.num_ops):
        ai, bi = a.ops[i], b.ops[i]
        arm_a_part += ai.conj().T @ x @ ai
        arm_b_part += bi.conj().T @ x @ bi
        cross_ab += ai.conj().T @ x @ bi
        cross_ba += bi.conj().T @ x @ ai
    phase = np.exp(1j * theta)
    total = (
        arm_a_part + arm_b_part + phase * cross_ab + np.conj(phase) * cross_ba
    ) / 4
    return AdjointParts(total, arm_a_part, arm_b_part, cross_ab, cross_ba)


def port_system_terms(
    a: KrausFamily, b: KrausFamily, theta: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Four-term expansion of sum_i kron(M_i.T, M_i*):

    the two arm terms sum kron(A_i.T, A_i*) and sum kron(B_i.T, B_i*),
    plus the phased cross terms e^{-i theta} sum kron(A_i.T, B_i*) and
    e^{i theta} sum kron(B_i.T, A_i*).
    """
    a, b = _common_shape(a, b)
    d, n = a.in_dim, a.out_dim
    term_a = np.zeros((d * d, n * n), dtype=np.complex128)
    term_b = np.zeros_like(term_a)
    term_ab = np.zeros_like(term_a)
    term_ba = np.zeros_like(term_a)
    for i in range(a.num_ops):
        ai, bi = a.ops[i], b.ops[i]
        term_a += np.kron(ai.T, ai.conj().T)
        term_b += np.kron(bi.T, bi.conj().T)
        term_ab += np.kron(ai.T, bi.conj().T)
        term_ba += np.kron(bi.T, ai.conj().T)
    phase = np.exp(1j * theta)
    return term_a, term_b, np.conj(phase) * term_ab, phase * term_ba


def port_system_matrix(a: KrausFamily, b: KrausFamily, theta: float) -> np.ndarray:
    """sum_i kron(M_i.T, M_i*) for the unnormalized port operators."""
    term_a, term_b, term_ab, term_ba = port_system_terms(a, b, theta)
    return term_a + term_b + term_ab + term_ba


def port_system_dim(
    a: KrausFamily, b: KrausFamily, theta: float, tol: RankTolerance | None = None
) -> int:
    """Dimension of the port map's complementary operator system."""
    return numerical_rank(port_system_matrix(a, b, theta), tol)


def classical_mix(a: KrausFamily, b: KrausFamily, p: float) -> KrausFamily:
    """Weighted union {sqrt(p) A_i} + {sqrt(1-p) B_i}, acting as the
    classical mixture p Phi_A + (1-p) Phi_B."""
    if not 0 <= p <= 1:
        raise DomainError(f"mixing probability {p} outside [0, 1]")
    if a.in_dim != b.in_dim or a.out_dim != b.out_dim:
        raise DimensionMismatch("arms must share input and output dimensions")
    ops = tuple(np.sqrt(p) * op for op in a.ops) + tuple(
        np.sqrt(1 - p) * op for op in b.ops
    )
    return KrausFamily(in_dim=a.in_dim, out_dim=a.out_dim, ops=ops)


class Visibility(NamedTuple):
    """Interference visibility v and phase offset alpha of two unitary arms."""

    v: float
    alpha: float

    def p0(self, theta: float) -> float:
        """Detection probability at port 0: (1 + v cos(theta - alpha)) / 2."""
        return 0.5 * (1 + self.v * np.cos(theta - self.alpha))


def visibility(
    rho: DensityMatrix | np.ndarray, u_a: np.ndarray, u_b: np.ndarray
) -> Visibility:
    """Polar decomposition v e^{i alpha} = Tr(rho U_A* U_B)."""
    if not isinstance(rho, DensityMatrix):
        rho = DensityMatrix.from_mat(np.asarray(rho))
    d = rho.dim
    for u in (u_a, u_b):
        u = np.asarray(u)
        if u.shape != (d, d):
            raise DimensionMismatch(f"unitary must be {d} x {d}, got {u.shape}")
        defect = np.abs(u.conj().T @ u - np.eye(d)).max()
        if defect >= 1e-8:
            raise NotUnitary(f"matrix is {defect:.3e} from unitary")
    z = complex(np.trace(rho.mat @ np.asarray(u_a).conj().T @ np.asarray(u_b)))
    return Visibility(v=min(abs(z), 1.0), alpha=float(np.angle(z)))
