"""Builtin channel registry for the CLI and tests."""

from __future__ import annotations

import numpy as np

from .channels import KrausFamily
from .errors import NotUnitary, ParamOutOfRange, UnknownChannel

__all__ = [
    "PAULI_I",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "HADAMARD",
    "BUILTIN_PARAMS",
    "builtin_names",
    "zoo",
]

PAULI_I = np.eye(2, dtype=np.complex128)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)

_NAMED_UNITARIES = {
    "i": PAULI_I,
    "x": PAULI_X,
    "y": PAULI_Y,
    "z": PAULI_Z,
    "h": HADAMARD,
}


def _identity(d: float = 2) -> KrausFamily:
    d = int(d)
    if not 1 <= d <= 16:
        raise ParamOutOfRange("identity: d must be an integer in 1..16")
    return KrausFamily.from_ops([np.eye(d, dtype=np.complex128)])


def _unitary(gate: str | np.ndarray = "z") -> KrausFamily:
    if isinstance(gate, str):
        key = gate.lower()
        if key not in _NAMED_UNITARIES:
            raise ParamOutOfRange(
                f"unitary: unknown gate {gate!r}; choose from "
                f"{sorted(_NAMED_UNITARIES)} or pass a matrix"
            )
        u = _NAMED_UNITARIES[key]
    else:
        u = np.asarray(gate, dtype=np.complex128)
        defect = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
        if defect >= 1e-8:
            raise NotUnitary(f"matrix is {defect:.3e} from unitary")
    return KrausFamily.from_ops([u])


def _amplitude_damping(gamma: float) -> KrausFamily:
    if not 0 <= gamma <= 1:
        raise ParamOutOfRange("amplitude_damping: gamma must lie in [0, 1]")
    a0 = np.array([[1, 0], [0, np.sqrt(1 - gamma)]], dtype=np.complex128)
    a1 = np.array([[0, np.sqrt(gamma)], [0, 0]], dtype=np.complex128)
    return KrausFamily.from_ops([a0, a1])


def _z_dephasing() -> KrausFamily:
    return KrausFamily.from_ops(
        [np.diag([1, 0]).astype(np.complex128), np.diag([0, 1]).astype(np.complex128)]
    )


def _rotated_basis(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(alpha / 2), np.sin(alpha / 2)
    b0 = np.array([c, s], dtype=np.complex128)
    b1 = np.array([-s, c], dtype=np.complex128)
    return b0, b1


def _rotated_dephasing(alpha: float) -> KrausFamily:
    """Complete dephasing in the basis rotated by alpha about Y."""
    if not np.isfinite(alpha):
        raise ParamOutOfRange("rotated_dephasing: alpha must be finite")
    b0, b1 = _rotated_basis(alpha)
    return KrausFamily.from_ops(
        [np.outer(b0, b0.conj()), np.outer(b1, b1.conj())]
    )


def _reset() -> KrausFamily:
    """Sends every input state to |0><0|."""
    return KrausFamily.from_ops(
        [
            np.array([[1, 0], [0, 0]], dtype=np.complex128),
            np.array([[0, 1], [0, 0]], dtype=np.complex128),
        ]
    )


def _trine_vectors(alpha: float = 0.0) -> list[np.ndarray]:
    omega = np.exp(2j * np.pi / 3)
    ry = np.array(
        [
            [np.cos(alpha / 2), -np.sin(alpha / 2)],
            [np.sin(alpha / 2), np.cos(alpha / 2)],
        ],
        dtype=np.complex128,
    )
    return [ry @ (np.array([1, omega**k]) / np.sqrt(2)) for k in range(3)]


def _rotated_trine(alpha: float) -> KrausFamily:
    if not np.isfinite(alpha):
        raise ParamOutOfRange("rotated_trine: alpha must be finite")
    ops = [
        np.sqrt(2 / 3) * np.outer(v, v.conj()) for v in _trine_vectors(alpha)
    ]
    return KrausFamily.from_ops(ops)


def _trine() -> KrausFamily:
    return _rotated_trine(0.0)


def _depolarizing(p: float) -> KrausFamily:
    if not 0 <= p <= 1:
        raise ParamOutOfRange("depolarizing: p must lie in [0, 1]")
    ops = [
        np.sqrt(1 - 3 * p / 4) * PAULI_I,
        np.sqrt(p / 4) * PAULI_X,
        np.sqrt(p / 4) * PAULI_Y,
        np.sqrt(p / 4) * PAULI_Z,
    ]
    return KrausFamily.from_ops(ops)


_BUILTINS = {
    "identity": _identity,
    "unitary": _unitary,
    "amplitude_damping": _amplitude_damping,
    "z_dephasing": _z_dephasing,
    "rotated_dephasing": _rotated_dephasing,
    "reset": _reset,
    "trine": _trine,
    "rotated_trine": _rotated_trine,
    "depolarizing": _depolarizing,
}

# Real-valued parameters each builtin accepts, with (min, max) sweep domains.
# Angles are periodic; their domain is one full period.
BUILTIN_PARAMS: dict[str, dict[str, tuple[float, float]]] = {
    "identity": {},
    "unitary": {},
    "amplitude_damping": {"gamma": (0.0, 1.0)},
    "z_dephasing": {},
    "rotated_dephasing": {"alpha": (0.0, np.pi)},
    "reset": {},
    "trine": {},
    "rotated_trine": {"alpha": (0.0, 2 * np.pi)},
    "depolarizing": {"p": (0.0, 1.0)},
}


def builtin_names() -> list[str]:
    return sorted(_BUILTINS)


def zoo(name: str, **params) -> KrausFamily:
    """Construct a builtin channel by name.

    Raises UnknownChannel for unregistered names and ParamOutOfRange for
    parameters outside their documented domain.
    """
    if name not in _BUILTINS:
        raise UnknownChannel(
            f"unknown builtin {name!r}; available: {', '.join(builtin_names())}"
        )
    try:
        return _BUILTINS[name](**params)
    except TypeError as exc:
        raise ParamOutOfRange(f"{name}: {exc}") from exc
