"""Shared helpers for the test suite."""

import numpy as np

from phaseport.channels import KrausFamily, apply


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def random_density(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_traceless_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    h = random_hermitian(d, rng)
    return h - np.trace(h) / d * np.eye(d)


def env_trace(big: np.ndarray, out_dim: int, env_dim: int) -> np.ndarray:
    """Partial trace over the leading (environment) block index of an
    (env_dim * out_dim) square matrix, by explicit index summation."""
    out = np.zeros((out_dim, out_dim), dtype=np.complex128)
    for i in range(env_dim):
        for k in range(out_dim):
            for l in range(out_dim):
                out[k, l] += big[i * out_dim + k, i * out_dim + l]
    return out


def complementary_action_oracle(fam: KrausFamily, rho: np.ndarray) -> np.ndarray:
    """Environment output with entries Tr(A_i rho A_j*), straight from the
    defining formula."""
    m = fam.num_ops
    out = np.zeros((m, m), dtype=np.complex128)
    for i in range(m):
        for j in range(m):
            out[i, j] = np.trace(fam.ops[i] @ rho @ fam.ops[j].conj().T)
    return out


def channels_act_equal(
    fam_a: KrausFamily, fam_b: KrausFamily, rng: np.random.Generator,
    trials: int = 20, atol: float = 1e-10,
) -> bool:
    for _ in range(trials):
        rho = random_density(fam_a.in_dim, rng)
        if np.abs(apply(fam_a, rho) - apply(fam_b, rho)).max() >= atol:
            return False
    return True
