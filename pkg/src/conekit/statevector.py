"""Dense state-vector reference implementation.

Brute-force route used to cross-check the stabilizer engine on small
patches: states live in C^(2^n), Pauli strings act by index arithmetic,
and the ground state is produced by projector averaging.  Deliberately
independent of the GF(2) machinery.
"""

from __future__ import annotations

import numpy as np

from .geometry import Patch
from .pauli import PauliOperator, plaquette_operator, star_operator

_I4 = np.array([1, 1j, -1, -1j])


def _parity_table(n: int) -> np.ndarray:
    dim = 1 << n
    table = np.zeros(dim, dtype=np.int8)
    for i in range(1, dim):
        table[i] = table[i >> 1] ^ (i & 1)
    return table


def apply_pauli(op: PauliOperator, vec: np.ndarray) -> np.ndarray:
    """Apply i^k X^x Z^z to a dense state: Z adds signs, X permutes."""
    n = op.n
    if vec.shape != (1 << n,):
        raise ValueError("vector length does not match the bond count")
    idx = np.arange(1 << n)
    parity = _parity_table(n)
    signs = 1.0 - 2.0 * parity[idx & op.z]
    out = np.zeros_like(vec, dtype=complex)
    out[idx ^ op.x] = _I4[op.phase_exp] * signs * vec
    return out


def pauli_matrix(op: PauliOperator) -> np.ndarray:
    """Dense matrix of the operator; intended for small bond counts."""
    dim = 1 << op.n
    cols = []
    for j in range(dim):
        e = np.zeros(dim, dtype=complex)
        e[j] = 1.0
        cols.append(apply_pauli(op, e))
    return np.stack(cols, axis=1)


def ground_state_vector(patch: Patch) -> np.ndarray:
    """Unique ground state by projecting onto every stabilizer's +1 space."""
    dim = 1 << patch.n_bonds
    vec = np.zeros(dim, dtype=complex)
    vec[0] = 1.0
    for v in patch.vertices():
        vec = 0.5 * (vec + apply_pauli(star_operator(v, patch), vec))
    for f in patch.faces():
        vec = 0.5 * (vec + apply_pauli(plaquette_operator(f, patch), vec))
    norm = np.linalg.norm(vec)
    if norm < 1e-12:
        raise ValueError("projector product annihilated the seed state")
    return vec / norm


def excited_overlap(
    f: PauliOperator, g: PauliOperator, omega: np.ndarray
) -> complex:
    """<F omega, G omega> by dense arithmetic."""
    return complex(np.vdot(apply_pauli(f, omega), apply_pauli(g, omega)))
