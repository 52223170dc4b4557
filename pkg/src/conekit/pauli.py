"""Exact signed Pauli-string algebra over patch bonds.

An operator is stored as ``i^phase_exp * prod_b X_b^{x_b} Z_b^{z_b}`` with
the X factor written before the Z factor on every bond.  The GF(2)
vectors are packed into Python integers, one bit per bond, so products
and commutation signs reduce to XORs and popcounts and every phase is
tracked exactly in Z4.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import DimensionMismatchError, GeometryError
from .geometry import DUAL, PRIMAL, Bond, Patch, Path

_LETTER_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_LETTER = {v: k for k, v in _LETTER_TO_XZ.items()}
_TEXT_RE = re.compile(r"^i\^([0-3]):([IXYZ]*)$")


def _mul_raw(x1: int, z1: int, k1: int, x2: int, z2: int, k2: int):
    """Raw product: moving the left Z block past the right X block costs
    a factor (-1) per overlapping bond."""
    phase = (k1 + k2 + 2 * (z1 & x2).bit_count()) % 4
    return x1 ^ x2, z1 ^ z2, phase


@dataclass(frozen=True)
class PauliOperator:
    """A signed Pauli string on ``n`` bonds."""

    n: int
    x: int
    z: int
    phase_exp: int

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise DimensionMismatchError("support bits exceed the bond count")
        if not 0 <= self.phase_exp <= 3:
            object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "PauliOperator":
        return PauliOperator(n, 0, 0, 0)

    @staticmethod
    def from_letters(letters: Iterable[str], phase_exp: int = 0) -> "PauliOperator":
        """Build from per-bond letters I/X/Y/Z (textual convention: the
        letter Y denotes the honest Pauli Y = i X Z)."""
        x = z = 0
        n = 0
        n_y = 0
        for i, letter in enumerate(letters):
            lx, lz = _LETTER_TO_XZ[letter]
            x |= lx << i
            z |= lz << i
            n_y += lx & lz
            n = i + 1
        return PauliOperator(n, x, z, (phase_exp + n_y) % 4)

    # -- basic queries ------------------------------------------------

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    @property
    def support_mask(self) -> int:
        return self.x | self.z

    def support_bonds(self, patch: Patch) -> frozenset[Bond]:
        mask = self.support_mask
        return frozenset(
            patch.bond_at(i) for i in range(self.n) if (mask >> i) & 1
        )

    @property
    def n_y_factors(self) -> int:
        return (self.x & self.z).bit_count()

    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0 and self.phase_exp == 0

    def is_hermitian(self) -> bool:
        # adjoint phase is (-k + 2 n_Y); hermitian iff k = n_Y (mod 2)
        return (self.phase_exp - self.n_y_factors) % 2 == 0

    # -- algebra ------------------------------------------------------

    def __mul__(self, other: "PauliOperator") -> "PauliOperator":
        if self.n != other.n:
            raise DimensionMismatchError(
                f"operators live on {self.n} vs {other.n} bonds"
            )
        x, z, k = _mul_raw(self.x, self.z, self.phase_exp, other.x, other.z, other.phase_exp)
        return PauliOperator(self.n, x, z, k)

    def adjoint(self) -> "PauliOperator":
        k = (-self.phase_exp + 2 * self.n_y_factors) % 4
        return PauliOperator(self.n, self.x, self.z, k)

    def scalar_times_i(self, power: int) -> "PauliOperator":
        return PauliOperator(self.n, self.x, self.z, (self.phase_exp + power) % 4)

    def same_string(self, other: "PauliOperator") -> bool:
        """Equal up to the global i^k phase."""
        return self.n == other.n and self.x == other.x and self.z == other.z

    def phase_relative_to(self, other: "PauliOperator") -> int:
        """k with self = i^k * other; requires same_string."""
        if not self.same_string(other):
            raise DimensionMismatchError("operators differ beyond a phase")
        return (self.phase_exp - other.phase_exp) % 4

    # -- text format ----------------------------------------------------

    def to_string(self) -> str:
        letters = []
        for i in range(self.n):
            letters.append(_XZ_TO_LETTER[((self.x >> i) & 1, (self.z >> i) & 1)])
        display = (self.phase_exp + 3 * self.n_y_factors) % 4
        return f"i^{display}:" + "".join(letters)

    @staticmethod
    def from_string(text: str) -> "PauliOperator":
        m = _TEXT_RE.match(text)
        if m is None:
            raise ValueError(f"not a Pauli string: {text!r}")
        return PauliOperator.from_letters(m.group(2), int(m.group(1)))

    def __str__(self) -> str:
        return self.to_string()


def multiply(p: PauliOperator, q: PauliOperator) -> PauliOperator:
    """Exact product p*q with Z4 phase."""
    return p * q


def multiply_all(ops: Iterable[PauliOperator], n: int) -> PauliOperator:
    x = z = k = 0
    for op in ops:
        if op.n != n:
            raise DimensionMismatchError("mixed bond counts in product")
        x, z, k = _mul_raw(x, z, k, op.x, op.z, op.phase_exp)
    return PauliOperator(n, x, z, k)


def commutation_sign(p: PauliOperator, q: PauliOperator) -> int:
    """+1 if pq = qp, -1 if pq = -qp (always one of the two)."""
    if p.n != q.n:
        raise DimensionMismatchError(f"operators live on {p.n} vs {q.n} bonds")
    parity = ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2
    return -1 if parity else 1


# ---------------------------------------------------------------------------
# Patch operators
# ---------------------------------------------------------------------------


def _mask(bonds: Iterable[Bond], patch: Patch) -> int:
    m = 0
    for bond in bonds:
        m |= 1 << patch.bond_index(bond)
    return m


def star_operator(v, patch: Patch) -> PauliOperator:
    """X on every bond meeting vertex v (2, 3 or 4 bonds)."""
    return PauliOperator(patch.n_bonds, _mask(patch.star_bonds(v), patch), 0, 0)


def plaquette_operator(f, patch: Patch) -> PauliOperator:
    """Z on the four bonds around interior face f."""
    return PauliOperator(patch.n_bonds, 0, _mask(patch.face_bonds(f), patch), 0)


def path_operator(path: Path, patch: Patch) -> PauliOperator:
    """Z along a primal path, X on the bonds crossed by a dual path.

    Bonds traversed an even number of times cancel; the result is
    hermitian with trivial phase and squares to the identity.
    """
    mask = 0
    for bond in path.bonds:
        mask ^= 1 << patch.bond_index(bond)
    if path.kind == PRIMAL:
        return PauliOperator(patch.n_bonds, 0, mask, 0)
    if path.kind == DUAL:
        return PauliOperator(patch.n_bonds, mask, 0, 0)
    raise GeometryError(f"unknown path kind {path.kind!r}")


def single_bond(bond: Bond, letter: str, patch: Patch) -> PauliOperator:
    """The one-bond Pauli ``letter`` at ``bond`` (Y means the Pauli Y)."""
    i = patch.bond_index(bond)
    lx, lz = _LETTER_TO_XZ[letter]
    phase = 1 if letter == "Y" else 0
    return PauliOperator(patch.n_bonds, lx << i, lz << i, phase)


def embed(local_x: int, local_z: int, bond_indices: tuple[int, ...], n: int, phase_exp: int = 0) -> PauliOperator:
    """Scatter a k-bond word onto patch bonds ``bond_indices``."""
    x = z = 0
    for j, idx in enumerate(bond_indices):
        x |= ((local_x >> j) & 1) << idx
        z |= ((local_z >> j) & 1) << idx
    return PauliOperator(n, x, z, phase_exp)
