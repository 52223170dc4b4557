"""Gaussian rationals and exact positive-semidefiniteness checks.

The index computations must certify operator inequalities, not
approximate them, so all coefficient arithmetic runs over Q[i] and
positivity is decided by rational pivoted elimination.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class GaussianRational:
    """a + b*i with exact rational a, b."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    @staticmethod
    def of(value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, complex):
            return GaussianRational(Fraction(value.real), Fraction(value.imag))
        return GaussianRational(Fraction(value), Fraction(0))

    def __add__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        other = GaussianRational.of(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = GaussianRational.of(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / norm,
            (self.im * other.re - self.re * other.im) / norm,
        )

    def conj(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def times_i_power(self, k: int) -> "GaussianRational":
        k %= 4
        if k == 0:
            return self
        if k == 1:
            return GaussianRational(-self.im, self.re)
        if k == 2:
            return GaussianRational(-self.re, -self.im)
        return GaussianRational(self.im, -self.re)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def to_complex(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __repr__(self) -> str:
        return f"({self.re}{'+' if self.im >= 0 else ''}{self.im}i)"


GR_ZERO = GaussianRational()
GR_ONE = GaussianRational(Fraction(1), Fraction(0))
I_POWERS = tuple(GR_ONE.times_i_power(k) for k in range(4))


def is_hermitian(matrix: list[list[GaussianRational]]) -> bool:
    n = len(matrix)
    return all(
        matrix[i][j] == matrix[j][i].conj() for i in range(n) for j in range(i, n)
    )


def is_positive_semidefinite(matrix: list[list[GaussianRational]]) -> bool:
    """Exact PSD test for a hermitian matrix over Q[i].

    Pivoted elimination: a PSD matrix with a zero diagonal entry must
    have the whole row zero, and every Schur complement stays PSD, so the
    matrix is PSD iff all pivots are nonnegative and no zero-diagonal row
    carries off-diagonal mass.
    """
    if not is_hermitian(matrix):
        raise ValueError("PSD test requires a hermitian matrix")
    n = len(matrix)
    m = [row[:] for row in matrix]
    active = list(range(n))
    while active:
        pivot = None
        for i in active:
            if m[i][i].im != 0:
                raise ValueError("hermitian matrix has non-real diagonal")
            if m[i][i].re < 0:
                return False
            if m[i][i].re > 0 and pivot is None:
                pivot = i
        if pivot is None:
            # all remaining diagonal entries vanish
            return all(
                m[i][j].is_zero() for i in active for j in active
            )
        d = m[pivot][pivot].re
        rest = [i for i in active if i != pivot]
        for i in rest:
            li = m[i][pivot]
            if li.is_zero():
                continue
            for j in rest:
                m[i][j] = m[i][j] - li * m[pivot][j] / d
        active = rest
    return True


def min_eigenvalue_float(matrix: list[list[GaussianRational]]) -> float:
    """Floating-point smallest eigenvalue (tolerance-based fallback)."""
    import numpy as np

    arr = np.array([[v.to_complex() for v in row] for row in matrix])
    return float(np.linalg.eigvalsh(arr)[0])
