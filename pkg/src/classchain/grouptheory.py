"""Orders of the finite classical groups and the per-part-size factors
A_Sp, A_O entering the class-size formulas at eigenvalue 1.

Factors that may carry q to a half-integral power are returned as
:class:`QScaled` values ``q**(half_exp/2) * value``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactnum import to_rational
from .partitions import SYMPLECTIC, normalize_flavor

FAMILIES = ("Sp", "O", "U", "GL")


@dataclass(frozen=True)
class GroupSpec:
    family: str
    dimension: int
    q: int
    sign: str | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.dimension < 0:
            raise ValueError("dimension must be non-negative")
        if self.family == "Sp" and self.dimension % 2:
            raise ValueError("symplectic dimension must be even")
        if self.family == "O" and self.dimension % 2 == 0 and self.dimension > 0:
            if self.sign not in ("+", "-"):
                raise ValueError("even-dimensional orthogonal groups need sign '+' or '-'")
        if self.sign not in (None, "+", "-"):
            raise ValueError(f"bad sign {self.sign!r}")

    def label(self) -> str:
        s = self.sign if (self.family == "O" and self.dimension % 2 == 0 and self.dimension) else ""
        return f"{self.family}{s}({self.dimension},{self.q})"


def order_sp(dim: int, q) -> Fraction:
    if dim % 2:
        raise ValueError("symplectic dimension must be even")
    q = to_rational(q)
    n = dim // 2
    out = q ** (n * n)
    for i in range(1, n + 1):
        out *= q ** (2 * i) - 1
    return Fraction(out)


def order_o(dim: int, q, sign: str | None = None) -> Fraction:
    q = to_rational(q)
    if dim == 0:
        return Fraction(1)
    if dim % 2:
        n = (dim - 1) // 2
        out = 2 * q ** (n * n)
        for i in range(1, n + 1):
            out *= q ** (2 * i) - 1
        return Fraction(out)
    if sign not in ("+", "-"):
        raise ValueError("even-dimensional orthogonal groups need sign '+' or '-'")
    n = dim // 2
    eps = 1 if sign == "+" else -1
    out = 2 * q ** (n * n - n) * (q**n - eps)
    for i in range(1, n):
        out *= q ** (2 * i) - 1
    return Fraction(out)


def order_gl(m: int, q) -> Fraction:
    q = to_rational(q)
    out = Fraction(1)
    for i in range(m):
        out *= q**m - q**i
    return out


def order_u(m: int, q) -> Fraction:
    q = to_rational(q)
    out = q ** (m * (m - 1) // 2)
    for i in range(1, m + 1):
        out *= q**i - (-1) ** i
    return Fraction(out)


def group_order(spec: GroupSpec) -> Fraction:
    if spec.family == "Sp":
        return order_sp(spec.dimension, spec.q)
    if spec.family == "O":
        return order_o(spec.dimension, spec.q, spec.sign)
    if spec.family == "GL":
        return order_gl(spec.dimension, spec.q)
    return order_u(spec.dimension, spec.q)


@dataclass(frozen=True)
class QScaled:
    """The number q**(half_exp / 2) * value, with q kept symbolic in the exponent."""

    half_exp: int
    value: Fraction

    def __mul__(self, other):
        if isinstance(other, QScaled):
            return QScaled(self.half_exp + other.half_exp, self.value * other.value)
        return QScaled(self.half_exp, self.value * Fraction(other))

    __rmul__ = __mul__

    def __add__(self, other):
        if not isinstance(other, QScaled) or other.half_exp != self.half_exp:
            raise ValueError("can only add QScaled values with equal q-exponent")
        return QScaled(self.half_exp, self.value + other.value)

    def reciprocal(self) -> "QScaled":
        return QScaled(-self.half_exp, 1 / self.value)

    @property
    def integral(self) -> bool:
        return self.half_exp % 2 == 0

    def resolve(self, q) -> Fraction:
        """Return the exact rational; the q-exponent must be an integer."""
        if not self.integral:
            raise ArithmeticError(f"half-integral q exponent {self.half_exp}/2")
        return self.value * Fraction(to_rational(q)) ** (self.half_exp // 2)


def _check_sign(i: int, m: int, sign, signed_parity: int):
    needs = (i % 2 == signed_parity) and m >= 1
    if needs and sign not in ("+", "-"):
        raise ValueError(f"part size {i} with multiplicity {m} needs a sign")
    if not needs and sign is not None:
        raise ValueError(f"part size {i} with multiplicity {m} carries no sign")


def a_sp(i: int, m: int, sign, q) -> QScaled:
    """Symplectic class-size factor for part size ``i`` of multiplicity ``m``."""
    if i < 1 or m < 0:
        raise ValueError("need i >= 1 and m >= 0")
    if i % 2 == 1 and m % 2 == 1:
        raise ValueError(f"odd part size {i} needs even multiplicity, got {m}")
    _check_sign(i, m, sign, 0)
    if m == 0:
        return QScaled(0, Fraction(1))
    if i % 2:
        return QScaled(0, order_sp(m, q))
    return QScaled(m, order_o(m, q, sign))


def a_o(i: int, m: int, sign, q) -> QScaled:
    """Orthogonal class-size factor for part size ``i`` of multiplicity ``m``."""
    if i < 1 or m < 0:
        raise ValueError("need i >= 1 and m >= 0")
    if i % 2 == 0 and m % 2 == 1:
        raise ValueError(f"even part size {i} needs even multiplicity, got {m}")
    _check_sign(i, m, sign, 1)
    if m == 0:
        return QScaled(0, Fraction(1))
    if i % 2 == 0:
        return QScaled(-m, order_sp(m, q))
    return QScaled(0, order_o(m, q, sign))


def orthogonal_sign_sum(m: int, q) -> Fraction:
    """1/|O+(m,q)| + 1/|O-(m,q)| (m >= 1)."""
    return 1 / order_o(m, q, "+") + 1 / order_o(m, q, "-")


def orthogonal_sign_sum_closed(m: int, q) -> Fraction:
    """Closed form of :func:`orthogonal_sign_sum`."""
    q = to_rational(q)
    if m % 2 == 0:
        n = m // 2
        d = q ** (n * n - 2 * n)
    else:
        n = (m - 1) // 2
        d = q ** (n * n)
    for l in range(1, n + 1):
        d *= q ** (2 * l) - 1
    return 1 / Fraction(d)


def inv_a_lumped(flavor: str, i: int, m: int, q) -> QScaled:
    """Sum over the admissible signs at size ``i`` of 1/A(i, m)."""
    flavor = normalize_flavor(flavor)
    fn = a_sp if flavor == SYMPLECTIC else a_o
    parity = 0 if flavor == SYMPLECTIC else 1
    if m >= 1 and i % 2 == parity:
        return fn(i, m, "+", q).reciprocal() + fn(i, m, "-", q).reciprocal()
    return fn(i, m, None, q).reciprocal()
