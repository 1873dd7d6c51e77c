"""Exact rational arithmetic helpers, certified enclosures of the infinite
products and truncated power series in u with rational coefficients.

Rationals are :class:`fractions.Fraction`; nothing in this module ever rounds
except :meth:`RationalInterval.outward`, which widens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

ExactRational = Fraction


def to_rational(x) -> Fraction:
    """Parse ``x`` (int, Fraction or a "p/q" string) into a Fraction.

    Floats are refused: they would smuggle rounding into exact code paths.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"cannot parse rational {x!r}") from exc
    raise TypeError(f"expected int, Fraction or str, got {type(x).__name__}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class RationalInterval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x) -> "RationalInterval":
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        if isinstance(x, RationalInterval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def _coerce(self, other) -> "RationalInterval":
        if isinstance(other, RationalInterval):
            return other
        return RationalInterval.point(other)

    def __add__(self, other):
        o = self._coerce(other)
        return RationalInterval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return RationalInterval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        corners = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return RationalInterval(min(corners), max(corners))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * self._coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.reciprocal()

    def abs_upper(self) -> Fraction:
        return max(abs(self.lo), abs(self.hi))

    def outward(self, bits: int) -> "RationalInterval":
        """Widen to endpoints with denominator 2**bits (keeps numbers small)."""
        scale = 1 << bits
        lo = Fraction(math.floor(self.lo * scale), scale)
        hi = Fraction(math.ceil(self.hi * scale), scale)
        return RationalInterval(lo, hi)

    def to_json(self) -> dict:
        return {"lo": format_rational(self.lo), "hi": format_rational(self.hi)}

    def __repr__(self):
        return f"[{float(self.lo):.17g}, {float(self.hi):.17g}]"


def _check_q(q: Fraction) -> Fraction:
    q = to_rational(q)
    if q <= 1:
        raise ValueError(f"q must exceed 1, got {q}")
    return q


def finite_q_product(q, m: int) -> Fraction:
    """prod_{l=1}^{m} (q^{2l} - 1)."""
    q = _check_q(q)
    if m < 0:
        raise ValueError("m must be non-negative")
    out = Fraction(1)
    for l in range(1, m + 1):
        out *= q ** (2 * l) - 1
    return out


def _bits_for(eps: Fraction) -> int:
    # some b with 2^-b <= eps; integer-only so tiny eps cannot overflow a float
    inv = Fraction(1) / eps
    return max(1, math.ceil(inv).bit_length())


def product_enclosure(
    factor: Callable[[int], Fraction],
    tail: Callable[[int], Fraction],
    eps,
    start: int = 1,
    r0: int = 4,
    max_terms: int = 1 << 16,
    kind: str = "decreasing",
) -> RationalInterval:
    """Enclose prod_{r>=start} (1 + x_r) for a positive, convergent product.

    ``factor(r)`` returns 1 + x_r exactly and ``tail(R)`` an upper bound S for
    sum_{r>R} |x_r|.  The tail product lies in [1 - S, 1] when every x_r <= 0
    (``kind="decreasing"``), in [1, 1/(1 - S)] when every x_r >= 0
    (``"increasing"``) and in [1 - S, 1/(1 - S)] otherwise (``"mixed"``).
    R doubles until the width drops below ``eps``.
    """
    eps = to_rational(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if kind not in ("decreasing", "increasing", "mixed"):
        raise ValueError(f"unknown kind {kind!r}")
    R = max(r0, start)
    partial = Fraction(1)
    done = start - 1
    while True:
        for r in range(done + 1, R + 1):
            partial *= factor(r)
        done = R
        if partial <= 0:
            raise ValueError("partial product is not positive")
        T = tail(R)
        if T < 1:
            lo = partial * (1 - T) if kind != "increasing" else partial
            hi = partial / (1 - T) if kind != "decreasing" else partial
        else:
            lo, hi = Fraction(0), partial + 1
        if hi - lo <= eps / 2:
            out = RationalInterval(lo, hi)
            # outward rounding keeps denominators bounded; the extra width is <= eps/4
            rounded = out.outward(_bits_for(eps / 4))
            return rounded if rounded.width <= eps else out
        if R >= max_terms:
            raise ArithmeticError("enclosure did not converge")
        R *= 2


def infinite_product_enclosure(u2, q, eps) -> RationalInterval:
    """Certified enclosure of prod_{r>=1} (1 - u2 q^{1-2r})."""
    u2, q, eps = to_rational(u2), _check_q(q), to_rational(eps)
    if not 0 <= u2 <= 1 or u2 / q >= 1:
        raise ValueError(f"need 0 <= u2 <= 1 and u2/q < 1, got u2={u2}, q={q}")
    if eps <= 0:
        raise ValueError("eps must be positive")
    if u2 == 0:
        return RationalInterval.point(1)
    return product_enclosure(
        lambda r: 1 - u2 / q ** (2 * r - 1),
        lambda R: tail_bound(u2, q, R),
        eps,
    )


def tail_bound(u2, q, R: int) -> Fraction:
    """sum_{r>R} u2 q^{1-2r} = u2 q^{-(2R+1)} / (1 - q^{-2})."""
    u2, q = to_rational(u2), to_rational(q)
    return u2 / q ** (2 * R + 1) / (1 - 1 / q**2)


class PowerSeries:
    """Truncated power series sum_{n < order} c_n u^n with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        cs = [Fraction(c) for c in coeffs]
        if order is not None:
            cs = (cs + [Fraction(0)] * order)[:order]
        self.coeffs = tuple(cs)

    @property
    def order(self) -> int:
        return len(self.coeffs)

    @classmethod
    def one(cls, order: int) -> "PowerSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, power: int, coeff, order: int) -> "PowerSeries":
        cs = [Fraction(0)] * order
        if power < order:
            cs[power] = Fraction(coeff)
        return cls(cs)

    def __getitem__(self, n: int) -> Fraction:
        if n >= self.order:
            raise IndexError(f"coefficient {n} beyond truncation order {self.order}")
        return self.coeffs[n] if n >= 0 else Fraction(0)

    def _match(self, other) -> "PowerSeries":
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries([other], self.order)

    def __add__(self, other):
        o = self._match(other)
        n = min(self.order, o.order)
        return PowerSeries([a + b for a, b in zip(self.coeffs[:n], o.coeffs[:n])])

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._match(other))

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            c = Fraction(other)
            return PowerSeries([c * a for a in self.coeffs])
        n = min(self.order, other.order)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a:
                for j in range(n - i):
                    b = other.coeffs[j]
                    if b:
                        out[i + j] += a * b
        return PowerSeries(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by u**k, keeping the order."""
        return PowerSeries([Fraction(0)] * k + list(self.coeffs), self.order)

    def evaluate(self, u) -> Fraction:
        u = Fraction(u)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * u + c
        return acc

    def __eq__(self, other):
        return isinstance(other, PowerSeries) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"PowerSeries({[str(c) for c in self.coeffs]})"


def series_divide_one_minus(series: PowerSeries, power: int, scale=1) -> PowerSeries:
    """series / (1 - scale * u**power), exact up to the series order."""
    if power < 1:
        raise ValueError("power must be >= 1")
    scale = Fraction(scale)
    out = list(series.coeffs)
    for n in range(power, len(out)):
        out[n] += scale * out[n - power]
    return PowerSeries(out)


def q_product_series(c, w, terms: int) -> list[Fraction]:
    """Coefficients a_n (n < terms) of prod_{r>=1} (1 - c x / w^r) in powers of x.

    Uses prod_{r>=1}(1 - v/w^r) = sum_n (-v)^n / ((w^n - 1)...(w - 1)), valid
    for |w| > 1.
    """
    c, w = Fraction(c), Fraction(w)
    out = [Fraction(1)]
    denom = Fraction(1)
    for n in range(1, terms):
        denom *= w**n - 1
        out.append((-c) ** n / denom)
    return out


def product_series_coefficients(q, N: int) -> PowerSeries:
    """prod_{r>=1}(1 - u^2/q^{2r-1}) as a series in u, exact through u^{2N}.

    Coefficient of u^{2n} is (-q)^n / ((q^{2n}-1)...(q^2-1)).
    """
    q = _check_q(q)
    a = q_product_series(q, q**2, N + 1)
    cs = [Fraction(0)] * (2 * N + 1)
    for n, an in enumerate(a):
        cs[2 * n] = an
    return PowerSeries(cs)


def unitary_prefactor_series(q, N: int) -> PowerSeries:
    """prod_{r>=1}(1 + u/(-q)^r) as a series in u, exact through u^N."""
    q = _check_q(q)
    return PowerSeries(q_product_series(-1, -q, N + 1))


def inverse_q_factorial_series(
    factors: Sequence[tuple[Fraction, int]], order: int
) -> PowerSeries:
    """prod over (s, p) of 1/(1 - s u^p), truncated to ``order``."""
    out = PowerSeries.one(order)
    for s, p in factors:
        if p == 0:
            out = out * (1 / (1 - Fraction(s)))
        else:
            out = series_divide_one_minus(out, p, s)
    return out
