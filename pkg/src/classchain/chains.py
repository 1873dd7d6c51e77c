"""The column-to-column kernels K1, K2 and the alternating chains that
generate the lumped symplectic and orthogonal measures column by column.

Everything here works at the P' level: the infinite prefactor cancels, so
every identity is an exact rational identity.  Only the sampler needs the
prefactor, to invert the law of the first column.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .exactnum import RationalInterval
from .grouptheory import QScaled, inv_a_lumped
from .measures import O, SP, MeasureParams, norm_family, p_prime, prefactor_enclosure
from .partitions import Partition, conjugate

K1, K2 = "K1", "K2"


def _even_q_product(n: int, q: Fraction) -> Fraction:
    """(q^n - 1)(q^{n-2} - 1)...(q^2 - 1) for even n >= 0."""
    out = Fraction(1)
    for j in range(2, n + 1, 2):
        out *= q**j - 1
    return out


def _exact_div(num: int, den: int) -> int:
    if num % den:
        raise ArithmeticError(f"non-integral q exponent {num}/{den}")
    return num // den


def _k1_term(a: int, b: int, u: Fraction, q: Fraction, p_o) -> Fraction:
    # u^a P'_O(b) / (q^{(a^2-b^2+2(a+1)b)/4} (q^{a-b}-1)...(q^2-1))
    e = _exact_div(a * a - b * b + 2 * (a + 1) * b, 4)
    return u**a * p_o(b) / (q**e * _even_q_product(a - b, q))


def _k2_term(a: int, b: int, u: Fraction, q: Fraction, p_sp) -> Fraction:
    d = a - b
    if d % 2 == 0:
        up = _exact_div(d * d, 4)
        down = _exact_div(a * a + b, 2) - a
        prod = _even_q_product(d, q)
    else:
        up = _exact_div(d * d - 1, 4)
        down = _exact_div(a * a - a, 2)
        prod = _even_q_product(d - 1, q)
    return u**a * p_sp(b) * q ** (up - down) / prod


@functools.lru_cache(maxsize=None)
def _k1(a: int, b: int, u: Fraction, q: Fraction) -> Fraction:
    if b < 0 or b > a or (a - b) % 2:
        return Fraction(0)
    sp, o = MeasureParams(u, q, SP), MeasureParams(u, q, O)
    return _k1_term(a, b, u, q, lambda k: p_prime(k, o)) / p_prime(a, sp)


@functools.lru_cache(maxsize=None)
def _k2(a: int, b: int, u: Fraction, q: Fraction) -> Fraction:
    if b < 0 or b > a:
        return Fraction(0)
    sp, o = MeasureParams(u, q, SP), MeasureParams(u, q, O)
    return _k2_term(a, b, u, q, lambda k: p_prime(k, sp)) / p_prime(a, o)


def k1(a: int, b: int, params: MeasureParams) -> Fraction:
    """K1(a, b): moves down by an even amount only."""
    return _k1(a, b, params.u, params.q)


def k2(a: int, b: int, params: MeasureParams) -> Fraction:
    return _k2(a, b, params.u, params.q)


@dataclass(frozen=True)
class TransitionKernel:
    which: str
    params: MeasureParams

    def __post_init__(self):
        if self.which not in (K1, K2):
            raise ValueError(f"unknown kernel {self.which!r}")

    def __call__(self, a: int, b: int) -> Fraction:
        return (k1 if self.which == K1 else k2)(a, b, self.params)

    def row(self, a: int) -> list[Fraction]:
        return [self(a, b) for b in range(a + 1)]


def row_sum(kernel: TransitionKernel | str, a: int, params: MeasureParams | None = None) -> Fraction:
    if not isinstance(kernel, TransitionKernel):
        kernel = TransitionKernel(kernel, params)
    return sum(kernel.row(a), Fraction(0))


def kernel_for_step(flavor, i: int) -> str:
    """Kernel used to move from column i to column i+1 (i >= 1)."""
    family = norm_family(flavor)
    odd = i % 2 == 1
    if family == SP:
        return K1 if odd else K2
    if family == O:
        return K2 if odd else K1
    raise ValueError("chains exist for Sp and O only")


def chain_pmf(lam: Partition, flavor, params: MeasureParams) -> Fraction:
    """P'(lambda'_1) times the product of kernel steps down to an empty column."""
    family = norm_family(flavor)
    params = params.with_flavor(family)
    cols = list(conjugate(lam).parts) + [0]
    out = p_prime(cols[0], params)
    for i in range(1, len(cols)):
        if not out:
            break
        step = k1 if kernel_for_step(family, i) == K1 else k2
        out *= step(cols[i - 1], cols[i], params)
    return out


def lemma_recur_prefix(flavor, prefix: Sequence[int], k: int, params: MeasureParams) -> Fraction:
    """Closed form for the P'-level mass of {lambda'_1 = s_1, ..., lambda'_{i-1} = s_{i-1},
    lambda'_i = k}, where ``prefix`` is (s_1, ..., s_{i-1})."""
    family = norm_family(flavor)
    s = list(prefix) + [k]
    if k < 0 or any(x < y for x, y in zip(s, s[1:])):
        raise ValueError(f"column prefix must be weakly decreasing and non-negative: {s}")
    i = len(s)
    q, u = params.q, params.u
    mults = [s[j] - s[j + 1] for j in range(i - 1)]
    constrained = 1 if family == SP else 0
    if any(m % 2 for j, m in enumerate(mults, start=1) if j % 2 == constrained):
        return Fraction(0)
    doubled = sum(x * x for x in prefix) - sum(m * m for m in mults)
    val = QScaled(-doubled, u ** sum(prefix))
    for j, m in enumerate(mults, start=1):
        val = val * inv_a_lumped(family, j, m, q)
    sp, o = params.with_flavor(SP), params.with_flavor(O)
    if family == SP:
        if i % 2:
            val = val * p_prime(k, sp)
        else:
            val = val * QScaled(-k, p_prime(k, o))
    else:
        if i % 2:
            val = val * p_prime(k, o)
        else:
            val = val * QScaled(k, p_prime(k, sp))
    return val.resolve(q)


def chain_prefix_mass(flavor, prefix: Sequence[int], k: int, params: MeasureParams) -> Fraction:
    """P'(s_1) times the kernel steps through column i, for comparison with
    :func:`lemma_recur_prefix`."""
    family = norm_family(flavor)
    s = list(prefix) + [k]
    out = p_prime(s[0], params.with_flavor(family))
    for i in range(1, len(s)):
        step = k1 if kernel_for_step(family, i) == K1 else k2
        out *= step(s[i - 1], s[i], params)
    return out


def recurrence_report(a_max: int, params: MeasureParams) -> list[dict]:
    """Check both coupled P' recurrences for a <= a_max; returns failures."""
    u, q = params.u, params.q
    sp, o = params.with_flavor(SP), params.with_flavor(O)
    failures = []
    for a in range(a_max + 1):
        rhs_sp = sum(
            (_k1_term(a, b, u, q, lambda k: p_prime(k, o)) for b in range(a % 2, a + 1, 2)),
            Fraction(0),
        )
        rhs_o = sum(
            (_k2_term(a, b, u, q, lambda k: p_prime(k, sp)) for b in range(a + 1)),
            Fraction(0),
        )
        if rhs_sp != p_prime(a, sp):
            failures.append({"a": a, "which": "Sp", "lhs": p_prime(a, sp), "rhs": rhs_sp})
        if rhs_o != p_prime(a, o):
            failures.append({"a": a, "which": "O", "lhs": p_prime(a, o), "rhs": rhs_o})
    return failures


def recurrence_check(a_max: int, params: MeasureParams) -> bool:
    return not recurrence_report(a_max, params)


def zeroth_column_limit_probe(b: int, a_probe: int, params: MeasureParams, eps=Fraction(1, 10**20)) -> dict:
    """Compare K2(a_probe, b) with P_{Sp,u}(b) for a large imaginary 0th column.

    Diagnostic only: reports the raw kernel entry, its row-normalised value,
    the average over the parities a_probe and a_probe+1, and the ratios to
    the first-column law.
    """
    if b > a_probe:
        return {"a": a_probe, "b": b, "k2": Fraction(0), "normalized": Fraction(0)}
    row = sum((k2(a_probe, c, params) for c in range(a_probe + 1)), Fraction(0))
    entry = k2(a_probe, b, params)
    pair = (entry + k2(a_probe + 1, b, params)) / 2
    sp = params.with_flavor(SP)
    target = (prefactor_enclosure(sp, eps) * p_prime(b, sp)).mid
    return {
        "a": a_probe,
        "b": b,
        "k2": entry,
        "normalized": entry / row,
        "parity_average": pair,
        "p_sp": target,
        "ratio": entry / target if target else None,
        "parity_average_ratio": pair / target if target else None,
    }


# ---------------------------------------------------------------------------
# sampling


class SamplingPrecisionError(ArithmeticError):
    pass


class LazyUniform:
    """A uniform draw on [0, 1) revealed 64 bits at a time.

    After ``bits`` bits the draw is known to lie in [m / 2^bits, (m+1) / 2^bits).
    """

    __slots__ = ("rng", "m", "bits", "max_bits")

    def __init__(self, rng: random.Random, max_bits: int = 4096):
        self.rng = rng
        self.m = rng.getrandbits(64)
        self.bits = 64
        self.max_bits = max_bits

    def refine(self):
        if self.bits >= self.max_bits:
            raise SamplingPrecisionError("uniform draw refined past the precision cap")
        self.m = (self.m << 64) | self.rng.getrandbits(64)
        self.bits += 64

    def decide_below(self, lo: Fraction, hi: Fraction) -> bool | None:
        """True if the draw is surely < every point of [lo, hi], False if surely >=,
        None if the current bits cannot tell."""
        scale = 1 << self.bits
        if self.m + 1 <= lo * scale:
            return True
        if self.m >= hi * scale:
            return False
        return None


class _Thresholds:
    """Cumulative thresholds with precomputed 64-bit integer bounds."""

    __slots__ = ("values", "lo64", "hi64")

    def __init__(self):
        self.values: list[RationalInterval] = []
        self.lo64: list[int] = []
        self.hi64: list[int] = []

    def append(self, iv: RationalInterval):
        self.values.append(iv)
        self.lo64.append((iv.lo.numerator << 64) // iv.lo.denominator)
        self.hi64.append(-((-iv.hi.numerator << 64) // iv.hi.denominator))


class ChainSampler:
    """Exact sampler for the lumped Sp or O measure.

    The first column is drawn by inversion against the certified cumulative
    law of the number of parts, the remaining columns by the alternating
    kernels.  Each comparison with the uniform draw is decided exactly;
    ambiguous comparisons reveal more random bits and tighten the prefactor.
    """

    def __init__(
        self,
        flavor,
        params: MeasureParams,
        seed: int = 0,
        max_columns: int = 10**6,
        max_bits: int = 4096,
        start_bits: int = 80,
    ):
        self.family = norm_family(flavor)
        if self.family not in (SP, O):
            raise ValueError("sampling is defined for Sp and O")
        self.params = params.with_flavor(self.family)
        self.seed = seed
        self.rng = random.Random(seed)
        self.max_columns = max_columns
        self.max_bits = max_bits
        self._prec = start_bits
        self._first = _Thresholds()
        self._partials: list[Fraction] = []
        self._pref = prefactor_enclosure(self.params, Fraction(1, 1 << self._prec))
        self._rows: dict[tuple[str, int], _Thresholds] = {}

    # first column ---------------------------------------------------------
    def _partial(self, j: int) -> Fraction:
        while len(self._partials) <= j:
            k = len(self._partials)
            prev = self._partials[-1] if self._partials else Fraction(0)
            self._partials.append(prev + p_prime(k, self.params))
        return self._partials[j]

    def _first_threshold(self, j: int) -> _Thresholds:
        while len(self._first.values) <= j:
            k = len(self._first.values)
            self._first.append((self._pref * self._partial(k)).outward(self._prec + 8))
        return self._first

    def _tighten(self):
        if self._prec >= self.max_bits:
            raise SamplingPrecisionError("prefactor refined past the precision cap")
        self._prec *= 2
        self._pref = prefactor_enclosure(self.params, Fraction(1, 1 << self._prec))
        self._first = _Thresholds()

    def _draw_first_column(self) -> int:
        U = LazyUniform(self.rng, self.max_bits)
        j = 0
        while True:
            th = self._first_threshold(j)
            if U.bits == 64:
                if U.m + 1 <= th.lo64[j]:
                    return j
                if U.m >= th.hi64[j]:
                    j += 1
                    continue
            iv = th.values[j]
            verdict = U.decide_below(iv.lo, iv.hi)
            if verdict is True:
                return j
            if verdict is False:
                j += 1
                continue
            U.refine()
            if iv.width * (1 << U.bits) >= 1:
                self._tighten()

    # kernel steps ---------------------------------------------------------
    def _row(self, which: str, a: int) -> _Thresholds:
        key = (which, a)
        row = self._rows.get(key)
        if row is None:
            row = _Thresholds()
            fn = k1 if which == K1 else k2
            acc = Fraction(0)
            for b in range(a + 1):
                acc += fn(a, b, self.params)
                row.append(RationalInterval.point(acc))
            if acc != 1:
                raise ArithmeticError(f"{which} row {a} sums to {acc}")
            self._rows[key] = row
        return row

    def _step(self, which: str, a: int) -> int:
        row = self._row(which, a)
        U = LazyUniform(self.rng, self.max_bits)
        b = 0
        while True:
            if U.bits == 64:
                if U.m + 1 <= row.lo64[b]:
                    return b
                if U.m >= row.hi64[b]:
                    b += 1
                    continue
            x = row.values[b].lo
            verdict = U.decide_below(x, x)
            if verdict is True:
                return b
            if verdict is False:
                b += 1
                continue
            U.refine()

    def sample_columns(self) -> list[int]:
        cols = [self._draw_first_column()]
        i = 1
        while cols[-1] > 0:
            if i > self.max_columns:
                raise RuntimeError("column cap exceeded")
            cols.append(self._step(kernel_for_step(self.family, i), cols[-1]))
            i += 1
        cols.pop()
        return cols

    def sample_one(self) -> Partition:
        return Partition.from_columns(self.sample_columns())

    def __iter__(self) -> Iterator[Partition]:
        while True:
            yield self.sample_one()

    def samples(self, count: int) -> list[Partition]:
        return [self.sample_one() for _ in range(count)]


def sample(flavor, params: MeasureParams, count: int, seed: int = 0) -> list[Partition]:
    if count < 1:
        raise ValueError("count must be >= 1")
    return ChainSampler(flavor, params, seed).samples(count)
