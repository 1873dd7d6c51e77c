"""Measures on partitions attached to the eigenvalue-1 class data of the
symplectic, orthogonal and unitary groups, and the laws derived from them.

Every measure value splits as ``prefactor * rational``.  The prefactor is the
infinite product prod_{r>=1}(1 - u^2/q^{2r-1}) (divided by 1+u in the
orthogonal case, replaced by prod_{r>=1}(1 + u/(-q)^r) in the unitary case)
and is only ever available as a certified interval.  The rational part is
exact, so identities that do not involve the prefactor are tested exactly.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import (
    PowerSeries,
    RationalInterval,
    infinite_product_enclosure,
    product_enclosure,
    product_series_coefficients,
    series_divide_one_minus,
    to_rational,
    unitary_prefactor_series,
)
from .grouptheory import QScaled, a_o, a_sp, inv_a_lumped, order_sp, order_u
from .partitions import (
    Partition,
    SignedPartition,
    SYMPLECTIC,
    admissible,
    conjugate,
    multiplicities,
    partitions_of,
    partitions_up_to,
    sign_assignments,
)

SP, O, U = "Sp", "O", "U"


def norm_family(flavor) -> str:
    f = str(flavor).lower()
    if f in ("sp", "symplectic"):
        return SP
    if f in ("o", "orthogonal"):
        return O
    if f in ("u", "unitary"):
        return U
    raise ValueError(f"unknown flavor {flavor!r}")


@dataclass(frozen=True)
class MeasureParams:
    u: Fraction
    q: Fraction
    flavor: str = SP

    def __post_init__(self):
        u, q = to_rational(self.u), to_rational(self.q)
        if not 0 < u <= 1:
            raise ValueError(f"u must lie in (0, 1], got {u}")
        if q <= 1:
            raise ValueError(f"q must exceed 1, got {q}")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "flavor", norm_family(self.flavor))

    def with_flavor(self, flavor) -> "MeasureParams":
        return MeasureParams(self.u, self.q, flavor)


def prefactor_enclosure(params: MeasureParams, eps) -> RationalInterval:
    u, q = params.u, params.q
    if params.flavor == U:
        return unitary_prefactor_enclosure(u, q, eps)
    C = infinite_product_enclosure(u * u, q, eps)
    if params.flavor == O:
        return C / (1 + u)
    return C


def unitary_prefactor_enclosure(u, q, eps) -> RationalInterval:
    """prod_{r>=1} (1 + u/(-q)^r), certified."""
    u, q = to_rational(u), to_rational(q)
    return product_enclosure(
        lambda r: 1 + u / (-q) ** r,
        lambda R: u / q**R / (q - 1),
        eps,
        kind="mixed",
    )


@dataclass(frozen=True)
class MeasureValue:
    """A measure value ``prefactor * rational`` with certified prefactor."""

    rational: Fraction
    params: MeasureParams

    def prefactor(self, eps=Fraction(1, 10**15)) -> RationalInterval:
        return prefactor_enclosure(self.params, eps)

    def enclosure(self, eps=Fraction(1, 10**15)) -> RationalInterval:
        return self.prefactor(eps) * self.rational


def _exponent_doubled(lam: Partition) -> int:
    """sum_i (lambda'_i)^2 - sum_i m_i^2, i.e. twice the q-exponent."""
    cols = conjugate(lam).parts
    return sum(c * c for c in cols) - sum(m * m for m in multiplicities(lam).values())


def signed_weight(sp: SignedPartition, q) -> Fraction:
    """u-free factor of the signed measure: 1/(q^{exp} prod_i A(i))."""
    q = to_rational(q)
    fn = a_sp if sp.flavor == SYMPLECTIC else a_o
    denom = QScaled(_exponent_doubled(sp.shape), Fraction(1))
    for i, m in multiplicities(sp.shape).items():
        denom = denom * fn(i, m, sp.signs.get(i), q)
    return denom.reciprocal().resolve(q)


@functools.lru_cache(maxsize=None)
def shape_weight(lam: Partition, flavor, q) -> Fraction:
    """u-free factor R(lambda) of the lumped measure (0 if inadmissible).

    Computed as the sum of :func:`signed_weight` over all sign assignments.
    """
    family = norm_family(flavor)
    if family == U:
        return unitary_weight(lam, q)
    if not admissible(lam, family):
        return Fraction(0)
    return sum((signed_weight(sp, q) for sp in sign_assignments(lam, family)), Fraction(0))


def shape_weight_factored(lam: Partition, flavor, q) -> Fraction:
    """Same as :func:`shape_weight` but summing signs one part size at a time."""
    family = norm_family(flavor)
    if not admissible(lam, family):
        return Fraction(0)
    total = QScaled(-_exponent_doubled(lam), Fraction(1))
    for i, m in multiplicities(lam).items():
        total = total * inv_a_lumped(family, i, m, q)
    return total.resolve(q)


def m_signed(sp: SignedPartition, params: MeasureParams) -> MeasureValue:
    family = norm_family(sp.flavor)
    if params.flavor != family:
        params = params.with_flavor(family)
    return MeasureValue(params.u ** sp.shape.size * signed_weight(sp, params.q), params)


def m_lumped(lam: Partition, params: MeasureParams) -> MeasureValue:
    if params.flavor == U:
        return m_unitary(lam, params)
    return MeasureValue(params.u ** lam.size * shape_weight(lam, params.flavor, params.q), params)


def _q_pow_quarter(q: Fraction, quarters: int) -> Fraction:
    if quarters % 4:
        raise ArithmeticError(f"non-integral q exponent {quarters}/4")
    return q ** (quarters // 4)


def lumped_display(lam: Partition, params: MeasureParams, relabel: bool = True) -> Fraction:
    """The branch-by-branch closed form of the lumped measure's rational part.

    For the orthogonal flavor the branch stated for even sizes with odd
    multiplicity can never fire; ``relabel=True`` applies it to odd sizes
    with odd multiplicity instead, ``relabel=False`` evaluates it verbatim
    (odd sizes of odd multiplicity then contribute nothing).
    """
    family = params.flavor
    q, u = params.q, params.u
    if not admissible(lam, family):
        return Fraction(0)
    quarters = 2 * _exponent_doubled(lam)
    prod = Fraction(1)

    def qprod(n):
        out = Fraction(1)
        for l in range(1, n + 1):
            out *= q ** (2 * l) - 1
        return out

    for i, m in multiplicities(lam).items():
        if family == SP:
            if i % 2:
                quarters += m * m
                prod *= qprod(m // 2)
            elif m % 2 == 0:
                quarters += m * m - 2 * m
                prod *= qprod(m // 2)
            else:
                quarters += m * m + 1
                prod *= qprod((m - 1) // 2)
        else:
            if i % 2 == 0:
                quarters += m * m - 2 * m
                prod *= qprod(m // 2)
            elif m % 2 == 0:
                quarters += m * m - 4 * m
                prod *= qprod(m // 2)
            elif relabel:
                quarters += m * m - 1
                prod *= qprod((m - 1) // 2)
    return u ** lam.size / (_q_pow_quarter(q, quarters) * prod)


def display_discrepancies(bound: int, params: MeasureParams, relabel: bool = True) -> list[dict]:
    """Admissible shapes of size <= bound where the closed form departs from
    the sign-summed measure, with the ratio closed-form / sign-summed."""
    out = []
    for lam in partitions_up_to(bound):
        if not admissible(lam, params.flavor):
            continue
        truth = m_lumped(lam, params).rational
        shown = lumped_display(lam, params, relabel)
        if truth != shown:
            out.append({"partition": lam, "sign_summed": truth, "display": shown, "ratio": shown / truth})
    return out


def _unitary_mult_factor(m: int, q: Fraction) -> Fraction:
    # (1 + 1/q)(1 - 1/q^2)...(1 + (-1)^{m+1}/q^m)
    out = Fraction(1)
    for j in range(1, m + 1):
        out *= 1 - Fraction(-1) ** j / q**j
    return out


def unitary_weight(lam: Partition, q) -> Fraction:
    q = to_rational(q)
    d = q ** sum(c * c for c in conjugate(lam).parts)
    for m in multiplicities(lam).values():
        d *= _unitary_mult_factor(m, q)
    return 1 / d


def m_unitary(lam: Partition, params: MeasureParams) -> MeasureValue:
    if params.flavor != U:
        params = params.with_flavor(U)
    return MeasureValue(params.u ** lam.size * unitary_weight(lam, params.q), params)


# ---------------------------------------------------------------------------
# column counts


def _column_factor(j: int, u2: Fraction, q: Fraction) -> Fraction:
    return 1 - u2 / q**j if j % 2 else 1 - 1 / q**j


def _p_prime_head(k: int, family: str) -> tuple[int, int]:
    """(power of u, power of q) in the numerator/denominator of P'(k)."""
    j, odd = divmod(k, 2)
    if family == SP:
        return (2 * j + 2, 2 * j * j + 3 * j + 1) if odd else (2 * j, 2 * j * j + j)
    return (2 * j + 1, 2 * j * j + j) if odd else (2 * j, 2 * j * j - j)


@functools.lru_cache(maxsize=None)
def _p_prime(k: int, u: Fraction, q: Fraction, family: str) -> Fraction:
    upow, qpow = _p_prime_head(k, family)
    d = q**qpow
    u2 = u * u
    for j in range(1, k + 1):
        d *= _column_factor(j, u2, q)
    return u**upow / d


def p_prime(k: int, params: MeasureParams) -> Fraction:
    """Probability of k parts with the prefactor (and the 1+u) stripped."""
    if params.flavor not in (SP, O):
        raise ValueError("p_prime is defined for Sp and O only")
    if k < 0:
        return Fraction(0)
    return _p_prime(k, params.u, params.q, params.flavor)


def p_prime_series(k: int, family: str, q, order: int) -> PowerSeries:
    """P'(k) expanded as a power series in u."""
    q = to_rational(q)
    upow, qpow = _p_prime_head(k, family)
    const = 1 / q**qpow
    s = PowerSeries.monomial(upow, 1, order)
    for j in range(1, k + 1):
        if j % 2:
            s = series_divide_one_minus(s, 2, 1 / q**j)
        else:
            const /= 1 - 1 / q**j
    return s * const


def p_column_count(k: int, params: MeasureParams, eps=Fraction(1, 10**15)) -> RationalInterval:
    return (prefactor_enclosure(params, eps) * p_prime(k, params)).outward(_bits(eps) + 2)


def _bits(eps) -> int:
    eps = to_rational(eps)
    return max(1, (eps.denominator // eps.numerator).bit_length())


def euler_lower_bound(q) -> Fraction:
    """Lower bound for prod_{j>=1} (1 - q^{-j})."""
    q = to_rational(q)
    return product_enclosure(lambda r: 1 - 1 / q**r, lambda R: 1 / q**R / (q - 1), Fraction(1, 1000)).lo


def p_prime_tail_bound(K: int, q) -> Fraction:
    """Upper bound on sum_{k>K} P'(k), valid for both flavors and every u <= 1.

    Uses P'(k) <= q^{-(k^2-k)/2} / prod_j (1 - q^{-j}) and a geometric comparison.
    """
    q = to_rational(q)
    L = euler_lower_bound(q)
    k = K + 1
    return 1 / q ** ((k * k - k) // 2) / (L * (1 - 1 / q**k))


def normalization_report(params: MeasureParams, eps=Fraction(1, 10**12)) -> dict:
    eps = to_rational(eps)
    q = params.q
    K = 1
    while p_prime_tail_bound(K, q) > eps / 8:
        K += 1
    partial = sum((p_prime(k, params) for k in range(K + 1)), Fraction(0))
    total = prefactor_enclosure(params, eps / 8) * (partial + RationalInterval(0, p_prime_tail_bound(K, q)))
    ok = 1 - eps <= total.lo and total.hi <= 1 + eps
    return {"flavor": params.flavor, "terms": K + 1, "total": total, "ok": ok}


def normalization_check(params: MeasureParams, eps=Fraction(1, 10**12)) -> bool:
    return normalization_report(params, eps)["ok"]


# ---------------------------------------------------------------------------
# finite groups through coefficient extraction


def mixture_fraction(family: str, lam: Partition, n: int, q) -> Fraction:
    """Exact fraction of elements with eigenvalue-1 shape ``lam``.

    For Sp this is over Sp(2n, q); for O over O(n, q), averaged over the two
    types when n is even.  Obtained by extracting the coefficient of the
    dimension parameter from the measure, never from a group.
    """
    family = norm_family(family)
    q = to_rational(q)
    R = shape_weight(lam, family, q)
    if not R:
        return Fraction(0)
    if family == SP:
        dim = 2 * n
    elif family == O:
        dim = n
    else:
        raise ValueError("mixture_fraction covers Sp and O")
    rest = dim - lam.size
    if rest < 0:
        return Fraction(0)
    C = product_series_coefficients(q, rest // 2 + 1)
    acc = sum((C[2 * j] for j in range(rest // 2 + 1)), Fraction(0))
    if family == SP:
        return R * acc
    return R * acc if dim == 0 else R * acc / 2


def fixed_space_prob_series(flavor, n: int, k: int, q) -> Fraction:
    """Probability that the fixed space has dimension k.

    Sp: over Sp(2n, q).  O: over O(n, q), averaged over both types.
    """
    family = norm_family(flavor)
    q = to_rational(q)
    dim = 2 * n if family == SP else n
    if k < 0 or k > dim:
        return Fraction(0)
    order = dim + 1
    series = product_series_coefficients(q, dim // 2 + 1)
    series = PowerSeries(series.coeffs[:order], order) * p_prime_series(k, family, q, order)
    if family == SP:
        return series_divide_one_minus(series, 2)[dim]
    if family == O:
        c = series_divide_one_minus(series, 1)[dim]
        return c if dim == 0 else c / 2
    raise ValueError("fixed-space law covers Sp and O")


def fixed_space_prob_printed(n: int, k: int, q, odd: bool = False, shift: int = 0) -> Fraction:
    """Closed-form fixed-space probability in Sp(2n, q).

    ``k`` is half the fixed dimension (dimension 2k, or 2k+1 with ``odd``).
    ``shift=0`` evaluates the alternating sum with (q^2)^C(i,2);
    ``shift=1`` uses (q^2)^C(i+1,2), which is what the group data support.
    """
    q = to_rational(q)
    if odd:
        top, lead = n - k - 1, order_sp(2 * k, q) * q ** (2 * k + 1)
        step = 2 * (k + 1)
    else:
        top, lead = n - k, order_sp(2 * k, q)
        step = 2 * k
    if top < 0:
        return Fraction(0)
    s = Fraction(0)
    for i in range(top + 1):
        c = (i + shift) * (i + shift - 1) // 2
        s += Fraction((-1) ** i) * (q * q) ** c / (order_sp(2 * i, q) * q ** (i * step))
    return s / lead


def steinberg_unipotent_count(n: int, q) -> Fraction:
    return Fraction(to_rational(q)) ** (2 * n * n)


def unipotent_count_from_measure(n: int, q) -> Fraction:
    """|Sp(2n,q)| times the total weight of admissible shapes of size 2n."""
    q = to_rational(q)
    total = sum((shape_weight(lam, SP, q) for lam in partitions_of(2 * n)), Fraction(0))
    return order_sp(2 * n, q) * total


# ---------------------------------------------------------------------------
# unitary isometry types


def _alt_factorial(m: int, q: Fraction) -> Fraction:
    return _unitary_mult_factor(m, q)


def _check_type(n, s, t):
    if s < 0 or t < 0 or s + 2 * t > n:
        raise ValueError(f"need s, t >= 0 and s + 2t <= n, got n={n}, s={s}, t={t}")


def _isometry_head(s: int, t: int, form: str) -> int:
    if form == "corrected":
        return s * s + 2 * s * t + 2 * t * t
    if form == "variant":
        return s * s + 2 * s * t
    raise ValueError(f"unknown form {form!r}")


def isometry_prob_unitary(n: int, s: int, t: int, q, form: str = "corrected") -> Fraction:
    """Closed-form probability that the fixed space of a uniform element of
    U(n, q) has isometry type (s, t).

    ``form="corrected"`` sums i up to n-s-2t with denominator power
    q^{s^2+2st+2t^2}; this agrees with :func:`isometry_prob_unitary_series`
    and with enumeration.  ``form="variant"`` sums up to n-2s-t with
    q^{s^2+2st}, and is kept for comparison only.
    """
    _check_type(n, s, t)
    q = to_rational(q)
    head = _isometry_head(s, t, form)
    top = n - s - 2 * t if form == "corrected" else n - 2 * s - t
    x = -1 / q
    num = Fraction(0)
    for i in range(top + 1):
        num += x ** ((t + 1) * i) * x ** (i * (i - 1) // 2) / _alt_factorial(i, q)
    return num / (q**head * _alt_factorial(s, q) * _alt_factorial(t, q))


def isometry_prob_unitary_series(n: int, s: int, t: int, q) -> Fraction:
    """Same probability by coefficient extraction over shapes with
    lambda'_1 = s + t and lambda'_2 = t."""
    _check_type(n, s, t)
    q = to_rational(q)
    pref = unitary_prefactor_series(q, n)
    total = Fraction(0)
    for lam in partitions_up_to(n):
        cols = conjugate(lam).parts + (0, 0)
        if cols[0] != s + t or cols[1] != t:
            continue
        rest = n - lam.size
        total += unitary_weight(lam, q) * sum(pref.coeffs[: rest + 1], Fraction(0))
    return total


def isometry_limit_unitary(
    s: int, t: int, q, eps=Fraction(1, 10**15), form: str = "corrected"
) -> RationalInterval:
    """n -> infinity limit of the isometry-type probability, certified.

    The two forms differ by the factor q^{2t^2} as in :func:`isometry_prob_unitary`.
    """
    q = to_rational(q)
    P = product_enclosure(
        lambda r: 1 + 1 / q ** (2 * r - 1),
        lambda R: 1 / q ** (2 * R + 1) / (1 - 1 / q**2),
        eps / 4,
        kind="increasing",
    )
    d = q ** _isometry_head(s, t, form) * _alt_factorial(s, q)
    for l in range(1, t + 1):
        d *= 1 - 1 / q ** (2 * l)
    return P.reciprocal() / d


def unitary_order(n: int, q) -> Fraction:
    return order_u(n, q)


# ---------------------------------------------------------------------------
# Rogers-Ramanujan specialization


def single_column_terms(q, N: int) -> list[tuple[Fraction, Fraction, Fraction]]:
    """For n <= N, the u-free coefficient of u^{2n} in sum over shapes with no
    second column: (group-order form, q-factorial form, measure of (1^{2n}))."""
    q = to_rational(q)
    out = []
    for n in range(N + 1):
        a = Fraction(1, 1)
        b = Fraction(1, 1)
        for l in range(1, n + 1):
            a *= q ** (2 * l) - 1
            b *= 1 - 1 / q ** (2 * l)
        first = 1 / (q ** (n * n) * a)
        second = 1 / (q ** (2 * n * n + n) * b)
        measured = shape_weight(Partition((1,) * (2 * n)), SP, q)
        out.append((first, second, measured))
    return out


def rogers_ramanujan_sides(q, eps=Fraction(1, 10**12)) -> tuple[RationalInterval, RationalInterval]:
    """Certified enclosures of sum_n x^{n^2+n}/(x;x)_n and
    prod_{j>=0} 1/((1-x^{5j+2})(1-x^{5j+3})) at x = 1/q^2."""
    q = to_rational(q)
    eps = to_rational(eps)
    if q < 2:
        raise ValueError("the tail bounds assume q >= 2")
    x = 1 / q**2
    L = product_enclosure(lambda r: 1 - x**r, lambda R: x**R * x / (1 - x), Fraction(1, 1000)).lo
    # sum side: terms <= x^{n^2+n}/L, ratio of consecutive bounds <= x^{2n+2}
    s = Fraction(0)
    poch = Fraction(1)
    n = 0
    while True:
        if n:
            poch *= 1 - x**n
        s += x ** (n * n + n) / poch
        m = n + 1
        tail = x ** (m * m + m) / (L * (1 - x ** (2 * m + 2)))
        if tail <= eps / 4:
            break
        n += 1
    lhs = RationalInterval(s, s + tail)
    # product side: prod 1/(1-y_j) = prod (1 + y_j/(1-y_j)); y_j/(1-y_j) <= 2 y_j
    def factor(r):
        j = r - 1
        return 1 / ((1 - x ** (5 * j + 2)) * (1 - x ** (5 * j + 3)))

    def tail_sum(R):
        # sum_{j>=R} (x^{5j+2} + x^{5j+3}) * 2 / (1 - x) covers the expansion terms
        return 4 * x ** (5 * R + 2) / ((1 - x**5) * (1 - x))

    rhs = product_enclosure(factor, tail_sum, eps / 4, kind="increasing")
    return lhs, rhs


def rr_specialization_check(q, N: int = 20, eps=Fraction(1, 10**12)) -> bool:
    for first, second, measured in single_column_terms(q, N):
        if not first == second == measured:
            return False
    lhs, rhs = rogers_ramanujan_sides(q, eps)
    hi = max(lhs.hi, rhs.hi)
    lo = min(lhs.lo, rhs.lo)
    return hi - lo <= eps
