"""Oracle-side comparisons with the measure predictions."""

from __future__ import annotations

from fractions import Fraction

from ..measures import (
    O,
    SP,
    MeasureParams,
    fixed_space_prob_series,
    isometry_prob_unitary,
    m_lumped,
    mixture_fraction,
    norm_family,
)
from ..partitions import Partition, admissible_partitions
from .groups import (
    ORTHOGONAL_FORMS,
    build_orthogonal,
    build_symplectic,
    build_unitary,
    class_statistics,
    isometry_statistics,
)


def oracle_fraction(family: str, lam: Partition, n: int, p: int) -> Fraction:
    """Fraction of elements with shape ``lam`` in Sp(2n, p), or in O(n, p)
    averaged over the two diagonal forms."""
    family = norm_family(family)
    if family == SP:
        return class_statistics(build_symplectic(n, p)).fraction(lam)
    if family == O:
        if n == 0:
            return Fraction(int(lam.size == 0))
        fr = [class_statistics(build_orthogonal(n, p, w)).fraction(lam) for w in ORTHOGONAL_FORMS]
        return sum(fr, Fraction(0)) / 2
    raise ValueError("oracle fractions cover Sp and O")


def oracle_fixed_fraction(family: str, k: int, n: int, p: int) -> Fraction:
    family = norm_family(family)
    if family == SP:
        return class_statistics(build_symplectic(n, p)).fixed_fraction(k)
    if family == O:
        if n == 0:
            return Fraction(int(k == 0))
        fr = [class_statistics(build_orthogonal(n, p, w)).fixed_fraction(k) for w in ORTHOGONAL_FORMS]
        return sum(fr, Fraction(0)) / 2
    raise ValueError("oracle fractions cover Sp and O")


def exact_shape_table(family: str, n: int, p: int) -> list[dict]:
    """Predicted and observed fraction for every admissible shape that fits."""
    family = norm_family(family)
    dim = 2 * n if family == SP else n
    rows = []
    for lam in admissible_partitions(dim, family):
        pred = mixture_fraction(family, lam, n, p)
        obs = oracle_fraction(family, lam, n, p)
        rows.append({"shape": lam, "predicted": pred, "observed": obs, "ok": pred == obs})
    return rows


def exact_fixed_table(family: str, n: int, p: int) -> list[dict]:
    family = norm_family(family)
    dim = 2 * n if family == SP else n
    rows = []
    for k in range(dim + 1):
        pred = fixed_space_prob_series(family, n, k, p)
        obs = oracle_fixed_fraction(family, k, n, p)
        rows.append({"k": k, "predicted": pred, "observed": obs, "ok": pred == obs})
    return rows


def exact_isometry_table(n: int, p: int, form: str = "corrected") -> list[dict]:
    counts = isometry_statistics(build_unitary(n, p))
    order = sum(counts.values())
    rows = []
    for s in range(n + 1):
        for t in range(n + 1):
            if s + 2 * t > n:
                continue
            pred = isometry_prob_unitary(n, s, t, p, form)
            obs = Fraction(counts.get((s, t), 0), order)
            rows.append({"s": s, "t": t, "predicted": pred, "observed": obs, "ok": pred == obs})
    return rows


def mixture_compare(flavor, lam: Partition, params: MeasureParams, n_max: int) -> dict:
    """Mix oracle fractions over dimensions 0..n_max with the measure's
    dimension weights and compare against the measure value.

    The mixture is truncated, so the returned interval for the full mixture is
    [partial, partial + tail], where ``tail`` bounds the missing weight.
    """
    family = norm_family(flavor)
    u, q = params.u, params.q
    if q.denominator != 1:
        raise ValueError("oracle groups need an integer prime q")
    if u >= 1:
        raise ValueError("dimension mixtures need u < 1")
    p = int(q)
    partial = Fraction(0)
    if family == SP:
        for n in range(n_max + 1):
            partial += (1 - u * u) * u ** (2 * n) * oracle_fraction(SP, lam, n, p)
        tail = u ** (2 * (n_max + 1))
    elif family == O:
        for n in range(n_max + 1):
            w = (1 - u) / (1 + u) if n == 0 else 2 * u**n * (1 - u) / (1 + u)
            partial += w * oracle_fraction(O, lam, n, p)
        tail = 2 * u ** (n_max + 1) / (1 + u)
    else:
        raise ValueError("mixtures cover Sp and O")
    target = m_lumped(lam, params.with_flavor(family)).enclosure()
    lo, hi = partial, partial + tail
    ok = target.lo <= hi and lo <= target.hi
    return {
        "flavor": family,
        "shape": lam,
        "n_max": n_max,
        "partial": partial,
        "tail": tail,
        "measure": target,
        "ok": ok,
    }
