"""Named exact verification suites, shared by the command line and the tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .chains import K1, K2, chain_pmf, chain_prefix_mass, lemma_recur_prefix, recurrence_report, row_sum
from .measures import (
    O,
    SP,
    MeasureParams,
    display_discrepancies,
    lumped_display,
    m_lumped,
    m_signed,
    normalization_report,
    rr_specialization_check,
    rogers_ramanujan_sides,
    shape_weight_factored,
    single_column_terms,
)
from .partitions import admissible, lemma_combinatorics_sides, partitions_up_to, sign_assignments

SUITES = ("rowsums", "cauchy", "recurrence", "lumping", "chainproduct", "recur-lemma", "rr", "exponents")


@dataclass
class SuiteReport:
    suite: str
    checked: int = 0
    failures: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, **info):
        self.failures.append(info)

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        line = f"{self.suite}: {status} ({self.checked} checks, {len(self.failures)} failures"
        if self.warnings:
            line += f", {len(self.warnings)} warnings"
        return line + ")"


def suite_rowsums(params: MeasureParams, a_max: int = 40, **_) -> SuiteReport:
    rep = SuiteReport("rowsums")
    for which in (K1, K2):
        for a in range(a_max + 1):
            s = row_sum(which, a, params)
            rep.checked += 1
            if s != 1:
                rep.fail(kernel=which, a=a, sum=s)
    return rep


def suite_cauchy(params: MeasureParams, eps=Fraction(1, 10**12), **_) -> SuiteReport:
    rep = SuiteReport("cauchy")
    for fam in (SP, O):
        r = normalization_report(params.with_flavor(fam), eps)
        rep.checked += 1
        rep.detail[fam] = {"terms": r["terms"], "total": r["total"]}
        if not r["ok"]:
            rep.fail(flavor=fam, total=r["total"])
    return rep


def suite_recurrence(params: MeasureParams, a_max: int = 25, **_) -> SuiteReport:
    rep = SuiteReport("recurrence")
    rep.checked = 2 * (a_max + 1)
    for f in recurrence_report(a_max, params):
        rep.fail(**f)
    return rep


def suite_lumping(params: MeasureParams, size_max: int = 10, **_) -> SuiteReport:
    """Sign sums of the signed measure against the per-size closed sign sums,
    plus the branch-by-branch closed form, whose deviations are warnings."""
    rep = SuiteReport("lumping")
    for fam in (SP, O):
        p = params.with_flavor(fam)
        for lam in partitions_up_to(size_max):
            if not admissible(lam, fam):
                continue
            signed = sum((m_signed(sp, p).rational for sp in sign_assignments(lam, fam)), Fraction(0))
            lumped = m_lumped(lam, p).rational
            factored = p.u ** lam.size * shape_weight_factored(lam, fam, p.q)
            rep.checked += 1
            if not signed == lumped == factored:
                rep.fail(flavor=fam, partition=lam, signed_sum=signed, lumped=lumped, factored=factored)
            if fam == SP and lumped_display(lam, p) != lumped:
                rep.fail(flavor=fam, partition=lam, display=lumped_display(lam, p), lumped=lumped)
        if fam == O:
            for d in display_discrepancies(size_max, p, relabel=True):
                rep.warnings.append({"flavor": O, "form": "relabelled", **d})
            verbatim = display_discrepancies(size_max, p, relabel=False)
            rep.detail["O_verbatim_discrepancies"] = len(verbatim)
    return rep


def suite_chainproduct(params: MeasureParams, size_max: int = 12, **_) -> SuiteReport:
    rep = SuiteReport("chainproduct")
    for fam in (SP, O):
        p = params.with_flavor(fam)
        for lam in partitions_up_to(size_max):
            if not admissible(lam, fam):
                continue
            rep.checked += 1
            a, b = chain_pmf(lam, fam, p), m_lumped(lam, p).rational
            if a != b:
                rep.fail(flavor=fam, partition=lam, chain=a, measure=b)
    return rep


def _decreasing_prefixes(length: int, top: int):
    if length == 0:
        yield ()
        return
    for first in range(top + 1):
        for rest in _decreasing_prefixes(length - 1, first):
            yield (first,) + rest


def suite_recur_lemma(params: MeasureParams, a_max: int = 6, depth: int = 4, **_) -> SuiteReport:
    """Closed prefix masses against products of kernel steps."""
    rep = SuiteReport("recur-lemma")
    for fam in (SP, O):
        for length in range(1, depth + 1):
            for prefix in _decreasing_prefixes(length - 1, a_max):
                top = prefix[-1] if prefix else a_max
                for k in range(top + 1):
                    rep.checked += 1
                    a = lemma_recur_prefix(fam, prefix, k, params)
                    b = chain_prefix_mass(fam, prefix, k, params)
                    if a != b:
                        rep.fail(flavor=fam, prefix=list(prefix), k=k, closed=a, chain=b)
    return rep


def suite_rr(params: MeasureParams, n_max: int = 20, eps=Fraction(1, 10**12), **_) -> SuiteReport:
    rep = SuiteReport("rr")
    q = params.q
    for n, (first, second, measured) in enumerate(single_column_terms(q, n_max)):
        rep.checked += 1
        if not first == second == measured:
            rep.fail(n=n, group_order_form=first, factorial_form=second, measure=measured)
    lhs, rhs = rogers_ramanujan_sides(q, eps)
    rep.checked += 1
    rep.detail["sum_side"] = lhs
    rep.detail["product_side"] = rhs
    if not rr_specialization_check(q, n_max, eps):
        rep.fail(sum_side=lhs, product_side=rhs)
    return rep


def suite_exponents(params: MeasureParams, size_max: int = 12, **_) -> SuiteReport:
    rep = SuiteReport("exponents")
    for lam in partitions_up_to(size_max):
        rep.checked += 1
        left, right = lemma_combinatorics_sides(lam)
        if left != right:
            rep.fail(partition=lam, left=left, right=right)
    return rep


_RUNNERS = {
    "rowsums": suite_rowsums,
    "cauchy": suite_cauchy,
    "recurrence": suite_recurrence,
    "lumping": suite_lumping,
    "chainproduct": suite_chainproduct,
    "recur-lemma": suite_recur_lemma,
    "rr": suite_rr,
    "exponents": suite_exponents,
}


def run_suite(name: str, params: MeasureParams, **bounds) -> SuiteReport:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    bounds = {k: v for k, v in bounds.items() if v is not None}
    return _RUNNERS[name](params, **bounds)
