"""Acceptance checks, one per criterion, each printing a single PASS/FAIL line.

Run under pytest (lines appear in the terminal report) or directly with
``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import io
import sys
import time
from collections import Counter
from fractions import Fraction as F

import pytest

from classchain.chains import K1, K2, ChainSampler, chain_pmf, recurrence_report, row_sum
from classchain.cli import main as cli_main
from classchain.measures import (
    O,
    SP,
    MeasureParams,
    fixed_space_prob_printed,
    fixed_space_prob_series,
    isometry_limit_unitary,
    isometry_prob_unitary,
    m_lumped,
    normalization_report,
    p_column_count,
)
from classchain.oracle.compare import exact_fixed_table, exact_isometry_table, mixture_compare
from classchain.oracle.groups import (
    build_orthogonal,
    build_symplectic,
    build_unitary,
    class_statistics,
)
from classchain.partitions import admissible, partitions_up_to
from classchain.verify import suite_lumping, suite_rr

QS = (3, 5, 9)
US = (F(1, 10), F(1, 2), F(1))


def c1_rowsums():
    bad = []
    for q in QS:
        for u in US:
            p = MeasureParams(u, F(q))
            for which in (K1, K2):
                for a in range(41):
                    if row_sum(which, a, p) != 1:
                        bad.append((which, q, u, a))
    return not bad, f"{2 * 41 * 9} rows exact, {len(bad)} off", 10


def c2_chainproduct():
    bad = n = 0
    for fam in (SP, O):
        for q in (3, 5):
            for u in (F(1, 2), F(1)):
                p = MeasureParams(u, F(q), fam)
                for lam in partitions_up_to(12):
                    if not admissible(lam, fam):
                        continue
                    n += 1
                    bad += chain_pmf(lam, fam, p) != m_lumped(lam, p).rational
    return not bad, f"{n} shapes, {bad} mismatches", 30


def c3_normalization():
    worst = F(0)
    ok = True
    for fam in (SP, O):
        for q in (3, 5):
            for u in (F(1, 2), F(1)):
                r = normalization_report(MeasureParams(u, F(q), fam), F(1, 10**12))
                ok &= r["ok"]
                worst = max(worst, abs(r["total"].hi - 1), abs(r["total"].lo - 1))
    return ok, f"max |enclosure - 1| = {float(worst):.3e}", 5


def c4_recurrences():
    fails = []
    for q in QS:
        for u in US:
            fails += recurrence_report(25, MeasureParams(u, F(q)))
    return not fails, f"{2 * 26 * 9} identities, {len(fails)} failures", 10


def c5_lumping():
    ok = True
    notes = []
    for q in (3, 5):
        rep = suite_lumping(MeasureParams(F(1, 2), F(q)), size_max=10)
        ok &= rep.passed
        shapes = [w["partition"] for w in rep.warnings]
        expected_kind = all(
            any(i % 2 and m % 2 and m >= 3 for i, m in lam.multiplicities().items()) for lam in shapes
        )
        ok &= expected_kind
        ratios = sorted({w["ratio"] for w in rep.warnings})
        notes.append(f"q={q}: {rep.checked} shapes exact, O closed form off on {len(shapes)} "
                     f"(odd size, odd mult>=3: {expected_kind}; ratios {', '.join(map(str, ratios[:3]))}...)")
    return ok, "; ".join(notes), None


def c6_orders():
    want = {
        "Sp(2,3)": 24, "Sp(2,5)": 120, "Sp(4,3)": 51840,
        "O+(2,3)": 4, "O-(2,3)": 8, "O(3,3)": 48, "O+(4,3)": 1152, "O-(4,3)": 1440,
        "U(1,3)": 4, "U(2,3)": 96,
    }
    got = {}
    for n, p in ((1, 3), (1, 5), (2, 3)):
        G = build_symplectic(n, p)
        got[G.label] = len(G)
    for d in (2, 3, 4):
        for w in ("identity", "delta"):
            G = build_orthogonal(d, 3, w)
            got[G.label] = len(G)
    for n in (1, 2):
        G = build_unitary(n, 3)
        got[G.label] = len(G)
    return got == want, ", ".join(f"{k}={v}" for k, v in sorted(got.items())), 60


def c7_steinberg():
    got = {(n, p): class_statistics(build_symplectic(n, p)).unipotent for n, p in ((1, 3), (1, 5), (2, 3))}
    ok = all(v == p ** (2 * n * n) for (n, p), v in got.items())
    return ok, ", ".join(f"Sp({2 * n},{p}): {v}" for (n, p), v in got.items()), None


def c8_fixed_space():
    ok = True
    dev = []
    for n, p in ((1, 3), (1, 5), (2, 3)):
        ok &= all(r["ok"] for r in exact_fixed_table(SP, n, p))
        for k in range(n + 1):
            closed = fixed_space_prob_printed(n, k, p)
            truth = fixed_space_prob_series(SP, n, 2 * k, p)
            if closed != truth:
                dev.append(f"Sp({2 * n},{p}) dim {2 * k}: closed form {closed} vs {truth}")
    ok &= fixed_space_prob_series(SP, 1, 0, 3) == F(5, 8) and fixed_space_prob_series(SP, 1, 2, 3) == F(1, 24)
    return ok, f"series = oracle for every k; unshifted closed-form deviations: {len(dev)} (e.g. {dev[0] if dev else 'none'})", None


def c9_mixture():
    params = MeasureParams(F(1, 10), F(3))
    worst = {SP: F(0), O: F(0)}
    ok = True
    for fam, n_max in ((SP, 2), (O, 3)):
        for lam in partitions_up_to(4):
            r = mixture_compare(fam, lam, params, n_max)
            target = r["measure"]
            gap = max(abs(r["partial"] - target.lo), abs(r["partial"] - target.hi))
            tol = (F(1, 10**6) if fam == SP else r["tail"]) + target.width
            ok &= gap <= tol
            worst[fam] = max(worst[fam], gap)
    return ok, f"max gap Sp {float(worst[SP]):.2e} (tol 1e-6), O {float(worst[O]):.2e} (tol 2u^4/(1+u) = {2e-4 / 1.1:.2e})", 90


def c10_unitary():
    ok = all(r["ok"] for r in exact_isometry_table(2, 3))
    variant_off = sum(not r["ok"] for r in exact_isometry_table(2, 3, "variant"))
    types = [(0, 0), (1, 0), (2, 0), (0, 1)]
    gaps = []
    monotone = []
    variant_gap = F(0)
    for s, t in types:
        lim = isometry_limit_unitary(s, t, 3, F(1, 10**15))
        variant_gap = max(variant_gap, abs(isometry_limit_unitary(s, t, 3, F(1, 10**15), "variant").mid - lim.mid))
        seq = [isometry_prob_unitary(n, s, t, 3) for n in range(s + 2 * t, 31)]
        gaps.append(max(abs(seq[-1] - lim.lo), abs(seq[-1] - lim.hi)))
        diffs = [b - a for a, b in zip(seq, seq[1:])]
        monotone.append(all(d >= 0 for d in diffs) or all(d <= 0 for d in diffs))
    ok &= max(gaps) <= F(1, 10**9)
    return ok, (f"U(2,3) exact on {len(types)} types; limit vs n=30 gap {float(max(gaps)):.1e}; "
                f"monotone in n: {monotone}; variant finite-n form off on {variant_off} types, "
                f"variant limit off by up to {float(variant_gap):.3f}"), None


def _sample_text(seed: int, count: int) -> str:
    out = io.StringIO()
    cli_main(["sample", "--flavor", "sp", "--q", "3", "--u", "1/2", "--count", str(count), "--seed", str(seed)],
             out, io.StringIO())
    return out.getvalue()


def c11_sampler():
    from scipy.stats import chisquare

    params = MeasureParams(F(1, 2), F(3))
    n = 10**5
    counts = Counter(len(lam) for lam in ChainSampler(SP, params, seed=2024).samples(n))
    probs = [p_column_count(k, params, F(1, 10**18)).mid for k in range(7)]
    probs.append(1 - sum(probs))
    observed = [counts.get(k, 0) for k in range(7)] + [sum(v for k, v in counts.items() if k > 6)]
    expected = [float(p) * n for p in probs]
    stat, pval = chisquare(observed, expected)
    same = _sample_text(99, 2000) == _sample_text(99, 2000)
    return pval >= 1e-3 and same, f"chi2={stat:.3f}, p={pval:.4f}, observed {observed}; byte-identical rerun: {same}", 30


def c12_rogers_ramanujan():
    ok = True
    notes = []
    for q in (3, 5):
        rep = suite_rr(MeasureParams(F(1, 2), F(q)), n_max=20, eps=F(1, 10**12))
        ok &= rep.passed
        lhs, rhs = rep.detail["sum_side"], rep.detail["product_side"]
        notes.append(f"q={q}: sides {float(lhs.mid):.15f}/{float(rhs.mid):.15f}")
    return ok, "21 exact term pairs per q; " + "; ".join(notes), None


CRITERIA = [
    (1, "row sums of K1, K2", c1_rowsums),
    (2, "chain product equals lumped measure", c2_chainproduct),
    (3, "normalization of column-count laws", c3_normalization),
    (4, "coupled P' recurrences", c4_recurrences),
    (5, "sign lumping with closed-form report", c5_lumping),
    (6, "oracle group orders", c6_orders),
    (7, "unipotent counts", c7_steinberg),
    (8, "fixed-space law", c8_fixed_space),
    (9, "mixture agreement", c9_mixture),
    (10, "unitary isometry types", c10_unitary),
    (11, "sampler distribution", c11_sampler),
    (12, "Rogers-Ramanujan specialization", c12_rogers_ramanujan),
]


def evaluate(fn):
    t0 = time.perf_counter()
    ok, detail, limit = fn()
    dt = time.perf_counter() - t0
    if limit is not None and dt > limit:
        ok = False
        detail += f"; runtime {dt:.1f}s over {limit}s"
    return ok, detail, dt


def line(num, name, ok, detail, dt):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {num:2d} {name}: {detail} ({dt:.2f}s)"


@pytest.mark.parametrize("num,name,fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, name, fn, capsys):
    ok, detail, dt = evaluate(fn)
    with capsys.disabled():
        print("\n" + line(num, name, ok, detail, dt))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn in CRITERIA:
        ok, detail, dt = evaluate(fn)
        failed += not ok
        print(line(num, name, ok, detail, dt), flush=True)
    sys.exit(1 if failed else 0)
