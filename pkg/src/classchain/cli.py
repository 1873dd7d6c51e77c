"""Command-line front end: sample, pmf, verify and oracle.

Exit codes: 0 success, 1 a verification found a counterexample, 2 usage or
validation error (including an oracle group over the element budget).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction

from .chains import ChainSampler, SamplingPrecisionError
from .exactnum import RationalInterval, format_rational, to_rational
from .measures import (
    O,
    SP,
    MeasureParams,
    fixed_space_prob_printed,
    fixed_space_prob_series,
    m_lumped,
    p_column_count,
    p_prime_tail_bound,
    prefactor_enclosure,
    steinberg_unipotent_count,
)
from .partitions import admissible_partitions
from .verify import SUITES, run_suite

DEFAULT_EPS = "1/1000000000000000"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    flavor: str | None = None
    q: str | None = None
    u: str | None = None
    seed: int | None = None
    count: int | None = None
    max_parts: int | None = None
    max_size: int | None = None
    suite: str | None = None
    a_max: int | None = None
    size_max: int | None = None
    group: str | None = None
    n: int | None = None
    p: int | None = None
    sign: str | None = None
    compare: bool | None = None
    format: str = "json"
    eps: str | None = None
    decimal: bool | None = None

    def header(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}


# ---------------------------------------------------------------------------
# parsing and validation


def _rational(text: str, name: str) -> Fraction:
    try:
        return to_rational(str(text))
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise UsageError(f"--{name}: not a rational number: {text!r}") from exc


def _params(cfg: RunConfig, family: str) -> MeasureParams:
    u = _rational(cfg.u, "u")
    q = _rational(cfg.q, "q")
    try:
        return MeasureParams(u, q, family)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _eps(cfg: RunConfig) -> Fraction:
    eps = _rational(cfg.eps, "eps")
    if not 0 < eps < 1:
        raise UsageError("--eps must lie in (0, 1)")
    return eps


def _flavor(cfg: RunConfig) -> str:
    return {"sp": SP, "o": O}[cfg.flavor]


def _json_default(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, RationalInterval):
        return obj.to_json()
    if hasattr(obj, "parts"):
        return list(obj.parts)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _dumps(obj, **kw) -> str:
    return json.dumps(obj, default=_json_default, **kw)


def _approx(x) -> str:
    return f"{float(x):.17g}"


def _emit_table(cfg: RunConfig, columns: list[str], rows: list[dict], extra: dict, out) -> None:
    if cfg.format == "csv":
        out.write("# config " + _dumps(cfg.header(), sort_keys=True) + "\n")
        for k, v in extra.items():
            out.write(f"# {k} " + _dumps(v, sort_keys=True) + "\n")
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_csv_cell(row[c]) for c in columns])
        out.write(buf.getvalue())
    else:
        doc = {"config": cfg.header(), "rows": rows, **extra}
        out.write(_dumps(doc, indent=2) + "\n")


def _csv_cell(v):
    if isinstance(v, Fraction):
        return format_rational(v)
    if hasattr(v, "parts"):
        return " ".join(map(str, v.parts))
    return v


# ---------------------------------------------------------------------------
# commands


def cmd_sample(cfg: RunConfig, out) -> int:
    family = _flavor(cfg)
    params = _params(cfg, family)
    if cfg.count < 1:
        raise UsageError("--count must be >= 1")
    sampler = ChainSampler(family, params, seed=cfg.seed)
    out.write(_dumps({"config": cfg.header()}, sort_keys=True) + "\n")
    for _ in range(cfg.count):
        out.write(_dumps({"parts": list(sampler.sample_one().parts)}) + "\n")
    return 0


def cmd_pmf(cfg: RunConfig, out) -> int:
    family = _flavor(cfg)
    params = _params(cfg, family)
    eps = _eps(cfg)
    if (cfg.max_parts is None) == (cfg.max_size is None):
        raise UsageError("pmf needs exactly one of --max-parts and --max-size")
    rows = []
    if cfg.max_parts is not None:
        K = cfg.max_parts
        for k in range(K + 1):
            iv = p_column_count(k, params, eps)
            row = {"k": k, "lo": iv.lo, "hi": iv.hi}
            if cfg.decimal:
                row["approx"] = _approx(iv.mid)
            rows.append(row)
        tail = prefactor_enclosure(params, eps).hi * p_prime_tail_bound(K, params.q)
        columns = ["k", "lo", "hi"] + (["approx"] if cfg.decimal else [])
        extra = {"tail_bound": tail}
    else:
        for lam in admissible_partitions(cfg.max_size, family):
            mv = m_lumped(lam, params)
            iv = mv.enclosure(eps)
            row = {"partition": lam, "size": lam.size, "rational": mv.rational, "lo": iv.lo, "hi": iv.hi}
            if cfg.decimal:
                row["approx"] = _approx(iv.mid)
            rows.append(row)
        columns = ["partition", "size", "rational", "lo", "hi"] + (["approx"] if cfg.decimal else [])
        extra = {"prefactor": prefactor_enclosure(params, eps)}
    if cfg.decimal:
        extra["note"] = "approx columns are decimal approximations of the interval midpoints"
    _emit_table(cfg, columns, rows, extra, out)
    return 0


def cmd_verify(cfg: RunConfig, out, err) -> int:
    if cfg.suite not in SUITES:
        raise UsageError(f"--suite must be one of {', '.join(SUITES)}")
    params = _params(cfg, SP)
    rep = run_suite(cfg.suite, params, a_max=cfg.a_max, size_max=cfg.size_max,
                    eps=_eps(cfg) if cfg.eps else None)
    err.write(rep.summary() + "\n")
    if rep.warnings:
        err.write(f"WARN: {len(rep.warnings)} deviations reported under 'warnings'\n")
    doc = {
        "config": cfg.header(),
        "suite": rep.suite,
        "passed": rep.passed,
        "checked": rep.checked,
        "failures": rep.failures,
        "warnings": rep.warnings,
        "detail": rep.detail,
    }
    out.write(_dumps(doc, indent=2) + "\n")
    return 0 if rep.passed else 1


def _oracle_compare(cfg: RunConfig, G) -> dict:
    from .oracle.compare import exact_fixed_table, exact_isometry_table, exact_shape_table

    fam = G.spec.family
    checks = {}
    if fam == "Sp":
        from .oracle.groups import class_statistics

        n = cfg.n
        stats = class_statistics(G)
        expected = int(steinberg_unipotent_count(n, cfg.p))
        checks["steinberg"] = {"observed": stats.unipotent, "expected": expected,
                               "ok": stats.unipotent == expected}
        checks["fixed_space"] = {"rows": exact_fixed_table(SP, n, cfg.p)}
        closed = []
        for k in range(n + 1):
            for odd in (False, True):
                dim = 2 * k + (1 if odd else 0)
                truth = fixed_space_prob_series(SP, n, dim, cfg.p)
                closed.append({
                    "fixed_dim": dim,
                    "series": truth,
                    "closed_form": fixed_space_prob_printed(n, k, cfg.p, odd),
                    "shifted": fixed_space_prob_printed(n, k, cfg.p, odd, shift=1),
                })
        checks["fixed_space_closed_form"] = {"rows": closed, "informational": True}
        checks["shapes"] = {"rows": exact_shape_table(SP, n, cfg.p)}
    elif fam == "O":
        checks["fixed_space_avg"] = {"rows": exact_fixed_table(O, cfg.n, cfg.p)}
        checks["shapes_avg"] = {"rows": exact_shape_table(O, cfg.n, cfg.p)}
    else:
        checks["isometry"] = {"rows": exact_isometry_table(cfg.n, cfg.p, "corrected")}
        checks["isometry_variant"] = {"rows": exact_isometry_table(cfg.n, cfg.p, "variant"),
                                      "informational": True}
    for c in checks.values():
        if "rows" in c and "ok" not in c:
            c["ok"] = all(r.get("ok", True) for r in c["rows"])
    return checks


def cmd_oracle(cfg: RunConfig, out, err) -> int:
    from .oracle.groups import BudgetExceeded, build_group, class_statistics, isometry_statistics

    if cfg.n is None or cfg.n < 0 or cfg.p is None:
        raise UsageError("oracle needs --n >= 0 and --p")
    dim = 2 * cfg.n if cfg.group == "sp" else cfg.n
    if cfg.group == "o":
        if dim < 1:
            raise UsageError("orthogonal groups need --n >= 1")
        if dim % 2 == 0 and cfg.sign not in ("+", "-"):
            raise UsageError("even-dimensional orthogonal groups need --sign + or -")
    try:
        G = build_group(cfg.group, dim, cfg.p, cfg.sign if cfg.group == "o" else None)
    except BudgetExceeded as exc:
        err.write(f"error: {exc}\n")
        return 2
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    stats = class_statistics(G)
    doc = {"config": cfg.header(), **stats.to_json(G.label, G.dim)}
    if G.spec.family == "U":
        iso = isometry_statistics(G)
        doc["isometry"] = {f"{s},{t}": c for (s, t), c in sorted(iso.items())}
    status = 0
    if cfg.compare:
        try:
            checks = _oracle_compare(cfg, G)
        except BudgetExceeded as exc:
            err.write(f"error: {exc}\n")
            return 2
        doc["compare"] = checks
        failed = [k for k, c in checks.items() if not c["ok"] and not c.get("informational")]
        for k, c in checks.items():
            tag = "info" if c.get("informational") else ("PASS" if c["ok"] else "FAIL")
            err.write(f"{k}: {tag}\n")
        status = 1 if failed else 0
    out.write(_dumps(doc, indent=2) + "\n")
    return status


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="classchain", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def measure_args(p, flavor=True):
        if flavor:
            p.add_argument("--flavor", choices=["sp", "o"], required=True)
        p.add_argument("--q", required=True, help="field size, as a rational string")
        p.add_argument("--u", required=True, help="mixture parameter in (0, 1], e.g. 1/2")

    p = sub.add_parser("sample", help="draw partitions from the chain sampler")
    measure_args(p)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("pmf", help="tables of column-count laws or partition masses")
    measure_args(p)
    p.add_argument("--max-parts", type=int)
    p.add_argument("--max-size", type=int)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--eps", default=DEFAULT_EPS)
    p.add_argument("--decimal", action="store_true", help="add approximate decimal columns")

    p = sub.add_parser("verify", help="run an exact verification suite")
    p.add_argument("--suite", required=True, choices=SUITES)
    p.add_argument("--q", default="3")
    p.add_argument("--u", default="1/2")
    p.add_argument("--a-max", type=int)
    p.add_argument("--size-max", type=int)
    p.add_argument("--eps")
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("oracle", help="enumerate a small group and its class statistics")
    p.add_argument("--group", choices=["sp", "o", "u"], required=True)
    p.add_argument("--n", type=int, required=True,
                   help="half the dimension for sp, the dimension for o and u")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--sign", choices=["+", "-"])
    p.add_argument("--compare", action="store_true")
    p.add_argument("--format", choices=["json"], default="json")
    return ap


def _config(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    cfg = _config(ns)
    if cfg.seed is not None and not 0 <= cfg.seed < 2**64:
        err.write("error: --seed must be a 64-bit unsigned integer\n")
        return 2
    try:
        if cfg.command == "sample":
            return cmd_sample(cfg, out)
        if cfg.command == "pmf":
            return cmd_pmf(cfg, out)
        if cfg.command == "verify":
            return cmd_verify(cfg, out, err)
        return cmd_oracle(cfg, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        parser.print_usage(err)
        return 2
    except SamplingPrecisionError as exc:
        err.write(f"error: {exc}\n")
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
