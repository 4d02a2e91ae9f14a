"""Command-line interface: ``qlag eval|zeros|check|bounds|table1|moments|find-common-zero``.

Exit codes: 0 success or ``holds``, 2 bad parameters, 3 ``fails`` (or a
reference-table mismatch under --compare), 4 ``not-applicable`` or ``degenerate``,
1 for any other computational error.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal, InvalidOperation

from . import checks, table
from .errors import DegenerateParameterError, DomainError, NoSignChangeError, QLagError, RegimeError
from .precision import check_precision, default_precision, real, to_decimal_string
from .qlaguerre import PolySpec, eval_hypergeometric, eval_recurrence, make_params
from .zero_engine import zeros

EXIT_OK, EXIT_ERROR, EXIT_PARAMS, EXIT_FAILS, EXIT_NOT_APPLICABLE = 0, 1, 2, 3, 4

VERDICT_EXIT = {
    checks.Verdict.HOLDS: EXIT_OK,
    checks.Verdict.FAILS: EXIT_FAILS,
    checks.Verdict.NOT_APPLICABLE: EXIT_NOT_APPLICABLE,
    checks.Verdict.DEGENERATE: EXIT_NOT_APPLICABLE,
}


class UsageError(Exception):
    pass


# Parameter parsing.


def decimal_list(text: str) -> list:
    """Comma-separated decimals; ``lo:hi:step`` expands to an inclusive range."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                lo, hi, step = (Decimal(x) for x in part.split(":"))
                if step <= 0:
                    raise UsageError(f"range step must be positive in {part!r}")
                v = lo
                while v <= hi:
                    out.append(str(v))
                    v += step
            else:
                Decimal(part)
                out.append(part)
        except (InvalidOperation, ValueError):
            raise UsageError(f"cannot parse {part!r} as a decimal or lo:hi:step range") from None
    if not out:
        raise UsageError(f"empty value list {text!r}")
    return out


def int_list(text: str) -> list:
    """Comma-separated integers; ``a:b`` or ``a:b:step`` are inclusive ranges."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if ":" in part:
                bits = [int(x) for x in part.split(":")]
                lo, hi = bits[0], bits[1]
                step = bits[2] if len(bits) > 2 else 1
                if step <= 0:
                    raise UsageError(f"range step must be positive in {part!r}")
                out.extend(range(lo, hi + 1, step))
            else:
                out.append(int(part))
        except ValueError:
            raise UsageError(f"cannot parse {part!r} as an integer or a:b range") from None
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return out


def _sorted_decimals(values) -> list:
    return sorted(dict.fromkeys(values), key=Decimal)


def _fmt(x, digits):
    return to_decimal_string(x, digits)


def _params(q, delta, precision):
    return make_params(q, delta, precision)


# Per-point tasks.  Each returns a JSON-ready dict; they run in worker processes.


def task_eval(q, delta, n, shift, z, precision, digits):
    params = _params(q, delta, precision)
    spec = PolySpec(params, shift, n)
    x = real(z, params.precision)
    rec = eval_recurrence(spec, x)
    try:
        hyp = eval_hypergeometric(spec, x)
    except DegenerateParameterError:
        hyp = None
    out = {"q": q, "delta": delta, "n": n, "shift": shift, "z": z, "recurrence": _fmt(rec, digits)}
    if hyp is None:
        out.update(hypergeometric=None, rel_diff=None, agree=None)
    else:
        ctx = params.ctx
        diff = abs(rec - hyp) / max(ctx.one, abs(rec))
        out.update(
            hypergeometric=_fmt(hyp, digits),
            rel_diff=_fmt(diff, 6),
            agree=bool(diff <= ctx.ldexp(1, -ctx.prec + 16)),
        )
    return out


def task_zeros(q, delta, n, shift, method, precision, digits):
    params = _params(q, delta, precision)
    zl = zeros(PolySpec(params, shift, n), method=method)
    return {
        "spec": {"q": q, "delta": delta, "shift": shift, "degree": n, "precision_bits": zl.spec.params.precision},
        "zeros": [_fmt(z, digits) for z in zl],
        "neg_count": zl.neg_count,
        "certified_tol": _fmt(zl.tol, 6),
    }


def task_check(check_id, q, delta, n, precision, digits, perturb, common_tol):
    params = _params(q, delta, precision)
    kw = {}
    if perturb is not None:
        label, index, factor = perturb
        kw["tamper"] = checks.perturb_zero(label, index, real(factor, params.precision))
    if common_tol is not None and not check_id in checks.PATTERNS:
        kw["common_tol"] = real(common_tol, params.precision)
    report = checks.run_check(check_id, params, n, **kw)
    return report.to_dict(digits)


def task_bounds(q, delta, n, precision, digits):
    params = _params(q, delta, precision)
    try:
        rec = checks.bounds(params, n)
    except checks.ChainViolationError as exc:
        rec = exc.record
    return rec.to_dict(digits)


def task_moments(q, delta, n, orders, truncation, precision, digits):
    params = _params(q, delta, precision)
    orders = list(range(n + 1)) if orders is None else orders
    reports = checks.moments(PolySpec(params, 0, n), orders, truncation)
    return {"q": q, "delta": delta, "n": n, "moments": [r.to_dict(digits) for r in reports]}


def _call(job):
    fn, args = job
    return fn(*args)


def run_jobs(jobs: list, workers: int) -> list:
    """Results in job order, computed serially or on a bounded process pool."""
    if workers <= 1 or len(jobs) <= 1:
        return [_call(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_call, jobs))


# Output.


def _flatten(record: dict, prefix="") -> dict:
    flat = {}
    for k, v in record.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            flat[key] = " ".join(json.dumps(x) if isinstance(x, (dict, list)) else str(x) for x in v)
        elif v is None:
            flat[key] = ""
        else:
            flat[key] = v
    return flat


def render(command: str, rows: list, fmt: str, precision: int, columns=None) -> str:
    if fmt == "json":
        doc = {"command": command, "precision_bits": precision, "results": rows}
        return json.dumps(doc, indent=2) + "\n"
    flat = [_flatten(r) for r in rows]
    if columns is None:
        columns = list(dict.fromkeys(k for r in flat for k in r))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for r in flat:
            writer.writerow(r)
        return buf.getvalue()
    lines = []
    for r in flat:
        lines.append("  ".join(f"{k}={r[k]}" for k in columns if k in r and r[k] != ""))
    return "\n".join(lines) + ("\n" if lines else "")


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# Commands.


def _grid(args, need_n=True):
    qs = _sorted_decimals(decimal_list(args.q))
    deltas = _sorted_decimals(decimal_list(args.delta))
    ns = sorted(set(int_list(args.n))) if need_n else [None]
    if any(n is not None and n < 0 for n in ns):
        raise UsageError("degrees must be non-negative")
    return list(itertools.product(qs, deltas, ns))


def cmd_eval(args, precision):
    shifts = sorted(set(int_list(args.shift)))
    zs = _sorted_decimals(decimal_list(args.z))
    jobs = [
        (task_eval, (q, d, n, t, z, precision, args.digits))
        for q, d, n in _grid(args)
        for t in shifts
        for z in zs
    ]
    rows = run_jobs(jobs, args.jobs)
    return rows, EXIT_OK


def cmd_zeros(args, precision):
    shifts = sorted(set(int_list(args.shift)))
    jobs = [(task_zeros, (q, d, n, t, args.method, precision, args.digits)) for q, d, n in _grid(args) for t in shifts]
    return run_jobs(jobs, args.jobs), EXIT_OK


def _parse_perturb(text):
    if text is None:
        return None
    parts = text.rsplit(":", 2)
    try:
        if len(parts) == 3:
            return parts[0], int(parts[1]), parts[2]
        label, index = text.rsplit(":", 1)
        return label, int(index), "10"
    except ValueError:
        raise UsageError(f"--perturb expects LABEL:INDEX[:FACTOR], got {text!r}") from None


def worst_exit(verdicts) -> int:
    codes = [VERDICT_EXIT[checks.Verdict(v)] for v in verdicts]
    if EXIT_FAILS in codes:
        return EXIT_FAILS
    if EXIT_NOT_APPLICABLE in codes:
        return EXIT_NOT_APPLICABLE
    return EXIT_OK


def cmd_check(args, precision):
    ids = sorted(checks.CHECKS) if args.check_id == "all" else [args.check_id]
    for cid in ids:
        if cid not in checks.CHECKS:
            raise UsageError(f"unknown check {cid!r}; expected 'all' or one of {sorted(checks.CHECKS)}")
    perturb = _parse_perturb(args.perturb)
    jobs = []
    for q, d, n in _grid(args):
        for cid in ids:
            if args.check_id == "all" and n < checks.CHECK_MIN_DEGREE[cid]:
                continue
            jobs.append((task_check, (cid, q, d, n, precision, args.digits, perturb, args.common_tol)))
    rows = run_jobs(jobs, args.jobs)
    return rows, worst_exit(r["verdict"] for r in rows)


def cmd_bounds(args, precision):
    rows = run_jobs([(task_bounds, (q, d, n, precision, args.digits)) for q, d, n in _grid(args)], args.jobs)
    return rows, EXIT_OK if all(r["chain_holds"] for r in rows) else EXIT_FAILS


TABLE_COLUMNS = ["q", "n", "delta", "B_n", "z_1n", "A_n", "chain_holds"]
COMPARE_COLUMNS = ["ref_B_n", "ref_z_1n", "ref_A_n", "rel_B_n", "rel_z_1n", "rel_A_n", "within_1e-4"]


def cmd_table1(args, precision):
    records = table.compute_rows(precision=precision)
    rows = []
    code = EXIT_OK
    comparisons = table.compare(records) if args.compare else [None] * len(records)
    for rec, row, cmp in zip(records, table.REFERENCE_ROWS, comparisons):
        d = rec.to_dict(args.digits)
        out = {"q": row[0], "n": row[1], "delta": row[2], "B_n": d["B_n"], "z_1n": d["z_1n"], "A_n": d["A_n"],
               "chain_holds": d["chain_holds"]}
        if cmp is not None:
            out.update({"ref_B_n": row[3], "ref_z_1n": row[4], "ref_A_n": row[5]})
            out.update({f"rel_{k}": f"{v:.3e}" for k, v in cmp.rel_diff.items()})
            out["within_1e-4"] = cmp.within
            if not cmp.within:
                code = EXIT_FAILS
        if not rec.holds:
            code = EXIT_FAILS
        rows.append(out)
    return rows, code


def cmd_moments(args, precision):
    orders = None if args.orders is None else sorted(set(int_list(args.orders)))
    truncation = None
    if args.jmin is not None or args.jmax is not None:
        if args.jmin is None or args.jmax is None:
            raise UsageError("--jmin and --jmax must be given together")
        truncation = (args.jmin, args.jmax)
    jobs = [(task_moments, (q, d, n, orders, truncation, precision, args.digits)) for q, d, n in _grid(args)]
    return run_jobs(jobs, args.jobs), EXIT_OK


def cmd_find_common_zero(args, precision):
    rows = []
    for q in _sorted_decimals(decimal_list(args.q)):
        for n in sorted(set(int_list(args.n))):
            delta = checks.find_common_zero_delta(args.kind, q, n, (args.lo, args.hi), precision, args.samples)
            params = make_params(q, to_decimal_string(delta), precision)
            rep = checks.check_common_zero(args.kind, params, n)
            rows.append({
                "kind": args.kind,
                "q": q,
                "n": n,
                "bracket": [args.lo, args.hi],
                "delta_star": _fmt(delta, args.digits),
                "point": _fmt(rep.point, args.digits),
                "is_common": rep.is_common,
                "common_index": rep.common_index,
                "expected_index_range": list(rep.expected_index_range) if rep.expected_index_range else None,
                "verdict": rep.verdict.value,
                "notes": rep.notes,
            })
    return rows, worst_exit(r["verdict"] for r in rows)


COMMANDS = {
    "eval": cmd_eval,
    "zeros": cmd_zeros,
    "check": cmd_check,
    "bounds": cmd_bounds,
    "table1": cmd_table1,
    "moments": cmd_moments,
    "find-common-zero": cmd_find_common_zero,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None, help="working precision (default 256 or $QLAG_PRECISION_BITS)")
    common.add_argument("--format", choices=["json", "csv", "text"], default="text")
    common.add_argument("--out", default=None, help="write the report to PATH instead of standard output")
    common.add_argument("--digits", type=int, default=None, help="significant digits (default 10; JSON defaults to round-trip)")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for grid commands")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--q", required=True, help="decimal list, e.g. 0.23,0.89 or lo:hi:step")
    grid.add_argument("--delta", required=True, help="decimal list, e.g. -1.9,-1.5")
    grid.add_argument("--n", required=True, help="integer list, e.g. 5 or 2:20")

    parser = argparse.ArgumentParser(prog="qlag", description="Quasi-orthogonal q-Laguerre polynomials and their zeros.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", parents=[common, grid], help="evaluate by recurrence and hypergeometric sum")
    p.add_argument("--shift", default="0")
    p.add_argument("--z", required=True, help="evaluation points (decimal list)")

    p = sub.add_parser("zeros", parents=[common, grid], help="all real zeros of one polynomial")
    p.add_argument("--shift", default="0")
    p.add_argument("--method", choices=["auto", "eigen", "bracket"], default="auto")

    p = sub.add_parser("check", parents=[common, grid], help="verify a zero-ordering or common-zero statement")
    p.add_argument("check_id", help="check id or 'all': " + ", ".join(sorted(checks.CHECKS)))
    p.add_argument("--perturb", default=None, help="negative control LABEL:INDEX[:FACTOR], e.g. 'z[n]:2'")
    p.add_argument("--common-tol", default=None, help="relative Newton-distance tolerance for common zeros")

    sub.add_parser("bounds", parents=[common, grid], help="bound chain for the negative zero")

    p = sub.add_parser("table1", parents=[common], help="reproduce the reference bounds table")
    p.add_argument("--compare", action="store_true", help="diff against the reference values")

    p = sub.add_parser("moments", parents=[common, grid], help="Jackson-integral moments")
    p.add_argument("--orders", default=None, help="moment orders (default 0:n)")
    p.add_argument("--jmin", type=int, default=None)
    p.add_argument("--jmax", type=int, default=None)

    p = sub.add_parser("find-common-zero", parents=[common], help="tune delta so a_n or c_n is a common zero")
    p.add_argument("--kind", choices=["a", "c"], required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--n", required=True)
    p.add_argument("--lo", required=True, help="lower end of the delta bracket")
    p.add_argument("--hi", required=True, help="upper end of the delta bracket")
    p.add_argument("--samples", type=int, default=64)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt_default_csv = args.command == "table1" and "--format" not in (argv if argv is not None else sys.argv[1:])
    if fmt_default_csv:
        args.format = "csv"
    if args.digits is None and args.format != "json":
        args.digits = 10
    try:
        precision = default_precision() if args.precision_bits is None else check_precision(args.precision_bits)
        rows, code = COMMANDS[args.command](args, precision)
    except (UsageError, DomainError, RegimeError) as exc:
        print(f"qlag: error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except NoSignChangeError as exc:
        print(f"qlag: {exc}", file=sys.stderr)
        for d, s in exc.signs:
            print(f"  delta={d} sign={s:+d}", file=sys.stderr)
        return EXIT_ERROR
    except QLagError as exc:
        print(f"qlag: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    columns = None
    if args.command == "table1":
        columns = TABLE_COLUMNS + (COMPARE_COLUMNS if args.compare else [])
    emit(render(args.command, rows, args.format, precision, columns), args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
