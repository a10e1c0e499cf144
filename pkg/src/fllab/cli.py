"""Command-line entry point: ``fllab verify | coeff | moment | list``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from datetime import datetime, timezone
from typing import Optional, Sequence

from . import __version__
from .catalog import CATALOG, VerificationReport, summarize, verify_all
from .config import ToleranceConfig
from .errors import ConvergenceError, DomainError, FLLabError, UnknownIdentityError
from .fl_engine import coefficient_rows, moment_series_1, moment_series_2
from .numerics import elliptic_K, elliptic_K_complement
from .quadrature import tanh_sinh

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """17 significant digits, round-trip safe."""
    return format(x, ".17g")


def to_json(obj, indent: int = 2, _level: int = 0) -> str:
    """Deterministic JSON: insertion-ordered keys, floats at 17 digits, non-finite as null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if obj is None or isinstance(obj, bool):
        return "null" if obj is None else ("true" if obj else "false")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_document(reports: Sequence[VerificationReport], cfg: ToleranceConfig, timestamp: Optional[str] = None) -> dict:
    return {
        "version": __version__,
        "timestamp": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": cfg.as_dict(),
        "reports": [r.as_dict() for r in reports],
        "summary": summarize(reports),
    }


REPORT_CSV_FIELDS = (
    "id", "index", "params", "lhs", "rhs", "abs_err", "rel_err",
    "status", "terms_used", "method", "elapsed_ms",
)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, dict):
        return ";".join(f"{k}={fmt(x) if isinstance(x, float) else x}" for k, x in v.items())
    return str(v)


def reports_csv(reports: Sequence[VerificationReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_CSV_FIELDS)
    for r in reports:
        d = r.as_dict()
        d["index"] = r.index
        w.writerow([_cell(d[k]) for k in REPORT_CSV_FIELDS])
    return buf.getvalue()


def _short(x) -> str:
    return "-" if x is None else f"{x:.3e}"


def format_table(reports: Sequence[VerificationReport]) -> str:
    lines = [f"{'id':<22} {'params':<36} {'abs_err':>10} {'rel_err':>10}  status"]
    for r in reports:
        params = ", ".join(f"{k}={v:g}" for k, v in r.params.items()) or "-"
        note = ""
        for m in r.members:
            if not m["gating"]:
                note += f"  [{m['name']}: {m['status']}]"
        lines.append(
            f"{r.id:<22} {params:<36} {_short(r.abs_err):>10} {_short(r.rel_err):>10}  {r.status.value}{note}"
        )
        if r.diagnostic:
            lines.append(f"    {r.diagnostic}")
    s = summarize(reports)
    lines.append(f"{s['pass']} pass, {s['fail']} fail, {s['skipped']} skipped")
    return "\n".join(lines)


def _config(args) -> ToleranceConfig:
    kwargs = {}
    if getattr(args, "workers", None) is not None:
        kwargs["workers"] = args.workers
    if getattr(args, "tol_rel", None) is not None:
        kwargs["tol_rel"] = args.tol_rel
    try:
        return ToleranceConfig.from_env(**kwargs)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> int:
    cfg = _config(args)
    ids = None
    if not args.all:
        ids = args.id
        for i in ids:
            if i not in CATALOG:
                raise UsageError(str(UnknownIdentityError(i)))
    reports = verify_all(cfg, ids=ids)
    print(format_table(reports))
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(to_json(report_document(reports, cfg)) + "\n")
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(reports_csv(reports))
    return EXIT_OK if summarize(reports)["fail"] == 0 else EXIT_FAIL


def cmd_coeff(args) -> int:
    if args.family in ("cg", "dougall") and args.nu is None:
        raise UsageError(f"--nu is required for family {args.family!r}")
    if args.m_max < 0:
        raise UsageError("--m-max must be nonnegative")
    rows = coefficient_rows(args.family, args.nu, args.m_max)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("m", "n_degree", "coefficient"))
    for m, n, c in rows:
        w.writerow((m, n, fmt(c)))
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def moment_oracle(n: int, kind: int, tol: float = 1e-12) -> float:
    if kind == 1:
        def w(x):
            return x**n
    else:
        def w(x):
            return (x * (1.0 - x)) ** (n - 1)
    r = tanh_sinh(lambda x: w(x) * elliptic_K(x) * elliptic_K_complement(x), 0.0, 1.0, tol)
    return r.value


def cmd_moment(args) -> int:
    n, kind = args.n, args.kind
    if n < 0:
        raise UsageError("--n must be nonnegative")
    if kind == 2 and n < 1:
        raise UsageError("kind 2 moments need n >= 1")
    value = moment_series_1(n) if kind == 1 else moment_series_2(n)
    print(f"series     {fmt(value)}")
    if args.oracle:
        q = moment_oracle(n, kind)
        print(f"quadrature {fmt(q)}")
        print(f"difference {fmt(value - q)}")
    return EXIT_OK


def cmd_list(args) -> int:
    for rec in CATALOG.values():
        print(f"{rec.id:<22} {len(rec.param_grid):>3}  {rec.description}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fllab", description="Verify Fourier-Legendre and hypergeometric identities.")
    p.add_argument("--version", action="version", version=f"fllab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="check catalog identities")
    sel = v.add_mutually_exclusive_group(required=True)
    sel.add_argument("--all", action="store_true", help="every catalog record")
    sel.add_argument("--id", action="append", metavar="ID", help="record id (repeatable)")
    v.add_argument("--tol-rel", type=float, help="force one relative tolerance on every record")
    v.add_argument("--json", metavar="PATH", help="write the JSON report here")
    v.add_argument("--csv", metavar="PATH", help="write a CSV report here")
    v.add_argument("--workers", type=int, help="worker threads (default: FLLAB_WORKERS or CPU count)")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("coeff", help="dump FL coefficients as CSV")
    c.add_argument("--family", required=True, choices=("cg", "dougall", "k"))
    c.add_argument("--nu", type=float)
    c.add_argument("--m-max", type=int, required=True)
    c.add_argument("--csv", metavar="PATH")
    c.set_defaults(func=cmd_coeff)

    m = sub.add_parser("moment", help="K(x)K(1-x) moments from the finite sums")
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--kind", type=int, choices=(1, 2), default=1)
    m.add_argument("--oracle", action="store_true", help="also integrate by tanh-sinh")
    m.set_defaults(func=cmd_moment)

    ls = sub.add_parser("list", help="list catalog ids")
    ls.set_defaults(func=cmd_list)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"fllab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, FLLabError, OSError) as exc:
        print(f"fllab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
