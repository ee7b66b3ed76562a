"""Command-line harness: configuration, orchestration, report emission.

Reports are JSON (default) or CSV.  The JSON layout keeps a byte-stable
"comparable" section -- config, fibers, summary -- and quarantines wall
clock data in a separate "timings" section, so identical configurations
produce identical comparable bytes, serial or parallel.

Exit codes: 0 all assertions pass (skips and reported no-witness results
are not failures), 1 some fiber failed (the first one is named on
stderr), 2 malformed configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import multiprocessing

from .cm import CMStructure, EISENSTEIN, GAUSSIAN, parse_endo
from .elliptic_curve import CurveSpec, parse_curve
from .errors import (
    CharacteristicDividesN,
    ConfigError,
    DeskScaleExceeded,
    NoWitnessFound,
    RibetjacError,
)
from .finite_field import DESK_SCALE_BOUND, FieldSpec, mult_order, parse_field
from .function_eval import weil_pairing
from . import invariants
from .ribet_section import (
    FiberReport,
    RibetConfig,
    scan_lifting,
    search_max_order_fiber,
    serialize_element,
    serialize_point,
    verify_fiber,
)

MODES = ("suite", "fiber", "scan", "remark3", "pairing-table")


@dataclass
class ExperimentConfig:
    field: str
    curve: str
    cm_kind: str            # "i" | "zeta"
    endo: str
    mode: str
    n: int | None = None
    n_max: int | None = None
    out: str = "json"
    out_file: str | None = None
    workers: int = 1
    max_size: int = DESK_SCALE_BOUND

    def as_dict(self):
        return {
            "field": self.field, "curve": self.curve, "cm": self.cm_kind,
            "endo": self.endo, "mode": self.mode, "n": self.n,
            "n_max": self.n_max, "workers": self.workers,
            "max_size": self.max_size,
        }


def _kind_of(flag: str) -> str:
    if flag == "i":
        return GAUSSIAN
    if flag == "zeta":
        return EISENSTEIN
    raise ConfigError(f"--cm must be 'i' or 'zeta', got {flag!r}")


def build_context(config: ExperimentConfig, field: FieldSpec | None = None):
    """Construct (curve, cm, ribet config) from literals; ConfigError on bad input."""
    try:
        kind = _kind_of(config.cm_kind)
        if field is None:
            field = parse_field(config.field, max_size=config.max_size)
        curve = parse_curve(config.curve, field, max_size=config.max_size)
        cm = CMStructure(curve, kind)
        a = parse_endo(config.endo, kind)
        rcfg = RibetConfig(cm, a)
    except (ValueError, RibetjacError) as exc:
        raise ConfigError(str(exc)) from exc
    return curve, cm, rcfg


def auto_extend_field(p: int, curve_literal: str, requirement: str, n: int,
                      max_size: int = DESK_SCALE_BOUND) -> FieldSpec:
    """Smallest extension of F_p meeting a torsion requirement.

    requirement is 'point-of-order-n' or 'full-n-torsion'; degrees are
    scanned m = 1, 2, 3, ... with the deterministic modulus choice, so the
    answer never depends on run order.
    """
    if requirement not in ("point-of-order-n", "full-n-torsion"):
        raise ConfigError(f"unknown requirement {requirement!r}")
    if math.gcd(n, p) != 1:
        raise CharacteristicDividesN(
            f"no extension of F_{p} can satisfy n = {n}")
    m = 0
    while True:
        m += 1
        if p**m > max_size:
            raise DeskScaleExceeded(
                f"no field of size <= {max_size} satisfies "
                f"{requirement} for n = {n}")
        spec = FieldSpec(p, m, max_size=max_size)
        curve = parse_curve(curve_literal, spec, max_size=max_size)
        st = curve.structure()
        if st.d1 is not None:
            ok = (st.d2 % n == 0 if requirement == "point-of-order-n"
                  else st.d1 % n == 0)
        elif requirement == "point-of-order-n":
            ok = bool(curve.find_points_of_order(n))
        else:
            ok = curve.count_torsion(n) == n * n
        if ok:
            return spec


# -- parallel scan support ---------------------------------------------------

_WORKER_CFG = None

def _worker_init(config: ExperimentConfig):
    global _WORKER_CFG
    _, _, rcfg = build_context(config)
    _WORKER_CFG = rcfg

def _worker_verify(task):
    n, x_idx, y_idx = task
    rcfg = _WORKER_CFG
    curve = rcfg.curve
    spec = curve.field
    q = curve.point(spec.from_index(x_idx), spec.from_index(y_idx))
    return _labelled_verify(rcfg, q, n)


def _labelled_verify(rcfg: RibetConfig, q, n) -> FiberReport:
    if not rcfg.degree_condition(n):
        return FiberReport(field=rcfg.curve.field.literal(), n=n,
                           status="skipped", q=serialize_point(q),
                           degree_condition=False,
                           detail="degree condition fails")
    try:
        return verify_fiber(rcfg, q)
    except (RibetjacError, AssertionError) as exc:
        return FiberReport(field=rcfg.curve.field.literal(), n=n,
                           status="failed", q=serialize_point(q),
                           degree_condition=True, detail=str(exc))


def run_scan(config: ExperimentConfig, rcfg: RibetConfig) -> list[FiberReport]:
    n_max = config.n_max
    if n_max is None:
        raise ConfigError("scan mode needs --n-max")
    if config.workers <= 1:
        return scan_lifting(rcfg, n_max)
    curve = rcfg.curve
    tasks = []
    for n in range(3, n_max + 1):
        for q in curve.find_points_of_order(n):
            tasks.append((n, q.x.index(), q.y.index()))
    ctx = multiprocessing.get_context("fork")
    with ProcessPoolExecutor(max_workers=config.workers, mp_context=ctx,
                             initializer=_worker_init,
                             initargs=(config,)) as pool:
        reports = list(pool.map(_worker_verify, tasks, chunksize=8))
    reports.sort(key=FiberReport.key)
    return reports


# -- mode runners -------------------------------------------------------------

def _fiber_summary(reports: list[FiberReport]) -> dict:
    return {
        "fibers_total": len(reports),
        "fibers_ord_n2": sum(1 for r in reports
                             if r.status == "ok" and r.ord_beta == r.n * r.n),
        "fibers_ord_lt_n2": sum(1 for r in reports
                                if r.status == "ok" and r.ord_beta < r.n * r.n),
        "failures": sum(1 for r in reports if r.status == "failed"),
    }


def run(config: ExperimentConfig):
    """Dispatch one experiment; returns (exit_code, report dict)."""
    t0 = time.perf_counter()
    report: dict = {"config": config.as_dict()}
    timings: dict = {}
    code = 0

    if config.mode == "suite":
        _, cm, rcfg = build_context(config)
        checks = invariants.run_all(cm)
        report["checks"] = [
            {"name": c.name, "passed": c.passed, "detail": c.detail}
            for c in checks]
        report["summary"] = {
            "checks_total": len(checks),
            "failures": sum(1 for c in checks if not c.passed),
        }
        if report["summary"]["failures"]:
            code = 1
            first = next(c for c in checks if not c.passed)
            print(f"FAILED: {first.name}", file=sys.stderr)

    elif config.mode == "fiber":
        if config.n is None:
            raise ConfigError("fiber mode needs --n")
        base = parse_field(config.field, max_size=config.max_size)
        spec = auto_extend_field(base.p, config.curve, "point-of-order-n",
                                 config.n, config.max_size)
        _, _, rcfg = build_context(config, field=spec)
        pts = rcfg.curve.find_points_of_order(config.n)
        r = _labelled_verify(rcfg, pts[0], config.n)
        report["fibers"] = [r.comparable()]
        report["summary"] = _fiber_summary([r])
        timings["fibers"] = {str(r.key()): r.elapsed}
        if r.status == "failed":
            code = 1
            print(f"FAILED fiber: field={r.field} n={r.n} q={r.q}",
                  file=sys.stderr)

    elif config.mode == "scan":
        _, _, rcfg = build_context(config)
        reports = run_scan(config, rcfg)
        report["fibers"] = [r.comparable() for r in reports]
        report["summary"] = _fiber_summary(reports)
        timings["fibers"] = {str(r.key()): r.elapsed for r in reports}
        if report["summary"]["failures"]:
            code = 1
            first = next(r for r in reports if r.status == "failed")
            print(f"FAILED fiber: field={first.field} n={first.n} "
                  f"q={first.q}: {first.detail}", file=sys.stderr)

    elif config.mode == "remark3":
        if config.n is None:
            raise ConfigError("remark3 mode needs --n")
        base = parse_field(config.field, max_size=config.max_size)
        spec = auto_extend_field(base.p, config.curve, "full-n-torsion",
                                 config.n, config.max_size)
        _, _, rcfg = build_context(config, field=spec)
        try:
            r = search_max_order_fiber(rcfg, config.n)
            report["fibers"] = [r.comparable()]
            report["summary"] = _fiber_summary([r])
            timings["fibers"] = {str(r.key()): r.elapsed}
        except NoWitnessFound as exc:
            report["fibers"] = []
            report["summary"] = {"fibers_total": 0, "fibers_ord_n2": 0,
                                 "fibers_ord_lt_n2": 0, "failures": 0,
                                 "no_witness": str(exc)}

    elif config.mode == "pairing-table":
        if config.n is None:
            raise ConfigError("pairing-table mode needs --n")
        base = parse_field(config.field, max_size=config.max_size)
        spec = auto_extend_field(base.p, config.curve, "full-n-torsion",
                                 config.n, config.max_size)
        curve, _, _ = build_context(config, field=spec)
        n = config.n
        P1, P2 = curve.torsion_basis(n)
        basis = [P1, P2]
        table = [[serialize_element(weil_pairing(curve, n, A, B))
                  for B in basis] for A in basis]
        w = weil_pairing(curve, n, P1, P2)
        report["pairing_table"] = {
            "field": spec.literal(),
            "n": n,
            "basis": [serialize_point(P) for P in basis],
            "table": table,
            "order_of_e(P1,P2)": mult_order(w),
            "nondegenerate": mult_order(w) == n,
        }
        report["summary"] = {"failures": 0 if mult_order(w) == n else 1}
        if report["summary"]["failures"]:
            code = 1

    else:
        raise ConfigError(f"unknown mode {config.mode!r}")

    timings["total"] = time.perf_counter() - t0
    return code, {"comparable": report, "timings": timings}


def render_json(full_report: dict) -> str:
    return json.dumps(full_report, sort_keys=True, indent=2)


def render_csv(full_report: dict) -> str:
    """Flatten fiber rows; coefficient vectors join with ';'."""
    fibers = full_report["comparable"].get("fibers", [])
    cols = ["field", "n", "status", "q", "degree_condition", "projection",
            "lambda", "ord_lambda", "ord_beta", "pairing_value", "sigma",
            "detail"]

    def flat(v):
        if v is None:
            return ""
        if isinstance(v, list):
            return ";".join(flat(x) for x in v)
        return str(v)

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(cols)
    for row in fibers:
        writer.writerow([flat(row.get(c)) for c in cols])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ribetjac",
        description="Exact torsion experiments on generalized Jacobians of "
                    "one-node curves over finite fields.")
    ap.add_argument("--field", required=True,
                    help="field literal, e.g. 13 or 13^2:1,0,1")
    ap.add_argument("--curve", required=True, help="curve literal 'a4,a6'")
    ap.add_argument("--cm", required=True, choices=["i", "zeta"],
                    help="CM kind: i (y^2=x^3+a4x) or zeta (y^2=x^3+a6)")
    ap.add_argument("--endo", default="i",
                    help="endomorphism literal, e.g. 'i' or '1+2*i'")
    ap.add_argument("--mode", required=True, choices=MODES)
    ap.add_argument("--n", type=int, default=None)
    ap.add_argument("--n-max", type=int, default=None)
    ap.add_argument("--out", choices=["json", "csv"], default="json")
    ap.add_argument("--out-file", default=None)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--max-size", type=int, default=DESK_SCALE_BOUND)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = ExperimentConfig(
        field=args.field, curve=args.curve, cm_kind=args.cm, endo=args.endo,
        mode=args.mode, n=args.n, n_max=args.n_max, out=args.out,
        out_file=args.out_file, workers=args.workers, max_size=args.max_size)
    try:
        code, full_report = run(config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (DeskScaleExceeded, CharacteristicDividesN) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    text = (render_json(full_report) if config.out == "json"
            else render_csv(full_report))
    if config.out_file:
        with open(config.out_file, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
