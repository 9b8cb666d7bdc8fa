"""Command-line harness: ``verify``, ``reconstruct`` and ``check``.

Exit codes: 0 pass, 1 a check or verification failed, 2 usage or input error.
Reports are canonical JSON; only the ``timing`` field varies between runs.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time
from typing import Any, Sequence

from .derivation import MissingValue
from .mapalg import (
    OmegaMap, PointNotInner, SpatialDerivation, is_pointwise_central,
    oracle_from_spatial, reconstruct_local_spatial, reconstruct_two_local_spatial,
)
from .matrix import MatrixError, NotSkew, is_skew_adjoint
from .reconstruct import (
    InconsistentOracle, VerificationFailed, is_central_discrepancy, oracle_from_inner,
    oracle_from_table, reconstruct_two_local,
)
from .ring import RingError, RingId, make_ring, parse_ring_id
from .sampling import random_hermitian, trial_rng
from .serialize import (
    ParseError, dumps, matrix_from_json, matrix_to_json, omega_from_json, omega_to_json,
    table_from_json,
)
from .solver import UnsupportedRing, check_local, check_two_local
from .suites import SUITES, run_trial

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_range(text: str) -> list[int]:
    """``3``, ``2..5``, ``2-5`` or ``2,3,5``."""
    s = text.replace(" ", "")
    m = re.fullmatch(r"(\d+)(?:\.\.|-)(\d+)", s)
    if m:
        lo, hi = int(m.group(1)), int(m.group(2))
        if lo > hi:
            raise UsageError(f"empty range {text!r}")
        return list(range(lo, hi + 1))
    if re.fullmatch(r"\d+(,\d+)*", s):
        return sorted(set(int(v) for v in s.split(",")))
    raise UsageError(f"bad size {text!r}")


def _ring(text: str, need_field: bool) -> RingId:
    try:
        ring = parse_ring_id(text)
        make_ring(ring)
    except (ValueError, RingError) as exc:
        raise UsageError(f"bad ring {text!r}: {exc}") from None
    if need_field and not ring.is_field:
        raise UsageError("solver requires a field")
    return ring


# verify

def cmd_verify(args) -> tuple[int, dict]:
    suite = SUITES[args.suite]
    ring = _ring(args.ring, need_field=True)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    ns = parse_range(args.n) if args.n is not None else None
    skipped: list[int] = []
    if suite.fixed_n is not None:
        if ns is not None and ns != [suite.fixed_n]:
            raise UsageError(f"{suite.name} runs on n = {suite.fixed_n} only")
        ns = [suite.fixed_n]
    else:
        ns = ns or [3]
        skipped = [n for n in ns if n < suite.min_n]
        ns = [n for n in ns if n >= suite.min_n]
        if not ns:
            raise UsageError(f"{suite.name} needs n >= {suite.min_n}")
    omegas = parse_range(args.omega) if suite.uses_omega else [None]
    if suite.uses_omega and min(omegas) < 1:
        raise UsageError("--omega must be at least 1")
    trials = [args.trial] if args.trial is not None else range(args.trials)

    outcomes, failures, configs = [], [], []
    for n in ns:
        for m in omegas:
            passed = failed = 0
            for t in trials:
                rng = trial_rng(args.seed, t, suite.name, ring, n, m)
                fail = run_trial(suite, ring, n, m or 1, rng)
                outcomes.append({"n": n, "omega": m, "trial": t, "status": "fail" if fail else "pass"})
                if fail:
                    failed += 1
                    replay = ["verify", "--suite", suite.name, "--ring", str(ring), "--n", str(n),
                              "--seed", str(args.seed), "--trial", str(t)]
                    if m is not None:
                        replay += ["--omega", str(m)]
                    failures.append({"n": n, "omega": m, "trial": t, "replay": replay, **fail})
                else:
                    passed += 1
            configs.append({"n": n, "omega": m, "trials": passed + failed, "passed": passed, "failed": failed})
    status = "fail" if failures else "pass"
    report = {
        "command": "verify",
        "config": {"suite": suite.name, "ring": str(ring), "n": ns, "omega": omegas if suite.uses_omega else None,
                   "trials": len(trials), "seed": args.seed, "trial": args.trial},
        "status": status,
        "summary": {"trials": len(outcomes), "passed": len(outcomes) - len(failures), "failed": len(failures)},
        "configurations": configs,
        "skipped_n": skipped,
        "outcomes": outcomes,
        "failures": failures,
    }
    return (EXIT_FAIL if failures else EXIT_PASS), report


def _csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    cfg = report["config"]
    w.writerow(["suite", "ring", "n", "omega", "trials", "passed", "failed", "status"])
    for c in report["configurations"]:
        w.writerow([cfg["suite"], cfg["ring"], c["n"], "" if c["omega"] is None else c["omega"],
                    c["trials"], c["passed"], c["failed"], "fail" if c["failed"] else "pass"])
    return buf.getvalue()


# reconstruct

def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _failure(exc: Exception, obj: Any) -> dict:
    err: dict = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, VerificationFailed):
        # spatial failures carry the probe's value at the failing point
        err.update(point=exc.point, probe=matrix_to_json(exc.probe),
                   expected=matrix_to_json(exc.expected), actual=matrix_to_json(exc.actual))
    if isinstance(exc, PointNotInner):
        err["point"] = exc.t
    return {"status": "fail", "error": err, "input": obj}


def _probes_matrix(ring, n, count, seed):
    rng = trial_rng(seed, 0, "probes", ring, n)
    return [random_hermitian(rng, ring, n) for _ in range(count)]


def _probes_omega(ring, n, m, count, seed):
    rng = trial_rng(seed, 0, "probes", ring, n, m)
    return [OmegaMap(tuple(random_hermitian(rng, ring, n) for _ in range(m))) for _ in range(count)]


def cmd_reconstruct(args) -> tuple[int, dict]:
    obj = _load(args.input)
    body = obj.get("implementer", obj) if isinstance(obj, dict) else obj
    report: dict = {"command": "reconstruct", "mode": args.mode, "seed": args.seed, "probes": args.probes}
    try:
        if args.mode == "matrix":
            if isinstance(body, dict) and "values" in body:
                values, witnesses = table_from_json(body)
                if not values:
                    raise UsageError("empty value table")
                oracle = oracle_from_table(values, witnesses)
                _ring(str(oracle.ring), need_field=False)
                z, probes = None, [x for x, _ in values]
            else:
                z = matrix_from_json(body)
                if not is_skew_adjoint(z):
                    raise UsageError("implementer must be skew-adjoint")
                oracle = oracle_from_inner(z)
                probes = _probes_matrix(z.ring, z.n, args.probes, args.seed)
            res = reconstruct_two_local(oracle, probes, check_axioms=z is not None)
            report.update(status="pass", ring=str(oracle.ring), n=oracle.n, abar=matrix_to_json(res.abar),
                          anchor=list(res.anchor), gauge_offset=str(res.gauge_offset),
                          probes_checked=res.probes_checked, queries=res.queries,
                          axioms_ok=res.verification.ok if z is not None else None)
            if z is not None:
                report["central_discrepancy"] = is_central_discrepancy(res.abar, z)
        else:
            z = omega_from_json(body)
            _ring(str(z.ring), need_field=args.mode == "omega-local")
            if not all(is_skew_adjoint(p) for p in z.points):
                raise UsageError("implementer must be skew-adjoint at every point")
            probes = _probes_omega(z.ring, z.n, z.omega_size, args.probes, args.seed)
            if args.mode == "omega-2local":
                res = reconstruct_two_local_spatial(oracle_from_spatial(z), None, probes)
            else:
                res = reconstruct_local_spatial(SpatialDerivation(z), z.omega_size, z.n, z.ring, probes)
            report.update(status="pass", ring=str(z.ring), n=z.n, omega=z.omega_size,
                          abar=omega_to_json(res.abar), gauge_offsets=[str(g) for g in res.gauge_offsets],
                          probes_checked=res.probes_checked,
                          central_discrepancy=is_pointwise_central(res.abar, z))
    except (ParseError, MatrixError, NotSkew, RingError, UnsupportedRing, MissingValue, KeyError) as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from None
    except (VerificationFailed, InconsistentOracle, PointNotInner) as exc:
        report.update(_failure(exc, obj))
        return EXIT_FAIL, report
    if report.get("central_discrepancy") is False or report.get("axioms_ok") is False:
        report["status"] = "fail"
        return EXIT_FAIL, report
    return EXIT_PASS, report


# check

def cmd_check(args) -> tuple[int, dict]:
    obj = _load(args.input)
    try:
        values, _ = table_from_json(obj)
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    if not values:
        raise UsageError("empty value table")
    _ring(str(values[0][0].ring), need_field=True)
    report: dict = {"command": "check", "kind": args.kind, "ring": str(values[0][0].ring), "n": values[0][0].n}
    try:
        if args.kind == "2local":
            results = check_two_local(values)
            items = [{"x": matrix_to_json(r.x), "y": matrix_to_json(r.y), "witnessed": r.witnessed,
                      "witness": matrix_to_json(r.witness) if r.witness is not None else None} for r in results]
            ok = all(r.witnessed for r in results)
            report.update(pairs=items, witnessed=sum(r.witnessed for r in results),
                          failed=sum(not r.witnessed for r in results))
        else:
            rep = check_local(values)
            items = [{"x": matrix_to_json(p.x), "witnessed": p.witnessed,
                      "witness": matrix_to_json(p.witness) if p.witness is not None else None} for p in rep.points]
            ok = rep.ok
            report.update(points=items, witnessed=sum(p.witnessed for p in rep.points),
                          failed=sum(not p.witnessed for p in rep.points), linear_ok=rep.linear_ok,
                          linearity_failures=[[matrix_to_json(x), matrix_to_json(y)] for x, y in rep.linearity_failures])
    except (UnsupportedRing, MatrixError, ValueError) as exc:
        raise UsageError(f"{type(exc).__name__}: {exc}") from None
    report["status"] = "pass" if ok else "fail"
    return (EXIT_PASS if ok else EXIT_FAIL), report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="jordan2local", description="Exact checks of 2-local and local derivations on Hermitian matrices.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--output", help="write the report here instead of standard output")
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="run a randomized verification suite")
    v.add_argument("--suite", required=True, choices=sorted(SUITES))
    v.add_argument("--ring", default="rational")
    v.add_argument("--n", help="matrix size: 3, 2..5 or 2,4")
    v.add_argument("--omega", default="2", help="size of the finite set for map-algebra suites")
    v.add_argument("--trials", type=int, default=20)
    v.add_argument("--trial", type=int, help="run only this trial index (replay)")
    common(v)

    r = sub.add_parser("reconstruct", help="recover the implementing element from a serialized input")
    r.add_argument("input", help="JSON file with an implementer, an oracle table or a map (- for stdin)")
    r.add_argument("--mode", choices=["matrix", "omega-2local", "omega-local"], default="matrix")
    r.add_argument("--probes", type=int, default=20, help="number of random probes")
    common(r)

    c = sub.add_parser("check", help="look for 2-local or local witnesses of a value table")
    c.add_argument("input", help="value table JSON (- for stdin)")
    c.add_argument("--kind", choices=["2local", "local"], default="2local")
    common(c)
    return p


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "reconstruct": cmd_reconstruct, "check": cmd_check}[args.command]
    start = time.perf_counter()
    try:
        code, report = handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "csv":
        if args.command == "verify":
            text = _csv(report)
        elif args.command == "check":
            text = f"kind,witnessed,failed,status\n{args.kind},{report['witnessed']},{report['failed']},{report['status']}\n"
        else:
            text = f"mode,status\n{args.mode},{report['status']}\n"
    else:
        report["timing"] = {"wall_seconds": round(time.perf_counter() - start, 6)}
        text = dumps(report) + "\n"
    _emit(text, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
