"""Command line front end: verify one identity, or run a suite file.

Exit codes: 0 all results as expected, 1 a verification failed (or a
suite case did not match its expectation), 2 usage errors and cases
that could not be run at all.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Tuple

from .catalog import IdentityCase, VerificationReport, registered_ids, validate_case, verify
from .series import INF, HalfInt, SpecError


def _half_token(h) -> object:
    """HalfInt -> JSON value: plain int in whole q-units, else 'num/2'."""
    if h is INF:
        return "inf"
    if h is None:
        return None
    return h.num // 2 if h.is_integral else f"{h.num}/2"


def _parse_half(tok) -> Optional[HalfInt]:
    if tok is None:
        return None
    return HalfInt.parse(tok)


def _report_dict(rep: VerificationReport) -> dict:
    m = rep.first_mismatch
    return {
        "id": rep.case.id,
        "params": {k: _plain(v) for k, v in rep.case.params.items()},
        "order": _half_token(rep.case.order),
        "status": rep.status,
        "compared_order": _half_token(rep.compared_order),
        "first_mismatch": None
        if m is None
        else {
            "exp": _half_token(m.exp),
            "z_exp": _half_token(m.z_exp),
            "lhs": str(m.lhs),
            "rhs": str(m.rhs),
        },
        "tuple_count": rep.tuple_count,
        "elapsed_ms": round(rep.elapsed * 1000.0, 3),
        "detail": rep.detail,
    }


def _plain(v):
    if isinstance(v, HalfInt):
        return _half_token(v)
    if isinstance(v, (frozenset, set, tuple)):
        return sorted(v) if isinstance(v, (frozenset, set)) else list(v)
    return v


def _report_line(rep: VerificationReport) -> str:
    pbits = " ".join(f"{k}={_plain(v)}" for k, v in rep.case.params.items() if v is not None)
    head = rep.case.id + (f" {pbits}" if pbits else "")
    if rep.status == "error":
        return f"{head}: ERROR: {rep.detail}"
    co = rep.compared_order
    where = "exactly" if co is INF else f"below q^{co}"
    if rep.status == "pass":
        extra = f", {rep.tuple_count} tuples" if rep.tuple_count else ""
        return f"{head}: PASS ({where}{extra}, {rep.elapsed:.2f}s)"
    m = rep.first_mismatch
    at = f"q^{m.exp}" + (f" z^{m.z_exp}" if m.z_exp is not None else "")
    return f"{head}: FAIL at {at}: lhs={m.lhs} rhs={m.rhs} ({rep.detail})"


def _case_from_args(args) -> IdentityCase:
    params = {}
    for name in ("k", "r", "j", "n", "s_max"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    for name in ("a", "c", "z_exp"):
        v = getattr(args, name)
        if v is not None:
            params[name] = v
    if args.z_sign is not None:
        params["z_sign"] = args.z_sign
    if args.placement is not None:
        try:
            params["placement"] = [int(t) for t in args.placement.split(",") if t.strip()]
        except ValueError:
            raise SpecError(f"bad placement {args.placement!r}; expected e.g. 1,2,4")
    if args.criterion is not None:
        params["criterion"] = args.criterion
    return IdentityCase(args.id, params, _parse_half(args.order))


def _cmd_verify(args) -> int:
    try:
        case = _case_from_args(args)
    except (SpecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    rep = verify(case)
    if args.format == "json":
        print(json.dumps(_report_dict(rep), indent=2))
    else:
        print(_report_line(rep))
    return {"pass": 0, "fail": 1}.get(rep.status, 2)


def _run_suite_case(job: Tuple[int, str, dict, Optional[str]]) -> Tuple[int, dict]:
    idx, id, params, order_tok = job
    try:
        case = IdentityCase(id, params, _parse_half(order_tok))
        rep = verify(case)
        out = _report_dict(rep)
    except Exception as e:  # a worker must never take down the pool
        out = {"id": id, "params": params, "order": order_tok, "status": "error",
               "compared_order": None, "first_mismatch": None, "tuple_count": 0,
               "elapsed_ms": 0.0, "detail": str(e)}
    return idx, out


def _cmd_suite(args) -> int:
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
        cases = cfg["cases"]
        if not isinstance(cases, list):
            raise ValueError("cases must be a list")
    except (OSError, ValueError, KeyError) as e:
        print(f"error: cannot read suite config {args.config}: {e}", file=sys.stderr)
        return 2

    default_order = cfg.get("default_order")
    workers = args.jobs if args.jobs is not None else cfg.get("parallelism", 1)
    output_path = cfg.get("output_path")
    jobs: List[Tuple[int, str, dict, Optional[str]]] = []
    expects: List[str] = []
    try:
        if not isinstance(workers, int) or workers < 1:
            raise ValueError(f"parallelism must be a positive integer, got {workers!r}")
        for idx, c in enumerate(cases):
            c = dict(c)
            id = c.pop("id")
            expect = c.pop("expect", "pass")
            if expect not in ("pass", "fail"):
                raise ValueError(f"case {idx}: expect must be 'pass' or 'fail', got {expect!r}")
            order = c.pop("order", default_order)
            order_tok = None if order is None else str(order)
            # every descriptor must name a registered id with valid params
            try:
                validate_case(IdentityCase(id, c, _parse_half(order_tok)))
            except (SpecError, ValueError) as e:
                raise ValueError(f"case {idx}: {e}")
            jobs.append((idx, id, c, order_tok))
            expects.append(expect)
    except (KeyError, ValueError, TypeError) as e:
        print(f"error: bad suite config: {e}", file=sys.stderr)
        return 2

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_suite_case, jobs))
    else:
        results = [_run_suite_case(j) for j in jobs]

    by_idx = {idx: out for idx, out in results}
    order_key = sorted(range(len(jobs)), key=lambda i: (jobs[i][1], i))
    rows = []
    bad = 0
    for i in order_key:
        out = dict(by_idx[i])
        out["expect"] = expects[i]
        out["as_expected"] = out["status"] == expects[i]
        bad += 0 if out["as_expected"] else 1
        rows.append(out)

    if args.format == "json":
        doc = json.dumps({"cases": rows, "unexpected": bad}, indent=2)
    else:
        lines = []
        for out in rows:
            pbits = " ".join(f"{k}={v}" for k, v in out["params"].items() if v is not None)
            head = out["id"] + (f" {pbits}" if pbits else "")
            mark = "ok" if out["as_expected"] else "UNEXPECTED"
            line = f"{head}: {out['status'].upper()} (expected {out['expect']}) [{mark}]"
            if out["status"] == "error":
                line += f" -- {out['detail']}"
            elif out["status"] == "fail" and out["first_mismatch"]:
                m = out["first_mismatch"]
                line += f" -- first mismatch at q^{m['exp']}: lhs={m['lhs']} rhs={m['rhs']}"
            lines.append(line)
        lines.append(f"suite: {len(rows)} cases, {len(rows) - bad} as expected, {bad} unexpected")
        doc = "\n".join(lines)
    print(doc)
    if output_path:
        try:
            with open(output_path, "w") as fh:
                fh.write(doc + "\n")
        except OSError as e:
            print(f"error: cannot write report to {output_path}: {e}", file=sys.stderr)
            return 2
    return 0 if bad == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qident", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="verify one identity")
    v.add_argument("--id", required=True, choices=registered_ids(), metavar="ID",
                   help="identity id; one of " + ", ".join(registered_ids()))
    v.add_argument("--k", type=int)
    v.add_argument("--r", type=int)
    v.add_argument("--j", type=int)
    v.add_argument("--n", type=int)
    v.add_argument("--s-max", dest="s_max", type=int)
    v.add_argument("--a", help="half-integer weight, e.g. 3 or 5/2")
    v.add_argument("--c", help="half-integer weight for the functional equation")
    v.add_argument("--z-sign", dest="z_sign", choices=("+", "-"))
    v.add_argument("--z-exp", dest="z_exp",
                   help="half-integer exponent of z, e.g. 1 or 1/2 (use --z-exp=-1/2 for negatives)")
    v.add_argument("--placement", help="comma separated positions, e.g. 1,2,4")
    v.add_argument("--criterion", choices=("consecutive", "bound"),
                   help="stabilization acceptance rule for the limit ids")
    v.add_argument("--order", help="truncation order: whole q-units or num/2")
    v.add_argument("--format", choices=("text", "json"), default="text")
    v.set_defaults(func=_cmd_verify)

    s = sub.add_parser("suite", help="run a JSON suite of cases")
    s.add_argument("config", help="JSON file: {default_order?, parallelism?, output_path?, "
                                  "cases: [{id, ..., order?, expect?}]}")
    s.add_argument("--jobs", type=int, default=None,
                   help="worker processes (overrides the config's parallelism; default 1)")
    s.add_argument("--format", choices=("text", "json"), default="text")
    s.set_defaults(func=_cmd_suite)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
