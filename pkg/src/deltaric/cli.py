"""Command line front end.

Exit codes: 0 success; 1 a bound is numerically violated; 2 malformed input,
usage or domain error; 3 instance breaks a required invariant; 4 the Einstein
hypothesis fails (nothing is asserted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import instances
from .config import load_config
from .curvature import classify_pointwise, gauss_curvature_tensor, mean_curvature, ricci_data
from .errors import DomainError, InvariantError, StructuralError
from .fuzz import FUZZ_HEADER, run_fuzz
from .instance_io import InstanceFormatError, load_instance, save_instance
from .verify import TheoremReport, check_theorem1, check_theorem2

EXIT_OK, EXIT_VIOLATED, EXIT_INPUT, EXIT_INVARIANT, EXIT_HYPOTHESIS = 0, 1, 2, 3, 4
SWEEP_HEADER = ["param", "delta", "bound", "slack", "equality_flag"]
FAMILIES = ("umbilical",)


def _fmt(x: float) -> str:
    return repr(float(x))


def _config(args):
    cfg = load_config(getattr(args, "config", None))
    return cfg.with_overrides(
        tol_einstein=getattr(args, "tol_einstein", None),
        restarts=getattr(args, "restarts", None),
        seed=getattr(args, "seed", None),
    )


def _load(path):
    try:
        return load_instance(path), None
    except OSError as exc:
        return None, (EXIT_INPUT, f"error: cannot read {path}: {exc.strerror}")
    except (InstanceFormatError, StructuralError) as exc:
        return None, (EXIT_INPUT, f"error: {path}: {exc}")
    except InvariantError as exc:
        return None, (EXIT_INVARIANT, f"error: {path}: invariant '{exc.invariant}' violated: {exc}")


def cmd_compute(args, out) -> int:
    inst, err = _load(args.path)
    if err:
        print(err[1], file=sys.stderr)
        return err[0]
    cfg = _config(args)
    rd = ricci_data(gauss_curvature_tensor(inst))
    mc = mean_curvature(inst)
    print(f"n = {inst.n}", file=out)
    print(f"m = {inst.m}", file=out)
    print(f"c = {_fmt(inst.c)}", file=out)
    print(f"tau = {_fmt(rd.tau)}", file=out)
    print("ric_eigenvalues = " + " ".join(_fmt(v) for v in rd.eigenvalues), file=out)
    print(f"einstein_defect = {_fmt(rd.einstein_defect)}", file=out)
    print(f"quasi_einstein_defect = {_fmt(rd.quasi_einstein_defect)}", file=out)
    print(f"einstein = {str(rd.is_einstein(cfg.tol_einstein)).lower()}", file=out)
    print(f"H = {_fmt(mc.H)}", file=out)
    print(f"class = {classify_pointwise(inst, cfg).value}", file=out)
    return EXIT_OK


def exit_code_for(rep: TheoremReport, tol_eq: float) -> int:
    if not rep.hypothesis_ok:
        return EXIT_HYPOTHESIS
    if rep.slack < -tol_eq:
        return EXIT_VIOLATED
    return EXIT_OK


def render_report(rep: TheoremReport) -> dict:
    d = {
        "theorem": rep.theorem.value,
        "q": rep.q,
        "hypothesis_ok": rep.hypothesis_ok,
        "einstein_defect": rep.einstein_defect,
        "H": rep.H,
        "lhs": rep.lhs,
        "rhs": rep.rhs,
        "slack": rep.slack,
        "equality": rep.equality,
        "sup_ric": rep.delta.sup_ric,
        "k_q_inf": rep.delta.k_q_inf,
        "restarts_used": rep.delta.restarts_used,
        "converged": rep.delta.converged,
    }
    if rep.certificate is not None:
        cert = rep.certificate
        d["certificate"] = {
            "case": cert.case.value,
            "residual": cert.residual,
            "block_traces": cert.block_traces.tolist(),
            "mu": None if cert.mu is None else cert.mu.tolist(),
        }
    elif rep.certificate_failure:
        d["certificate_failure"] = rep.certificate_failure
    return d


def cmd_check(args, out) -> int:
    inst, err = _load(args.path)
    if err:
        print(err[1], file=sys.stderr)
        return err[0]
    cfg = _config(args)
    try:
        if args.theorem == 1:
            rep = check_theorem1(inst, cfg)
        else:
            if args.q is None:
                raise DomainError("theorem 2 needs --q")
            rep = check_theorem2(inst, args.q, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    d = render_report(rep)
    if args.json:
        print(json.dumps(d, indent=2), file=out)
    else:
        for key, value in d.items():
            if key == "certificate":
                print(f"certificate: {value['case']} (residual {value['residual']:.3e})", file=out)
            elif isinstance(value, bool):
                print(f"{key}: {str(value).lower()}", file=out)
            elif isinstance(value, float):
                print(f"{key}: {_fmt(value)}", file=out)
            else:
                print(f"{key}: {value}", file=out)
        if not rep.hypothesis_ok:
            print("note: Einstein hypothesis fails; no bound is asserted", file=out)
    return exit_code_for(rep, cfg.tol_eq)


def cmd_fuzz(args, out) -> int:
    if args.trials < 1:
        print("error: --trials must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    summary = run_fuzz(args.lemma, args.trials, args.seed)
    print(summary.line(), file=out)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(FUZZ_HEADER)
            w.writerows(summary.rows)
    return EXIT_OK


def parse_range(text: str):
    try:
        start, stop, num = text.split(",")
        start, stop, num = float(start), float(stop), int(num)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START,STOP,NUM, got {text!r}") from None
    if num < 0:
        raise argparse.ArgumentTypeError("NUM must be >= 0")
    return start, stop, num


def sweep_rows(family: str, start: float, stop: float, num: int, theorem: int, q, n: int, m: int, c: float, cfg):
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
    rows = []
    for lam in np.linspace(start, stop, num):
        lam = float(lam)
        inst = instances.totally_geodesic(n, m, c) if lam == 0 else instances.umbilical_non_j(n, m, c, lam)
        rep = check_theorem1(inst, cfg) if theorem == 1 else check_theorem2(inst, q, cfg)
        rows.append([_fmt(lam), _fmt(rep.lhs), _fmt(rep.rhs), _fmt(rep.slack), str(int(rep.equality))])
    return rows


def cmd_sweep(args, out) -> int:
    cfg = _config(args)
    m = args.m if args.m is not None else args.n + 1
    q = args.q if args.q is not None else 1
    start, stop, num = args.param_range
    try:
        rows = sweep_rows(args.family, start, stop, num, args.theorem, q, args.n, m, args.c, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    w.writerows(rows)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_generate(args, out) -> int:
    try:
        if args.family == "totally_geodesic":
            inst = instances.totally_geodesic(args.n, args.m, args.c)
        elif args.family == "umbilical":
            inst = instances.umbilical_non_j(args.n, args.m, args.c, args.param)
        else:
            inst = instances.random_totally_real(args.n, args.m, args.c, args.param, args.seed)
    except (DomainError, StructuralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    save_instance(inst, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="deltaric",
        description="Curvature invariants and delta_q^Ric bounds for totally real submanifolds.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file (default: $DELTARIC_CONFIG)")
    common.add_argument("--tol-einstein", type=float)
    common.add_argument("--restarts", type=int)
    common.add_argument("--seed", type=int)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("compute", parents=[common], help="intrinsic invariants of an instance file")
    s.add_argument("path")
    s.set_defaults(func=cmd_compute)

    s = sub.add_parser("check", parents=[common], help="check theorem 1 or 2 on an instance file")
    s.add_argument("path")
    s.add_argument("--theorem", type=int, choices=(1, 2), required=True)
    s.add_argument("--q", type=int)
    s.add_argument("--json", action="store_true", help="emit the report as JSON")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fuzz", help="random trials of the Cauchy step inequalities")
    s.add_argument("--lemma", type=int, choices=(33, 46), required=True)
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", help="optional CSV with one row per trial")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("sweep", parents=[common], help="slack along a one-parameter family, as CSV")
    s.add_argument("--family", required=True)
    s.add_argument("--param-range", type=parse_range, required=True, metavar="START,STOP,NUM")
    s.add_argument("--theorem", type=int, choices=(1, 2), default=1)
    s.add_argument("--q", type=int)
    s.add_argument("--n", type=int, default=4)
    s.add_argument("--m", type=int)
    s.add_argument("--c", type=float, default=0.0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("generate", help="write an instance file from a built-in family")
    s.add_argument("--family", choices=("totally_geodesic", "umbilical", "random"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--c", type=float, default=0.0)
    s.add_argument("--param", type=float, default=1.0, help="lambda (umbilical) or scale (random)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_generate)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
