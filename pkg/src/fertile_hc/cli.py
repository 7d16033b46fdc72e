"""Command-line entry point: solve, sweep, verify, oracle, sample.

Exit status is 0 on success, 1 when a verification or consistency check
fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Sequence

from .model import FiniteVolume, ModelParams, RootDegree, UnsupportedGraphError, preset_graph
from .phase import Scenario, default_grid, fmt, points_to_json, sweep, verify_theorem, write_csv
from .recursion import AGMPattern
from .solvers.common import SolutionLabel
from .solvers.rpoly import verify_R_factorization

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CONSISTENCY_TOL = 1e-10


class UsageError(Exception):
    pass


def _round12(obj):
    if isinstance(obj, float):
        return float(fmt(obj)) if math.isfinite(obj) else obj
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    return obj


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dump(obj) -> str:
    return json.dumps(_round12(obj), indent=2)


def _scenario(args) -> Scenario:
    name = args.scenario
    if name == "ti":
        return Scenario("ti-hinge" if args.graph == "hinge" else "ti-wand")
    if args.graph != "wand":
        raise UsageError(f"--scenario {name} is only defined for --graph wand")
    if name == "i3":
        if args.m is None:
            raise UsageError("--scenario i3 needs --m")
        return Scenario("i3", m=args.m, r=args.m)
    if name == "i4":
        if args.m is None or args.r is None:
            raise UsageError("--scenario i4 needs --m and --r")
        return Scenario("i4", m=args.m, r=args.r)
    if args.i is None:
        raise UsageError("--scenario wp needs --i")
    return Scenario("wp", i=args.i)


def _check_pattern(args, sc: Scenario) -> None:
    for flag, v in (("--m", sc.m), ("--r", sc.r)):
        if v is not None and not 0 <= v <= args.k:
            raise UsageError(f"{flag} must lie in 0..k")
    if sc.i is not None and not 1 <= sc.i <= args.k:
        raise UsageError("--i must lie in 1..k")


def cmd_solve(args) -> int:
    if args.lam is None:
        raise UsageError("solve needs --lambda")
    sc = _scenario(args)
    _check_pattern(args, sc)
    rep = sc.solve(args.k, args.lam)
    if args.format == "csv":
        from io import StringIO
        from .phase import PhasePoint
        buf = StringIO()
        write_csv([PhasePoint.from_report(rep)], buf)
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump(rep.to_dict()), args.out)
    return EXIT_OK


def cmd_sweep(args) -> int:
    sc = _scenario(args)
    _check_pattern(args, sc)
    if args.lambda_min is not None or args.lambda_max is not None:
        if args.lambda_min is None or args.lambda_max is None:
            raise UsageError("--lambda-min and --lambda-max go together")
        if not 0 < args.lambda_min < args.lambda_max:
            raise UsageError("need 0 < --lambda-min < --lambda-max")
        if args.points < 2:
            raise UsageError("--points must be at least 2")
        lo, hi = math.log10(args.lambda_min), math.log10(args.lambda_max)
        grid = [10 ** (lo + (hi - lo) * j / (args.points - 1)) for j in range(args.points)]
    else:
        crit = sc.critical_values(args.k)
        grid = default_grid(crit[0] if crit else 1.0)
    pts = sweep(sc, args.k, grid)
    if args.format == "json":
        _emit(_dump(json.loads(points_to_json(pts))), args.out)
    else:
        from io import StringIO
        buf = StringIO()
        write_csv(pts, buf)
        _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    tid = args.theorem.lower()
    if tid in ("rpoly", "r-poly"):
        kmax = args.k or 16
        reports = [verify_R_factorization(k, max(kmax, 2)) for k in range(2, kmax + 1)]
        ok = all(r.passed for r in reports)
        payload = {"theorem": "rpoly", "anchor": "Theorem 2", "passed": ok,
                   "checks": [{"k": r.k, "passed": r.passed, "violations": r.violations}
                              for r in reports]}
        if args.format == "json":
            _emit(_dump(payload), args.out)
        else:
            lines = [f"[Theorem 2] R-polynomial factorisation k=2..{kmax}: {'PASS' if ok else 'FAIL'}"]
            lines += [f"[Theorem 2]   k={r.k}: {'ok' if r.passed else '; '.join(r.violations)}"
                      for r in reports]
            _emit("\n".join(lines), args.out)
        return EXIT_OK if ok else EXIT_FAIL
    try:
        rep = verify_theorem(tid, args.k, args.m, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.format == "json":
        _emit(_dump(rep.to_dict()), args.out)
    else:
        _emit("\n".join(rep.summary_lines()), args.out)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _volume(args) -> FiniteVolume:
    if args.n is None:
        raise UsageError(f"{args.command} needs --n")
    return FiniteVolume(args.k, args.n, RootDegree(args.root))


def _fields(args, graph, volume: FiniteVolume):
    """Per-vertex fields for --fields {ti, ti-asym, i3, i4}."""
    from .oracle import agm_fields, uniform_fields
    from .solvers import solve_i3, solve_i4, solve_ti

    params = ModelParams(args.k, args.lam)
    kind = args.fields
    if kind in ("ti", "ti-asym"):
        rep = solve_ti(graph, params)
        sols = rep.solutions if kind == "ti" else rep.asymmetric()
        if not sols:
            raise UsageError(f"--fields ti-asym: no asymmetric solution at lambda={args.lam}")
        return uniform_fields(volume, sols[0].z, graph, args.lam), sols[0]
    if args.graph != "wand":
        raise UsageError(f"--fields {kind} is only defined for --graph wand")
    if kind == "i3":
        if args.m is None:
            raise UsageError("--fields i3 needs --m")
        pattern = AGMPattern(args.k, args.m, args.m)
        rep = solve_i3(params, args.m)
    else:
        if args.m is None or args.r is None:
            raise UsageError("--fields i4 needs --m and --r")
        pattern = AGMPattern(args.k, args.m, args.r)
        rep = solve_i4(params, pattern)
    pick = [s for s in rep.solutions if s.label is not SolutionLabel.TI_SYMMETRIC] or rep.solutions
    s = pick[0]
    return agm_fields(volume, pattern, s.z, s.t, graph, args.lam), s


def _require_lambda(args):
    if args.lam is None:
        raise UsageError(f"{args.command} needs --lambda")


def cmd_oracle(args) -> int:
    from .oracle import OracleBudgetError, all_marginals, check_consistency, enumerate_admissible, finite_measure
    _require_lambda(args)
    graph = preset_graph(args.graph)
    vol = _volume(args)
    fields, sol = _fields(args, graph, vol)
    try:
        count, _ = enumerate_admissible(graph, vol)
        mu = finite_measure(graph, vol, args.lam, fields)
        defect = check_consistency(graph, vol, args.lam, fields) if vol.n >= 1 else 0.0
    except OracleBudgetError as exc:
        raise UsageError(str(exc)) from exc
    ok = defect <= CONSISTENCY_TOL
    payload = {"graph": graph.name, "k": vol.k, "n": vol.n, "root": vol.root.value,
               "lambda": args.lam, "fields": args.fields, "solution": sol.to_dict(),
               "admissible_count": count, "partition": mu.partition,
               "consistency_defect": defect, "passed": ok,
               "root_marginal": list(all_marginals(mu)[0])}
    _emit(_dump(payload), args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sample(args) -> int:
    from .sampler import NotAFixedPointError, sample, save_batch
    _require_lambda(args)
    graph = preset_graph(args.graph)
    vol = _volume(args)
    fields, sol = _fields(args, graph, vol)
    try:
        batch = sample(graph, vol, args.lam, fields, args.seed, args.samples)
    except NotAFixedPointError as exc:
        raise UsageError(str(exc)) from exc
    payload = batch.sidecar()
    payload["empirical_marginals"] = batch.empirical_marginals.tolist()
    if args.out:
        npy, meta = save_batch(batch, args.out)
        payload["files"] = [str(npy), str(meta)]
    sys.stdout.write(_dump(payload) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fertile-hc",
                                description="Splitting Gibbs measures of three-state hard-core models on Cayley trees")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, lam=True):
        sp.add_argument("--graph", choices=("wand", "hinge"), default="wand")
        sp.add_argument("--k", type=int, required=True)
        if lam:
            sp.add_argument("--lambda", dest="lam", type=float)
        sp.add_argument("--out")

    def pattern(sp):
        sp.add_argument("--m", type=int)
        sp.add_argument("--r", type=int)
        sp.add_argument("--i", type=int)

    sp = sub.add_parser("solve", help="fixed points at one lambda")
    common(sp)
    sp.add_argument("--scenario", choices=("ti", "i3", "i4", "wp"), default="ti")
    pattern(sp)
    sp.add_argument("--format", choices=("json", "csv"), default="json")

    sp = sub.add_parser("sweep", help="solution counts across a lambda grid")
    common(sp, lam=False)
    sp.add_argument("--scenario", choices=("ti", "i3", "i4", "wp"), default="ti")
    pattern(sp)
    sp.add_argument("--lambda-min", type=float)
    sp.add_argument("--lambda-max", type=float)
    sp.add_argument("--points", type=int, default=101)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")

    sp = sub.add_parser("verify", help="check a theorem or proposition numerically")
    sp.add_argument("--theorem", required=True,
                    help="thm1..thm9, prop1..prop5, or rpoly")
    sp.add_argument("--k", type=int)
    sp.add_argument("--m", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.add_argument("--out")

    for name, helptext in (("oracle", "exact finite-volume consistency check"),
                           ("sample", "exact samples from a fixed point")):
        sp = sub.add_parser(name, help=helptext)
        common(sp)
        pattern(sp)
        sp.add_argument("--n", type=int)
        sp.add_argument("--root", choices=("full", "half"), default="half")
        sp.add_argument("--fields", choices=("ti", "ti-asym", "i3", "i4"), default="ti")
        if name == "sample":
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--samples", type=int, default=10000)
    return p


COMMANDS = {"solve": cmd_solve, "sweep": cmd_sweep, "verify": cmd_verify,
            "oracle": cmd_oracle, "sample": cmd_sample}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "k", None) is not None and args.k < 2:
        parser.error("--k must be at least 2")
    if getattr(args, "lam", None) is not None and not args.lam > 0:
        parser.error("--lambda must be positive")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, UnsupportedGraphError) as exc:
        parser.error(str(exc))
    return EXIT_USAGE  # not reached; parser.error exits


if __name__ == "__main__":
    sys.exit(main())
