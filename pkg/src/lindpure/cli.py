"""Command-line front end.

Exit codes: 0 pass, 1 experiment criteria unmet, 2 parse error, 3 invariant
or precondition violation, 4 Lie closure hit ``--max-dim`` before converging.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import accessibility as acc
from .gkls import assemble
from .linalg import fro, kron
from .problem import (
    ProblemSpec,
    SpecError,
    canonical_hash,
    generator_to_json,
    parse_spec,
    spec_from_dict,
    spec_to_dict,
)
from .purification import mub_superprojector, purify_lindbladians
from .rand import random_density, random_generator, rng_from
from .zeno import appendix_a_demo, key_identity_residual, reduced_dynamics, zeno_sweep

logger = logging.getLogger("lindpure")

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_INVARIANT, EXIT_NONCONVERGED = 0, 1, 2, 3, 4
DEFAULT_N_STEPS = [16, 32, 64, 128, 256, 512, 1024, 2048, 4096]
SLOPE_TOL = 0.1


class CliExit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# ------------------------------------------------------------------ helpers


def _load_spec(path: str | None, default) -> ProblemSpec:
    if path is None:
        return spec_from_dict(default())
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise CliExit(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    return parse_spec(text)


def _param(args, spec: ProblemSpec | None, name: str, fallback):
    val = getattr(args, name, None)
    if val is not None:
        return val
    if spec is not None and spec.parameters.get(name) is not None:
        return spec.parameters[name]
    return fallback


def _default_pair(seed):
    def build():
        rng = rng_from(seed)
        gens = [random_generator(2, rng), random_generator(2, rng)]
        return spec_to_dict(2, gens)

    return build


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def _emit(report: dict, out: str | None):
    text = json.dumps(_jsonable(report), sort_keys=True, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals or any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("step counts must be positive integers")
    return vals


# ----------------------------------------------------------------- commands


def cmd_purify(args) -> int:
    seed = args.seed if args.seed is not None else 0
    spec = _load_spec(args.spec, _default_pair(seed))
    tol = _param(args, spec, "tol", 1e-10)
    if not spec.generators:
        raise CliExit(EXIT_INVARIANT, "purify needs at least one generator")
    pset = purify_lindbladians(spec.generators)
    norms = pset.commutator_norms()
    worst = max(norms.values(), default=0.0)
    passed = worst < tol
    _emit(
        {
            "command": "purify",
            "spec_sha256": spec.sha256,
            "seed": seed,
            "tol": tol,
            "system_dim": pset.system_dim,
            "aux_dim": pset.aux_dim,
            "purified_generators": [generator_to_json(g) for g in pset.generators],
            "commutators": [{"i": i, "j": j, "norm": n} for (i, j), n in sorted(norms.items())],
            "max_commutator_norm": worst,
            "passed": passed,
        },
        args.out,
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_zeno(args) -> int:
    seed = args.seed if args.seed is not None else 0
    spec = _load_spec(args.spec, _default_pair(seed))
    seed = _param(args, spec, "seed", seed)
    tol = _param(args, spec, "tol", 1e-10)
    t = float(_param(args, spec, "t", 1.0))
    n_list = [int(n) for n in _param(args, spec, "n_steps", DEFAULT_N_STEPS)]
    j = int(_param(args, spec, "j", 0))
    if not 0 <= j < len(spec.generators):
        raise CliExit(EXIT_INVARIANT, f"generator index {j} out of range")

    gens = list(spec.generators)
    pset = purify_lindbladians(gens)
    d, n = pset.system_dim, pset.aux_dim
    p = mub_superprojector(d, n)
    sweep = zeno_sweep(assemble(pset.generators[j]), p, t, n_list, workers=args.workers)

    rng = rng_from(seed)
    rho0 = kron(random_density(d, rng), random_density(n, rng))
    measured, direct = reduced_dynamics(gens, j, rho0, t)
    recovery = fro(measured - direct)
    identity = key_identity_residual(gens, j)

    slope_ok = sweep.slope is None or abs(sweep.slope + 1.0) <= SLOPE_TOL
    passed = sweep.all_cptp and recovery < tol and slope_ok

    rows = list(zip(sweep.n_steps, sweep.errors))
    csv_path = args.csv or (str(Path(args.out).with_suffix(".csv")) if args.out else None)
    if csv_path:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["N", "error"])
        w.writerows((nn, repr(e)) for nn, e in rows)
        Path(csv_path).write_text(buf.getvalue())

    _emit(
        {
            "command": "zeno",
            "spec_sha256": spec.sha256,
            "seed": seed,
            "tol": tol,
            "t": t,
            "j": j,
            "sweep": [
                {"N": nn, "error": e, "choi_min_eigenvalue": m}
                for nn, e, m in zip(sweep.n_steps, sweep.errors, sweep.choi_min_eigs)
            ],
            "slope": sweep.slope,
            "slope_within_tolerance": slope_ok,
            "all_cptp": sweep.all_cptp,
            "recovery_residual": recovery,
            "projected_identity_residual": identity,
            "csv": csv_path,
            "passed": passed,
        },
        args.out,
    )
    return EXIT_OK if passed else EXIT_FAIL


def cmd_access(args) -> int:
    tol = args.tol if args.tol is not None else acc.RANK_TOL
    report = {"command": "access", "tol": tol, "seed": args.seed}
    if args.pair is not None:
        d = args.pair
        l0, k = acc.accessible_pair(d)
        gens = [assemble(l0), assemble(k)]
        expected = acc.full_gkls_dim(d, tol)
        report.update(mode="pair", system_dim=d, spec_sha256=canonical_hash({"pair": d}))
    elif args.purified_pair is not None:
        d = args.purified_pair
        gens = acc.purified_pair(d).superops()
        expected = 2
        report.update(
            mode="purified-pair",
            system_dim=d,
            system_oracle_dimension=acc.full_gkls_dim(d, tol),
            spec_sha256=canonical_hash({"purified_pair": d}),
        )
    else:
        if args.spec is None:
            raise CliExit(EXIT_PARSE, "access needs a problem file, --pair or --purified-pair")
        spec = _load_spec(args.spec, None)
        tol = _param(args, spec, "tol", tol)
        d = spec.dim
        if d < 2:
            raise CliExit(EXIT_INVARIANT, "accessibility needs dim >= 2")
        gens = [assemble(g) for g in spec.generators]
        gens += [assemble(type(spec.generators[0])(h)) for h in spec.controls] if spec.generators else []
        if not gens:
            raise CliExit(EXIT_INVARIANT, "no generators given")
        expected = acc.full_gkls_dim(d, tol)
        report.update(mode="spec", system_dim=d, spec_sha256=spec.sha256, tol=tol)

    max_dim = args.max_dim
    lb = acc.lie_closure(gens, tol=tol, max_dim=max_dim)
    report.update(
        closure_dimension=lb.dimension,
        oracle_dimension=expected,
        formula_dimension=report["system_dim"] ** 4 - report["system_dim"] ** 2,
        generation=lb.summary(),
        converged=lb.converged,
        passed=lb.converged and lb.dimension == expected,
    )
    _emit(report, args.out)
    if not lb.converged:
        return EXIT_NONCONVERGED
    return EXIT_OK if report["passed"] else EXIT_FAIL


def cmd_demo_appendix_a(args) -> int:
    seed = args.seed if args.seed is not None else 0
    t = args.time if args.time is not None else 50.0
    tol = args.tol if args.tol is not None else 1e-8
    r = appendix_a_demo(t_long=t, seed=seed, tol=tol)
    report = {
        "command": "demo appendix-a",
        "spec_sha256": canonical_hash({"demo": "appendix-a", "t": t}),
        "seed": seed,
        "tol": tol,
        **{k: getattr(r, k) for k in r.__dataclass_fields__},
    }
    _emit(report, args.out)
    return EXIT_OK if r.passed else EXIT_FAIL


def cmd_verify_quartet(args) -> int:
    seed = args.seed_pos if args.seed_pos is not None else (args.seed if args.seed is not None else 0)
    tol = args.tol if args.tol is not None else acc.RANK_TOL
    quartet = tuple(args.quartet) if args.quartet else None
    r = acc.quartet_span_check(args.d, args.n_unitaries, seed, quartet=quartet, tol=tol)
    report = {
        "command": "verify quartet",
        "spec_sha256": canonical_hash(
            {"d": args.d, "n_unitaries": args.n_unitaries, "quartet": list(r.quartet)}
        ),
        **{k: getattr(r, k) for k in r.__dataclass_fields__},
    }
    _emit(report, args.out)
    return EXIT_OK if r.passed else EXIT_FAIL


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None, help="pass/fail or rank tolerance")
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument("--out", default=None, help="write the JSON report here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="lindpure",
        description="Purify Lindblad generators, run Zeno projection sweeps and measure accessibility.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("purify", parents=[common], help="purify the generators of a problem file")
    p.add_argument("spec", nargs="?", help="problem JSON file ('-' for stdin); default: random qubit pair")
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("zeno", parents=[common], help="Zeno convergence sweep and dynamics recovery")
    p.add_argument("spec", nargs="?", help="problem JSON file ('-' for stdin); default: random qubit pair")
    p.add_argument("--time", dest="t", type=float, default=None)
    p.add_argument("--n-steps", dest="n_steps", type=_int_list, default=None,
                   help="comma-separated measurement counts")
    p.add_argument("--generator", dest="j", type=int, default=None, help="index of the generator to recover")
    p.add_argument("--csv", default=None, help="CSV path for the N,error table")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_zeno)

    p = sub.add_parser("access", parents=[common], help="dimension of the dynamical Lie algebra")
    p.add_argument("spec", nargs="?")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pair", type=int, default=None, help="accessible pair on d levels")
    g.add_argument("--purified-pair", type=int, default=None, help="purified accessible pair on d levels")
    p.add_argument("--max-dim", type=int, default=None)
    p.set_defaults(func=cmd_access)

    demo = sub.add_parser("demo", help="worked examples").add_subparsers(dest="demo", required=True)
    p = demo.add_parser("appendix-a", parents=[common],
                        help="projected amplitude damping leaves the state space")
    p.add_argument("--time", type=float, default=None, help="long-time horizon (default 50)")
    p.set_defaults(func=cmd_demo_appendix_a)

    verify = sub.add_parser("verify", help="numerical verifications").add_subparsers(dest="verify", required=True)
    p = verify.add_parser("quartet", parents=[common],
                          help="span of conjugated dissipators on a four-level subset")
    p.add_argument("d", type=int)
    p.add_argument("n_unitaries", type=int, nargs="?", default=256)
    p.add_argument("seed_pos", metavar="seed", type=int, nargs="?", default=None)
    p.add_argument("--quartet", type=lambda s: [int(v) for v in s.split(",")], default=None,
                   help="four comma-separated 0-based levels (default 0,1,2,3)")
    p.set_defaults(func=cmd_verify_quartet)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    logging.basicConfig(
        level=logging.DEBUG if getattr(args, "verbose", False) else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except SpecError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CliExit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ValueError, IndexError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
