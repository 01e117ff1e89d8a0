"""Command-line front end.

    menger check-axioms --scenario FILE [--out FILE]
    menger compat       --scenario FILE [--out FILE]
    menger fixpoint     --scenario FILE [--out TRACE.csv]
    menger monitor      --scenario FILE [--out TRACE.csv]

Exit codes: 0 pass/converged, 1 violations or divergence, 2 scenario errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
import warnings
from dataclasses import replace

from . import analysis, fixpoint, pgm_space, tnorm
from .scenario import Scenario, ScenarioError, parse_grid, parse_scenario, parse_sequence

EXIT_OK, EXIT_FAIL, EXIT_SCENARIO = 0, 1, 2


def _write_csv(path, rows) -> None:
    if path is None:
        return
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def cmd_check_axioms(sc: Scenario, args) -> int:
    space = sc.build_space()
    t_rep = tnorm.check_axioms(space.tnorm, samples=10_000, seed=sc.seed)
    idem = tnorm.is_idempotent(space.tnorm, seed=sc.seed)
    p_rep = pgm_space.check_axioms(space, sc.point_samples, sc.t_samples, sc.seed, sc.grid_values())
    print(f"t-norm {space.tnorm.value}: {len(t_rep.violations)} violation(s) on {t_rep.checked} samples; "
          f"idempotent={idem}")
    print(f"PGM axioms ({sc.family}/{sc.kernel}): {sum(p_rep.counts.values())} violation(s) "
          f"on {p_rep.checked} tuples")
    for axiom, n in sorted(p_rep.counts.items()):
        worst = max((v for v in p_rep.violations if v.axiom == axiom), key=lambda v: v.slack)
        print(f"  axiom ({axiom}): {n} violation(s); worst witness {worst.witness} slack {worst.slack:.3g}")
    rows = [["source", "axiom", "witness", "slack"]]
    rows += [["tnorm", v.axiom, repr(v.witness), repr(v.slack)] for v in t_rep.violations]
    rows += [["pgm", v.axiom, repr(v.witness), repr(v.slack)] for v in p_rep.violations]
    _write_csv(args.out, rows)
    return EXIT_OK if t_rep.ok and p_rep.ok else EXIT_FAIL


def cmd_compat(sc: Scenario, args) -> int:
    if sc.compat is None:
        raise ScenarioError("[compat] section required", key="compat")
    names, seq_spec, limit = sc.compat
    maps = sc.map_dict()
    missing = [n for n in names if n not in maps]
    if missing:
        raise ScenarioError(f"maps not defined: {', '.join(missing)}", key="triple")
    space = sc.build_space()
    A, B, C = (maps[n] for n in names)
    seq = parse_sequence(seq_spec)
    grid = sc.grid_values()
    rep = analysis.check_compatible_triple(space, A, B, C, seq, grid, sc.delta)
    label = "[" + ", ".join(names) + "]"
    if rep.vacuous:
        print(f"{label}: images do not share a limit along the sequence (spread {rep.premise_spread:.3g}); "
              "verdict is vacuous")
    else:
        print(f"{label}: compatible={rep.verdict} worst residual {rep.worst_residual:.3g} ({rep.note})")
    ok = rep.verdict and rep.premise_ok
    rows = [["alpha", "beta", "worst_residual"]]
    rows += [[a, b, repr(r)] for (a, b), r in rep.pair_residuals.items()]
    if limit is not None:
        prop = analysis.check_compat_propagation(space, A, B, C, seq, limit, grid, sc.delta, seed=sc.seed)
        if prop.holds is None:
            print(f"propagation: premise failed: {', '.join(prop.failed_premises)}")
        else:
            print(f"propagation: {'holds' if prop.holds else 'fails'} {prop.conclusions}")
        ok = ok and bool(prop)
        lim = analysis.check_limit_propagation(A, space, seq, limit, grid, sc.delta)
        rows.append([f"limit_propagation[{names[0]}]", "", repr(lim.holds)])
    _write_csv(args.out, rows)
    return EXIT_OK if ok else EXIT_FAIL


def _needs_run_inputs(sc: Scenario):
    if sc.x0 is None:
        raise ScenarioError("x0 is required for this command", key="x0")
    sx = sc.build_sextuple()
    space = sc.build_space()
    fixpoint.require_premises(space, sc.k)
    return space, sx


def cmd_fixpoint(sc: Scenario, args) -> int:
    space, sx = _needs_run_inputs(sc)
    grid = sc.grid_values()
    rep = fixpoint.run(space, sx, sc.x0, sc.k, sc.eps, sc.delta, sc.n_max, grid,
                       contraction_samples=sc.contraction_samples, seed=sc.seed)
    monitor = None
    if len(rep.state.y_seq) >= 4:
        monitor = fixpoint.proof_chain_monitor(space, rep.state, sc.k, grid, contraction=rep.contraction)
    print(f"termination: {rep.termination.value}" + (f" ({rep.diagnosis})" if rep.diagnosis else ""))
    print(f"candidate: {rep.candidate!r} after {rep.iterations} iteration(s); cauchy index {rep.cauchy_index}")
    print("residuals: " + ", ".join(f"{k}={v:.3g}" for k, v in rep.residuals.items()))
    if rep.contraction is not None:
        print(f"contraction: {rep.contraction.violations} violation(s) in {rep.contraction.checked} samples")
        if rep.contraction.worst:
            print(f"  worst witness {rep.contraction.worst}")
    if monitor is not None:
        print(f"proof chain: {len(monitor.failures)} failure(s)")
    if rep.state.failure:
        print(f"stopped: {rep.state.failure}")
    if args.out:
        fixpoint.write_trace(args.out, space, rep.state, grid, monitor)
    clean = rep.contraction_violations in (None, 0)
    return EXIT_OK if rep.settled and clean else EXIT_FAIL


def cmd_monitor(sc: Scenario, args) -> int:
    space, sx = _needs_run_inputs(sc)
    grid = sc.grid_values()
    state = fixpoint.build_sequences(space, sx, sc.x0, sc.n_max)
    if len(state.y_seq) < 4:
        print(f"trace too short for the monitor ({len(state.y_seq)} terms; stopped: {state.failure})")
        return EXIT_FAIL
    contraction = None
    if sc.contraction_samples:
        contraction = fixpoint.check_contraction(space, sx, sc.k, sc.contraction_samples, seed=sc.seed, grid=grid)
    monitor = fixpoint.proof_chain_monitor(space, state, sc.k, grid, contraction=contraction)
    for name in ("alpha", "beta", "gamma"):
        print(f"({name}): {monitor.count(name)} failure(s) in {monitor.checked[name]} checks")
    if monitor.failures and monitor.contraction_witness:
        print(f"contraction witness: {monitor.contraction_witness}")
    if args.out:
        fixpoint.write_trace(args.out, space, state, grid, monitor)
    return EXIT_OK if monitor.ok else EXIT_FAIL


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "compat": cmd_compat,
    "fixpoint": cmd_fixpoint,
    "monitor": cmd_monitor,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario file")
    common.add_argument("--out", help="write the machine-readable report/trace here")
    common.add_argument("--seed", type=int, help="override the scenario seed")
    common.add_argument("--grid", help="override the probe grid, e.g. geom:2:-10:10 or list:0.5,1,2")
    common.add_argument("--max-iter", type=int, help="override n_max")
    common.add_argument("--strict", action="store_true", help="reject unknown scenario keys")
    parser = argparse.ArgumentParser(prog="menger", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.scenario) as fh:
            text = fh.read()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            sc = parse_scenario(text, strict=args.strict)
        for w in caught:
            print(f"warning: {w.message}", file=sys.stderr)
        overrides = {}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.grid is not None:
            parse_grid(args.grid)
            overrides["grid"] = args.grid
        if args.max_iter is not None:
            if args.max_iter < 1:
                raise ScenarioError("--max-iter must be >= 1")
            overrides["n_max"] = args.max_iter
        sc = replace(sc, **overrides)
        return COMMANDS[args.command](sc, args)
    except (ValueError, OSError) as exc:
        # ScenarioError, PremiseError, and bad points or maps in the scenario
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCENARIO


if __name__ == "__main__":
    sys.exit(main())
