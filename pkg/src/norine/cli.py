"""Command-line front end.

Exit codes follow SAT-competition practice: 10 satisfiable, 20 unsatisfiable,
0 for other successful runs, 1 for usage or input errors, 2 for timeouts and
internal failures.
"""

from __future__ import annotations

import argparse
import os
import shlex
import subprocess
import sys
import time

from norine import __version__
from norine.cnf import DimacsError, EncodeOptions, build_instance, instance_stats, load_dimacs, write_dimacs
from norine.oracle import (
    COLORING_HEADER,
    check_counterexample,
    cross_check_encoding,
    decode_model,
    describe_witness,
    enumerate_antipodal_colorings,
    brute_force_geodesic_conjecture,
    read_coloring,
)
from norine.orbits import (
    DEFAULT_DIM,
    burnside_count,
    emit_subproblem,
    enumerate_orbits,
    read_orbit_table,
    subproblem_filename,
    write_orbit_table,
)
from norine.solver import OutputFormatError, Status, format_result, parse_external_result, solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2
EXIT_SAT = 10
EXIT_UNSAT = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _exit_for(status: Status) -> int:
    return {Status.SAT: EXIT_SAT, Status.UNSAT: EXIT_UNSAT}.get(status, EXIT_FAILURE)


def _open_out(path):
    if path == "-":
        return sys.stdout, False
    return open(path, "w", newline="\n"), True


def cmd_stats(args) -> int:
    s = instance_stats(args.n)
    print(f"n {args.n}")
    print(f"variables {s['num_vars']}")
    print(f"antipodal_clauses {s['antipodal']}")
    print(f"geodesic_clauses {s['geodesic']}")
    print(f"symmetry_clauses {s['symmetry']}")
    print(f"clauses {s['total']}")
    return EXIT_OK


def _options(args) -> EncodeOptions:
    return EncodeOptions(not args.no_antipodal, not args.no_geodesic, not args.no_symmetry)


def cmd_encode(args) -> int:
    inst = build_instance(args.n, _options(args))
    out, close = _open_out(args.output)
    try:
        write_dimacs(inst, out)
    finally:
        if close:
            out.close()
    if args.output != "-":
        print(f"wrote {args.output}: {inst.num_vars} variables, {inst.num_clauses} clauses",
              file=sys.stderr)
    return EXIT_OK


def _run_external(command: str, path: str, timeout) -> str:
    argv = shlex.split(command) + [path]
    try:
        proc = subprocess.run(argv, capture_output=True, text=True, timeout=timeout)
    except FileNotFoundError:
        raise UsageError(f"external solver not found: {argv[0]}") from None
    return proc.stdout


def cmd_solve(args) -> int:
    if not os.path.exists(args.file):
        raise UsageError(f"no such file: {args.file}")
    if args.external:
        try:
            text = _run_external(args.external, args.file, args.timeout)
        except subprocess.TimeoutExpired:
            print(f"s {Status.TIMEOUT.value}")
            return EXIT_FAILURE
        result = parse_external_result(text)
    else:
        inst = load_dimacs(args.file)
        result = solve(inst, timeout=args.timeout, max_conflicts=args.max_conflicts, seed=args.seed)
        st = result.stats
        print(f"c conflicts {st.conflicts} decisions {st.decisions} "
              f"propagations {st.propagations} seconds {st.seconds:.3f}")
    sys.stdout.write(format_result(result))
    return _exit_for(result.status)


def cmd_prove(args) -> int:
    inst = build_instance(args.n, _options(args))
    t = time.perf_counter()
    result = solve(inst, timeout=args.timeout, max_conflicts=args.max_conflicts, seed=args.seed)
    elapsed = time.perf_counter() - t
    print(f"c n={args.n} variables={inst.num_vars} clauses={inst.num_clauses} "
          f"conflicts={result.stats.conflicts} seconds={elapsed:.3f}")
    print(f"s {result.status.value}")
    if result.is_unsat:
        print(f"no counterexample: geodesic conjecture holds for n={args.n}")
    elif result.is_sat:
        check = check_counterexample(decode_model(result.model, args.n))
        print(f"model decodes to: {describe_witness(check)}")
    return _exit_for(result.status)


def cmd_bruteforce(args) -> int:
    t = time.perf_counter()
    total = sum(1 for _ in enumerate_antipodal_colorings(args.n))
    found = brute_force_geodesic_conjecture(args.n)
    print(f"n {args.n}")
    print(f"antipodal_colorings {total}")
    print(f"counterexamples {len(found)}")
    if args.cross_check:
        report = cross_check_encoding(args.n, seed=args.seed)
        print(report.summary())
    print(f"seconds {time.perf_counter() - t:.3f}")
    return EXIT_OK


def _load_model_coloring(path, n):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read model file: {exc.strerror}") from None
    if text.lstrip().startswith(COLORING_HEADER):
        c = read_coloring(text.splitlines())
        if c.n != n:
            raise UsageError(f"coloring is for n={c.n}, not n={n}")
        return c
    result = parse_external_result(text, num_vars=n << (n - 1))
    if not result.is_sat:
        raise UsageError(f"model file reports {result.status.value}, no model to check")
    return decode_model(result.model, n)


def cmd_verify(args) -> int:
    c = _load_model_coloring(args.model, args.n)
    check = check_counterexample(c)
    print(describe_witness(check))
    return EXIT_OK


def cmd_orbits(args) -> int:
    t = time.perf_counter()
    orbits = enumerate_orbits(args.dim)
    print(f"orbits {len(orbits)}")
    print(f"states {sum(o.size for o in orbits)}")
    if args.burnside:
        print(f"burnside {burnside_count(args.dim)}")
    if args.output:
        out, close = _open_out(args.output)
        try:
            write_orbit_table(orbits, out)
        finally:
            if close:
                out.close()
    print(f"seconds {time.perf_counter() - t:.3f}", file=sys.stderr)
    return EXIT_OK


def cmd_subproblem(args) -> int:
    if args.orbits:
        try:
            with open(args.orbits) as fh:
                orbits = read_orbit_table(fh)
        except OSError as exc:
            raise UsageError(f"cannot read orbit table: {exc.strerror}") from None
    else:
        orbits = enumerate_orbits(args.dim)
    if not 0 <= args.index < len(orbits):
        raise UsageError(f"orbit index {args.index} outside 0..{len(orbits) - 1}")
    inst = emit_subproblem(orbits[args.index], args.dim)
    path = args.output
    if os.path.isdir(path):
        path = os.path.join(path, subproblem_filename(args.index))
    out, close = _open_out(path)
    try:
        write_dimacs(inst, out)
    finally:
        if close:
            out.close()
    if path != "-":
        print(f"wrote {path}: {inst.num_vars} variables, {inst.num_clauses} clauses", file=sys.stderr)
    return EXIT_OK


def _dim(text):
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid dimension {text!r}") from None
    if not 2 <= n <= 16:
        raise argparse.ArgumentTypeError(f"dimension {n} outside [2, 16]")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="norine", description="SAT checks of the geodesic Norine conjecture")
    parser.add_argument("--version", action="version", version=f"norine {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def families(p):
        p.add_argument("--no-antipodal", action="store_true", help="omit antipodal clauses")
        p.add_argument("--no-geodesic", action="store_true", help="omit geodesic clauses")
        p.add_argument("--no-symmetry", action="store_true", help="omit symmetry-breaking units")

    def solver_opts(p):
        p.add_argument("--timeout", type=float, default=None, help="seconds")
        p.add_argument("--max-conflicts", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("stats", help="closed-form instance sizes")
    p.add_argument("-n", type=_dim, required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("encode", help="write the DIMACS encoding")
    p.add_argument("-n", type=_dim, required=True)
    p.add_argument("-o", "--output", required=True, help="output file, - for stdout")
    families(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="solve a DIMACS file")
    p.add_argument("file")
    solver_opts(p)
    p.add_argument("--external", metavar="CMD",
                   help="run CMD FILE and parse its competition-style output instead")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("prove", help="encode and solve for dimension n")
    p.add_argument("-n", type=_dim, required=True)
    solver_opts(p)
    families(p)
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("bruteforce", help="enumerate all antipodal colorings (n <= 4)")
    p.add_argument("-n", type=_dim, required=True)
    p.add_argument("--cross-check", action="store_true", help="also compare with the SAT verdicts")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_bruteforce)

    p = sub.add_parser("verify", help="check a model or coloring file as a counterexample")
    p.add_argument("-n", type=_dim, required=True)
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbits", help="orbits of boundary colorings around the fixed square")
    p.add_argument("--burnside", action="store_true", help="also count via Burnside's lemma")
    p.add_argument("-o", "--output", help="write the orbit table")
    p.add_argument("--dim", type=_dim, default=DEFAULT_DIM, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_orbits)

    p = sub.add_parser("subproblem", help="emit the CNF for one orbit")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("-o", "--output", required=True, help="file or directory")
    p.add_argument("--orbits", help="orbit table from 'orbits -o' (skips enumeration)")
    p.add_argument("--dim", type=_dim, default=DEFAULT_DIM, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_subproblem)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"norine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DimacsError, OutputFormatError, ValueError) as exc:
        print(f"norine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_FAILURE
    except Exception as exc:  # noqa: BLE001
        print(f"norine: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


dispatch = main


if __name__ == "__main__":
    sys.exit(main())
