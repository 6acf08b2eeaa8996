"""Command-line front end.

Every subcommand prints its main artifact to standard output, or writes it
under ``--out DIR`` with a fixed file name. Exit codes: 0 success (including
separable and undetermined verdicts), 2 usage or input error, 3 entangled
verdict, 4 incomplete reconstruction.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import reports
from .coupling import coupled_basis
from .entropy import entropy_report
from .errors import LadderChannelError, UnderdeterminedError
from .serialize import half, half_str, label_str, matrix_to_json, parse_label
from .spinops import build_ladder
from .states import (
    ChannelState,
    coupled_diagonal_state,
    maximally_mixed,
    pure_coupled_state,
    random_coupled_state,
    random_density_matrix,
)
from .tomography import (
    paired_plan,
    reconstruct,
    records_from_jsonl,
    records_to_jsonl,
    simulate,
    single_plan,
)
from .witness import dual_degeneracy_check, witness_report

EXIT_OK, EXIT_USAGE, EXIT_ENTANGLED, EXIT_INCOMPLETE = 0, 2, 3, 4
ANGLE_FLAGS = {"paper": "paper_literal", "general": "phase_generalized"}
U64_MAX = 2**64 - 1


class UsageError(Exception):
    pass


def _u64(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError(f"{value} outside the unsigned 64-bit range")
    return value


def _positive_dim(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"dimension must be >= 1, got {value}")
    return value


def _dumps(obj):
    return json.dumps(obj, indent=2) + "\n"


def _emit(args, name, text):
    """Write ``text`` to ``--out``/``name`` or to stdout."""
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / name, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_state(path):
    obj = _load_json(path)
    if not isinstance(obj, dict):
        raise UsageError(f"{path} does not hold a state object")
    return ChannelState.from_json(obj)


def _csv(header, rows):
    return reports.format_csv(header, rows)


# -- subcommands ---------------------------------------------------------


def cmd_ladder(args):
    ladder = build_ladder(args.dim)
    if args.format == "table":
        lines = []
        for name, mat in (("j_plus", ladder.j_plus), ("j_minus", ladder.j_minus), ("j3", ladder.j3)):
            lines.append(name)
            lines += ["  " + " ".join(f"{x.real:10.6f}" for x in row) for row in mat]
        _emit(args, "ladder.txt", "\n".join(lines) + "\n")
        return EXIT_OK
    if args.format == "csv":
        raise UsageError("ladder supports json or table output")
    obj = {
        "schema": "1",
        "dim": args.dim,
        "j_plus": matrix_to_json(ladder.j_plus),
        "j_minus": matrix_to_json(ladder.j_minus),
        "j3": matrix_to_json(ladder.j3),
    }
    _emit(args, "ladder.json", _dumps(obj))
    return EXIT_OK


def cmd_couple(args):
    basis = coupled_basis(args.s, args.l)
    if args.format == "table":
        lines = [f"s={half_str(basis.s)} l={half_str(basis.l)} swapped={basis.swapped}"]
        for (j, m), col in zip(basis.labels, basis.unitary.T):
            lines.append(f"|{label_str(j, m)}> " + " ".join(f"{x:+.10f}" for x in col))
        _emit(args, "basis.txt", "\n".join(lines) + "\n")
        return EXIT_OK
    if args.format == "csv":
        raise UsageError("couple supports json or table output")
    obj = {"schema": "1", **basis.to_json()}
    _emit(args, "basis.json", _dumps(obj))
    return EXIT_OK


def _parse_weights(items):
    weights = {}
    for item in items:
        if "=" not in item:
            raise UsageError(f"weight {item!r} should look like J,M=VALUE")
        label, value = item.split("=", 1)
        try:
            weights[parse_label(label)] = float(value)
        except ValueError as exc:
            raise UsageError(f"bad weight {item!r}: {exc}") from None
    return weights


def cmd_state(args):
    s, l = args.s, args.l
    if args.random is not None and args.seed is None:
        raise UsageError("--random needs --seed")
    if args.pure:
        j, m = parse_label(args.pure)
        state = pure_coupled_state(s, l, j, m)
    elif args.p:
        state = coupled_diagonal_state(s, l, _parse_weights(args.p))
    elif args.random == "spectral":
        state = random_coupled_state(s, l, np.random.default_rng(args.seed))
    elif args.random == "matrix":
        hs, hl = half(s), half(l)
        n = int(2 * hs + 1) * int(2 * hl + 1)
        rho = random_density_matrix(n, np.random.default_rng(args.seed))
        state = ChannelState(hs, hl, rho=rho)
    else:
        state = maximally_mixed(s, l)
    _emit(args, "state.json", _dumps(state.to_json()))
    return EXIT_OK


def cmd_entropy(args):
    rep = entropy_report(_load_state(args.state))
    obj = rep.to_json()
    if args.format == "csv":
        header = ["s", "l", "s_total", "s_a", "s_b"]
        state = _load_state(args.state)
        row = [float(state.s), float(state.l), rep.s_total, rep.s_a, rep.s_b]
        if rep.holevo is not None:
            header.append("holevo_chi")
            row.append(rep.holevo.chi)
        _emit(args, "entropy.csv", _csv(header, [row]))
    elif args.format == "table":
        lines = [f"S_total = {rep.s_total:.10f}", f"S_A     = {rep.s_a:.10f}",
                 f"S_B     = {rep.s_b:.10f}"]
        if rep.holevo is not None:
            lines.append(f"chi     = {rep.holevo.chi:.10f}")
        lines += [f"S[{k}] = {v:.10f}" for k, v in obj["per_label_entanglement"].items()]
        _emit(args, "entropy.txt", "\n".join(lines) + "\n")
    else:
        _emit(args, "entropy.json", _dumps(obj))
    return EXIT_OK


def cmd_witness(args):
    state = _load_state(args.state)
    if state.form != "spectral":
        raise UsageError("witness needs a spectral (coupled-diagonal) state file")
    if state.s == half("1/2"):
        rep = witness_report(state)
    elif state.s == state.l:
        rep = dual_degeneracy_check(state)
    else:
        raise UsageError("witness rules need s = 1/2 or s = l")
    if args.format == "table":
        _emit(args, "witness.txt", rep.table() + "\n")
    else:
        _emit(args, "witness.json", _dumps(rep.to_json()))
    return EXIT_ENTANGLED if rep.entangled_verdict == "entangled" else EXIT_OK


def _plan_for(args, dims):
    axis_mode = ANGLE_FLAGS[args.angles]
    if args.plan == "single":
        if len(dims) == 2 and dims[0] != 1:
            n = dims[0] * dims[1]
        else:
            n = dims[-1]
        return single_plan(n, axis_mode, args.scheme)
    if len(dims) != 2 or min(dims) < 2:
        raise UsageError("paired plans need two subchannel dimensions >= 2")
    return paired_plan(tuple(dims), axis_mode, args.scheme)


def _check_sampling(args):
    if args.shots is not None and args.seed is None:
        raise UsageError("--shots needs --seed")
    if args.shots is not None and args.shots == 0:
        raise UsageError("--shots must be positive")


def _simulate(args, state):
    _check_sampling(args)
    plan = _plan_for(args, state.dims)
    mode = "sampled" if args.shots is not None else "exact"
    records = simulate(state, plan, mode, args.shots, args.seed)
    return plan, records


def _reconstruction_output(args, result):
    obj = {"schema": "1", **result.diagnostics(), "dims": list(result.dims),
           "rho_hat": matrix_to_json(result.rho_hat)}
    if args.format == "table":
        lines = [f"{k} = {v}" for k, v in result.diagnostics().items()]
        _emit(args, "reconstruction.txt", "\n".join(lines) + "\n")
    else:
        _emit(args, "reconstruction.json", _dumps(obj))
    if result.trace_distance_to_truth is not None:
        print(f"trace distance: {result.trace_distance_to_truth:.3e}", file=sys.stderr)
    if not result.complete:
        print(f"INCOMPLETE (rank {result.map_rank}/{result.n_params})", file=sys.stderr)
        return EXIT_INCOMPLETE
    return EXIT_OK


def cmd_tomo_simulate(args):
    _, records = _simulate(args, _load_state(args.state))
    _emit(args, "records.jsonl", records_to_jsonl(records))
    return EXIT_OK


def cmd_tomo_reconstruct(args):
    try:
        with open(args.records) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {args.records}: {exc.strerror}") from None
    try:
        records = records_from_jsonl(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.records} is not valid JSON lines: {exc}") from None
    plan = _plan_for(args, args.dims)
    try:
        result = reconstruct(records, plan)
    except UnderdeterminedError as exc:
        print(f"INCOMPLETE (rank {exc.map_rank}/{plan.n_params}): {exc}", file=sys.stderr)
        return EXIT_INCOMPLETE
    if args.truth:
        result = result.with_truth(_load_state(args.truth))
    return _reconstruction_output(args, result)


def cmd_tomo_roundtrip(args):
    state = _load_state(args.state)
    plan, records = _simulate(args, state)
    if args.out:
        _emit(args, "records.jsonl", records_to_jsonl(records))
    result = reconstruct(records, plan).with_truth(state)
    return _reconstruction_output(args, result)


def cmd_examples(args):
    report, curve = reports.build(args.name)
    if args.format == "csv":
        if curve is None:
            raise UsageError(f"example {args.name} has no curve data")
        _emit(args, f"{args.name}.csv", _csv(*curve))
        return EXIT_OK
    text = _dumps(report)
    if args.out:
        _emit(args, f"{args.name}.json", text)
        if curve is not None:
            _emit(args, f"{args.name}.csv", _csv(*curve))
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def _common(p, formats=("json", "csv", "table")):
    p.add_argument("--out", metavar="DIR", help="write output files into DIR")
    p.add_argument("--format", choices=formats, default="json")


def _tomo_flags(p):
    p.add_argument("--plan", choices=("single", "paired"), default="single")
    p.add_argument("--angles", choices=tuple(ANGLE_FLAGS), default="general")
    p.add_argument("--scheme", choices=("tomo", "pair"), default="tomo")
    p.add_argument("--shots", type=_u64)
    p.add_argument("--seed", type=_u64)


def build_parser():
    parser = argparse.ArgumentParser(prog="ladderchannel",
                                     description="Ladder-operator tools for bipartite channels.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ladder", help="write J+, J- and J3 for a dimension")
    p.add_argument("dim", type=_positive_dim)
    _common(p)
    p.set_defaults(func=cmd_ladder)

    p = sub.add_parser("couple", help="coupled basis of two subchannels")
    p.add_argument("s")
    p.add_argument("l")
    _common(p)
    p.set_defaults(func=cmd_couple)

    p = sub.add_parser("state", help="write a state file")
    p.add_argument("--s", required=True)
    p.add_argument("--l", required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--mixed", action="store_true", help="maximally mixed (default)")
    group.add_argument("--pure", metavar="J,M")
    group.add_argument("--p", metavar="J,M=VALUE", action="append")
    group.add_argument("--random", choices=("spectral", "matrix"))
    p.add_argument("--seed", type=_u64)
    _common(p)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("entropy", help="entropy report for a state file")
    p.add_argument("state")
    _common(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("witness", help="entanglement indicators for a state file")
    p.add_argument("state")
    _common(p, ("json", "table"))
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("tomo", help="simulated tomography")
    tsub = p.add_subparsers(dest="tomo_command", required=True)
    t = tsub.add_parser("simulate")
    t.add_argument("state")
    _tomo_flags(t)
    _common(t, ("json",))
    t.set_defaults(func=cmd_tomo_simulate)
    t = tsub.add_parser("reconstruct")
    t.add_argument("records")
    t.add_argument("--dims", type=_positive_dim, nargs="+", required=True)
    t.add_argument("--truth", metavar="STATE")
    _tomo_flags(t)
    _common(t, ("json", "table"))
    t.set_defaults(func=cmd_tomo_reconstruct)
    t = tsub.add_parser("roundtrip")
    t.add_argument("state")
    _tomo_flags(t)
    _common(t, ("json", "table"))
    t.set_defaults(func=cmd_tomo_roundtrip)

    p = sub.add_parser("examples", help="worked example reports")
    p.add_argument("name", choices=reports.EXAMPLES)
    _common(p, ("json", "csv"))
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, LadderChannelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
