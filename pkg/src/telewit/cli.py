"""Command-line interface.

Exit codes: 0 on success, 1 when ``validate`` finds the witness contract
violated, 2 on input errors (bad dimensions, parse failures, dimension
mismatches).  Every analysis command writes a machine-readable report with
input hashes and replay seeds; ``--json`` additionally prints it to stdout.
"""

import argparse
import json
import sys
import time

import numpy as np

from . import fileio
from .bases import decompose_bipartite, decompose_spin1, gellmann_basis, pauli_basis
from .fef import fef_estimate
from .measurement import MeasurementPlan, estimate_witness_expectation
from .optimality import certify, reference_kernel_vectors, search_kernel_vectors
from .states import (
    bell_diagonal,
    isotropic,
    max_entangled,
    product_vector,
    pure_density,
    random_density,
    random_product_pure,
)
from .witness import classify, entanglement_witness, evaluate, teleportation_witness
from .witness import validate as validate_witness

MAX_DIM = 8


class InputError(Exception):
    """User-facing input problem; maps to exit code 2."""


def _check_dim(d):
    if d < 2 or d > MAX_DIM:
        raise InputError(f"--dim must be between 2 and {MAX_DIM}, got {d}")
    return d


def _load_state(path):
    try:
        return fileio.load_matrix(path).as_density()
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        raise InputError(f"cannot load state from {path}: {err}")


def _load_witness(path):
    try:
        return fileio.load_matrix(path).as_witness()
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        raise InputError(f"cannot load witness from {path}: {err}")


def _emit(args, command, input_paths, payload_kind, payload, started_at, lines):
    report = fileio.make_report(command, input_paths, payload_kind, payload, started_at)
    report_path = args.report or f"{command.replace(' ', '_')}_report.json"
    fileio.write_report(report_path, report)
    if args.json:
        json.dump(report, sys.stdout, indent=1)
        sys.stdout.write("\n")
    else:
        for line in lines:
            print(line)
        print(f"report written to {report_path}")
    return report


def _cmd_witness_build(args):
    d = _check_dim(args.dim)
    if args.kind == "tel":
        w = teleportation_witness(d)
    else:
        w = entanglement_witness(d)
    fileio.save_matrix(
        args.out, w.matrix, (d, d), "witness",
        metadata={"witness_kind": w.kind, "provenance": w.provenance},
    )
    print(f"wrote {w.kind} witness for d={d} to {args.out}")
    print(f"min eigenvalue = {w.min_eigenvalue!r}")
    return 0


def _cmd_witness_eval(args):
    started = time.perf_counter()
    w = _load_witness(args.witness)
    rho = _load_state(args.state)
    if rho.matrix.shape != w.matrix.shape:
        raise InputError(
            f"dimension mismatch: witness {w.matrix.shape[0]}, state {rho.matrix.shape[0]}"
        )
    value = evaluate(w, rho)
    verdict = classify(value, tol=args.tol)
    _emit(
        args, "eval", [args.witness, args.state], "evaluation",
        fileio.evaluation_payload(value, verdict, args.tol), started,
        [f"value = {value!r}", f"verdict = {verdict}"],
    )
    return 0


def _cmd_witness_certify(args):
    started = time.perf_counter()
    w = _load_witness(args.witness)
    if args.vectors == "builtin":
        if w.d not in (2, 3):
            raise InputError(f"builtin kernel vectors exist only for d=2,3 (got d={w.d})")
        vectors = reference_kernel_vectors(w.d)
    elif args.vectors == "search":
        vectors = search_kernel_vectors(w, attempts=args.attempts, seed=args.seed)
        if not vectors:
            raise InputError("search found no zero-expectation product vectors")
    else:
        vectors = _load_vectors(args.vectors)
    cert = certify(w, vectors)
    payload = fileio.certificate_payload(cert)
    payload["vector_source"] = args.vectors
    payload["seed"] = args.seed
    _emit(
        args, "certify", [args.witness], "certificate", payload, started,
        [
            f"verdict = {cert.verdict}",
            f"span rank = {cert.span_rank} / {cert.required_rank}",
            f"max |expectation| = {max(abs(x) for x in cert.expectations):.3e}",
        ],
    )
    return 0


def _load_vectors(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
        return [
            product_vector(
                np.asarray(v["e"]["re"]) + 1j * np.asarray(v["e"]["im"]),
                np.asarray(v["f"]["re"]) + 1j * np.asarray(v["f"]["im"]),
            )
            for v in doc["vectors"]
        ]
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as err:
        raise InputError(f"cannot load product vectors from {path}: {err}")


def _cmd_state_make(args):
    d = _check_dim(args.dim)
    meta = {"state_kind": args.kind, "dim": d}
    if args.kind == "iso":
        if args.alpha is None:
            raise InputError("--kind iso requires --alpha")
        rho = isotropic(d, args.alpha)
        meta["alpha"] = args.alpha
    elif args.kind == "bell-diag":
        if d != 2:
            raise InputError("--kind bell-diag requires --dim 2")
        if args.c is None:
            raise InputError("--kind bell-diag requires --c C1,C2,C3")
        try:
            c1, c2, c3 = (float(x) for x in args.c.split(","))
        except ValueError:
            raise InputError(f"--c expects three comma-separated reals, got {args.c!r}")
        rho = bell_diagonal(c1, c2, c3)
        meta["c"] = [c1, c2, c3]
    elif args.kind == "maxent":
        rho = pure_density(max_entangled(d), (d, d))
    elif args.kind == "random":
        rho = random_density(d, args.seed)
        meta["seed"] = args.seed
    elif args.kind == "product":
        rho = random_product_pure(d, args.seed).density()
        meta["seed"] = args.seed
    else:  # unreachable behind argparse choices
        raise InputError(f"unknown state kind {args.kind!r}")
    fileio.save_matrix(args.out, rho.matrix, rho.dims, "state", metadata=meta)
    print(f"wrote {args.kind} state for d={d} to {args.out}")
    return 0


def _cmd_fef(args):
    started = time.perf_counter()
    rho = _load_state(args.state)
    result = fef_estimate(
        rho, restarts=args.restarts, max_iter=args.max_iter, tol=args.tol,
        seed=args.seed,
    )
    _emit(
        args, "fef", [args.state], "fef", fileio.fef_payload(result), started,
        [
            f"singlet fraction = {result.lower_bound!r}",
            f"FEF lower-bound estimate = {result.estimate!r}",
            f"threshold 1/d = {1.0 / result.d!r}",
            f"restarts used = {result.restarts_used}, converged = {result.converged}",
        ],
    )
    return 0


def _decomposition_for(w, basis_name):
    if basis_name == "pauli":
        if w.d != 2:
            raise InputError("--basis pauli requires a d=2 witness")
        return decompose_bipartite(w.matrix, pauli_basis())
    if basis_name == "spin1":
        if w.d != 3:
            raise InputError("--basis spin1 requires a d=3 witness")
        return decompose_spin1(w.matrix)
    if basis_name == "gellmann":
        return decompose_bipartite(w.matrix, gellmann_basis(w.d))
    raise InputError(f"unknown basis {basis_name!r}")


def _cmd_decompose(args):
    started = time.perf_counter()
    w = _load_witness(args.witness)
    decomp = _decomposition_for(w, args.basis)
    payload = fileio.decomposition_payload(decomp)
    lines = [f"{len(payload['terms'])} nonzero terms over basis {payload['basis']}"]
    for term in payload["terms"]:
        unit = f"  [hbar^{term['hbar_power']}]" if "hbar_power" in term else ""
        lines.append(
            f"  {term['coefficient']:+.12f} * {term['left']} (x) {term['right']}{unit}"
        )
    _emit(args, "decompose", [args.witness], "decomposition", payload, started, lines)
    return 0


def _cmd_measure(args):
    started = time.perf_counter()
    w = _load_witness(args.witness)
    rho = _load_state(args.state)
    if rho.matrix.shape != w.matrix.shape:
        raise InputError(
            f"dimension mismatch: witness {w.matrix.shape[0]}, state {rho.matrix.shape[0]}"
        )
    basis_name = args.basis
    if basis_name is None:
        basis_name = {2: "pauli", 3: "spin1"}.get(w.d, "gellmann")
    decomp = _decomposition_for(w, basis_name).filtered()
    plan = MeasurementPlan(decomp, args.shots, args.seed)
    report = estimate_witness_expectation(w, rho, plan, z=args.z)
    _emit(
        args, "measure", [args.witness, args.state], "estimate",
        fileio.estimate_payload(report), started,
        [
            f"estimate = {report.point_estimate!r} +- {report.standard_error!r}",
            f"verdict at z={args.z}: {report.verdict}",
        ],
    )
    return 0


def _cmd_validate(args):
    started = time.perf_counter()
    w = _load_witness(args.witness)
    report = validate_witness(w, samples=args.samples, seed=args.seed, tol=args.tol)
    lines = [
        f"hermitian = {report.hermitian}",
        f"min eigenvalue = {report.min_eigenvalue!r}",
        f"FEF-bound failures = {len(report.fef_bound_failures)}",
        f"separable failures = {len(report.separable_failures)}",
        f"passed = {report.passed}",
    ]
    if report.caveat:
        lines.append(f"caveat: {report.caveat}")
    _emit(
        args, "validate", [args.witness], "validation",
        fileio.validation_payload(report), started, lines,
    )
    return 0 if report.passed else 1


def _add_common(parser):
    parser.add_argument("--json", action="store_true",
                        help="print the report JSON to stdout")
    parser.add_argument("--report", default=None,
                        help="report path (default: <command>_report.json)")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker cap; results never depend on it")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="telewit",
        description="Teleportation witnesses: build, evaluate, certify, "
        "cross-check, decompose, and simulate measurement.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    witness = sub.add_parser("witness", help="witness construction and analysis")
    wsub = witness.add_subparsers(dest="witness_command", required=True)

    build = wsub.add_parser("build", help="construct a witness and save it")
    build.add_argument("--dim", type=int, required=True)
    build.add_argument("--kind", choices=("tel", "ent"), default="tel")
    build.add_argument("--out", required=True)
    build.set_defaults(func=_cmd_witness_build)

    ev = wsub.add_parser("eval", help="evaluate a witness on a state")
    ev.add_argument("--witness", required=True)
    ev.add_argument("--state", required=True)
    ev.add_argument("--tol", type=float, default=1e-9)
    _add_common(ev)
    ev.set_defaults(func=_cmd_witness_eval)

    cert = wsub.add_parser("certify", help="optimality certificate from kernel vectors")
    cert.add_argument("--witness", required=True)
    cert.add_argument("--vectors", default="builtin",
                      help="'builtin', 'search', or a JSON vectors file")
    cert.add_argument("--attempts", type=int, default=200)
    cert.add_argument("--seed", type=int, default=0)
    _add_common(cert)
    cert.set_defaults(func=_cmd_witness_certify)

    state = sub.add_parser("state", help="reference and random states")
    ssub = state.add_subparsers(dest="state_command", required=True)
    make = ssub.add_parser("make", help="construct a state and save it")
    make.add_argument("--kind", required=True,
                      choices=("iso", "bell-diag", "maxent", "random", "product"))
    make.add_argument("--dim", type=int, required=True)
    make.add_argument("--alpha", type=float, default=None)
    make.add_argument("--c", default=None, help="C1,C2,C3 for bell-diag")
    make.add_argument("--seed", type=int, default=0)
    make.add_argument("--out", required=True)
    make.set_defaults(func=_cmd_state_make)

    fef = sub.add_parser("fef", help="fully-entangled-fraction lower bound")
    fef.add_argument("--state", required=True)
    fef.add_argument("--restarts", type=int, default=32)
    fef.add_argument("--max-iter", type=int, default=500)
    fef.add_argument("--tol", type=float, default=1e-10)
    fef.add_argument("--seed", type=int, default=0)
    _add_common(fef)
    fef.set_defaults(func=_cmd_fef)

    dec = sub.add_parser("decompose", help="expand a witness over local observables")
    dec.add_argument("--witness", required=True)
    dec.add_argument("--basis", required=True, choices=("pauli", "gellmann", "spin1"))
    _add_common(dec)
    dec.set_defaults(func=_cmd_decompose)

    meas = sub.add_parser("measure", help="finite-shot witness estimation")
    meas.add_argument("--witness", required=True)
    meas.add_argument("--state", required=True)
    meas.add_argument("--shots", type=int, required=True)
    meas.add_argument("--seed", type=int, required=True)
    meas.add_argument("--basis", default=None, choices=("pauli", "gellmann", "spin1"))
    meas.add_argument("--z", type=float, default=3.0)
    _add_common(meas)
    meas.set_defaults(func=_cmd_measure)

    val = sub.add_parser("validate", help="probabilistic witness validity checks")
    val.add_argument("--witness", required=True)
    val.add_argument("--samples", type=int, default=200)
    val.add_argument("--seed", type=int, default=0)
    val.add_argument("--tol", type=float, default=1e-6)
    _add_common(val)
    val.set_defaults(func=_cmd_validate)

    return parser


def _merge_negative_values(argv):
    """Turn ``--c -1,-1,-1`` into ``--c=-1,-1,-1`` so argparse does not
    mistake the negative value for an option."""
    merged = []
    skip = False
    for i, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if arg in ("--c", "--alpha") and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            merged.append(f"{arg}={argv[i + 1]}")
            skip = True
        else:
            merged.append(arg)
    return merged


def main(argv=None):
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_merge_negative_values(list(argv)))
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be >= 1")
    try:
        return args.func(args)
    except InputError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
