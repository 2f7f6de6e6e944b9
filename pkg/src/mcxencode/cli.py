"""Command line front end: encode, decompose, simulate, bench.

Exit status 0 on success, 2 on any input-validation failure (argparse's own
convention, extended to domain validation errors).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench, circuit as circuit_mod, pathopt, preprocess, simulator
from .bitcore import BinaryVector
from .decomposer import decompose


def _input_spec(args) -> bench.InputSpec:
    if args.input in bench.GENERATOR_KINDS:
        return bench.InputSpec(kind=args.input, n=args.n, seed=args.seed)
    return bench.InputSpec(kind="file", n=args.n, path=args.input)


def _cmd_encode(args) -> int:
    spec = _input_spec(args)
    v = bench.generate(spec)
    B = preprocess.quantize(preprocess.compute_angles(v), args.L)
    P = pathopt.build_path_matrix(B)
    tour = pathopt.solve_tsp(pathopt.edge_costs(P), mode=args.order)
    core = circuit_mod.build_core(B, tour)
    full = circuit_mod.build_full(B, tour)
    if args.qasm:
        Path(args.qasm).write_text(circuit_mod.export_qasm(core), newline="\n")
    summary = {
        "n": args.n,
        "L": args.L,
        "order": list(tour.sigma),
        "depth_core": circuit_mod.depth(core),
        "depth_full": circuit_mod.depth(full),
        "mcx_count": core.mcx_count,
        "p_success": core.p_success,
    }
    if args.simulate:
        ps = simulator.postselect_flag(simulator.run(core))
        summary["flag_probability"] = ps.flag_probability
        summary["infidelity"] = 1.0 - simulator.fidelity(ps, v)
    print(json.dumps(summary))
    return 0


def _cmd_decompose(args) -> int:
    if args.hex:
        if args.n is None:
            raise ValueError("--n is required with --hex")
        b = BinaryVector.from_hex(args.bits, args.n)
    else:
        b = BinaryVector.from_string(args.bits)
    d = decompose(b)
    for c in d.controls:
        print(c)
    print(f"M = {d.gate_count}")
    return 0


def _cmd_simulate(args) -> int:
    spec = _input_spec(args)
    v = bench.generate(spec)
    B = preprocess.quantize(preprocess.compute_angles(v), args.L)
    P = pathopt.build_path_matrix(B)
    tour = pathopt.solve_tsp(pathopt.edge_costs(P), mode=args.order)
    core = circuit_mod.build_core(B, tour)
    ps = simulator.postselect_flag(simulator.run(core))
    fid = simulator.fidelity(ps, v)
    print(f"flag_probability = {ps.flag_probability!r}")
    print(f"fidelity = {fid!r}")
    print(f"infidelity = {1.0 - fid!r}")
    if args.amplitudes:
        for amp in ps.system_amplitudes:
            print(repr(float(amp)))
    return 0


def _cmd_bench(args) -> int:
    records = bench.sweep(
        kinds=args.kinds,
        n_values=range(args.n_min, args.n_max + 1),
        L=args.L,
        repetitions=args.reps,
        order_mode=args.order,
        base_seed=args.seed,
    )
    text = bench.to_csv(records)
    if args.out:
        Path(args.out).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mcxencode",
        description="Amplitude encoding via multi-controlled NOT gates: "
        "compile, order-optimize, export, and verify encoder circuits.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_args(p):
        p.add_argument(
            "--input",
            required=True,
            help="generator kind (%s) or a file of values" % "|".join(bench.GENERATOR_KINDS),
        )
        p.add_argument("--n", type=int, required=True, help="SYSTEM qubit count")
        p.add_argument("--L", type=int, required=True, help="bit precision")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument(
            "--order",
            choices=["auto", "exact", "heuristic", "identity"],
            default="auto",
            help="column ordering mode (identity reproduces the linear path)",
        )

    p_enc = sub.add_parser("encode", help="compile an encoder circuit")
    add_pipeline_args(p_enc)
    p_enc.add_argument("--qasm", help="write the core circuit as OpenQASM 3")
    p_enc.add_argument("--simulate", action="store_true", help="verify by simulation")
    p_enc.set_defaults(func=_cmd_encode)

    p_dec = sub.add_parser("decompose", help="decompose a bit vector into MCX controls")
    p_dec.add_argument("--bits", required=True, help="bit string of length 2^n")
    p_dec.add_argument("--hex", action="store_true", help="interpret --bits as hex")
    p_dec.add_argument("--n", type=int, help="qubit count (required with --hex)")
    p_dec.set_defaults(func=_cmd_decompose)

    p_sim = sub.add_parser("simulate", help="simulate the encoder and report fidelity")
    add_pipeline_args(p_sim)
    p_sim.add_argument(
        "--amplitudes", action="store_true", help="print post-selected amplitudes"
    )
    p_sim.set_defaults(func=_cmd_simulate)

    p_bench = sub.add_parser("bench", help="run a scaling sweep and emit CSV")
    p_bench.add_argument("--kinds", nargs="+", choices=bench.GENERATOR_KINDS, required=True)
    p_bench.add_argument("--n-min", type=int, required=True)
    p_bench.add_argument("--n-max", type=int, required=True)
    p_bench.add_argument("--L", type=int, required=True)
    p_bench.add_argument("--reps", type=int, default=1)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--order", choices=["auto", "exact", "heuristic", "identity"], default="auto"
    )
    p_bench.add_argument("--out", help="CSV output path (stdout when omitted)")
    p_bench.set_defaults(func=_cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
