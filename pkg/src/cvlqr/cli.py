"""Command-line front end.

Exit codes: 0 success, 2 input/validation error, 3 not stabilizable
(divergence), 4 no convergence within the iteration budget.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .delay import simulate_delay, solve_delay_lqr, pad_odd_input, normalize_input_weight, to_complex_system, DelaySystem
from .exceptions import (
    CvlqrError,
    DivergedError,
    InputError,
    InvalidWeightsError,
    NotConvergentError,
)
from .io import (
    ParsedInput,
    encode_complex_matrix,
    encode_real_matrix,
    load_input,
    solver_options_from,
    write_json,
    write_trace_csv,
    write_trajectory_csv,
)
from .lqr import cross_validate_antilinear, lqr_antilinear_anti, lqr_antilinear_normal, lqr_complex
from .riccati import bimatrix_riccati_iterates, build_normal_data, solve_anti_riccati, solve_bimatrix_riccati, solve_normal_riccati
from .sampling import random_antilinear_system, random_hermitian_pd
from .stabilizability import (
    is_stabilizable_antilinear,
    unstabilizable_modes_antilinear,
    unstabilizable_modes_complex,
)
from .systems import AntilinearSystem, ComplexLinearSystem, CostWeights, FeedbackGain, closed_loop, spectral_radius

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NOT_STABILIZABLE = 3
EXIT_NOT_CONVERGENT = 4


def _add_common_solver_flags(p: argparse.ArgumentParser):
    p.add_argument("input", help="path to a JSON input document")
    p.add_argument("--tol", type=float, default=None, help="relative step tolerance")
    p.add_argument("--max-iter", type=int, default=None, help="iteration budget")
    p.add_argument("--trace", action="store_true", help="write <output>_trace.csv")
    p.add_argument("--output", default=None, help="result JSON path (default: stdout)")


def _options(parsed: ParsedInput, args, record_trace: bool):
    return solver_options_from(
        parsed.options,
        tol=args.tol,
        max_iter=getattr(args, "max_iter", None),
        record_trace=True if record_trace else None,
    )


def _sidecar(args, suffix: str) -> Path:
    if args.output is None:
        raise InputError(f"--output is required to place the {suffix} CSV sidecar")
    out = Path(args.output)
    return out.with_name(out.stem + f"_{suffix}.csv")


def _iterate_at(sys: ComplexLinearSystem, w: CostWeights, k: int) -> dict:
    it = bimatrix_riccati_iterates(sys, w)
    p = next(it)
    for _ in range(k):
        p = next(it)
    return {"k": k, "p1": encode_complex_matrix(p.p1), "p2": encode_complex_matrix(p.p2)}


def cmd_solve_complex(args) -> int:
    parsed = load_input(args.input)
    if parsed.kind != "complex":
        raise InputError(f"solve-complex expects kind 'complex', got {parsed.kind!r}")
    sys_, w = parsed.complex_system, parsed.weights
    opts = _options(parsed, args, args.trace)
    res = lqr_complex(sys_, w, opts)
    rho = spectral_radius(closed_loop(sys_, res.gain))
    doc = {
        "command": "solve-complex",
        "kind": "complex",
        "p1": encode_complex_matrix(res.solution.p.p1),
        "p2": encode_complex_matrix(res.solution.p.p2),
        "k1": encode_complex_matrix(res.gain.k.m1),
        "k2": encode_complex_matrix(res.gain.k.m2),
        "iterations": res.solution.iterations,
        "residual": res.solution.residual,
        "spectral_radius": rho,
        "input": parsed.raw,
    }
    if args.record_iterate is not None:
        doc["iterate_at"] = _iterate_at(sys_, w, args.record_iterate)
    if args.trace:
        write_trace_csv(_sidecar(args, "trace"), res.solution.trace)
    write_json(doc, args.output)
    return EXIT_OK


def _antilinear_method_doc(method: str, sys_: AntilinearSystem, w: CostWeights, opts) -> dict:
    if method == "bimatrix":
        res = lqr_complex(sys_.lift(), w, opts)
        rho = spectral_radius(closed_loop(sys_.lift(), res.gain))
        return {
            "p1": encode_complex_matrix(res.solution.p.p1),
            "p2": encode_complex_matrix(res.solution.p.p2),
            "k1": encode_complex_matrix(res.gain.k.m1),
            "k2": encode_complex_matrix(res.gain.k.m2),
            "iterations": res.solution.iterations,
            "residual": res.solution.residual,
            "spectral_radius": rho,
        }
    solver = lqr_antilinear_anti if method == "anti" else lqr_antilinear_normal
    res = solver(sys_, w, opts)
    gain = FeedbackGain.from_matrices(res.k1)
    rho = spectral_radius(closed_loop(sys_.lift(), gain))
    return {
        "p": encode_complex_matrix(res.p),
        "k1": encode_complex_matrix(res.k1),
        "iterations": res.solution.iterations,
        "residual": res.solution.residual,
        "spectral_radius": rho,
    }


def cmd_solve_antilinear(args) -> int:
    parsed = load_input(args.input)
    if parsed.kind != "antilinear":
        raise InputError(f"solve-antilinear expects kind 'antilinear', got {parsed.kind!r}")
    sys_, w = parsed.antilinear_system, parsed.weights
    opts = _options(parsed, args, args.trace)
    if args.trace and args.method == "all":
        raise InputError("--trace requires a single --method")
    doc = {"command": "solve-antilinear", "kind": "antilinear", "method": args.method}
    if args.method == "all":
        report = cross_validate_antilinear(sys_, w, opts)
        doc["methods"] = {
            name: _antilinear_method_doc(name, sys_, w, opts)
            for name in ("bimatrix", "anti", "normal")
        }
        doc["discrepancies"] = {
            "max_p_rel": report.max_p_discrepancy,
            "max_gain_rel": report.max_gain_discrepancy,
            "p2_norm": report.p2_norm,
            "k2_norm": report.k2_norm,
        }
        doc["iterations"] = report.iterations
        doc["jmin_probe"] = report.jmin_probe
    else:
        body = _antilinear_method_doc(args.method, sys_, w, opts)
        if args.trace:
            # re-run the chosen solver with trace recording to emit the sidecar
            if args.method == "bimatrix":
                sol = solve_bimatrix_riccati(sys_.lift(), w, opts)
            elif args.method == "anti":
                sol = solve_anti_riccati(sys_, w, opts)
            else:
                sol = solve_normal_riccati(build_normal_data(sys_, w), opts)
            write_trace_csv(_sidecar(args, "trace"), sol.trace)
        doc.update(body)
    doc["input"] = parsed.raw
    write_json(doc, args.output)
    return EXIT_OK


def cmd_solve_delay(args) -> int:
    parsed = load_input(args.input)
    if parsed.kind != "delay":
        raise InputError(f"solve-delay expects kind 'delay', got {parsed.kind!r}")
    ds = parsed.delay_system
    ic = parsed.initial_condition
    opts = _options(parsed, args, args.trace)
    res = solve_delay_lqr(ds, opts)
    rho = spectral_radius(closed_loop(res.lifted, res.gain))
    doc = {
        "command": "solve-delay",
        "kind": "delay",
        "f": encode_real_matrix(res.feedback.f),
        "k1": encode_complex_matrix(res.gain.k.m1),
        "k2": encode_complex_matrix(res.gain.k.m2),
        "p1": encode_complex_matrix(res.solution.p.p1),
        "p2": encode_complex_matrix(res.solution.p.p2),
        "iterations": res.solution.iterations,
        "residual": res.solution.residual,
        "spectral_radius": rho,
        "padded": res.padded,
        "jmin": None if ic is None else res.jmin(ic),
        "jmin_lifted": None if ic is None else res.jmin_lifted(ic),
        "input": parsed.raw,
    }
    if args.record_iterate is not None:
        doc["iterate_at"] = _iterate_at(res.lifted, res.weights, args.record_iterate)
    if args.trace:
        write_trace_csv(_sidecar(args, "trace"), res.solution.trace)
    if args.horizon is not None:
        if ic is None:
            raise InputError("--horizon requires 'xi0' and 'xim1' in the input document")
        traj, cost = simulate_delay(ds, res.feedback, ic, args.horizon)
        doc["trajectory_cost"] = cost
        write_trajectory_csv(_sidecar(args, "trajectory"), traj.states, traj.inputs)
    write_json(doc, args.output)
    return EXIT_OK


def cmd_check_stabilizability(args) -> int:
    parsed = load_input(args.input)
    if parsed.kind == "complex":
        bad = unstabilizable_modes_complex(parsed.complex_system)
    elif parsed.kind == "antilinear":
        bad = unstabilizable_modes_antilinear(parsed.antilinear_system)
    else:
        ds = pad_odd_input(parsed.delay_system)
        l0, r = normalize_input_weight(ds.r0)
        ds_norm = DelaySystem(
            ds.a0, ds.ad, ds.g @ l0, ds.q0,
            np.block([[r, np.zeros_like(r)], [np.zeros_like(r), r]]),
        )
        sys_, _ = to_complex_system(ds_norm)
        bad = unstabilizable_modes_complex(sys_)
    if bad:
        print("stabilizable: false")
        for lam in bad:
            print(f"  rank-deficient at eigenvalue {lam.real:+.12g}{lam.imag:+.12g}j")
        return EXIT_NOT_STABILIZABLE
    print("stabilizable: true")
    return EXIT_OK


BENCH_COLUMNS = [
    "instance", "n", "m", "status",
    "anti_iters", "normal_iters", "bimatrix_iters",
    "anti_residual", "normal_residual", "bimatrix_residual",
    "wall_time_s",
]


def _bench_instance(name: str, sys_: AntilinearSystem, w: CostWeights, opts) -> dict:
    row = {c: "" for c in BENCH_COLUMNS}
    row.update(instance=name, n=sys_.n, m=sys_.m)
    if not is_stabilizable_antilinear(sys_):
        row["status"] = "skipped: not stabilizable"
        return row
    start = time.perf_counter()
    try:
        anti = solve_anti_riccati(sys_, w, opts)
        normal = solve_normal_riccati(build_normal_data(sys_, w), opts)
        bim = solve_bimatrix_riccati(sys_.lift(), w, opts)
    except CvlqrError as e:
        row["status"] = f"failed: {e}"
        return row
    row.update(
        status="ok",
        anti_iters=anti.iterations,
        normal_iters=normal.iterations,
        bimatrix_iters=bim.iterations,
        anti_residual=f"{anti.residual:.6e}",
        normal_residual=f"{normal.residual:.6e}",
        bimatrix_residual=f"{bim.residual:.6e}",
        wall_time_s=f"{time.perf_counter() - start:.6f}",
    )
    return row


def cmd_bench(args) -> int:
    opts = solver_options_from({}, tol=args.tol, max_iter=args.max_iter)
    rows = []
    if args.random is not None:
        n, m, count, seed = (int(v) for v in args.random)
        if n < 1 or m < 1 or count < 1:
            raise InputError("--random requires n, m, count >= 1")
        rng = np.random.default_rng(seed)
        for i in range(count):
            sys_ = random_antilinear_system(rng, n, m)
            w = CostWeights(random_hermitian_pd(rng, n), random_hermitian_pd(rng, m))
            rows.append(_bench_instance(f"random_{i:03d}", sys_, w, opts))
    else:
        if args.input_dir is None:
            raise InputError("bench needs an input directory or --random n m count seed")
        paths = sorted(Path(args.input_dir).glob("*.json"))
        if not paths:
            raise InputError(f"no *.json instances found in {args.input_dir}")
        for path in paths:
            parsed = load_input(path)
            if parsed.kind != "antilinear":
                raise InputError(f"{path}: bench expects antilinear instances, got {parsed.kind!r}")
            rows.append(_bench_instance(path.stem, parsed.antilinear_system, parsed.weights, opts))

    lines = [",".join(BENCH_COLUMNS)]
    lines += [",".join(str(row[c]) for c in BENCH_COLUMNS) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cvlqr",
        description="LQR synthesis for discrete-time complex-valued, antilinear and one-step-delay systems",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-complex", help="solve the full bimatrix Riccati pipeline")
    _add_common_solver_flags(p)
    p.add_argument("--record-iterate", type=int, default=None, metavar="K",
                   help="include iterate K of the cost recursion in the result")
    p.set_defaults(func=cmd_solve_complex)

    p = sub.add_parser("solve-antilinear", help="solve an antilinear system by one or all routes")
    _add_common_solver_flags(p)
    p.add_argument("--method", choices=("bimatrix", "anti", "normal", "all"), default="all")
    p.set_defaults(func=cmd_solve_antilinear)

    p = sub.add_parser("solve-delay", help="solve the one-step-delay LQR pipeline")
    _add_common_solver_flags(p)
    p.add_argument("--record-iterate", type=int, default=None, metavar="K",
                   help="include iterate K of the lifted cost recursion in the result")
    p.add_argument("--horizon", type=int, default=None,
                   help="also simulate the closed loop and write <output>_trajectory.csv")
    p.set_defaults(func=cmd_solve_delay)

    p = sub.add_parser("check-stabilizability", help="rank test; exit 0 if stabilizable, 3 if not")
    p.add_argument("input", help="path to a JSON input document")
    p.set_defaults(func=cmd_check_stabilizability)

    p = sub.add_parser("bench", help="compare solver iteration counts over an instance set")
    p.add_argument("input_dir", nargs="?", default=None,
                   help="directory of antilinear JSON instances")
    p.add_argument("--random", nargs=4, metavar=("N", "M", "COUNT", "SEED"), default=None,
                   help="generate COUNT random stabilizable instances instead")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--output", default=None, help="CSV report path (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidWeightsError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except DivergedError as e:
        print(f"error: system not stabilizable ({e})", file=sys.stderr)
        return EXIT_NOT_STABILIZABLE
    except NotConvergentError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_CONVERGENT


if __name__ == "__main__":
    raise SystemExit(main())
