#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

import ujson

from src import __version__, config
from src.helpers import (
    TEST_IMAGE_KINDS,
    FixedPointConfig,
    ModelParams,
    NoiseSpec,
    RofConfig,
    SolverConfig,
    add_noise,
    generate_test_image,
    load_image,
    psnr,
    rof_energy,
    run,
    save_image,
    solve_rof,
)
from src.logger import LOGGER
from src.modules.bench import build_cases, run_bench, write_bench_report
from src.modules.utils import format_seconds, write_trace_csv

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MAX_ITER = 2


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _float_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v]


def _add_io(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--output", required=True, type=Path)
    p.add_argument("--bit-depth", type=int, choices=(8, 16), default=config.DEFAULT_BIT_DEPTH)


def build_parser() -> CliParser:
    parser = CliParser(
        prog="elastica",
        description="Euler's elastica image smoothing by operator splitting.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    smooth = sub.add_parser("smooth", help="smooth an image with the elastica model")
    _add_io(smooth)
    smooth.add_argument("--a", type=float, default=config.DEFAULT_A)
    smooth.add_argument("--b", type=float, default=config.DEFAULT_B)
    smooth.add_argument("--tau", type=float, default=config.DEFAULT_TAU)
    smooth.add_argument("--h", type=float, default=config.DEFAULT_H)
    smooth.add_argument("--tol", type=float, default=config.DEFAULT_TOL)
    smooth.add_argument("--max-iter", type=int, default=config.DEFAULT_MAX_ITER)
    smooth.add_argument("--fp-tol", type=float, default=config.DEFAULT_FP_TOL)
    smooth.add_argument("--fp-max-iter", type=int, default=config.DEFAULT_FP_MAX_ITER)
    smooth.add_argument(
        "--gamma-exponent", type=int, choices=(1, 2), default=config.DEFAULT_GAMMA_EXPONENT
    )
    smooth.add_argument("--trace", type=Path, help="write the energy trace CSV here")
    smooth.add_argument("--trace-every", type=int, default=config.DEFAULT_TRACE_EVERY)
    smooth.add_argument("--reference", type=Path, help="clean image for a PSNR report")

    rof = sub.add_parser("rof", help="elastica with b = 0 cross-checked against a TV solver")
    _add_io(rof)
    rof.add_argument("--a", type=float, default=config.DEFAULT_A)
    rof.add_argument("--tau", type=float, default=config.DEFAULT_TAU)
    rof.add_argument("--tol", type=float, default=config.DEFAULT_TOL)
    rof.add_argument("--max-iter", type=int, default=config.DEFAULT_MAX_ITER)
    rof.add_argument(
        "--gamma-exponent", type=int, choices=(1, 2), default=config.ROF_GAMMA_EXPONENT
    )
    rof.add_argument("--oracle-tol", type=float, default=config.DEFAULT_ROF_TOL)
    rof.add_argument("--oracle-max-iter", type=int, default=config.DEFAULT_ROF_MAX_ITER)
    rof.add_argument("--oracle-output", type=Path)

    noise = sub.add_parser(
        "noise", help="add seeded Gaussian noise; std is on the [0, 1] scale (20/255 = 0.0784)"
    )
    _add_io(noise)
    noise.add_argument("--std", type=float, required=True)
    noise.add_argument("--seed", type=int, default=0)

    gen = sub.add_parser("gen-test-image", help="write a procedural test image")
    gen.add_argument("--kind", choices=TEST_IMAGE_KINDS, required=True)
    gen.add_argument("--size", type=int, default=64)
    gen.add_argument("--output", required=True, type=Path)
    gen.add_argument("--bit-depth", type=int, choices=(8, 16), default=config.DEFAULT_BIT_DEPTH)

    bench = sub.add_parser("bench", help="convergence-speed benchmark over generated images")
    bench.add_argument("--kinds", default="ball,square,star,circle")
    bench.add_argument("--stds", type=_float_list, default=[0.1, 0.05, 0.02])
    bench.add_argument("--tols", type=_float_list, default=[config.DEFAULT_TOL])
    bench.add_argument("--size", type=int, default=64)
    bench.add_argument("--seed", type=int, default=0)
    bench.add_argument("--a", type=float, default=config.DEFAULT_A)
    bench.add_argument("--b", type=float, default=config.DEFAULT_B)
    bench.add_argument("--tau", type=float, default=config.DEFAULT_TAU)
    bench.add_argument("--max-iter", type=int, default=config.DEFAULT_MAX_ITER)
    bench.add_argument("--workers", type=int, default=config.BENCH_WORKERS)
    bench.add_argument("--output-dir", type=Path, default=config.BENCH_OUTPUT_DIR)
    return parser


def _cmd_smooth(args: argparse.Namespace) -> int:
    cfg = SolverConfig(
        params=ModelParams(a=args.a, b=args.b, tau=args.tau, h=args.h),
        tol=args.tol,
        max_iter=args.max_iter,
        fp=FixedPointConfig(fp_tol=args.fp_tol, fp_max_iter=args.fp_max_iter),
        gamma_exponent=args.gamma_exponent,
        trace_every=args.trace_every,
    )
    reference = load_image(args.reference) if args.reference else None
    f = load_image(args.input)
    result = run(f, cfg)

    save_image(result.u, args.output, args.bit_depth)
    if args.trace:
        write_trace_csv(result.trace, args.trace)

    LOGGER.info(
        "%d iterations in %s (%s per iteration)",
        result.iterations,
        format_seconds(result.seconds),
        format_seconds(result.seconds_per_iter),
    )
    if reference is not None:
        LOGGER.info(
            "PSNR noisy %.2f dB, smoothed %.2f dB",
            psnr(f, reference),
            psnr(result.u, reference),
        )
    return EXIT_OK if result.converged else EXIT_MAX_ITER


def _cmd_rof(args: argparse.Namespace) -> int:
    cfg = SolverConfig(
        params=ModelParams(a=args.a, b=0.0, tau=args.tau),
        tol=args.tol,
        max_iter=args.max_iter,
        gamma_exponent=args.gamma_exponent,
    )
    f = load_image(args.input)
    elastica = run(f, cfg)
    oracle = solve_rof(
        f, RofConfig(weight=args.a, tol=args.oracle_tol, max_iter=args.oracle_max_iter)
    )

    save_image(elastica.u, args.output, args.bit_depth)
    if args.oracle_output:
        save_image(oracle.u, args.oracle_output, args.bit_depth)

    e_elastica = rof_energy(elastica.u, f, args.a)
    e_oracle = rof_energy(oracle.u, f, args.a)
    report = {
        "elastica": {
            "rof_energy": e_elastica,
            "iterations": elastica.iterations,
            "converged": elastica.converged,
        },
        "oracle": {
            "rof_energy": e_oracle,
            "iterations": oracle.iterations,
            "converged": oracle.converged,
        },
        "relative_gap": abs(e_oracle - e_elastica) / e_oracle if e_oracle else 0.0,
    }
    print(ujson.dumps(report, indent=2))
    return EXIT_OK if elastica.converged else EXIT_MAX_ITER


def _cmd_noise(args: argparse.Namespace) -> int:
    spec = NoiseSpec(std=args.std, seed=args.seed)
    save_image(add_noise(load_image(args.input), spec), args.output, args.bit_depth)
    return EXIT_OK


def _cmd_gen(args: argparse.Namespace) -> int:
    save_image(generate_test_image(args.kind, args.size), args.output, args.bit_depth)
    return EXIT_OK


def _cmd_bench(args: argparse.Namespace) -> int:
    kinds = [k for k in args.kinds.split(",") if k]
    unknown = sorted(set(kinds) - set(TEST_IMAGE_KINDS))
    if unknown:
        raise ValueError(f"unknown test image kinds: {', '.join(unknown)}")
    params = ModelParams(a=args.a, b=args.b, tau=args.tau)
    cases = build_cases(kinds, args.stds, args.tols, args.size, args.seed)
    results = run_bench(cases, params, args.max_iter, args.workers)
    write_bench_report(results, args.output_dir)
    return EXIT_OK if all(r.converged for r in results) else EXIT_MAX_ITER


COMMANDS = {
    "smooth": _cmd_smooth,
    "rof": _cmd_rof,
    "noise": _cmd_noise,
    "gen-test-image": _cmd_gen,
    "bench": _cmd_bench,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        LOGGER.error("%s failed: %s", args.command, exc)
        return EXIT_ERROR
