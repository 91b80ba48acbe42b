#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

import csv
import itertools
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Iterable, Sequence

from src import config
from src.helpers import (
    BenchCase,
    BenchResult,
    ModelParams,
    NoiseSpec,
    SolverConfig,
    add_noise,
    generate_test_image,
    run,
)
from src.logger import LOGGER
from src.modules.utils import format_seconds, write_json

BENCH_FIELDS = tuple(BenchResult.model_fields)


def build_cases(
    kinds: Sequence[str],
    stds: Sequence[float],
    tols: Sequence[float],
    size: int,
    seed: int = 0,
) -> list[BenchCase]:
    return [
        BenchCase(kind=kind, size=size, std=std, tol=tol, seed=seed)
        for kind, std, tol in itertools.product(kinds, stds, tols)
    ]


def run_case(case: BenchCase, params: ModelParams, max_iter: int) -> BenchResult:
    """Solve one generated, noised test image and report its convergence speed."""
    clean = generate_test_image(case.kind, case.size)
    noisy = add_noise(clean, NoiseSpec(std=case.std, seed=case.seed))
    cfg = SolverConfig(params=params, tol=case.tol, max_iter=max_iter)
    result = run(noisy, cfg)
    final = result.trace.records[-1].e_total if result.trace.records else result.initial_energy
    return BenchResult(
        kind=case.kind,
        size=case.size,
        std=case.std,
        tol=case.tol,
        iterations=result.iterations,
        converged=result.converged,
        seconds=result.seconds,
        seconds_per_iter=result.seconds_per_iter,
        final_energy=final,
    )


def run_bench(
    cases: Iterable[BenchCase],
    params: ModelParams,
    max_iter: int = config.DEFAULT_MAX_ITER,
    workers: int = config.BENCH_WORKERS,
) -> list[BenchResult]:
    cases = list(cases)
    LOGGER.info("Running %d benchmark cases on %d worker(s)", len(cases), workers)
    if workers <= 1 or len(cases) <= 1:
        results = [run_case(case, params, max_iter) for case in cases]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(
                    run_case,
                    cases,
                    itertools.repeat(params),
                    itertools.repeat(max_iter),
                )
            )

    for r in results:
        LOGGER.info(
            "%s size=%d std=%g tol=%g: %d iterations%s in %s (%s/iter)",
            r.kind,
            r.size,
            r.std,
            r.tol,
            r.iterations,
            "" if r.converged else " (not converged)",
            format_seconds(r.seconds),
            format_seconds(r.seconds_per_iter),
        )
    return results


def write_bench_report(results: Sequence[BenchResult], output_dir: Path) -> tuple[Path, Path]:
    output_dir.mkdir(parents=True, exist_ok=True)
    csv_path = output_dir / "bench.csv"
    json_path = output_dir / "bench.json"

    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=BENCH_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in results:
            writer.writerow(r.model_dump())

    write_json(
        {
            "cases": len(results),
            "converged": sum(r.converged for r in results),
            "total_seconds": sum(r.seconds for r in results),
            "results": [r.model_dump() for r in results],
        },
        json_path,
    )
    LOGGER.info("Benchmark report written to %s and %s", csv_path, json_path)
    return csv_path, json_path
