"""Iteration counts on the worst-case family and random-instance sweeps."""
import logging
import time
from dataclasses import dataclass
from multiprocessing import Pool, cpu_count
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from src.assignment import (MatchingCert, augment, compute_assignment, extract_certificate,
                            iteration_bound, tightness_instance, verify_assignment)
from src.lib.errors import InputError
from src.lib.generators import random_sized_bipartite
from src.oracle import max_matching

logger = logging.getLogger(__name__)

TABLE_COLUMNS = ["n", "vertices", "iterations", "expected", "bound"]


def _default_jobs(tasks: int) -> int:
    return max(1, min(4, cpu_count(), tasks))


def _run_pool(worker, args, jobs: Optional[int]):
    processes = _default_jobs(len(args)) if jobs is None else jobs
    if processes <= 1:
        return [worker(a) for a in args]
    logger.info("Processing %d instances in parallel on %d processes...", len(args), processes)
    with Pool(processes=processes) as pool:
        return pool.map(worker, args)


def _tightness_row(args: Tuple[int, bool]) -> dict:
    n, timing = args
    arena = tightness_instance(n)
    started = time.perf_counter()
    _, stats = compute_assignment(arena)
    elapsed = time.perf_counter() - started
    row = {
        "n": n,
        "vertices": arena.vertex_count,
        "iterations": stats.iterations,
        "expected": n * n + 1,
        "bound": iteration_bound(arena.vertex_count),
    }
    if timing:
        row["seconds"] = elapsed
    return row


def tightness_table(n_max: int, timing: bool = False, jobs: Optional[int] = None,
                    n_values=None) -> pd.DataFrame:
    """One row per worst-case instance n = 1..n_max (or the given n values)."""
    if n_values is None:
        if n_max < 1:
            raise InputError(f"--n-max must be at least 1, got {n_max}")
        n_values = range(1, n_max + 1)
    rows = _run_pool(_tightness_row, [(n, timing) for n in n_values], jobs)
    columns = TABLE_COLUMNS + (["seconds"] if timing else [])
    df = pd.DataFrame(rows, columns=columns)
    off = df[df["iterations"] != df["expected"]]
    if not off.empty:
        logger.warning("iteration count differs from n^2+1 for n = %s", ", ".join(map(str, off["n"])))
    return df


def timing_slope(df: pd.DataFrame) -> float:
    """Exponent a of a fit t(n) = c * n^a over the rows with a positive time."""
    timed = df[df["seconds"] > 0]
    if len(timed) < 2:
        raise InputError("need at least two timed rows to fit a slope")
    slope, _ = np.polyfit(np.log(timed["n"].to_numpy(dtype=float)),
                          np.log(timed["seconds"].to_numpy(dtype=float)), 1)
    return float(slope)


def format_table(df: pd.DataFrame) -> str:
    shown = df.copy()
    if "seconds" in shown:
        shown["seconds"] = shown["seconds"].map(lambda s: f"{s:.6f}")
    return shown.to_string(index=False)


@dataclass(frozen=True)
class SweepSummary:
    instances: int
    matching: int
    violator: int
    disagreements: int
    max_iteration_ratio: float

    def line(self) -> str:
        return (f"instances={self.instances} matching={self.matching} violator={self.violator} "
                f"disagreements={self.disagreements} max_iteration_ratio={self.max_iteration_ratio:.6f}")


def _sweep_one(seed_seq) -> Tuple[bool, bool, float]:
    g = random_sized_bipartite(np.random.default_rng(seed_seq))
    arena = augment(g)
    a, stats = compute_assignment(arena)
    agree = verify_assignment(arena, a).ok
    cert = extract_certificate(arena, a)
    agree = agree and cert.violations(g).ok
    found_matching = isinstance(cert, MatchingCert)
    agree = agree and found_matching == max_matching(g).covers_side1(g)
    return found_matching, agree, stats.iterations / stats.bound


def random_sweep(count: int, seed: Optional[int] = None, jobs: Optional[int] = None) -> SweepSummary:
    """Assign, certify and cross-check ``count`` random bipartite instances."""
    if count < 1:
        raise InputError(f"--count must be at least 1, got {count}")
    seeds = np.random.SeedSequence(seed).spawn(count)
    results = _run_pool(_sweep_one, seeds, jobs)
    matching = sum(1 for found, _, _ in results if found)
    disagreements = sum(1 for _, ok, _ in results if not ok)
    if disagreements:
        logger.error("%d of %d instances disagree with the oracle", disagreements, count)
    return SweepSummary(
        instances=count,
        matching=matching,
        violator=count - matching,
        disagreements=disagreements,
        max_iteration_ratio=max(ratio for _, _, ratio in results),
    )
