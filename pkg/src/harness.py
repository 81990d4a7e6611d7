"""
Algorithm registry, result finalization and ratio measurement against the oracle
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from models import (
    Instance, InstanceKind, InstanceError, InvariantViolation,
    ApproxResult, Cover, GenParams, GenShape, RatioRecord, RatioReport
)
from instance_core import complete_to_convex, is_convex, is_cover, overwritten_set, recoloring_cost
from instance_parser import serialize_instance
from generator import gen_instance, minimum_size
from oracle import exact_opt, DEFAULT_CAP
from cache_manager import OracleCache
from string_approx import two_approx_string, three_string_approx
from tree_approx import three_tree_approx, four_tree_approx


@dataclass(frozen=True)
class AlgorithmSpec:
    name: str
    run: Callable[[Instance], ApproxResult]
    bound: int
    strings_only: bool


ALGORITHMS: Dict[str, AlgorithmSpec] = {
    "string2": AlgorithmSpec("string2", two_approx_string, 2, True),
    "string3": AlgorithmSpec("string3", three_string_approx, 3, True),
    "tree3": AlgorithmSpec("tree3", three_tree_approx, 3, False),
    "tree4": AlgorithmSpec("tree4", four_tree_approx, 4, False),
}


def get_algorithm(algo_id: str) -> AlgorithmSpec:
    if algo_id not in ALGORITHMS:
        raise InstanceError(f"unknown algorithm {algo_id!r} (choose from {', '.join(ALGORITHMS)})")
    return ALGORITHMS[algo_id]


def run_algorithm(algo_id: str, inst: Instance) -> ApproxResult:
    spec = get_algorithm(algo_id)
    if spec.strings_only and inst.kind is not InstanceKind.STRING:
        raise InstanceError(f"{algo_id} needs a string instance")
    return spec.run(inst)


def finalize_result(inst: Instance, result: ApproxResult) -> ApproxResult:
    """
    Total convex recoloring for a result, with cover and cost taken from it

    Cover-only results are completed from the coloring left after removing
    the cover. The returned cover is the set of actually overwritten vertices.
    """
    coloring = result.coloring
    if coloring is None:
        coloring = complete_to_convex(inst, inst.coloring().without(result.cover.members))
    if not is_convex(inst, coloring):
        raise InvariantViolation(f"{result.algorithm} produced a non-convex coloring")
    return replace(
        result,
        coloring=coloring,
        cover=Cover(overwritten_set(inst, coloring)),
        cost=recoloring_cost(inst, coloring),
    )


def instance_params(params: GenParams, index: int, vary_size: bool = True) -> GenParams:
    """
    Parameters of the index-th benchmark instance

    Seeds advance by one per instance. With `vary_size`, n is drawn between the
    shape's minimum and `params.n` from the instance's own stream.
    """
    seed = params.seed + index
    n = params.n
    if vary_size:
        low = minimum_size(params.shape, params.c)
        if n < low:
            raise InstanceError(f"{params.shape.value} needs n >= {low}")
        n = int(np.random.Generator(np.random.PCG64(seed)).integers(low, n + 1))
    return replace(params, n=n, seed=seed)


def _evaluate(algo_id: str, params: GenParams, index: int, cap: int,
              cache_dir: Optional[str], vary_size: bool, fail_fast: bool = True) -> RatioRecord:
    spec = get_algorithm(algo_id)
    p = instance_params(params, index, vary_size)
    inst = gen_instance(p)
    cache = OracleCache(cache_dir) if cache_dir else None

    result = run_algorithm(algo_id, inst)
    _, opt = exact_opt(inst, cap, cache)
    if opt == 0:
        ratio = Fraction(1) if result.cost == 0 else None
    else:
        ratio = result.cost / opt

    problem = None
    if not is_cover(inst, result.cover):
        problem = f"{algo_id} returned an invalid cover on\n{serialize_instance(inst)}"
    elif ratio is None or ratio > spec.bound:
        problem = (f"{algo_id} cost {result.cost} against OPT {opt} breaks the factor {spec.bound} on\n"
                   f"{serialize_instance(inst)}")
    if problem is not None and fail_fast:
        raise InvariantViolation(problem)
    return RatioRecord(index=index, seed=p.seed, n=inst.n, algo_cost=result.cost, opt=opt, ratio=ratio,
                       violation=problem is not None)


def _evaluate_packed(args) -> RatioRecord:
    return _evaluate(*args)


def measure_ratio(algo_id: str, params: GenParams, count: int, cap: int = DEFAULT_CAP,
                  cache_dir: Optional[str] = None, workers: int = 1,
                  vary_size: bool = True, progress: bool = False, fail_fast: bool = True) -> RatioReport:
    """
    Run an algorithm on `count` generated instances and compare with OPT

    String algorithms always get path-shaped instances. With fail_fast the
    first invalid cover or ratio above the proven bound stops the run;
    otherwise such instances are recorded and counted in `violations`.

    Raises:
        InvariantViolation: With fail_fast, on the first violation, with the instance serialized
    """
    spec = get_algorithm(algo_id)
    if count < 1:
        raise InstanceError(f"count must be positive, got {count}")
    if spec.strings_only and params.shape is not GenShape.PATH:
        params = replace(params, shape=GenShape.PATH)

    jobs = [(algo_id, params, i, cap, cache_dir, vary_size, fail_fast) for i in range(count)]
    report = RatioReport(algorithm=algo_id, bound=spec.bound)
    with tqdm(total=count, desc=f"{algo_id} vs OPT", unit="inst", disable=not progress) as bar:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for record in pool.map(_evaluate_packed, jobs):
                    report.records.append(record)
                    bar.update(1)
        else:
            for job in jobs:
                report.records.append(_evaluate_packed(job))
                bar.update(1)
    return report
