import math
import time

from spr.commands import CommandRouter, arg, emit, parse_int_list
from spr.config import get_settings
from spr.errors import InvalidParameter
from spr.fast_voronoi import extraction_bound
from spr.instances import gen_random
from spr.runner import run_algorithm
from spr.schemas import BenchRow
from spr.utils_logging import get_logger, kv

router = CommandRouter()
logger = get_logger(__name__)

DEFAULT_SIZES = "10000,20000,40000"


def ladder_instance(m: int, seed: int):
    """Random graph with n = m/5 vertices and k = floor(sqrt(n)) terminals."""
    n = max(2, m // 5)
    return gen_random(n, m, max(2, math.isqrt(n)), seed)


def best_time(g, algorithm: str, seed: int, repeats: int):
    best, result = math.inf, None
    for _ in range(repeats):
        start = time.perf_counter()
        result = run_algorithm(g, algorithm, seed)
        best = min(best, time.perf_counter() - start)
    return best, result


@router.command(
    "bench",
    help="time an algorithm over a ladder of random graph sizes",
    arguments=[
        arg("--sizes", default=DEFAULT_SIZES, help="edge counts m, comma separated"),
        arg("--algo", default="fast"),
        arg("--seed", type=int, default=None),
        arg("--repeats", type=int, default=None, help="best-of count (SPR_BENCH_REPEATS when omitted)"),
        arg("--compare-slow", action="store_true", help="also time the reference noisy algorithm"),
    ],
)
def cmd_bench(args) -> int:
    settings = get_settings()
    seed = args.seed if args.seed is not None else settings.default_seed
    repeats = args.repeats or settings.bench_repeats
    sizes = parse_int_list(args.sizes, "--sizes")
    if not sizes or any(m < 10 for m in sizes):
        raise InvalidParameter("--sizes needs edge counts of at least 10", sizes=args.sizes)

    previous = None
    for m in sizes:
        g = ladder_instance(m, seed)
        seconds, result = best_time(g, args.algo, seed, repeats)
        trace = result.trace
        row = BenchRow(
            algorithm=args.algo,
            n=g.n,
            m=g.m,
            k=g.k,
            seconds=seconds,
            ratio=seconds / previous if previous else None,
            inserts=getattr(trace, "inserts", None),
            decreases=getattr(trace, "decreases", None),
            extractions=getattr(trace, "extractions", None),
            extraction_bound=extraction_bound(g) if hasattr(trace, "extractions") else None,
        )
        if args.compare_slow:
            slow_seconds, _ = best_time(g, "noisy", seed, repeats)
            row = row.model_copy(update={"slow_seconds": slow_seconds})
        logger.info(f"bench {kv(algo=args.algo, n=g.n, m=g.m, k=g.k, seconds=seconds)}")
        emit([row])
        previous = seconds
    return 0
