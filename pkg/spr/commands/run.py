from spr.commands import CommandRouter, arg, emit, open_output, parse_int_list
from spr.config import get_settings
from spr.graph_io import read_graph
from spr.noisy_voronoi import FrontierPolicy
from spr.partition import distortion
from spr.runner import RunOptions, describe, run_algorithm
from spr.schemas import DistortionRecord
from spr.utils_logging import get_logger, kv

router = CommandRouter()

ALGORITHM_ARGUMENTS = [
    arg("--algo", default="fast", help="; ".join(f"{name}: {text}" for name, text in describe().items())),
    arg("--seed", type=int, default=None),
    arg("--p", type=float, default=0.2, help="geometric parameter of the noisy algorithms"),
    arg("--delta", type=float, default=None, help="magnitude step; 1/(20 ln k) when omitted"),
    arg("--draws", default=None, help="pin g_1..g_k, comma separated"),
    arg("--shuffle-terminals", action="store_true"),
    arg("--frontier", choices=[p.value for p in FrontierPolicy], default="fifo"),
    arg("--ball-delta", type=float, default=0.05),
    arg("--no-normalize", action="store_true", help="skip ball-growing unit normalization"),
]


def options_from(args) -> RunOptions:
    return RunOptions(
        p=args.p,
        delta=args.delta,
        draws=parse_int_list(args.draws, "--draws"),
        shuffle_terminals=args.shuffle_terminals,
        frontier_policy=args.frontier,
        ball_delta=args.ball_delta,
        normalize=not args.no_normalize,
    )


def seed_from(args) -> int:
    return args.seed if args.seed is not None else get_settings().default_seed


@router.command(
    "run",
    help="run one algorithm and print the minor record",
    arguments=[
        arg("graph"),
        *ALGORITHM_ARGUMENTS,
        arg("--trace", action="store_true", help="also print one record per round"),
        arg("-o", "--out", default=None, help="record file (stdout when omitted)"),
    ],
)
def cmd_run(args) -> int:
    seed = seed_from(args)
    logger = get_logger(__name__, seed=seed)
    g = read_graph(args.graph)
    result = run_algorithm(g, args.algo, seed, options_from(args))
    report = distortion(g, result.minor)
    records = [
        result.minor.to_record(args.algo, seed, report, scale=getattr(result.trace, "scale", 1.0)),
        DistortionRecord(
            algorithm=args.algo,
            seed=seed,
            worst=report.worst,
            argmax_pair=report.argmax_pair,
            minor_edges=len(result.minor.edges),
        ),
    ]
    if args.trace:
        records.extend(result.trace.records())
    out = open_output(args.out)
    try:
        emit(records, out)
    finally:
        if args.out not in (None, "-"):
            out.close()
    logger.info(f"run {kv(algo=args.algo, n=g.n, k=g.k, worst=report.worst, pair=report.argmax_pair)}")
    return 0
