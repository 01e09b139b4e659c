from spr.commands import CommandRouter, arg, emit
from spr.commands.run import ALGORITHM_ARGUMENTS, options_from, seed_from
from spr.diagnostics import expected_distortion
from spr.graph_io import read_graph

router = CommandRouter()


@router.command(
    "trials",
    help="estimate the expected distortion over consecutive seeds",
    arguments=[
        arg("graph"),
        *ALGORITHM_ARGUMENTS,
        arg("--trials", type=int, default=100),
        arg("--threads", type=int, default=None, help="worker cap (SPR_THREADS when omitted)"),
        arg("--pairs", action="store_true", help="print one row per terminal pair"),
    ],
)
def cmd_trials(args) -> int:
    g = read_graph(args.graph)
    estimate = expected_distortion(
        g,
        args.algo,
        args.trials,
        seed=seed_from(args),
        options=options_from(args),
        threads=args.threads,
    )
    if args.pairs:
        emit(estimate.pair_rows())
    emit([estimate.summary()])
    return 0
