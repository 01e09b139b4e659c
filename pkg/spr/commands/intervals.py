from spr.commands import CommandRouter, arg, emit, parse_int_list
from spr.diagnostics import DEFAULT_C_INT, interval_partition
from spr.errors import InvalidParameter
from spr.graph_io import read_graph
from spr.utils_logging import get_logger, kv

router = CommandRouter()
logger = get_logger(__name__)


@router.command(
    "intervals",
    help="dump the greedy interval partition of a terminal pair's shortest path",
    arguments=[
        arg("graph"),
        arg("--pair", required=True, help="terminal indices i,j"),
        arg("--c-int", type=float, default=DEFAULT_C_INT, help="c_int * delta must be at most 1"),
        arg("--delta", type=float, default=None),
    ],
)
def cmd_intervals(args) -> int:
    g = read_graph(args.graph)
    pair = parse_int_list(args.pair, "--pair")
    if len(pair) != 2 or not all(0 <= i < g.k for i in pair):
        raise InvalidParameter("--pair needs two terminal indices", pair=args.pair, k=g.k)
    partition = interval_partition(g, g.terminals[pair[0]], g.terminals[pair[1]], args.c_int, args.delta)
    emit(q.to_row() for q in partition.intervals)
    lengths = kv(total=partition.total_external_length(), steiner=partition.steiner_external_length())
    logger.info(f"intervals {kv(count=len(partition.intervals))} L_plus {lengths}")
    return 0
