from spr.commands import CommandRouter, arg
from spr.errors import InvalidParameters
from spr.graph_io import format_graph, write_graph
from spr.instances import DEFAULT_WEIGHT_RANGE, InstanceSpec, bg_lower_bound_epsilon, caterpillar_epsilon
from spr.utils_logging import get_logger, kv

router = CommandRouter()
logger = get_logger(__name__)

FAMILIES = {
    "caterpillar": "caterpillar",
    "bg-lb": "bg_lower_bound",
    "binary-tree": "binary_tree",
    "random": "random",
}


def _epsilon(text, family, k, c):
    if text is None:
        return None
    if text != "auto":
        try:
            return float(text)
        except ValueError:
            raise InvalidParameters("--eps must be a number or 'auto'", eps=text)
    if k is None:
        raise InvalidParameters("--eps auto needs --k")
    if family == "caterpillar":
        return caterpillar_epsilon(k)
    if family == "bg_lower_bound":
        return bg_lower_bound_epsilon(k, c)
    raise InvalidParameters("--eps auto only applies to caterpillar and bg-lb")


@router.command(
    "gen",
    help="generate an instance in spr-graph format",
    arguments=[
        arg("family", choices=sorted(FAMILIES)),
        arg("--k", type=int),
        arg("--eps", default=None, help="edge parameter, or 'auto' for the lower-bound preset"),
        arg("--c", type=float, default=1.0, help="constant of the bg-lb auto preset c/sqrt(ln k)"),
        arg("--depth", type=int),
        arg("--n", type=int),
        arg("--m", type=int),
        arg("--seed", type=int, default=0),
        arg("--weight-low", type=float, default=DEFAULT_WEIGHT_RANGE[0]),
        arg("--weight-high", type=float, default=DEFAULT_WEIGHT_RANGE[1]),
        arg("-o", "--out", default=None, help="output path (stdout when omitted)"),
    ],
)
def cmd_gen(args) -> int:
    family = FAMILIES[args.family]
    spec = InstanceSpec(
        family=family,
        k=args.k,
        epsilon=_epsilon(args.eps, family, args.k, args.c),
        depth=args.depth,
        n=args.n,
        m=args.m,
        seed=args.seed,
        weight_range=(args.weight_low, args.weight_high),
    )
    g = spec.build()
    comments = [f"generated {spec.describe()}"]
    if args.out is None:
        print(format_graph(g, comments), end="")
    else:
        write_graph(g, args.out, comments)
    logger.info(f"generated {kv(family=family, n=g.n, m=g.m, k=g.k, out=args.out or '-')}")
    return 0
