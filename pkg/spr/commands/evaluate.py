from spr.commands import CommandRouter, arg, emit
from spr.errors import InvalidParameter
from spr.graph_io import read_graph, read_minor_record
from spr.partition import InducedMinor, distortion
from spr.schemas import DistortionRecord
from spr.utils_logging import get_logger, kv

router = CommandRouter()
logger = get_logger(__name__)


@router.command(
    "eval",
    help="recompute the distortion of a saved minor record",
    arguments=[arg("graph"), arg("minor", help="record file written by 'run'")],
)
def cmd_eval(args) -> int:
    g = read_graph(args.graph)
    record = read_minor_record(args.minor)
    if tuple(record.terminals) != g.terminals:
        raise InvalidParameter("minor terminals do not match the graph", path=args.minor)
    minor = InducedMinor.from_record(record)
    report = distortion(g, minor)
    emit(
        [
            DistortionRecord(
                algorithm=record.algorithm,
                seed=record.seed,
                worst=report.worst,
                argmax_pair=report.argmax_pair,
                minor_edges=len(minor.edges),
            )
        ]
    )
    if record.distortion_worst is not None and abs(record.distortion_worst - report.worst) > 1e-9 * report.worst:
        logger.warning(f"distortion differs from record {kv(recorded=record.distortion_worst, now=report.worst)}")
    return 0
