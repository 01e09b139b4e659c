"""
Subcommands are declared on a ``CommandRouter`` per module and mounted by
``spr.main`` with ``include_router``.
"""

import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional, TextIO, Tuple

from pydantic import BaseModel

from spr.errors import InvalidParameter, IoError

Argument = Tuple[Tuple[str, ...], dict]


def arg(*flags: str, **kwargs) -> Argument:
    return flags, kwargs


@dataclass
class Command:
    name: str
    help: str
    handler: Callable
    arguments: List[Argument] = field(default_factory=list)


class CommandRouter:
    def __init__(self):
        self.commands: List[Command] = []

    def command(self, name: str, help: str, arguments: Iterable[Argument] = ()):
        def decorator(fn: Callable) -> Callable:
            self.commands.append(Command(name=name, help=help, handler=fn, arguments=list(arguments)))
            return fn

        return decorator


def emit(records: Iterable[BaseModel], out: Optional[TextIO] = None) -> None:
    """Write records as JSON lines."""
    out = out or sys.stdout
    for record in records:
        out.write(record.model_dump_json())
        out.write("\n")


def open_output(path: Optional[str]) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    try:
        return open(path, "w")
    except OSError as e:
        raise IoError(f"cannot open output file: {e}", path=path)


def parse_int_list(text: Optional[str], name: str) -> Optional[Tuple[int, ...]]:
    if text is None:
        return None
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise InvalidParameter(f"{name} must be a comma separated list of integers", value=text)
