import argparse
from dataclasses import dataclass
from typing import Callable, Dict, Optional

Handler = Callable[[argparse.Namespace], int]


@dataclass
class Command:
    handler: Handler
    add_arguments: Optional[Callable[[argparse.ArgumentParser], None]] = None
    help: str = ""


class CommandRouter:
    """Collects subcommands the way routers are collected on an application."""

    def __init__(self):
        self.commands: Dict[str, Command] = {}

    def include_command(self, command: Command, name: str) -> None:
        if name in self.commands:
            raise ValueError(f"command {name} registered twice")
        self.commands[name] = command

    def install(self, parser: argparse.ArgumentParser, common: argparse.ArgumentParser) -> None:
        subparsers = parser.add_subparsers(dest="command", required=True)
        for name, command in self.commands.items():
            sub = subparsers.add_parser(name, help=command.help, parents=[common])
            if command.add_arguments is not None:
                command.add_arguments(sub)
            sub.set_defaults(handler=command.handler)
