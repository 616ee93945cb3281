#    RIS Lab - Environment-aware RIS codebook simulator for multi-user MISO downlink
#    Copyright (C) 2026 RIS Lab contributors
#    The MIT License (MIT)
#
#    Permission is hereby granted, free of charge, to any person obtaining
#    a copy of this software and associated documentation files
#    (the "Software"), to deal in the Software without restriction,
#    including without limitation the rights to use, copy, modify, merge,
#    publish, distribute, sublicense, and/or sell copies of the Software,
#    and to permit persons to whom the Software is furnished to do so,
#    subject to the following conditions:
#
#    The above copyright notice and this permission notice shall be
#    included in all copies or substantial portions of the Software.
#
#    THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
#    EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
#    MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
#    IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY
#    CLAIM, DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT,
#    TORT OR OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE
#    SOFTWARE OR THE USE OR OTHER DEALINGS IN THE SOFTWARE.

import argparse
import logging
import sys
from abc import ABC, abstractmethod
from typing import List, Optional, Sequence, Type

from ris_lab import CLI
from ris_lab.exception import RisLabError
from ris_lab.stats import ExecutionTimer

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2
EXIT_INTERRUPTED = 130

_LOGGER = logging.getLogger("ris.exec-mng")


class CliExtension(ABC):
    """
    Single CLI command: contributes a sub-parser and handles the parsed arguments.
    ``handle`` returns nothing on success and raises RisLabError subclasses on failure.
    """

    COMMAND_NAME: Optional[str] = None
    COMMAND_DESCRIPTION: Optional[str] = None

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        pass

    @abstractmethod
    def handle(self, args: argparse.Namespace):
        raise NotImplementedError()

    def __repr__(self) -> str:
        return "<{} {}>".format(self.__class__.__qualname__, self.COMMAND_NAME)


class GlobalArgsExtension(ABC):
    """Flags given before the command name, applied before the command runs."""

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        pass

    @abstractmethod
    def handle(self, args: argparse.Namespace):
        raise NotImplementedError()


class ExecutionManager(object):
    def run(self, command: argparse.Namespace) -> int:
        """Runs the command and returns the process exit code."""
        timer = ExecutionTimer()
        ext: CliExtension = command.ext_cls()
        _LOGGER.debug("Running {}".format(ext))
        try:
            ext.handle(command)
        except RisLabError as e:
            CLI.print_error(e)
            exit_code = e.exit_code
        except Exception as e:
            CLI.print_fatal(e)
            exit_code = EXIT_UNEXPECTED
        else:
            exit_code = EXIT_OK
        timer.stop()
        _LOGGER.debug("{} exited with {} after {}".format(command.cmd, exit_code, timer.format_elapsed()))
        return exit_code


class CliAppManager:
    def __init__(self, prog_name: str, description: Optional[str] = None, epilog: Optional[str] = None) -> None:
        from .cli_extension import DebugModeCliExtension, VerboseModeCliExtension

        self.commands: List[Type[CliExtension]] = []
        self.global_args_extensions: List[Type[GlobalArgsExtension]] = [VerboseModeCliExtension, DebugModeCliExtension]
        self.global_args_parser = argparse.ArgumentParser(add_help=False)
        self.args_parser = argparse.ArgumentParser(
            prog=prog_name,
            description=description,
            epilog=epilog,
            formatter_class=argparse.RawDescriptionHelpFormatter,
        )
        for ext_cls in self.global_args_extensions:
            ext_cls.setup_parser(self.global_args_parser)
            ext_cls.setup_parser(self.args_parser)
        self.__subparsers = self.args_parser.add_subparsers(
            title="Available Commands",
            metavar="command",
            dest="cmd",
            description='Use "<command> -h" to get information about particular command',
        )

    def register_extension(self, *ext_type: Type[CliExtension]) -> None:
        for ext_cls in ext_type:
            sub = self.__subparsers.add_parser(
                ext_cls.COMMAND_NAME, help=ext_cls.COMMAND_DESCRIPTION, description=ext_cls.COMMAND_DESCRIPTION
            )
            ext_cls.setup_parser(sub)
            sub.set_defaults(ext_cls=ext_cls)
            self.commands.append(ext_cls)

    def apply_global_args(self, argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
        known, _ = self.global_args_parser.parse_known_args(argv)
        for ext_cls in self.global_args_extensions:
            ext_cls().handle(known)
        return known

    def parse(self, argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
        """Parses the command line; argparse exits with status 2 on usage errors."""
        return self.args_parser.parse_args(argv)

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        try:
            self.apply_global_args(argv)
            parsed = self.parse(argv)
            if parsed.cmd is None:
                self.args_parser.print_usage(sys.stderr)
                names = ", ".join(str(x.COMMAND_NAME) for x in self.commands)
                CLI.print_error("Command is required, one of: {}".format(names))
                return EXIT_USAGE
            return ExecutionManager().run(parsed)
        except KeyboardInterrupt:
            CLI.print_error("Interrupted")
            return EXIT_INTERRUPTED
