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

from ris_lab import CLI
from ris_lab.modular import GlobalArgsExtension

LIBRARY_LOGGER = "ris"
_VERBOSITY_LEVELS = (logging.WARNING, logging.INFO, logging.DEBUG)


class VerboseModeCliExtension(GlobalArgsExtension):
    """``-v`` reports codebook and sweep progress, ``-vv`` adds per-round optimizer and per-block logs."""

    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        parser.add_argument(
            "-v",
            "--verbose",
            dest="verbose",
            action="count",
            default=0,
            help="Increase verbosity of the simulator loggers (repeat for per-round details)",
        )
        parser.add_argument(
            "-l",
            "--log-level",
            dest="log_level",
            choices=("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"),
            default=None,
            help="Explicit level for the simulator loggers, overrides -v",
        )

    def handle(self, args: argparse.Namespace):
        if args.log_level is not None:
            level = logging.getLevelName(args.log_level)
        else:
            level = _VERBOSITY_LEVELS[min(args.verbose, len(_VERBOSITY_LEVELS) - 1)]
        logging.getLogger(LIBRARY_LOGGER).setLevel(level)
        if args.verbose:
            CLI.set_ui_log_level(logging.DEBUG)


class DebugModeCliExtension(GlobalArgsExtension):
    @classmethod
    def setup_parser(cls, parser: argparse.ArgumentParser):
        parser.add_argument(
            "-d",
            "--debug",
            dest="debug",
            action="store_true",
            default=False,
            help="Debug output for every logger, including stack traces of failures",
        )

    def handle(self, args: argparse.Namespace):
        if args.debug:
            CLI.debug_mode()
            logging.getLogger(LIBRARY_LOGGER).setLevel(logging.DEBUG)
        else:
            CLI.set_stack_traces(False)
