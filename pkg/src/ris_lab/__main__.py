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

import sys
from typing import Optional, Sequence

from ris_lab import CLI
from ris_lab.__version__ import __version__
from ris_lab.commands import GenCodebookCommand, SimulateCommand, VerifyCommand
from ris_lab.modular import CliAppManager

PROG_NAME = "ris-lab"


def create_app_manager() -> CliAppManager:
    app_manager = CliAppManager(
        PROG_NAME,
        description="Environment-aware RIS codebook simulator for multi-user MISO downlink (v{})".format(__version__),
        epilog="Exit codes: 0 success, 2 validation, 3 generation failure, 4 dimension mismatch, "
        "5 acceptance violation",
    )
    app_manager.register_extension(GenCodebookCommand, SimulateCommand, VerifyCommand)
    return app_manager


def main(argv: Optional[Sequence[str]] = None) -> int:
    CLI.setup()
    return create_app_manager().run(argv)


if __name__ == "__main__":
    sys.exit(main())
