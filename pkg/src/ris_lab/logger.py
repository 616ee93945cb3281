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

"""
Log formatters for the command line front end.
Colors are plain SGR escape sequences, see https://en.wikipedia.org/wiki/ANSI_escape_code
"""
import logging
import os
import re
from typing import Dict, Optional

_COLOR_TERMS_RE = re.compile("^screen|^xterm|^vt100|^vt220|^rxvt|color|ansi|cygwin|linux", re.IGNORECASE)

RESET = "\033[0m"
BOLD = "1"
NORMAL = "22"
FG_RED = "31"
FG_YELLOW = "33"
FG_BLUE = "34"
FG_DEFAULT = "39"
FG_GREEN = "32"
FG_LIGHT_BLACK = "90"


def style(*codes: str) -> str:
    return "\033[{}m".format(";".join(codes))


def wrap(color: str, msg: str) -> str:
    return "".join(color + x + RESET for x in msg.split(RESET))


def stream_supports_colors(stream) -> bool:
    if os.environ.get("NOCOLOR"):
        return False
    supports = stream.isatty() if hasattr(stream, "isatty") else False
    supports = supports or any(k in os.environ for k in ("COLORTERM", "PYCHARM_HOSTED"))
    if supports:
        return True
    term = os.environ.get("TERM")
    if term is not None:
        if term.lower() == "dumb":
            return False
        return _COLOR_TERMS_RE.match(term) is not None
    return False


class CommonCliLogFormatter(logging.Formatter):
    DEFAULT_STACK_COLOR = style(NORMAL, FG_YELLOW)
    DEFAULT_COLORS = {
        logging.DEBUG: style(FG_LIGHT_BLACK),
        logging.INFO: style(NORMAL, FG_BLUE),
        logging.WARN: style(BOLD, FG_YELLOW),
        logging.ERROR: style(BOLD, FG_RED),
        logging.CRITICAL: style(BOLD, FG_RED),
    }
    DEFAULT_LOGGER_NAME_LEN = 14
    DEFAULT_LEVEL_MAP = {
        logging.DEBUG: "D",
        logging.INFO: "I",
        logging.WARN: "W",
        logging.ERROR: "E",
        logging.CRITICAL: "C",
    }

    def __init__(
        self,
        use_colors=True,
        level2color: Optional[Dict[int, str]] = None,
        level2name: Optional[Dict[int, str]] = None,
        max_logger_name_len: Optional[int] = None,
        show_stack_traces=False,
    ):
        super().__init__()
        self.use_colors = use_colors
        self.level2color: Dict[int, str] = level2color or dict(self.DEFAULT_COLORS)
        self.level2name: Dict[int, str] = level2name or dict(self.DEFAULT_LEVEL_MAP)
        self.max_logger_name_len: int = max_logger_name_len or self.DEFAULT_LOGGER_NAME_LEN
        self.show_stack_traces = show_stack_traces

    def get_color_for_record(self, record: logging.LogRecord) -> str:
        return self.level2color.get(record.levelno, style(FG_DEFAULT))

    def format_logger_name(self, name: str) -> str:
        return name[: self.max_logger_name_len].ljust(self.max_logger_name_len, " ")

    def formatMessage(self, record: logging.LogRecord):
        result = "[{}][{}] {}".format(
            self.level2name.get(record.levelno, " "), self.format_logger_name(record.name), record.message
        )
        return wrap(self.get_color_for_record(record), result) if self.use_colors else result

    def formatException(self, ei):
        if not self.show_stack_traces:
            return ""
        full_ex_text = super().formatException(ei)
        return wrap(self.DEFAULT_STACK_COLOR, full_ex_text) if self.use_colors else full_ex_text


class UILogFormatter(CommonCliLogFormatter):
    DEFAULT_COLORS = {
        logging.DEBUG: style(FG_LIGHT_BLACK),
        logging.INFO: style(FG_DEFAULT),
        logging.WARN: style(BOLD, FG_YELLOW),
        logging.ERROR: style(BOLD, FG_RED),
        logging.CRITICAL: style(BOLD, FG_RED),
    }

    def formatMessage(self, record: logging.LogRecord):
        prefix = ""
        if record.levelno == logging.ERROR:
            prefix = "ERROR: "
        elif record.levelno == logging.FATAL:
            prefix = "FATAL ERROR: "
        result = prefix + record.message
        return wrap(self.get_color_for_record(record), result) if self.use_colors else result
