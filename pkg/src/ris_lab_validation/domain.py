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

from typing import Any, Optional, List

from voluptuous import MultipleInvalid, Invalid


class ValidationResult:
    def __init__(self, data: Any) -> None:
        self.error: Optional[MultipleInvalid] = None
        self.normalized_data: Any = data
        self.data: Any = data

    @property
    def has_errors(self) -> bool:
        return self.error is not None

    @property
    def errors(self) -> List[Invalid]:
        if self.has_errors:
            return self.error.errors  # type: ignore
        return []

    def format_errors(self) -> str:
        return "; ".join(format_invalid(e) for e in self.errors)


def format_invalid(error: Invalid) -> str:
    path = ".".join(str(x) for x in error.path)
    if path:
        return "{}: {}".format(path, error.error_message)
    return str(error.error_message)
