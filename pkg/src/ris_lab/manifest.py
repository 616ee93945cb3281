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
Run manifests written next to every output as ``<out>.manifest.json``.
"""
import dataclasses
import datetime
import logging
import os
from typing import Any, Dict, List, Optional

from .__version__ import __version__
from .config import ScenarioConfig
from .serialize import file_digest64, pretty_dumps

_LOGGER = logging.getLogger("ris.manifest")

MANIFEST_SUFFIX = ".manifest.json"


def manifest_path(output_path: str) -> str:
    return output_path + MANIFEST_SUFFIX


@dataclasses.dataclass
class RunManifest:
    command: str
    arguments: Dict[str, Any]
    config: ScenarioConfig
    seed: int
    started_at: datetime.datetime
    finished_at: Optional[datetime.datetime] = None
    elapsed_s: Optional[float] = None
    outputs: Dict[str, str] = dataclasses.field(default_factory=dict)
    tool_version: str = __version__

    @classmethod
    def start(cls, command: str, arguments: Dict[str, Any], config: ScenarioConfig, seed: int) -> "RunManifest":
        return cls(
            command=command,
            arguments=arguments,
            config=config,
            seed=seed,
            started_at=datetime.datetime.now(datetime.timezone.utc),
        )

    def add_output(self, path: str):
        self.outputs[os.path.basename(path)] = file_digest64(path)

    def finish(self, elapsed_s: Optional[float] = None):
        self.finished_at = datetime.datetime.now(datetime.timezone.utc)
        self.elapsed_s = elapsed_s

    def to_dict(self) -> Dict[str, Any]:
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "arguments": self.arguments,
            "seed": self.seed,
            "config": self.config.to_dict(),
            "config_fingerprint": self.config.fingerprint(),
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "elapsed_s": self.elapsed_s,
            "outputs": self.outputs,
        }

    def write(self, output_path: str) -> str:
        path = manifest_path(output_path)
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(pretty_dumps(self.to_dict()))
        _LOGGER.debug("Manifest written to {}".format(path))
        return path

    @property
    def output_names(self) -> List[str]:
        return sorted(self.outputs)
