import hashlib
import os
import tempfile
from pathlib import Path
from typing import Any, Dict

import orjson
import pandas as pd

from scripts.config.constants import CsvFormat
from scripts.core.schemas import RunMetadata
from scripts.exceptions.messages import ErrorMessages
from scripts.exceptions.module_exception import IoError
from scripts.logging import logger


class ArtifactWriter:
    """
    Writes CSV, JSON and text artifacts into one directory. Every file is
    staged next to its target and moved into place with os.replace; the sha256
    of each written file is kept in ``checksums``.
    """

    def __init__(self, output_dir: Path, meta: RunMetadata):
        self.output_dir = Path(output_dir)
        self.meta = meta
        self.checksums: Dict[str, str] = {}

    def header_lines(self) -> list:
        config = orjson.dumps(self.meta.config, option=orjson.OPT_SORT_KEYS).decode()
        return [
            f"{CsvFormat.COMMENT}tool {self.meta.tool} {self.meta.version}",
            f"{CsvFormat.COMMENT}command {self.meta.command}",
            f"{CsvFormat.COMMENT}config {config}",
        ]

    def _atomic_write(self, name: str, payload: bytes) -> Path:
        target = self.output_dir / name
        try:
            self.output_dir.mkdir(parents=True, exist_ok=True)
            handle, staging = tempfile.mkstemp(prefix=f".{name}.", dir=self.output_dir)
        except OSError as e:
            logger.info(f"Error while preparing {self.output_dir} : {str(e)}")
            raise IoError(ErrorMessages.IO.format(action="write to", path=self.output_dir, reason=e)) from e
        try:
            with os.fdopen(handle, "wb") as stream:
                stream.write(payload)
            os.replace(staging, target)
        except OSError as e:
            logger.info(f"Error while writing {target} : {str(e)}")
            if os.path.exists(staging):
                os.remove(staging)
            raise IoError(ErrorMessages.IO.format(action="write", path=target, reason=e)) from e
        self.checksums[name] = hashlib.sha256(payload).hexdigest()
        logger.debug(f"wrote {target} ({len(payload)} bytes)")
        return target

    def write_csv(self, name: str, frame: pd.DataFrame) -> Path:
        body = frame.to_csv(
            index=False,
            float_format=CsvFormat.FLOAT_FORMAT,
            lineterminator=CsvFormat.LINE_TERMINATOR,
        )
        text = CsvFormat.LINE_TERMINATOR.join(self.header_lines()) + CsvFormat.LINE_TERMINATOR + body
        return self._atomic_write(name, text.encode("utf-8"))

    def write_json(self, name: str, payload: Any) -> Path:
        data = orjson.dumps(
            payload,
            option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY | orjson.OPT_APPEND_NEWLINE,
        )
        return self._atomic_write(name, data)

    def write_table(self, stem: str, frame: pd.DataFrame, fmt: str = "csv") -> str:
        """Writes ``frame`` as <stem>.csv, or as <stem>.json carrying the run metadata; returns the file name."""
        if fmt == "json":
            name = f"{stem}.json"
            self.write_json(name, {"meta": self.meta.model_dump(mode="json"), "rows": frame.to_dict(orient="records")})
        else:
            name = f"{stem}.csv"
            self.write_csv(name, frame)
        return name

    def write_text(self, name: str, text: str, with_header: bool = True) -> Path:
        if with_header:
            text = CsvFormat.LINE_TERMINATOR.join(self.header_lines()) + CsvFormat.LINE_TERMINATOR + text
        return self._atomic_write(name, text.encode("utf-8"))


def read_csv(path: Path) -> pd.DataFrame:
    """Reads an artifact CSV, skipping its comment header."""
    return pd.read_csv(path, comment=CsvFormat.COMMENT.strip())
