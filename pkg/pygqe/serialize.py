"""
Wire formats: JSON reports on standard output and CSV scan tables.
"""
import csv
import json
import math
import sys

from pathlib import Path

from pygqe.types import (
    String,
    Real,
    List,
    Map,
    Optional,
    Any,
    Unit
)

class InputError(Exception):
    def __init__(
        self,
        message: String,
        field: String = "<root>"
    ):
        super().__init__(message)
        self.field: String = field

def formatReal(value: Optional[Real]) -> Optional[String]:
    """
    Shortest round-trip decimal; None for missing or non-finite values.

    >>> formatReal(-0.1)
    '-0.1'
    """
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return None
    if value == 0.0:
        return "0"
    return repr(value)

def readJson(source: String | Path) -> Any:
    """Parse a JSON document from a path, or from standard input for '-'."""
    try:
        if str(source) == "-":
            return json.load(sys.stdin)
        with Path(source).open("r", encoding = "utf-8") as handle:
            return json.load(handle)
    except OSError as error:
        raise InputError(f"{__name__}.readJson(): cannot read {source}: {error.strerror}.")
    except json.JSONDecodeError as error:
        raise InputError(
            f"{__name__}.readJson(): {source} is not valid JSON (line {error.lineno}, column {error.colno}: {error.msg})."
        )

def dumpJson(payload: Any) -> String:
    return json.dumps(payload, indent = 2, sort_keys = True, ensure_ascii = False)

def writeJson(
    payload: Any,
    path: Optional[String | Path] = None
) -> Unit:
    text = dumpJson(payload) + "\n"
    if path is None:
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding = "utf-8")

def writeCsv(
    path: String | Path,
    header: List[String],
    rows: List[Map[String, Any]]
) -> Unit:
    """
    >>> writeCsv("scan.csv", ["x_1", "verdict"], [{"x_1": "0.5", "verdict": "exists"}])
    """
    with Path(path).open("w", encoding = "utf-8", newline = "") as handle:
        writer = csv.DictWriter(handle, fieldnames = header, lineterminator = "\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({name: "" if row.get(name) is None else row[name] for name in header})
