"""Published plot series, read from the pgfplots tables in the bundled source text."""

import re
from functools import lru_cache
from pathlib import Path

SOURCE = Path(__file__).resolve().parent.parent / "paper.md"

_PICTURE = re.compile(r"\\begin\{tikzpicture\}(.*?)\\end\{tikzpicture\}(.*?)\\label\{fig:([\w-]+)\}", re.S)
_TABLE = re.compile(r"table \{%\n(.*?)\};\s*\\addlegendentry\{\\normalsize \\arxiv ([^}]*)\}", re.S)


@lru_cache(maxsize=None)
def curves() -> dict[str, dict[str, dict[float, float]]]:
    """``{figure label: {legend: {x: y}}}``."""
    text = SOURCE.read_text(encoding="utf-8")
    out = {}
    for body, _, label in _PICTURE.findall(text):
        series = {}
        for rows, legend in _TABLE.findall(body):
            pts = {}
            for line in rows.strip().splitlines():
                x, y = line.split()
                pts[float(x)] = float(y)
            series[legend.strip()] = pts
        if series:
            out[label] = series
    return out


def series(label: str, legend: str) -> dict[int, float]:
    return {int(x): y for x, y in curves()[label][legend].items()}
