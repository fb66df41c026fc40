# Instance and partition text formats
#
# instance:   "n s" header, then for u = 0..n-2 the colours of {u, u+1..n-1}
# partition:  one cycle per line, "colour v1 .. vk"; "-" replaces the colour for
#             length <= 1 and a bare "-" is the empty cycle
from pathlib import Path
from typing import Iterable, List, Union

from .errors import ParseError
from .schemas import Cycle, CyclePartition, EdgeColouring


def _content_lines(text: str) -> List[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]


def format_instance(c: EdgeColouring, comments: Iterable[str] = ()) -> str:
    lines = [f"# {note}" for note in comments]
    lines.append(f"{c.n} {len(c.palette)}")
    idx = 0
    for u in range(c.n - 1):
        width = c.n - 1 - u
        lines.append(" ".join(str(col) for col in c.colours[idx:idx + width]))
        idx += width
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> EdgeColouring:
    lines = _content_lines(text)
    if not lines:
        raise ParseError("instance is empty")
    try:
        n, s = (int(tok) for tok in lines[0].split())
    except ValueError:
        raise ParseError(f"bad header line: {lines[0]!r}")
    if n < 0:
        raise ParseError("vertex count must be non-negative")
    rows = lines[1:]
    if len(rows) != max(n - 1, 0):
        raise ParseError(f"expected {max(n - 1, 0)} rows, found {len(rows)}")
    flat: List[int] = []
    for u, row in enumerate(rows):
        toks = row.split()
        if len(toks) != n - 1 - u:
            raise ParseError(f"row {u} should have {n - 1 - u} colours, has {len(toks)}")
        try:
            flat.extend(int(t) for t in toks)
        except ValueError:
            raise ParseError(f"row {u} has a non-integer colour")
    try:
        c = EdgeColouring(n=n, colours=tuple(flat))
    except ValueError as e:
        raise ParseError(str(e))
    if len(c.palette) != s:
        raise ParseError(f"header declares {s} colours, rows use {len(c.palette)}")
    return c


def format_partition(p: CyclePartition) -> str:
    lines = []
    for cyc in p.cycles:
        head = "-" if cyc.colour is None else str(cyc.colour)
        lines.append(" ".join([head, *(str(v) for v in cyc.vertices)]))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_partition(text: str) -> CyclePartition:
    cycles = []
    for line in _content_lines(text):
        toks = line.split()
        if "=" in toks[0]:
            continue  # summary lines such as "min=2" or "cycles=2 valid=True"
        try:
            colour = None if toks[0] == "-" else int(toks[0])
            vertices = tuple(int(t) for t in toks[1:])
            cycles.append(Cycle(vertices=vertices, colour=colour))
        except ValueError as e:
            raise ParseError(f"bad cycle line {line!r}: {e}")
    return CyclePartition(cycles=tuple(cycles))


def read_instance(path: Union[str, Path]) -> EdgeColouring:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def write_instance(path: Union[str, Path], c: EdgeColouring, comments: Iterable[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(format_instance(c, comments), encoding="utf-8")
    return path


def read_partition(path: Union[str, Path]) -> CyclePartition:
    return parse_partition(Path(path).read_text(encoding="utf-8"))
