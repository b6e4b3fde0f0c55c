"""File formats: point-set CSV ("x,y" lines, '#' comments) and the
hypergraph text format ("r m" header then one ascending triple per line)."""

from __future__ import annotations

from pathlib import Path

from .counting import PointConfig
from .hypergraph import Hypergraph3


def read_points(path: str | Path) -> PointConfig:
    pts = []
    for line_no, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}:{line_no}: expected 'x,y', got {raw!r}")
        pts.append((float(parts[0]), float(parts[1])))
    return PointConfig.from_list(pts)


def write_points(path: str | Path, config: PointConfig) -> None:
    lines = [f"{float(x)!r},{float(y)!r}" for x, y in config.points]
    Path(path).write_text("\n".join(lines) + "\n")


def read_hypergraph(path: str | Path) -> Hypergraph3:
    lines = [
        line.strip()
        for line in Path(path).read_text().splitlines()
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise ValueError(f"{path}: empty hypergraph file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"{path}: header must be 'r m', got {lines[0]!r}")
    r, m = int(head[0]), int(head[1])
    if len(lines) - 1 != m:
        raise ValueError(f"{path}: header promises {m} edges, found {len(lines) - 1}")
    edges = []
    for line in lines[1:]:
        triple = tuple(int(t) for t in line.split())
        if len(triple) != 3 or not (triple[0] < triple[1] < triple[2]):
            raise ValueError(f"{path}: bad edge line {line!r}")
        edges.append(triple)
    return Hypergraph3.from_edges(r, edges)


def write_hypergraph(path: str | Path, H: Hypergraph3) -> None:
    lines = [f"{H.r} {len(H.edges)}"]
    lines += [f"{i} {j} {k}" for i, j, k in sorted(H.edges)]
    Path(path).write_text("\n".join(lines) + "\n")
