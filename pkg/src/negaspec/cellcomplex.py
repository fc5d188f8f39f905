"""Hypercubic cell complexes with periodic or open boundary conditions.

A k-cell is a pair ``(coords, axes)``: the unit k-cube based at integer
``coords`` and spanned by the sorted axis tuple ``axes``.  Along an open axis
a cell may not extend past the last vertex; cells that would wrap are dropped.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np

PERIODIC = "periodic"
OPEN = "open"

Cell = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class CellComplex:
    d: int
    extents: tuple[int, ...]
    bcs: tuple[str, ...]
    cells: tuple[tuple[Cell, ...], ...]
    boundary: tuple[tuple[tuple[int, ...], ...], ...]
    coboundary: tuple[tuple[tuple[int, ...], ...], ...]
    _index: tuple[dict, ...] = field(repr=False, compare=False)

    def count(self, k: int) -> int:
        return len(self.cells[k])

    def index(self, k: int, cell: Cell) -> int:
        return self._index[k][cell]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.count(k) for k in range(self.d + 1))

    def describe(self) -> dict:
        return {
            "d": self.d,
            "extents": list(self.extents),
            "bcs": list(self.bcs),
            "counts": [self.count(k) for k in range(self.d + 1)],
        }


def _valid(coords, axes, extents, bcs) -> bool:
    return all(bcs[a] == PERIODIC or coords[a] <= extents[a] - 2 for a in axes)


def build_complex(d: int, extents, bcs=None) -> CellComplex:
    """Build the d-dimensional hypercubic complex.

    ``bcs`` defaults to fully periodic; each entry is ``"periodic"`` or
    ``"open"``.  Cells are indexed lexicographically by coordinates, then by
    axis tuple.
    """
    if d not in (2, 3, 4):
        raise ValueError(f"dimension must be 2, 3 or 4, got {d}")
    extents = tuple(int(e) for e in extents)
    if len(extents) != d:
        raise ValueError(f"need {d} extents, got {len(extents)}")
    if any(e < 2 for e in extents):
        raise ValueError(f"every extent must be >= 2, got {extents}")
    if bcs is None:
        bcs = (PERIODIC,) * d
    bcs = tuple(str(b).lower() for b in bcs)
    if len(bcs) != d or any(b not in (PERIODIC, OPEN) for b in bcs):
        raise ValueError(f"bad boundary conditions {bcs}")

    cells: list[tuple[Cell, ...]] = []
    index: list[dict] = []
    for k in range(d + 1):
        axis_sets = list(itertools.combinations(range(d), k))
        ks = [
            (x, s)
            for x in itertools.product(*(range(e) for e in extents))
            for s in axis_sets
            if _valid(x, s, extents, bcs)
        ]
        cells.append(tuple(ks))
        index.append({c: i for i, c in enumerate(ks)})

    boundary: list[tuple[tuple[int, ...], ...]] = [tuple(() for _ in cells[0])]
    for k in range(1, d + 1):
        rows = []
        for x, s in cells[k]:
            faces = []
            for a in s:
                rest = tuple(b for b in s if b != a)
                shifted = list(x)
                shifted[a] = (shifted[a] + 1) % extents[a]
                faces.append(index[k - 1][(x, rest)])
                faces.append(index[k - 1][(tuple(shifted), rest)])
            rows.append(tuple(faces))
        boundary.append(tuple(rows))

    cob: list[list[list[int]]] = [[[] for _ in cells[k]] for k in range(d + 1)]
    for k in range(1, d + 1):
        for i, faces in enumerate(boundary[k]):
            for f in faces:
                cob[k - 1][f].append(i)
    coboundary = tuple(tuple(tuple(c) for c in level) for level in cob)

    return CellComplex(d, extents, bcs, tuple(cells), tuple(boundary), coboundary, tuple(index))


def incidence_matrix(cx: CellComplex, k: int) -> np.ndarray:
    """GF(2) boundary matrix: rows are k-cells, columns are (k-1)-cells."""
    if not 1 <= k <= cx.d:
        raise ValueError(f"k must be in 1..{cx.d}, got {k}")
    mat = np.zeros((cx.count(k), cx.count(k - 1)), dtype=bool)
    for i, faces in enumerate(cx.boundary[k]):
        for f in faces:
            mat[i, f] ^= True
    return mat


def coboundary_matrix(cx: CellComplex, k: int) -> np.ndarray:
    """GF(2) coboundary matrix: rows are k-cells, columns are (k+1)-cells."""
    if not 0 <= k <= cx.d - 1:
        raise ValueError(f"k must be in 0..{cx.d - 1}, got {k}")
    mat = np.zeros((cx.count(k), cx.count(k + 1)), dtype=bool)
    for i, cofaces in enumerate(cx.coboundary[k]):
        for c in cofaces:
            mat[i, c] ^= True
    return mat


def torus_cell_count(d: int, L: int, k: int) -> int:
    """Number of k-cells of the fully periodic L^d torus."""
    return comb(d, k) * L**d
