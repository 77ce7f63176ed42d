"""Primal/dual coarse partitions and the wirebasket cell classification."""
from dataclasses import dataclass
from enum import IntEnum
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np
import yaml

from app.core.errors import ConfigurationError, ResultIOError
from app.linalg.sparse import SparseMatrix, from_triplets
from app.schemas.grid import CoarseningRatio, FineGrid


class CellCategory(IntEnum):
    INTERIOR = 0
    FACE = 1
    EDGE = 2
    VERTEX = 3


def cell_coordinates(fine: FineGrid) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(i, j, k) of every cell in linear order."""
    k, j, i = np.indices(fine.shape)
    return i.ravel(), j.ravel(), k.ravel()


@dataclass(frozen=True)
class PrimalPartition:
    counts: Tuple[int, int, int]
    block: np.ndarray
    coarse_nodes: np.ndarray
    node_coords: Tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def n_blocks(self) -> int:
        return int(np.prod(self.counts))


@dataclass(frozen=True)
class DualPartition:
    counts: Tuple[int, int, int]
    block: np.ndarray
    category: np.ndarray
    # N_d x N_f, 1 where a cell lies in the closed box of a dual block
    incidence: SparseMatrix

    @property
    def n_blocks(self) -> int:
        return int(np.prod(self.counts))


def build_primal(fine: FineGrid, ratio: CoarseningRatio) -> PrimalPartition:
    for axis, n, c in zip("xyz", fine.dims, ratio.as_tuple()):
        if c > n or n % c:
            raise ConfigurationError(
                f"coarsening ratio {c} does not divide {n} cells along {axis}"
            )
    cx, cy, cz = ratio.as_tuple()
    mx, my, mz = fine.nx // cx, fine.ny // cy, fine.nz // cz
    i, j, k = cell_coordinates(fine)
    block = i // cx + mx * (j // cy + my * (k // cz))

    # center cell, lower one of the central pair for even ratios
    coords = tuple(
        np.arange(m, dtype=np.int64) * c + (c - 1) // 2
        for m, c in zip((mx, my, mz), (cx, cy, cz))
    )
    bz, by, bx = np.meshgrid(coords[2], coords[1], coords[0], indexing="ij")
    nodes = (bx + fine.nx * (by + fine.ny * bz)).ravel()
    return PrimalPartition(
        counts=(mx, my, mz),
        block=block.astype(np.int64),
        coarse_nodes=nodes.astype(np.int64),
        node_coords=coords,
    )


def build_dual(fine: FineGrid, primal: PrimalPartition) -> DualPartition:
    """Dual blocks span neighbouring coarse nodes, truncated at the domain edge.

    A cell on a dual plane belongs to the block with the lowest id; the
    category counts on how many dual planes the cell lies.
    """
    i, j, k = cell_coordinates(fine)
    per_axis = []
    for coords, n, idx in zip(primal.node_coords, fine.dims, (i, j, k)):
        interval = np.searchsorted(coords, np.arange(n), side="left")
        on_plane = np.isin(np.arange(n), coords)
        per_axis.append((interval[idx], on_plane[idx]))

    counts = tuple(m + 1 for m in primal.counts)
    (ax, px), (ay, py), (az, pz) = per_axis
    block = ax + counts[0] * (ay + counts[1] * az)
    category = px.astype(np.int8) + py.astype(np.int8) + pz.astype(np.int8)

    rows, cols = [], []
    cells = np.arange(fine.n_cells)
    for sx in (0, 1):
        for sy in (0, 1):
            for sz in (0, 1):
                valid = np.ones(fine.n_cells, dtype=bool)
                for shift, plane in ((sx, px), (sy, py), (sz, pz)):
                    if shift:
                        valid &= plane
                box = (ax + sx) + counts[0] * ((ay + sy) + counts[1] * (az + sz))
                rows.append(box[valid])
                cols.append(cells[valid])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    n_dual = int(np.prod(counts))
    incidence = from_triplets(rows, cols, np.ones(rows.size), (n_dual, fine.n_cells))
    return DualPartition(
        counts=counts,
        block=block.astype(np.int64),
        category=category,
        incidence=incidence,
    )


@dataclass(frozen=True)
class GridHierarchy:
    fine: FineGrid
    ratio: CoarseningRatio
    primal: PrimalPartition
    dual: DualPartition

    @property
    def n_fine(self) -> int:
        return self.fine.n_cells

    @property
    def n_primal(self) -> int:
        return self.primal.n_blocks

    @property
    def n_dual(self) -> int:
        return self.dual.n_blocks

    @property
    def coarse_nodes(self) -> np.ndarray:
        return self.primal.coarse_nodes

    @property
    def category(self) -> np.ndarray:
        return self.dual.category

    def category_counts(self) -> Dict[str, int]:
        counts = np.bincount(self.dual.category, minlength=4)
        return {cat.name.lower(): int(counts[cat]) for cat in CellCategory}

    def summary(self) -> dict:
        return {
            "fine": list(self.fine.dims),
            "ratio": list(self.ratio.as_tuple()),
            "n_fine": self.n_fine,
            "n_primal": self.n_primal,
            "n_dual": self.n_dual,
            "dual_per_axis": list(self.dual.counts),
            "categories": self.category_counts(),
        }

    def dump_summary(self, path: Union[str, Path]) -> None:
        try:
            Path(path).write_text(yaml.safe_dump(self.summary(), sort_keys=True))
        except OSError as exc:
            raise ResultIOError(f"cannot write {path}: {exc}") from exc


def wirebasket_permutation(hierarchy: GridHierarchy) -> np.ndarray:
    """Cells ordered Interior, Face, Edge, Vertex; ascending index within a class."""
    return np.argsort(hierarchy.category, kind="stable")


def build_hierarchy(fine: FineGrid, ratio: CoarseningRatio) -> GridHierarchy:
    primal = build_primal(fine, ratio)
    dual = build_dual(fine, primal)
    return GridHierarchy(fine=fine, ratio=ratio, primal=primal, dual=dual)
