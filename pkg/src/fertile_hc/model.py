"""Activity graphs, model parameters and finite volumes of the Cayley tree.

Vertices of a finite volume are numbered breadth-first from the root, so the
vertices of generation ``j`` form a contiguous block and ``V_{n-1}`` is always
a prefix of ``V_n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

SPINS = (0, 1, 2)


class UnsupportedGraphError(ValueError):
    pass


@dataclass(frozen=True)
class ActivityGraph:
    """Symmetric 0/1 adjacency matrix on the spin set {0, 1, 2}."""

    adjacency: tuple[tuple[int, int, int], tuple[int, int, int], tuple[int, int, int]]
    name: str = "custom"

    def __post_init__(self):
        rows = tuple(tuple(int(a) for a in row) for row in self.adjacency)
        if len(rows) != 3 or any(len(row) != 3 for row in rows):
            raise ValueError("adjacency must be 3x3")
        for i in SPINS:
            for j in SPINS:
                if rows[i][j] not in (0, 1):
                    raise ValueError(f"adjacency entry a[{i}][{j}]={rows[i][j]} is not 0/1")
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"adjacency not symmetric at ({i},{j})")
        object.__setattr__(self, "adjacency", rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.adjacency[i][j]

    @cached_property
    def matrix(self) -> np.ndarray:
        m = np.array(self.adjacency, dtype=np.int8)
        m.setflags(write=False)
        return m

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in SPINS for j in SPINS if i <= j and self.adjacency[i][j]]

    @classmethod
    def from_text(cls, text: str, name: str = "custom") -> "ActivityGraph":
        """Parse nine row-major 0/1 entries separated by whitespace or commas."""
        tokens = text.replace(",", " ").split()
        if len(tokens) != 9:
            raise ValueError(f"expected 9 adjacency entries, got {len(tokens)}")
        vals = [int(tok) for tok in tokens]
        return cls((tuple(vals[0:3]), tuple(vals[3:6]), tuple(vals[6:9])), name=name)

    def swapped(self) -> "ActivityGraph":
        """Relabel spins 1 <-> 2."""
        perm = (0, 2, 1)
        adj = tuple(tuple(self.adjacency[perm[i]][perm[j]] for j in SPINS) for i in SPINS)
        return ActivityGraph(adj, name=self.name)


WAND = ActivityGraph(((0, 1, 1), (1, 1, 0), (1, 0, 1)), name="wand")
HINGE = ActivityGraph(((1, 1, 1), (1, 1, 0), (1, 0, 1)), name="hinge")

_PRESETS = {"wand": WAND, "hinge": HINGE}


def preset_graph(name: str) -> ActivityGraph:
    key = name.strip().lower()
    if key in _PRESETS:
        return _PRESETS[key]
    if key in ("wrench", "pipe"):
        raise UnsupportedGraphError(
            f"graph {key!r} is not supported: its edge set is not specified; "
            "pass a custom 9-entry adjacency instead")
    raise UnsupportedGraphError(f"unknown graph preset {name!r} (known: wand, hinge)")


@dataclass(frozen=True)
class ModelParams:
    k: int
    lam: float

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 2:
            raise ValueError(f"tree order k must be an integer >= 2, got {self.k}")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ValueError(f"activity lambda must be positive and finite, got {self.lam}")
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "lam", float(self.lam))


class RootDegree(str, enum.Enum):
    FULL = "full"   # root has k+1 children
    HALF = "half"   # root has k children


@dataclass(frozen=True)
class FiniteVolume:
    """The ball V_n of radius n around the root."""

    k: int
    n: int
    root: RootDegree = RootDegree.FULL

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.n < 0:
            raise ValueError("n must be >= 0")
        object.__setattr__(self, "root", RootDegree(self.root))

    @property
    def root_children(self) -> int:
        return self.k + 1 if self.root is RootDegree.FULL else self.k

    @cached_property
    def level_sizes(self) -> tuple[int, ...]:
        sizes = [1]
        for j in range(1, self.n + 1):
            sizes.append(self.root_children if j == 1 else sizes[-1] * self.k)
        return tuple(sizes)

    @cached_property
    def level_starts(self) -> tuple[int, ...]:
        starts = [0]
        for size in self.level_sizes:
            starts.append(starts[-1] + size)
        return tuple(starts)

    @property
    def size(self) -> int:
        return self.level_starts[-1]

    def __len__(self) -> int:
        return self.size

    def generation(self, j: int) -> range:
        """Vertex indices of W_j."""
        if not 0 <= j <= self.n:
            raise IndexError(f"generation {j} outside 0..{self.n}")
        return range(self.level_starts[j], self.level_starts[j + 1])

    @property
    def boundary(self) -> range:
        return self.generation(self.n)

    @cached_property
    def parent(self) -> tuple[int, ...]:
        """Parent index per vertex; the root has parent -1."""
        par = [-1]
        for j in range(1, self.n + 1):
            per = self.root_children if j == 1 else self.k
            for p in self.generation(j - 1):
                par.extend([p] * per)
        return tuple(par)

    @cached_property
    def level(self) -> tuple[int, ...]:
        out = []
        for j, size in enumerate(self.level_sizes):
            out.extend([j] * size)
        return tuple(out)

    @cached_property
    def _children(self) -> tuple[range, ...]:
        out = []
        for v in range(self.size):
            j = self.level[v]
            if j == self.n:
                out.append(range(0))
            elif j == 0:
                start = self.level_starts[1]
                out.append(range(start, start + self.root_children))
            else:
                offset = v - self.level_starts[j]
                start = self.level_starts[j + 1] + offset * self.k
                out.append(range(start, start + self.k))
        return tuple(out)

    def children(self, v: int) -> range:
        """S(v) restricted to the volume."""
        return self._children[v]

    @property
    def edges(self) -> list[tuple[int, int]]:
        return [(p, v) for v, p in enumerate(self.parent) if p >= 0]

    def truncated(self, n: int) -> "FiniteVolume":
        if not 0 <= n <= self.n:
            raise ValueError(f"cannot truncate V_{self.n} to V_{n}")
        return FiniteVolume(self.k, n, self.root)

    def expected_size(self) -> int:
        """Closed form for |V_n|; used as a self-check."""
        geo = sum(self.k ** j for j in range(self.n))
        if self.root is RootDegree.HALF:
            return geo + self.k ** self.n
        return 1 + (self.k + 1) * geo


Configuration = Sequence[int]


def is_admissible(graph: ActivityGraph, volume: FiniteVolume, config: Configuration) -> bool:
    if len(config) != volume.size:
        raise ValueError(f"configuration has {len(config)} entries, volume has {volume.size}")
    adj = graph.adjacency
    for v, p in enumerate(volume.parent):
        if p >= 0 and not adj[config[p]][config[v]]:
            return False
    return True


def occupied_count(config: Configuration) -> int:
    return sum(1 for s in config if s >= 1)
