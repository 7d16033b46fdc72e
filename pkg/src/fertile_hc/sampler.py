"""Exact top-down sampling of splitting measures on finite volumes.

The root state is drawn from its marginal; every other vertex is drawn given
its parent with weight a_{ij} * (1, z'_1, z'_2)_j.  This reproduces the
finite-volume measure exactly when each internal field equals the recursion
applied to its children, which is why non-fixed-point fields are refused.

Randomness: vertex v uses its own Philox stream seeded by
``SeedSequence(seed, spawn_key=(v,))`` and consumes one uniform per sample,
so batches are reproducible and can be split by vertex or by sample range.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .model import ActivityGraph, FiniteVolume
from .recursion import BoundaryField, generic_step

FIXED_POINT_TOL = 1e-8


class NotAFixedPointError(ValueError):
    pass


@dataclass
class SampleBatch:
    seed: int
    count: int
    configurations: np.ndarray
    graph: str = ""
    k: int = 0
    n: int = 0
    root: str = "full"
    lam: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def empirical_marginals(self) -> np.ndarray:
        """(|V|, 3) array of state frequencies per vertex."""
        out = np.empty((self.configurations.shape[1], 3))
        for s in range(3):
            out[:, s] = np.mean(self.configurations == s, axis=0)
        return out

    def sidecar(self) -> dict:
        return {"seed": self.seed, "count": self.count, "graph": self.graph, "k": self.k,
                "n": self.n, "root": self.root, "lambda": self.lam,
                "vertices": int(self.configurations.shape[1]),
                "rng": "numpy Philox, SeedSequence(seed, spawn_key=(vertex,))", **self.meta}


def _field_map(volume: FiniteVolume, fields) -> dict[int, BoundaryField]:
    if isinstance(fields, Mapping):
        return {int(v): BoundaryField(*f) for v, f in fields.items()}
    f = BoundaryField(*fields)
    return {v: f for v in range(volume.size)}


def fixed_point_defect(graph: ActivityGraph, volume: FiniteVolume, lam: float,
                       fields: Mapping[int, BoundaryField]) -> float:
    """Largest relative gap between an internal non-root field and the recursion of its children."""
    worst = 0.0
    for v in range(1, volume.size):
        kids = volume.children(v)
        if not kids:
            continue
        img = generic_step(graph, lam, [fields[y] for y in kids])
        f = fields[v]
        worst = max(worst, abs(img.z1 - f.z1) / f.z1, abs(img.z2 - f.z2) / f.z2)
    return worst


def _vertex_weights(f: BoundaryField) -> np.ndarray:
    return np.array([1.0, f.z1, f.z2])


def _root_weights(graph: ActivityGraph, volume: FiniteVolume, lam: float,
                  fields: Mapping[int, BoundaryField]) -> np.ndarray:
    if volume.n == 0:
        return _vertex_weights(fields[0])
    a = np.array(graph.adjacency, dtype=float)
    w = np.array([1.0, lam, lam])
    for y in volume.children(0):
        w = w * (a @ _vertex_weights(fields[y]))
    return w


def _cdf(probs: np.ndarray) -> np.ndarray:
    # the last positive state absorbs rounding so zero-weight states are never drawn
    cdf = np.cumsum(probs, axis=-1)
    last = np.max(np.nonzero(probs > 0)[0])
    cdf[last:] = np.inf
    return cdf


def _transition(graph: ActivityGraph, f: BoundaryField) -> np.ndarray:
    a = np.array(graph.adjacency, dtype=float)
    w = a * _vertex_weights(f)[None, :]
    return w / w.sum(axis=1, keepdims=True)


def vertex_stream(seed: int, v: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(v,))))


def sample(graph: ActivityGraph, volume: FiniteVolume, lam: float, fields, seed: int,
           count: int, tol: float = FIXED_POINT_TOL) -> SampleBatch:
    """Draw ``count`` independent configurations.

    ``fields`` is one (z'_1, z'_2) pair used at every vertex or a mapping
    from vertex to pair covering every non-root vertex.  The root's own field
    is never used.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    fmap = _field_map(volume, fields)
    missing = [v for v in range(1, volume.size) if v not in fmap]
    if volume.n == 0 and 0 not in fmap:
        missing.append(0)
    if missing:
        raise KeyError(f"no field for vertices {missing[:5]}")
    defect = fixed_point_defect(graph, volume, lam, fmap)
    if defect > tol:
        raise NotAFixedPointError(
            f"fields are not a fixed point of the recursion (relative defect {defect:.3g} > {tol:g}); "
            "samples would not follow the finite-volume measure")

    configs = np.empty((count, volume.size), dtype=np.int8)
    root_w = _root_weights(graph, volume, lam, fmap)
    root_cdf = _cdf(root_w / root_w.sum())
    u = vertex_stream(seed, 0).random(count)
    configs[:, 0] = np.sum(root_cdf[None, :] <= u[:, None], axis=1)
    for v in range(1, volume.size):
        trans = _transition(graph, fmap[v])
        cdfs = np.array([_cdf(row) if row.sum() > 0 else np.full(3, np.inf) for row in trans])
        u = vertex_stream(seed, v).random(count)
        parent_states = configs[:, volume.parent[v]]
        configs[:, v] = np.sum(cdfs[parent_states] <= u[:, None], axis=1)
    return SampleBatch(int(seed), int(count), configs, graph.name, volume.k, volume.n,
                       volume.root.value, float(lam), {"max_fixed_point_defect": defect})


def sampling_law(graph: ActivityGraph, volume: FiniteVolume, lam: float, fields,
                 configurations: np.ndarray) -> np.ndarray:
    """Probability the sampler assigns to each row of ``configurations``.

    Computed from the same conditional weights the sampler draws from, for
    comparison with the exact finite-volume measure.
    """
    fmap = _field_map(volume, fields)
    root_w = _root_weights(graph, volume, lam, fmap)
    p = (root_w / root_w.sum())[configurations[:, 0]]
    for v in range(1, volume.size):
        trans = _transition(graph, fmap[v])
        p = p * trans[configurations[:, volume.parent[v]], configurations[:, v]]
    return p


def save_batch(batch: SampleBatch, path: str | Path) -> tuple[Path, Path]:
    """Write ``<path>.npy`` (one row per sample, values 0/1/2) and ``<path>.json``."""
    base = Path(path)
    if base.suffix in (".npy", ".json"):
        base = base.with_suffix("")
    npy, meta = base.with_suffix(".npy"), base.with_suffix(".json")
    np.save(npy, batch.configurations)
    meta.write_text(json.dumps(batch.sidecar(), indent=2))
    return npy, meta


def load_batch(path: str | Path) -> SampleBatch:
    base = Path(path)
    if base.suffix in (".npy", ".json"):
        base = base.with_suffix("")
    meta = json.loads(base.with_suffix(".json").read_text())
    configs = np.load(base.with_suffix(".npy"))
    return SampleBatch(meta["seed"], meta["count"], configs, meta["graph"], meta["k"],
                       meta["n"], meta["root"], meta["lambda"])


def binomial_sigma(p: float, count: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / count)
