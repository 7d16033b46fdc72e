"""Exact finite-volume measures by exhaustive enumeration.

Everything here is ground truth for the solvers and the sampler, so nothing
is approximated: enumeration refuses volumes over budget instead of
truncating, and normalising sums are compensated.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

from .model import ActivityGraph, FiniteVolume, RootDegree
from .recursion import AGMPattern, BoundaryField, generic_step

DEFAULT_BUDGET = 3 ** 16
FIXTURE_VERSION = 1

FieldMap = Mapping[int, "BoundaryField | Sequence[float]"]


class OracleBudgetError(RuntimeError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"exhaustive enumeration needs 3^|V| = {required} configurations, "
                         f"budget is {budget}; pass a larger budget or a smaller volume")
        self.required = required
        self.budget = budget


def _check_budget(volume: FiniteVolume, budget: int) -> None:
    required = 3 ** volume.size
    if required > budget:
        raise OracleBudgetError(required, budget)


def admissible_array(graph: ActivityGraph, volume: FiniteVolume,
                     budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All admissible configurations as rows of an int8 matrix, in lexicographic order.

    Built vertex by vertex in breadth-first order, keeping only states
    allowed next to the parent's state.
    """
    _check_budget(volume, budget)
    adj = np.array(graph.adjacency, dtype=bool)
    configs = np.arange(3, dtype=np.int8).reshape(3, 1)
    for v in range(1, volume.size):
        p = volume.parent[v]
        allowed = adj[configs[:, p]]                    # rows x 3
        rows, states = np.nonzero(allowed)
        configs = np.hstack([configs[rows], states.astype(np.int8).reshape(-1, 1)])
    return configs


def enumerate_admissible(graph: ActivityGraph, volume: FiniteVolume,
                         budget: int = DEFAULT_BUDGET) -> tuple[int, Iterator[tuple[int, ...]]]:
    """Number of admissible configurations and an iterator over them."""
    arr = admissible_array(graph, volume, budget)
    return len(arr), (tuple(int(s) for s in row) for row in arr)


def _field_tuple(f) -> tuple[float, float]:
    z1, z2 = f
    if not (z1 > 0 and z2 > 0 and math.isfinite(z1) and math.isfinite(z2)):
        raise ValueError(f"boundary weights must be positive and finite, got ({z1}, {z2})")
    return float(z1), float(z2)


def _weights(graph: ActivityGraph, volume: FiniteVolume, lam: float,
             fields: FieldMap, budget: int) -> tuple[np.ndarray, np.ndarray]:
    configs = admissible_array(graph, volume, budget)
    boundary = volume.boundary
    interior = configs[:, :boundary.start]
    occupied = np.count_nonzero(interior, axis=1)
    w = np.power(float(lam), occupied).astype(float)
    for x in boundary:
        if x not in fields:
            raise KeyError(f"no boundary field for vertex {x}")
        z1, z2 = _field_tuple(fields[x])
        # lambda * z_{i,x} with z_{i,x} = z'_{i,x} / lambda
        w = w * np.array([1.0, z1, z2])[configs[:, x]]
    return configs, w


@dataclass
class FiniteMeasure:
    volume: FiniteVolume
    graph: ActivityGraph
    lam: float
    boundary_fields: dict
    configurations: np.ndarray
    weights: np.ndarray
    partition: float

    @property
    def probabilities_array(self) -> np.ndarray:
        return self.weights / self.partition

    @property
    def probabilities(self) -> dict[tuple[int, ...], float]:
        probs = self.probabilities_array
        return {tuple(int(s) for s in row): float(p) for row, p in zip(self.configurations, probs)}

    def __len__(self) -> int:
        return len(self.configurations)


def finite_measure(graph: ActivityGraph, volume: FiniteVolume, lam: float,
                   boundary_fields: FieldMap, budget: int = DEFAULT_BUDGET) -> FiniteMeasure:
    """The finite-volume measure with weights lambda^{#occupied} times boundary weights.

    ``boundary_fields`` holds primed fields (z'_1, z'_2) for at least every
    vertex of W_n; an occupied boundary vertex contributes lambda * z'/lambda.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    configs, w = _weights(graph, volume, lam, boundary_fields, budget)
    z = math.fsum(w.tolist())
    return FiniteMeasure(volume, graph, float(lam),
                         {x: _field_tuple(boundary_fields[x]) for x in volume.boundary},
                         configs, w, z)


def exact_marginal(measure: FiniteMeasure, vertex: int) -> tuple[float, float, float]:
    if not 0 <= vertex < measure.volume.size:
        raise IndexError(f"vertex {vertex} is not in a volume of size {measure.volume.size}")
    col = measure.configurations[:, vertex]
    probs = measure.probabilities_array
    return tuple(math.fsum(probs[col == s].tolist()) for s in range(3))


def all_marginals(measure: FiniteMeasure) -> np.ndarray:
    """Per-vertex marginals as a (|V|, 3) array."""
    return np.array([exact_marginal(measure, v) for v in range(measure.volume.size)])


def _encode(configs: np.ndarray) -> np.ndarray:
    powers = 3 ** np.arange(configs.shape[1], dtype=np.int64)
    return configs.astype(np.int64) @ powers


def check_consistency(graph: ActivityGraph, volume: FiniteVolume, lam: float,
                      fields: FieldMap, parent_fields: str = "assigned",
                      budget: int = DEFAULT_BUDGET) -> float:
    """Largest gap between the W_n-marginal of mu^(n) and mu^(n-1).

    ``volume`` is V_n with n >= 1.  With ``parent_fields="assigned"`` the
    boundary weights of mu^(n-1) are ``fields`` at W_{n-1}, so the defect
    vanishes exactly when every W_{n-1} field equals the recursion applied to
    its children.  ``"derived"`` recomputes them with :func:`generic_step`,
    which makes the two measures agree for any W_n fields.
    """
    if volume.n < 1:
        raise ValueError("consistency needs n >= 1")
    prev = volume.truncated(volume.n - 1)
    if parent_fields == "assigned":
        prev_fields = {x: fields[x] for x in prev.boundary}
    elif parent_fields == "derived":
        prev_fields = {x: generic_step(graph, lam, [fields[y] for y in volume.children(x)])
                       for x in prev.boundary}
    else:
        raise ValueError("parent_fields must be 'assigned' or 'derived'")

    big = finite_measure(graph, volume, lam, fields, budget)
    small = finite_measure(graph, prev, lam, prev_fields, budget)

    keys = _encode(big.configurations[:, :prev.size])
    order = np.argsort(keys, kind="stable")
    sorted_keys = keys[order]
    probs = big.probabilities_array[order]
    uniq, starts = np.unique(sorted_keys, return_index=True)
    bounds = list(starts) + [len(sorted_keys)]
    marg = {int(u): math.fsum(probs[a:b].tolist()) for u, a, b in zip(uniq, bounds, bounds[1:])}

    defect = 0.0
    small_keys = _encode(small.configurations)
    for key, p in zip(small_keys, small.probabilities_array):
        defect = max(defect, abs(marg.pop(int(key), 0.0) - float(p)))
    for leftover in marg.values():  # prefixes the smaller measure does not support
        defect = max(defect, abs(leftover))
    return defect


# ------------------------------------------------------ field assignment ---


def _with_root_field(volume: FiniteVolume, fields: dict, graph: ActivityGraph | None,
                     lam: float | None) -> dict:
    # the root of the full tree has k+1 children, so it needs its own field
    if volume.root is RootDegree.FULL and volume.n >= 1:
        if graph is None or lam is None:
            raise ValueError("full-tree volumes need graph and lambda to set the root field")
        fields[0] = generic_step(graph, lam, [fields[y] for y in volume.children(0)])
    return fields


def uniform_fields(volume: FiniteVolume, field, graph: ActivityGraph | None = None,
                   lam: float | None = None) -> dict[int, BoundaryField]:
    """The same field at every vertex (translation-invariant boundary law)."""
    f = BoundaryField(*field)
    return _with_root_field(volume, {v: f for v in range(volume.size)}, graph, lam)


def agm_classes(volume: FiniteVolume, pattern: AGMPattern) -> list[str]:
    """Class 'z' or 't' per vertex; the root is 'z'.

    Children are assigned in index order: under a z-vertex the first m are
    z, under a t-vertex the first r are t.
    """
    classes = ["z"] * volume.size
    for v in range(volume.size):
        kids = volume.children(v)
        if classes[v] == "z":
            same, other = "z", "t"
            keep = pattern.m
        else:
            same, other = "t", "z"
            keep = pattern.r
        for idx, y in enumerate(kids):
            classes[y] = same if idx < keep else other
    return classes


def agm_fields(volume: FiniteVolume, pattern: AGMPattern, z, t,
               graph: ActivityGraph | None = None, lam: float | None = None) -> dict[int, BoundaryField]:
    if pattern.k != volume.k:
        raise ValueError("pattern and volume disagree on k")
    fz, ft = BoundaryField(*z), BoundaryField(*t)
    classes = agm_classes(volume, pattern)
    fields = {v: (fz if c == "z" else ft) for v, c in enumerate(classes)}
    return _with_root_field(volume, fields, graph, lam)


# ------------------------------------------------------------- fixtures ---


def fixture_record(graph: ActivityGraph, volume: FiniteVolume, lam: float,
                   fields: FieldMap) -> dict:
    count, _ = enumerate_admissible(graph, volume)
    mu = finite_measure(graph, volume, lam, fields)
    return {
        "graph": graph.name, "k": volume.k, "n": volume.n, "root": volume.root.value,
        "lambda": lam, "admissible_count": count, "partition": mu.partition,
        "marginals": all_marginals(mu).tolist(),
    }


def write_fixture(path: str | Path, records: list[dict]) -> None:
    Path(path).write_text(json.dumps({"version": FIXTURE_VERSION, "records": records}, indent=2))


def load_fixture(path: str | Path) -> list[dict]:
    data = json.loads(Path(path).read_text())
    if data.get("version") != FIXTURE_VERSION:
        raise ValueError(f"fixture version {data.get('version')} != {FIXTURE_VERSION}")
    return data["records"]
