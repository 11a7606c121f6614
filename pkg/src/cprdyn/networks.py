"""Social network construction for the microscopic simulation.

Players compare payoffs only with network neighbors. Three topologies are
supported: the complete graph (the mean-field case), Barabasi-Albert
preferential attachment grown from an m-clique, and Watts-Strogatz
small-world ring rewiring (regenerated until connected). All construction is
deterministic given the seed.

Adjacency is stored in compressed sparse rows (an offsets array into a flat
neighbor array), which is what the simulation kernels index directly. The
complete graph is not materialized; kernels special-case it.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .rng import Xoshiro256StarStar, derive_seed


class NetworkKind(enum.Enum):
    COMPLETE = "complete"
    BARABASI_ALBERT = "barabasi_albert"
    SMALL_WORLD = "small_world"


@dataclass(frozen=True)
class NetworkSpec:
    """Topology choice plus its parameters.

    Defaults for ba_m and sw_k put both random topologies at edge density
    near 0.2 for 500 players, making them comparable; sw_beta defaults to a
    conventional light rewiring.
    """

    kind: NetworkKind = NetworkKind.COMPLETE
    ba_m: int = 50
    sw_k: int = 100
    sw_beta: float = 0.1

    def __post_init__(self):
        if self.kind is NetworkKind.BARABASI_ALBERT and self.ba_m < 1:
            raise ValueError("ba_m must be a positive integer")
        if self.kind is NetworkKind.SMALL_WORLD:
            if self.sw_k < 2 or self.sw_k % 2 != 0:
                raise ValueError("sw_k must be an even integer >= 2")
            if not 0.0 <= self.sw_beta <= 1.0:
                raise ValueError("sw_beta must lie in [0, 1]")


@dataclass(frozen=True)
class Network:
    """A simple undirected graph over players 0..n-1 in CSR form."""

    kind: NetworkKind
    n: int
    offsets: np.ndarray = field(repr=False)  # int64, length n+1
    indices: np.ndarray = field(repr=False)  # int32, flat neighbor lists

    @property
    def complete(self) -> bool:
        return self.kind is NetworkKind.COMPLETE

    @property
    def n_edges(self) -> int:
        if self.complete:
            return self.n * (self.n - 1) // 2
        return len(self.indices) // 2

    def degree(self, node: int) -> int:
        if self.complete:
            return self.n - 1
        return int(self.offsets[node + 1] - self.offsets[node])

    def neighbors(self, node: int) -> np.ndarray:
        if self.complete:
            others = np.arange(self.n, dtype=np.int32)
            return np.delete(others, node)
        return self.indices[self.offsets[node] : self.offsets[node + 1]]


def _to_csr(kind: NetworkKind, adjacency: list[list[int]]) -> Network:
    n = len(adjacency)
    offsets = np.zeros(n + 1, dtype=np.int64)
    for i, nbrs in enumerate(adjacency):
        offsets[i + 1] = offsets[i] + len(nbrs)
    indices = np.empty(offsets[-1], dtype=np.int32)
    for i, nbrs in enumerate(adjacency):
        indices[offsets[i] : offsets[i + 1]] = sorted(nbrs)
    return Network(kind, n, offsets, indices)


def _is_connected(adjacency: list[list[int]]) -> bool:
    n = len(adjacency)
    seen = bytearray(n)
    queue = deque([0])
    seen[0] = 1
    count = 1
    while queue:
        u = queue.popleft()
        for v in adjacency[u]:
            if not seen[v]:
                seen[v] = 1
                count += 1
                queue.append(v)
    return count == n


def _barabasi_albert(n: int, m: int, seed: int) -> list[list[int]]:
    """Grow from an m-clique; each new node attaches to m distinct targets
    picked with probability proportional to degree (repeated-stub sampling
    with rejection of duplicates)."""
    rng = Xoshiro256StarStar(seed)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    stubs: list[int] = []
    for u in range(m):
        for v in range(u + 1, m):
            adjacency[u].append(v)
            adjacency[v].append(u)
            stubs.append(u)
            stubs.append(v)
    for new in range(m, n):
        chosen: list[int] = []
        while len(chosen) < m:
            pick = stubs[rng.randint(len(stubs))]
            if pick not in chosen:
                chosen.append(pick)
        for u in chosen:
            adjacency[u].append(new)
            adjacency[new].append(u)
            stubs.append(u)
            stubs.append(new)
    return adjacency


def _watts_strogatz(n: int, k: int, beta: float, seed: int) -> list[list[int]]:
    """Ring lattice with k/2 neighbors per side, then per-edge rewiring of
    the far endpoint with probability beta; retried until connected."""
    for attempt in range(100):
        rng = Xoshiro256StarStar(derive_seed(seed, attempt))
        neighbor_sets: list[set[int]] = [set() for _ in range(n)]
        for u in range(n):
            for shift in range(1, k // 2 + 1):
                v = (u + shift) % n
                neighbor_sets[u].add(v)
                neighbor_sets[v].add(u)
        for shift in range(1, k // 2 + 1):
            for u in range(n):
                if rng.uniform() >= beta:
                    continue
                v = (u + shift) % n
                if v not in neighbor_sets[u] or len(neighbor_sets[u]) >= n - 1:
                    continue
                w = rng.randint(n)
                while w == u or w in neighbor_sets[u]:
                    w = rng.randint(n)
                neighbor_sets[u].discard(v)
                neighbor_sets[v].discard(u)
                neighbor_sets[u].add(w)
                neighbor_sets[w].add(u)
        adjacency = [sorted(s) for s in neighbor_sets]
        if _is_connected(adjacency):
            return adjacency
    raise RuntimeError(
        f"small-world rewiring produced no connected graph in 100 attempts "
        f"(n={n}, k={k}, beta={beta})"
    )


def build_network(spec: NetworkSpec, n: int, seed: int) -> Network:
    """Build the simple graph described by spec over n players."""
    if n < 2:
        raise ValueError("need at least two players")
    if spec.kind is NetworkKind.COMPLETE:
        return Network(
            NetworkKind.COMPLETE,
            n,
            np.zeros(1, dtype=np.int64),
            np.empty(0, dtype=np.int32),
        )
    if spec.kind is NetworkKind.BARABASI_ALBERT:
        if spec.ba_m >= n:
            raise ValueError("ba_m must be smaller than the player count")
        return _to_csr(spec.kind, _barabasi_albert(n, spec.ba_m, seed))
    if spec.sw_k >= n:
        raise ValueError("sw_k must be smaller than the player count")
    return _to_csr(spec.kind, _watts_strogatz(n, spec.sw_k, spec.sw_beta, seed))
