"""Concrete graphs: generation, ingestion, components, betweenness, attacks.

Graphs are simple and undirected with dense node indices. Attack
simulation removes nodes in a scheme-specific order and tracks both the
largest-component fraction and the Molloy-Reed ratio of the surviving
subgraph; the heavy lifting runs as reverse percolation (adding nodes
back) so a whole removal curve costs O(V + E).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ._rand import rng_stream
from .degree_models import ER, DegreeModel, sample_degree_sequence
from .errors import ConfigError
from .sprt_engine import AttackPlan

REWIRE_SWEEPS = 100


class NetworkGraph:
    """Simple undirected graph over node indices 0..n-1.

    The constructor canonicalizes raw edges: self-loops and duplicate
    edges are dropped and counted. Instances are treated as immutable
    once built.
    """

    def __init__(self, n, edges, *, labels=None, stubs_dropped=0):
        if n < 1:
            raise ConfigError("graph needs at least one node")
        self.n = int(n)
        raw = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if raw.size and (raw.min() < 0 or raw.max() >= self.n):
            raise ConfigError("edge endpoint outside [0, n)")
        loops = raw[:, 0] == raw[:, 1]
        self.self_loops_dropped = int(loops.sum())
        raw = raw[~loops]
        codes = np.unique(np.minimum(raw[:, 0], raw[:, 1]) * self.n + np.maximum(raw[:, 0], raw[:, 1]))
        self.duplicates_dropped = int(raw.shape[0] - codes.size)
        self.edges = np.column_stack((codes // self.n, codes % self.n))
        self.stubs_dropped = int(stubs_dropped)
        self.labels = None if labels is None else np.asarray(labels)
        self.adjacency: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges.tolist():
            self.adjacency[a].append(b)
            self.adjacency[b].append(a)

    @property
    def edge_count(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)

    def tau(self) -> float:
        """Molloy-Reed ratio E[K^2]/E[K]; 0 for an edgeless graph."""
        deg = self.degrees()
        s1 = float(deg.sum())
        return float((deg.astype(float) ** 2).sum() / s1) if s1 > 0 else 0.0

    def edge_text(self) -> str:
        """Canonical one-edge-per-line serialization."""
        return "".join(f"{a} {b}\n" for a, b in self.edges.tolist())


@dataclass(frozen=True)
class RemovalCurve:
    """Attack response sampled at increasing removed fractions."""

    removed_fraction: np.ndarray
    lcc_fraction: np.ndarray
    remaining_tau: np.ndarray

    def __len__(self):
        return len(self.removed_fraction)


class QcEstimate(NamedTuple):
    qc: float
    subcritical: bool


class _UnionFind:
    """Array union-find with path halving and size tracking."""

    def __init__(self, n):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return self.size[ra]
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return self.size[ra]


def _er_gnp(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """Exact G(n, p) edge codes via geometric skipping over the pair space."""
    total = n * (n - 1) // 2
    if p <= 0.0:
        return np.empty((0, 2), dtype=np.int64)
    blocks = []
    position = -1
    expect = int(p * total) + 1
    while position < total:
        gaps = rng.geometric(p, size=max(1024, int(0.1 * expect)))
        codes = position + np.cumsum(gaps)
        blocks.append(codes)
        position = int(codes[-1])
    codes = np.concatenate(blocks)
    codes = codes[codes < total].astype(np.int64)
    # decode upper-triangle codes into (i, j) with i < j
    rem = total - 1 - codes
    t = np.floor((np.sqrt(8.0 * rem + 1.0) - 1.0) / 2.0).astype(np.int64)
    i = n - 2 - t
    j = codes - i * (2 * n - i - 1) // 2 + i + 1
    return np.column_stack((i, j))


def _configuration_model(degrees: np.ndarray, n: int, rng: np.random.Generator):
    """Stub matching with conflict re-wiring; returns (edges, dropped stubs).

    Conflicting pairings (self-loops, duplicates) are re-drawn for up to
    REWIRE_SWEEPS sweeps. A sweep that makes no progress dissolves a few
    accepted edges back into the stub pool, which escapes dead ends such
    as two leftover stubs of one node. Residual stubs are dropped and
    counted.
    """
    stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
    if stubs.size % 2 == 1:
        raise ConfigError("degree sequence has odd sum")
    accepted = np.empty(0, dtype=np.int64)
    for _ in range(REWIRE_SWEEPS):
        if stubs.size == 0:
            break
        rng.shuffle(stubs)
        u, v = stubs[0::2], stubs[1::2]
        a, b = np.minimum(u, v), np.maximum(u, v)
        codes = a * n + b
        keep = a != b
        first = np.zeros(codes.size, dtype=bool)
        _, first_idx = np.unique(codes, return_index=True)
        first[first_idx] = True
        keep &= first
        keep &= ~np.isin(codes, accepted)
        accepted = np.concatenate((accepted, codes[keep]))
        stubs = np.concatenate((u[~keep], v[~keep]))
        if stubs.size and not keep.any() and accepted.size:
            dissolve = min(accepted.size, max(4, stubs.size))
            picks = rng.choice(accepted.size, size=dissolve, replace=False)
            freed = accepted[picks]
            accepted = np.delete(accepted, picks)
            stubs = np.concatenate((stubs, freed // n, freed % n))
    edges = np.column_stack((accepted // n, accepted % n))
    return edges, int(stubs.size)


def generate(model: DegreeModel, n: int, seed: int) -> NetworkGraph:
    """Realize the degree model as a graph, deterministically per seed.

    ER models are generated edge-wise with link probability k_hat / n;
    the other kinds go through a sampled degree sequence and stub
    matching (configuration model).
    """
    if n < 2:
        raise ConfigError("graph generation needs n >= 2")
    if model.kind == ER:
        rng = rng_stream(seed, 0x6E)
        edges = _er_gnp(n, model.k_hat / n, rng)
        return NetworkGraph(n, edges)
    degrees = sample_degree_sequence(model, n, seed)
    return generate_from_sequence(degrees, seed)


def generate_from_sequence(degrees, seed: int) -> NetworkGraph:
    """Configuration-model graph from an explicit degree sequence."""
    degrees = np.asarray(degrees, dtype=np.int64)
    n = degrees.size
    if n < 2:
        raise ConfigError("graph generation needs n >= 2")
    rng = rng_stream(seed, 0xCF)
    edges, dropped = _configuration_model(degrees, n, rng)
    return NetworkGraph(n, edges, stubs_dropped=dropped)


def load_edge_list(path) -> NetworkGraph:
    """Parse a whitespace edge list ('u v' per line, '#' comments).

    A single-integer line declares an isolated node. Original node ids
    need not be dense; they are remapped to 0..n-1 in sorted order and
    kept on the returned graph's `labels`.
    """
    pairs: list[tuple[int, int]] = []
    mentioned: set[int] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                ids = [int(p) for p in parts]
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: malformed line {raw.strip()!r}") from exc
            if any(i < 0 for i in ids):
                raise ConfigError(f"{path}:{lineno}: negative node id in {raw.strip()!r}")
            if len(ids) == 1:
                mentioned.add(ids[0])
            elif len(ids) == 2:
                mentioned.update(ids)
                pairs.append((ids[0], ids[1]))
            else:
                raise ConfigError(f"{path}:{lineno}: expected 'u v', got {raw.strip()!r}")
    if not pairs:
        raise ConfigError(f"{path}: no edges")
    labels = np.array(sorted(mentioned), dtype=np.int64)
    index = {int(label): i for i, label in enumerate(labels)}
    edges = np.array([(index[a], index[b]) for a, b in pairs], dtype=np.int64)
    return NetworkGraph(len(labels), edges, labels=labels)


def largest_component(graph: NetworkGraph) -> tuple[int, list[int]]:
    """Size and members of the largest connected component.

    Ties are broken in favor of the component containing the lowest
    node index.
    """
    uf = _UnionFind(graph.n)
    for a, b in graph.edges.tolist():
        uf.union(a, b)
    roots = [uf.find(v) for v in range(graph.n)]
    sizes: dict[int, int] = {}
    for r in roots:
        sizes[r] = sizes.get(r, 0) + 1
    best = max(sizes.values())
    winner = next(r for r in roots if sizes[r] == best)  # lowest-index tie-break
    members = [v for v in range(graph.n) if roots[v] == winner]
    return best, members


def betweenness(graph: NetworkGraph, normalized: bool = True) -> np.ndarray:
    """Exact shortest-path betweenness (Brandes accumulation over BFS DAGs).

    Normalization divides by the (n-1)(n-2) ordered node pairs that
    exclude the vertex itself.
    """
    n = graph.n
    adj = graph.adjacency
    scores = [0.0] * n
    dist = [-1] * n
    sigma = [0.0] * n
    delta = [0.0] * n
    for s in range(n):
        order = [s]
        dist[s] = 0
        sigma[s] = 1.0
        head = 0
        while head < len(order):
            v = order[head]
            head += 1
            dv1 = dist[v] + 1
            sv = sigma[v]
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dv1
                    order.append(w)
                if dist[w] == dv1:
                    sigma[w] += sv
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            dw = dist[w]
            for v in adj[w]:
                if dist[v] == dw - 1:
                    delta[v] += sigma[v] * coeff
            if w != s:
                scores[w] += delta[w]
        for v in order:
            dist[v] = -1
            sigma[v] = 0.0
            delta[v] = 0.0
    result = np.array(scores)
    if normalized and n > 2:
        result /= (n - 1) * (n - 2)
    return result


def removal_order(graph: NetworkGraph, scheme: str, seed: int) -> np.ndarray:
    """Full node removal order for an attack scheme.

    Random orders are seeded permutations; degree and betweenness orders
    are static (computed once on the intact graph), descending, with
    index tie-breaks.
    """
    if scheme == "random":
        return rng_stream(seed, 0xA7).permutation(graph.n)
    if scheme in ("degree", "intentional"):
        return np.lexsort((np.arange(graph.n), -graph.degrees()))
    if scheme == "betweenness":
        return np.lexsort((np.arange(graph.n), -betweenness(graph)))
    raise ConfigError(f"unknown attack scheme {scheme!r}")


def _reverse_percolation(graph: NetworkGraph, order: np.ndarray):
    """LCC size and Molloy-Reed tau for every removal prefix of `order`.

    Returns (lcc_size, tau) arrays indexed by the number of removed
    nodes m = 0..n; computed by adding nodes back in reverse order.
    """
    n = graph.n
    adj = graph.adjacency
    uf = _UnionFind(n)
    present = [False] * n
    degree = [0] * n
    lcc = np.zeros(n + 1, dtype=np.int64)
    tau = np.zeros(n + 1)
    s1 = 0  # sum of surviving degrees
    s2 = 0  # sum of their squares
    best = 0
    added = 0
    for node in reversed(order.tolist()):
        present[node] = True
        added += 1
        comp = 1
        best = max(best, comp)
        for u in adj[node]:
            if present[u]:
                s2 += 2 * degree[u] + 1 + 2 * degree[node] + 1
                degree[u] += 1
                degree[node] += 1
                s1 += 2
                comp = uf.union(node, u)
                best = max(best, comp)
        m = n - added
        lcc[m] = best
        tau[m] = s2 / s1 if s1 > 0 else 0.0
    return lcc, tau


def simulate_attack(graph: NetworkGraph, plan: AttackPlan, step_count: int, seed: int) -> RemovalCurve:
    """Remove nodes in scheme order and sample the response curve.

    The curve is evaluated at `step_count` evenly spaced removed
    fractions from 0 to plan.q; component fractions are relative to the
    original node count.
    """
    if step_count < 2:
        raise ConfigError("step_count must be >= 2")
    order = removal_order(graph, plan.scheme, seed)
    lcc, tau = _reverse_percolation(graph, order)
    fractions = np.linspace(0.0, plan.q, step_count)
    removed = np.minimum(np.round(fractions * graph.n).astype(np.int64), graph.n)
    return RemovalCurve(
        removed_fraction=fractions,
        lcc_fraction=lcc[removed] / graph.n,
        remaining_tau=tau[removed],
    )


def average_random_attack(graph: NetworkGraph, q: float, step_count: int, trials: int, seed: int) -> RemovalCurve:
    """Random-attack curve averaged over `trials` seeded removal orders."""
    if step_count < 2:
        raise ConfigError("step_count must be >= 2")
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    fractions = np.linspace(0.0, q, step_count)
    removed = np.minimum(np.round(fractions * graph.n).astype(np.int64), graph.n)
    lcc_acc = np.zeros(step_count)
    tau_acc = np.zeros(step_count)
    for trial in range(trials):
        order = rng_stream(seed, 0xA7, trial).permutation(graph.n)
        lcc, tau = _reverse_percolation(graph, order)
        lcc_acc += lcc[removed] / graph.n
        tau_acc += tau[removed]
    return RemovalCurve(
        removed_fraction=fractions,
        lcc_fraction=lcc_acc / trials,
        remaining_tau=tau_acc / trials,
    )


def _first_crossing(tau: np.ndarray) -> int:
    """Smallest removal count at which tau drops to 2 or below."""
    return int(np.argmax(tau <= 2.0))


def estimate_qc(graph: NetworkGraph, scheme: str, trials: int, seed: int) -> QcEstimate:
    """Empirical critical fraction: first q where surviving tau falls to <= 2.

    Random attacks are averaged over `trials` seeded orders; targeted
    orders are deterministic, and scheme "exhaustive" (graphs with at
    most 12 nodes) scans all removal sets for the smallest disruptive one.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if graph.tau() <= 2.0:
        return QcEstimate(0.0, True)
    if scheme == "exhaustive":
        return QcEstimate(_exhaustive_qc(graph), False)
    if scheme == "random":
        crossings = []
        for trial in range(trials):
            order = rng_stream(seed, 0xA7, trial).permutation(graph.n)
            _, tau = _reverse_percolation(graph, order)
            crossings.append(_first_crossing(tau) / graph.n)
        return QcEstimate(float(np.mean(crossings)), False)
    order = removal_order(graph, scheme, seed)
    _, tau = _reverse_percolation(graph, order)
    return QcEstimate(_first_crossing(tau) / graph.n, False)


def _exhaustive_qc(graph: NetworkGraph) -> float:
    if graph.n > 12:
        raise ConfigError("exhaustive search is limited to graphs with <= 12 nodes")
    nodes = range(graph.n)
    for r in range(graph.n + 1):
        for removed in itertools.combinations(nodes, r):
            alive = np.ones(graph.n, dtype=bool)
            alive[list(removed)] = False
            mask = alive[graph.edges[:, 0]] & alive[graph.edges[:, 1]]
            deg = np.bincount(graph.edges[mask].ravel(), minlength=graph.n).astype(float)
            s1 = deg.sum()
            if s1 == 0 or (deg**2).sum() / s1 <= 2.0:
                return r / graph.n
    return 1.0
