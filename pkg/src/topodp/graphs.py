"""Communication-topology generation and structural features.

Six topology families are supported: ring, line, star, two-level hierarchy,
Erdős–Rényi (er), and Barabási–Albert (ba). Deterministic families are fixed
by (kind, n, params); random families additionally by the seed. Every
generated graph is simple, undirected, and connected.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque

import numpy as np

TOPOLOGY_KINDS = ("ring", "line", "star", "hierarchy", "er", "ba")

# Resampling cap for disconnected ER draws.
ER_MAX_ATTEMPTS = 1000


class GenerationError(RuntimeError):
    """Raised when random generation cannot produce a valid graph."""


@dataclass
class FederationGraph:
    """Undirected communication topology with organisational labelling.

    Attributes:
        n: Number of clients, indexed 0..n-1.
        edges: Sorted list of undirected edges (i, j) with i < j.
        kind: Topology family tag.
        root: Root client index for rooted families (hierarchy), else None.
        org: Per-client organisational group id, contiguous from 0.
        params: Family parameters used at generation time.
        seed: Seed used for random families, else None.
    """

    n: int
    edges: list[tuple[int, int]]
    kind: str
    root: int | None = None
    org: list[int] = field(default_factory=list)
    params: dict = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        if not self.org:
            self.org = [0] * self.n
        self.validate()

    def validate(self) -> None:
        """Check the simple-graph, connectivity, and labelling invariants."""
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop at client {i}")
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"edge ({i},{j}) out of range for n={self.n}")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        if len(self.org) != self.n:
            raise ValueError("org labelling must cover every client")
        gids = sorted(set(self.org))
        if gids != list(range(len(gids))):
            raise ValueError("org group ids must be contiguous from 0")
        if self.root is not None and not (0 <= self.root < self.n):
            raise ValueError(f"root {self.root} out of range")
        if self.n >= 2 and not self.is_connected():
            raise ValueError("graph is not connected")

    def neighbors(self) -> list[list[int]]:
        """Adjacency list (sorted, excluding self)."""
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return [sorted(a) for a in adj]

    def degree(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def k_org(self) -> int:
        return max(self.org) + 1

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        adj = self.neighbors()
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    def to_json(self) -> dict:
        """JSON-serialisable export: {n, kind, edges, root, org, params, seed}."""
        return {
            "n": self.n,
            "kind": self.kind,
            "edges": [[i, j] for i, j in self.edges],
            "root": self.root,
            "org": list(self.org),
            "params": dict(self.params),
            "seed": self.seed,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "FederationGraph":
        return cls(
            n=doc["n"],
            edges=[(int(i), int(j)) for i, j in doc["edges"]],
            kind=doc["kind"],
            root=doc.get("root"),
            org=list(doc.get("org") or []),
            params=dict(doc.get("params") or {}),
            seed=doc.get("seed"),
        )


@dataclass
class StructuralFeatures:
    """Per-client degree, hop distance to the root, and betweenness.

    Depth is measured by BFS from the root when one exists and is all-zero
    otherwise. Betweenness is exact, unnormalised shortest-path betweenness.
    """

    degree: np.ndarray
    depth: np.ndarray
    betweenness: np.ndarray


# ---------------------------- generation ---------------------------- #


def make_topology(
    kind: str,
    n: int,
    params: dict | None = None,
    seed: int | None = None,
) -> FederationGraph:
    """Generate a federation topology.

    Args:
        kind: One of ring | line | star | hierarchy | er | ba.
        n: Client count, >= 2.
        params: Family parameters. er: {"p": float in (0,1]}; ba: {"m": int in
            [1, n-1]}; hierarchy: {"groups": [size, ...]} summing to n. Any
            kind accepts an optional {"org": [gid, ...]} labelling override
            (ignored by hierarchy, which derives org from its groups).
        seed: Random seed, required to make er/ba deterministic.

    Returns:
        A validated FederationGraph.

    Raises:
        ValueError: On invalid parameters.
        GenerationError: When ER connectivity resampling exhausts its cap.
    """
    params = dict(params or {})
    if kind not in TOPOLOGY_KINDS:
        raise ValueError(f"unknown topology kind {kind!r}")
    if n < 2:
        raise ValueError(f"need n >= 2 clients, got {n}")

    root: int | None = None
    org = params.get("org")
    if org is not None and kind != "hierarchy":
        org = [int(g) for g in org]

    if kind == "ring":
        edges = sorted({(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)})
    elif kind == "line":
        edges = [(i, i + 1) for i in range(n - 1)]
    elif kind == "star":
        edges = [(0, i) for i in range(1, n)]
    elif kind == "hierarchy":
        groups = params.get("groups")
        if not groups or any(int(s) < 1 for s in groups):
            raise ValueError("hierarchy requires positive group sizes")
        groups = [int(s) for s in groups]
        if sum(groups) != n:
            raise ValueError(f"hierarchy groups {groups} do not sum to n={n}")
        edges = []
        org = []
        aggregators = []
        start = 0
        for gid, size in enumerate(groups):
            agg = start
            aggregators.append(agg)
            org.extend([gid] * size)
            for member in range(start + 1, start + size):
                edges.append((agg, member))
            start += size
        # Aggregators form a star around the first group's aggregator.
        root = aggregators[0]
        for agg in aggregators[1:]:
            edges.append((min(root, agg), max(root, agg)))
        edges = sorted(edges)
    elif kind == "er":
        p = params.get("p")
        if p is None or not (0.0 < p <= 1.0):
            raise ValueError(f"er requires edge probability p in (0,1], got {p}")
        edges = _er_edges(n, float(p), seed)
    else:  # ba
        m = params.get("m")
        if m is None or not (1 <= int(m) <= n - 1):
            raise ValueError(f"ba requires attachment m in [1, n-1], got {m}")
        edges = _ba_edges(n, int(m), seed)

    return FederationGraph(
        n=n, edges=edges, kind=kind, root=root, org=org or [0] * n, params=params, seed=seed
    )


def _er_edges(n: int, p: float, seed: int | None) -> list[tuple[int, int]]:
    """G(n, p) edges, resampling with incremented sub-seed until connected."""
    for attempt in range(ER_MAX_ATTEMPTS):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt,)))
        iu, ju = np.triu_indices(n, k=1)
        mask = rng.random(iu.shape[0]) < p
        edges = [(int(i), int(j)) for i, j in zip(iu[mask], ju[mask])]
        g = object.__new__(FederationGraph)
        g.n, g.edges = n, edges
        if FederationGraph.is_connected(g):
            return edges
    raise GenerationError(
        f"er(n={n}, p={p}) not connected after {ER_MAX_ATTEMPTS} resampling attempts"
    )


def _ba_edges(n: int, m: int, seed: int | None) -> list[tuple[int, int]]:
    """Preferential attachment from an m-clique, m distinct edges per new node."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))
    edges = [(i, j) for i in range(m) for j in range(i + 1, m)]
    # repeated_nodes holds one entry per incident edge end, so sampling from it
    # is degree-proportional
    repeated = [v for e in edges for v in e]
    if m == 1:
        repeated = [0]
    for new in range(m, n):
        targets: set[int] = set()
        while len(targets) < m:
            targets.add(int(repeated[rng.integers(len(repeated))]))
        for t in sorted(targets):
            edges.append((t, new))
            repeated.extend((t, new))
    return sorted(edges)


# ---------------------------- features ---------------------------- #


def structural_features(g: FederationGraph) -> StructuralFeatures:
    """Compute degree, depth-to-root, and exact betweenness for every client."""
    return StructuralFeatures(
        degree=g.degree(),
        depth=_depths(g),
        betweenness=betweenness_centrality(g),
    )


def _depths(g: FederationGraph) -> np.ndarray:
    depth = np.zeros(g.n, dtype=np.int64)
    if g.root is None:
        return depth
    adj = g.neighbors()
    depth[:] = -1
    depth[g.root] = 0
    queue = deque([g.root])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if depth[w] < 0:
                depth[w] = depth[v] + 1
                queue.append(w)
    return depth


def betweenness_centrality(g: FederationGraph) -> np.ndarray:
    """Unnormalised betweenness via Brandes' single-source accumulation.

    Each unordered pair is counted once (the directed accumulation is halved),
    so a star hub on n clients scores (n-1)(n-2)/2.
    """
    n = g.n
    adj = g.neighbors()
    bc = np.zeros(n, dtype=np.float64)
    for s in range(n):
        stack: list[int] = []
        pred: list[list[int]] = [[] for _ in range(n)]
        sigma = np.zeros(n)
        sigma[s] = 1.0
        dist = np.full(n, -1, dtype=np.int64)
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    pred[w].append(v)
        delta = np.zeros(n)
        while stack:
            w = stack.pop()
            for v in pred[w]:
                delta[v] += (sigma[v] / sigma[w]) * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    return bc / 2.0
