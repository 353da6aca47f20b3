"""Planar orthogonal embeddings of max-degree-3 graphs on a rectangular grid.

Vertices go to grid points and every edge becomes a grid path whose interior
points (the dummy vertices) are used by no other vertex or path.

The embedder is a deterministic backtracking search: vertices are placed in BFS
order, each placement immediately routes the edges back to already-placed
neighbours, and grids are tried from the smallest area up to the budget.
Planarity is decided up front by networkx (Boyer-Myrvold); the search itself only
has to find a drawing that fits.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import product

import networkx as nx

from .graph import Graph

__all__ = [
    "GridPoint",
    "Wire",
    "OrthogonalEmbedding",
    "EmbeddingError",
    "NonPlanar",
    "BudgetExceeded",
    "SearchConfig",
    "embed",
    "validate_embedding",
    "EmbeddingViolation",
    "embedding_to_json",
    "embedding_from_json",
]

GridPoint = tuple[int, int]  # (row, col), origin top-left

_STEPS = ((-1, 0), (0, -1), (0, 1), (1, 0))  # lexicographic order of the neighbouring point


class EmbeddingError(Exception):
    pass


class NonPlanar(EmbeddingError):
    pass


class BudgetExceeded(EmbeddingError):
    pass


@dataclass(frozen=True)
class Wire:
    edge: tuple[int, int]
    dummies: tuple[GridPoint, ...]

    @property
    def dummy_count(self) -> int:
        return len(self.dummies)


@dataclass(frozen=True)
class OrthogonalEmbedding:
    grid_rows: int
    grid_cols: int
    vertex_at: tuple[GridPoint, ...]
    edge_paths: dict = field(hash=False)  # (k, l) with k < l -> tuple of GridPoints from vertex_at[k] to vertex_at[l]
    strategy: str = "unspecified"

    def wires(self) -> list[Wire]:
        return [Wire(e, tuple(p[1:-1])) for e, p in sorted(self.edge_paths.items())]

    @property
    def dummies(self) -> frozenset:
        return frozenset(q for p in self.edge_paths.values() for q in p[1:-1])

    def used_points(self) -> list[GridPoint]:
        pts = set(self.vertex_at) | self.dummies
        return sorted(pts)

    @property
    def used_count(self) -> int:
        return len(self.vertex_at) + sum(len(p) - 2 for p in self.edge_paths.values())


@dataclass(frozen=True)
class EmbeddingViolation:
    code: str
    message: str
    point: GridPoint | None = None

    def __str__(self) -> str:
        at = f" at {self.point}" if self.point is not None else ""
        return f"{self.code}{at}: {self.message}"


@dataclass
class SearchConfig:
    position_candidates: int = 10
    path_candidates: int = 6
    path_slack: int = 6  # extra steps over the free-grid shortest distance
    node_limit: int = 200_000
    optimize_below: int = 7  # exhaustively minimise used points for n below this


def _in(p, rows, cols):
    return 0 <= p[0] < rows and 0 <= p[1] < cols


def _nbrs(p, rows, cols):
    r, c = p
    for dr, dc in _STEPS:
        q = (r + dr, c + dc)
        if 0 <= q[0] < rows and 0 <= q[1] < cols:
            yield q


class _Search:
    def __init__(self, g: Graph, rows: int, cols: int, cfg: SearchConfig, optimize: bool, node_limit: int):
        self.g = g
        self.rows, self.cols = rows, cols
        self.cfg = cfg
        self.optimize = optimize
        self.order = _bfs_order(g)
        self.rank = {v: i for i, v in enumerate(self.order)}
        self.occ: dict[GridPoint, object] = {}
        self.pos: dict[int, GridPoint] = {}
        self.paths: dict[tuple[int, int], tuple[GridPoint, ...]] = {}
        self.nodes = 0
        self.node_limit = node_limit
        self.exhausted = True
        self.best = None
        self.best_cost = None

    # ---- bookkeeping -------------------------------------------------
    def free(self, p) -> bool:
        return p not in self.occ

    def pending(self, v: int) -> int:
        return sum(1 for w in self.g.adjacency[v] if (min(v, w), max(v, w)) not in self.paths)

    def cost(self) -> int:
        return len(self.occ)

    def free_ports(self, v: int) -> int:
        return sum(1 for q in _nbrs(self.pos[v], self.rows, self.cols) if self.free(q))

    # ---- path enumeration ---------------------------------------------
    def _dist_to(self, target):
        dist = {target: 0}
        dq = deque([target])
        while dq:
            p = dq.popleft()
            for q in _nbrs(p, self.rows, self.cols):
                if q not in dist and self.free(q):
                    dist[q] = dist[p] + 1
                    dq.append(q)
        return dist

    def candidate_paths(self, a: GridPoint, b: GridPoint):
        dist = self._dist_to(b)
        if not any(q in dist for q in _nbrs(a, self.rows, self.cols)):
            return []
        if b in _nbrs(a, self.rows, self.cols):
            shortest = 1
        else:
            shortest = 1 + min(dist[q] for q in _nbrs(a, self.rows, self.cols) if q in dist and q != b)
        out = []
        limit = self.cfg.path_candidates
        for length in range(shortest, shortest + self.cfg.path_slack + 1, 2):
            path = [a]
            seen = {a}

            def dfs(p, left):
                if len(out) >= limit:
                    return
                if left == 0:
                    if p == b:
                        out.append(tuple(path))
                    return
                for q in _nbrs(p, self.rows, self.cols):
                    if q == b:
                        if left == 1:
                            path.append(q)
                            dfs(q, 0)
                            path.pop()
                        continue
                    if q in seen or not self.free(q) or q not in dist or dist[q] > left - 1:
                        continue
                    seen.add(q)
                    path.append(q)
                    dfs(q, left - 1)
                    path.pop()
                    seen.discard(q)

            dfs(a, length)
            if len(out) >= limit:
                break
        return out

    # ---- feasibility pruning ------------------------------------------
    def feasible(self) -> bool:
        for v in self.pos:
            if self.free_ports(v) < self.pending(v):
                return False
        comp: dict[GridPoint, int] = {}
        cid = 0
        for r in range(self.rows):
            for c in range(self.cols):
                p = (r, c)
                if p in comp or not self.free(p):
                    continue
                comp[p] = cid
                dq = deque([p])
                while dq:
                    x = dq.popleft()
                    for y in _nbrs(x, self.rows, self.cols):
                        if y not in comp and self.free(y):
                            comp[y] = cid
                            dq.append(y)
                cid += 1
        reach = {
            v: {comp[q] for q in _nbrs(self.pos[v], self.rows, self.cols) if q in comp}
            for v in self.pos
            if self.pending(v)
        }
        for u in range(self.g.n):
            if u in self.pos:
                continue
            placed = [w for w in self.g.adjacency[u] if w in self.pos]
            if placed:
                common = set.intersection(*(reach[w] for w in placed))
                if not common:
                    return False
        return True

    # ---- search ------------------------------------------------------
    def position_candidates(self, v: int):
        deg = self.g.degree(v)
        placed = [w for w in self.g.adjacency[v] if w in self.pos]
        cands = []
        for r in range(self.rows):
            for c in range(self.cols):
                p = (r, c)
                if not self.free(p):
                    continue
                ports = sum(1 for q in _nbrs(p, self.rows, self.cols) if self.free(q) or self._is_placed_nbr(q, placed))
                if ports < deg:
                    continue
                if placed:
                    key = sum(abs(r - self.pos[w][0]) + abs(c - self.pos[w][1]) for w in placed)
                else:
                    key = abs(2 * r - (self.rows - 1)) + abs(2 * c - (self.cols - 1))
                cands.append((key, p))
        cands.sort()
        return [p for _, p in cands[: self.cfg.position_candidates]]

    def _is_placed_nbr(self, q, placed) -> bool:
        return any(self.pos[w] == q for w in placed)

    def run(self):
        self._place(0)
        return self.best

    def _record(self):
        cost = self.cost()
        if self.best_cost is None or cost < self.best_cost:
            self.best_cost = cost
            self.best = (dict(self.pos), dict(self.paths))

    def _done(self) -> bool:
        return self.best is not None and not self.optimize

    def _place(self, i: int) -> None:
        if self._done():
            return
        self.nodes += 1
        if self.nodes > self.node_limit:
            self.exhausted = False
            return
        if self.best_cost is not None and self.cost() + (len(self.order) - i) >= self.best_cost:
            return
        if i == len(self.order):
            self._record()
            return
        v = self.order[i]
        for p in self.position_candidates(v):
            self.pos[v] = p
            self.occ[p] = v
            edges = sorted((min(v, w), max(v, w)) for w in self.g.adjacency[v] if w in self.pos and w != v)
            self._route(i, v, edges, 0)
            del self.occ[p]
            del self.pos[v]
            if self._done() or self.nodes > self.node_limit:
                return

    def _route(self, i: int, v: int, edges, j: int) -> None:
        if self._done():
            return
        if j == len(edges):
            if self.feasible():
                self._place(i + 1)
            return
        k, l = edges[j]
        for path in self.candidate_paths(self.pos[k], self.pos[l]):
            for q in path[1:-1]:
                self.occ[q] = (k, l)
            self.paths[(k, l)] = path
            self.nodes += 1
            self._route(i, v, edges, j + 1)
            del self.paths[(k, l)]
            for q in path[1:-1]:
                del self.occ[q]
            if self._done() or self.nodes > self.node_limit:
                return


def _bfs_order(g: Graph) -> list[int]:
    seen = [False] * g.n
    order = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        dq = deque([s])
        while dq:
            v = dq.popleft()
            order.append(v)
            for w in g.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    dq.append(w)
    return order


def _grid_shapes(n_rows: int, n_cols: int, min_points: int):
    shapes = [(r, c) for r, c in product(range(1, n_rows + 1), range(1, n_cols + 1)) if r * c >= min_points]
    shapes.sort(key=lambda rc: (rc[0] * rc[1], max(rc), rc))
    return shapes


def embed(g: Graph, budget: tuple[int, int] | int | None = None, config: SearchConfig | None = None) -> OrthogonalEmbedding:
    """Embed ``g`` on a grid of at most ``budget`` rows x cols (default n x n).

    Raises NonPlanar when no planar drawing exists and BudgetExceeded when the
    search found no drawing within the budget.
    """
    cfg = config or SearchConfig()
    if any(g.degree(v) > 3 for v in range(g.n)):
        raise ValueError("orthogonal embedding requires maximum degree <= 3")
    is_planar, _ = nx.check_planarity(_to_nx(g))
    if not is_planar:
        raise NonPlanar("graph is not planar (Kuratowski subgraph present)")
    if budget is None:
        budget = (max(g.n, 1), max(g.n, 1))
    elif isinstance(budget, int):
        budget = (budget, budget)
    rows, cols = budget
    if g.n == 0:
        return OrthogonalEmbedding(0, 0, (), {}, "empty")
    optimize = g.n < cfg.optimize_below
    shapes = [rc for rc in _grid_shapes(rows, cols, g.n) if not (rc[1] > rc[0] and rc[1] <= rows and rc[0] <= cols)]
    if optimize:
        limits = [cfg.node_limit]
    else:
        # cheap sweep over all shapes first, then deeper searches
        limits = sorted({min(cfg.node_limit, x) for x in (2_000, 20_000, cfg.node_limit)})
    for limit in limits:
        for r, c in shapes:
            if max(r, c) > 2 * min(r, c) + 1:
                continue
            s = _Search(g, r, c, cfg, optimize, limit)
            found = s.run()
            if found is not None:
                pos, paths = found
                mode = "min-points" if optimize else "first-fit"
                strategy = f"backtracking-search/{mode}/grid={r}x{c}/nodes={s.nodes}/limit={limit}"
                return OrthogonalEmbedding(r, c, tuple(pos[v] for v in range(g.n)), dict(sorted(paths.items())), strategy)
    raise BudgetExceeded(f"no orthogonal embedding found within {rows}x{cols}")


def _to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def validate_embedding(g: Graph, emb: OrthogonalEmbedding) -> list[EmbeddingViolation]:
    out: list[EmbeddingViolation] = []
    R, C = emb.grid_rows, emb.grid_cols
    if len(emb.vertex_at) != g.n:
        out.append(EmbeddingViolation("VertexCount", f"{len(emb.vertex_at)} images for {g.n} vertices"))
        return out
    owner: dict[GridPoint, str] = {}
    for v, p in enumerate(emb.vertex_at):
        if not _in(p, R, C):
            out.append(EmbeddingViolation("OutOfBounds", f"vertex {v} outside {R}x{C}", p))
        if p in owner:
            out.append(EmbeddingViolation("VertexCollision", f"vertex {v} shares its point with {owner[p]}", p))
        owner[p] = f"vertex {v}"
    expected = set(g.edges)
    for e in sorted(set(emb.edge_paths) - expected):
        out.append(EmbeddingViolation("ExtraPath", f"path for non-edge {e}"))
    for e in sorted(expected - set(emb.edge_paths)):
        out.append(EmbeddingViolation("MissingPath", f"edge {e} has no path"))
    for e in sorted(set(emb.edge_paths) & expected):
        k, l = e
        path = [tuple(q) for q in emb.edge_paths[e]]
        if len(path) < 2 or path[0] != emb.vertex_at[k] or path[-1] != emb.vertex_at[l]:
            out.append(EmbeddingViolation("EndpointMismatch", f"path of {e} does not run from image of {k} to image of {l}"))
        for a, b in zip(path, path[1:]):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) != 1:
                out.append(EmbeddingViolation("NonOrthogonalStep", f"path of {e} steps {a} -> {b}", b))
        for q in path[1:-1]:
            if not _in(q, R, C):
                out.append(EmbeddingViolation("OutOfBounds", f"path of {e} leaves the grid", q))
            if q in owner:
                code = "VertexOnPath" if owner[q].startswith("vertex") else "PathOverlap"
                out.append(EmbeddingViolation(code, f"path of {e} reuses point of {owner[q]}", q))
            else:
                owner[q] = f"path {e}"
    return out


def embedding_to_json(emb: OrthogonalEmbedding) -> str:
    doc = {
        "grid": [emb.grid_rows, emb.grid_cols],
        "vertices": {str(v): list(p) for v, p in enumerate(emb.vertex_at)},
        "paths": {f"{k}-{l}": [list(q) for q in p] for (k, l), p in sorted(emb.edge_paths.items())},
        "strategy": emb.strategy,
    }
    lines = [f" {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}" for k, v in doc.items()]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def embedding_from_json(text: str) -> OrthogonalEmbedding:
    doc = json.loads(text)
    rows, cols = doc["grid"]
    verts = doc["vertices"]
    vertex_at = tuple(tuple(verts[str(v)]) for v in range(len(verts)))
    paths = {}
    for key, pts in doc["paths"].items():
        k, l = (int(x) for x in key.split("-"))
        paths[(k, l)] = tuple(tuple(q) for q in pts)
    return OrthogonalEmbedding(rows, cols, vertex_at, dict(sorted(paths.items())), doc.get("strategy", "unspecified"))
