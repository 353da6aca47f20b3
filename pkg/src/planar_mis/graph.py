"""Problem instances: simple undirected graphs, the edge-list format, and an exact MIS oracle."""
from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "Graph",
    "GraphFormatError",
    "OracleLimitError",
    "ValidationReport",
    "IndependentSetWitness",
    "parse_graph",
    "serialize_graph",
    "read_graph",
    "validate_cubic_planar",
    "is_independent",
    "mis_oracle",
    "DEFAULT_ORACLE_LIMIT",
]

DEFAULT_ORACLE_LIMIT = 24


class GraphFormatError(ValueError):
    """Malformed edge-list document. ``code`` is one of MalformedLine, VertexRange,
    DuplicateEdge, SelfLoop, EdgeCount."""

    def __init__(self, code: str, message: str, line: int | None = None):
        self.code = code
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{code}: {where}{message}")


class OracleLimitError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = set()
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError("SelfLoop", f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphFormatError("VertexRange", f"edge ({u}, {v}) outside 0..{self.n - 1}")
            e = (min(u, v), max(u, v))
            if e in canon:
                raise GraphFormatError("DuplicateEdge", f"edge {e} listed twice")
            canon.add(e)
        edges = tuple(sorted(canon))
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, tuple((int(u), int(v)) for u, v in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbor_masks(self) -> list[int]:
        return [sum(1 << w for w in nbrs) for nbrs in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]


@dataclass(frozen=True)
class ValidationReport:
    is_cubic: bool
    is_planar_candidate: bool
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return self.is_cubic and self.is_planar_candidate

    def to_dict(self) -> dict:
        return {
            "is_cubic": self.is_cubic,
            "is_planar_candidate": self.is_planar_candidate,
            "violations": [{"code": c, "message": m} for c, m in self.violations],
        }


@dataclass(frozen=True)
class IndependentSetWitness:
    members: tuple[int, ...]

    @property
    def cardinality(self) -> int:
        return len(self.members)

    def __str__(self) -> str:
        return f"{self.cardinality}: {{{', '.join(map(str, self.members))}}}"


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` edge-list format.

    Lines starting with ``#`` and blank lines are skipped. Every error carries the
    1-based line number it was found on.
    """
    header = None
    n = m = 0
    seen: set[tuple[int, int]] = set()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError("MalformedLine", f"expected two integers, got {line!r}", lineno) from None
        if len(nums) != 2:
            raise GraphFormatError("MalformedLine", f"expected two integers, got {line!r}", lineno)
        if header is None:
            n, m = nums
            if n < 0 or m < 0:
                raise GraphFormatError("MalformedLine", "negative header value", lineno)
            header = lineno
            continue
        u, v = nums
        if u == v:
            raise GraphFormatError("SelfLoop", f"self-loop at vertex {u}", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError("VertexRange", f"vertex index out of range 0..{n - 1}", lineno)
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphFormatError("DuplicateEdge", f"edge {e} listed twice", lineno)
        seen.add(e)
        edges.append(e)
    if header is None:
        raise GraphFormatError("MalformedLine", "missing 'n m' header")
    if len(edges) != m:
        raise GraphFormatError("EdgeCount", f"header declares {m} edges, found {len(edges)}")
    return Graph(n, tuple(edges))


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def validate_cubic_planar(g: Graph) -> ValidationReport:
    # Necessary conditions only; embedding.embed is the real planarity arbiter.
    violations = []
    for v in range(g.n):
        d = g.degree(v)
        if d != 3:
            violations.append(("Degree", f"vertex {v} has degree {d}"))
    is_cubic = not violations and g.n > 0
    if g.n == 0:
        violations.append(("Empty", "graph has no vertices"))
    planar = g.n < 3 or g.m <= 3 * g.n - 6
    if not planar:
        violations.append(("EdgeBound", f"|E|={g.m} exceeds 3n-6={3 * g.n - 6}"))
    return ValidationReport(is_cubic, planar, tuple(violations))


def is_independent(g: Graph, members) -> bool:
    chosen = set(members)
    return not any(u in chosen and v in chosen for u, v in g.edges)


def mis_oracle(g: Graph, limit: int = DEFAULT_ORACLE_LIMIT) -> IndependentSetWitness:
    """Exact maximum independent set by include-first branch and bound.

    Vertices are branched in index order with the include branch first, and the
    incumbent is only replaced on strict improvement, so the returned witness is
    the lexicographically smallest optimum.
    """
    if g.n > limit:
        raise OracleLimitError(f"graph has {g.n} vertices; oracle limit is {limit}")
    nbr = g.neighbor_masks()
    n = g.n
    best_mask = 0
    best_size = -1

    def search(v: int, allowed: int, chosen: int, size: int) -> None:
        nonlocal best_mask, best_size
        remaining = bin(allowed >> v).count("1")
        if size + remaining <= best_size:
            return
        while v < n and not (allowed >> v) & 1:
            v += 1
        if v == n:
            best_mask, best_size = chosen, size
            return
        search(v + 1, allowed & ~nbr[v] & ~(1 << v), chosen | (1 << v), size + 1)
        search(v + 1, allowed & ~(1 << v), chosen, size)

    search(0, (1 << n) - 1, 0, 0)
    return IndependentSetWitness(tuple(i for i in range(n) if (best_mask >> i) & 1))
