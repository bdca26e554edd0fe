"""Graph families, adjacency matrices, and metric utilities.

Vertices are always 0-indexed integers; corona-built graphs additionally
carry per-vertex labels mapping flat indices back to (base, copy) addresses.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np

#: Sentinel for unreachable vertex pairs in distance matrices.
UNREACHABLE = -1


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on n vertices with canonical (u < v) edges."""

    n: int
    edges: frozenset[tuple[int, int]]
    labels: tuple | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u},{v}) is not canonical for n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must cover every vertex")

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == v:
                out.append(b)
            elif b == v:
                out.append(a)
        return sorted(out)

    def adjacency(self) -> np.ndarray:
        """Symmetric 0/1 integer matrix with zero diagonal."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def degrees(self) -> np.ndarray:
        return self.adjacency().sum(axis=1)

    def is_regular(self) -> int | None:
        """Common degree k if the graph is regular, else None."""
        degs = self.degrees()
        k = int(degs[0])
        return k if bool((degs == k).all()) else None

    def is_connected(self) -> bool:
        return bool((self.bfs_distances(0) != UNREACHABLE).all())

    def bfs_distances(self, source: int) -> np.ndarray:
        if not 0 <= source < self.n:
            raise ValueError(f"vertex {source} out of range")
        adj = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        dist = np.full(self.n, UNREACHABLE, dtype=np.int64)
        dist[source] = 0
        queue = deque([source])
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if dist[w] == UNREACHABLE:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist

    def distance_matrix(self) -> np.ndarray:
        """All-pairs BFS distances; UNREACHABLE marks disconnected pairs."""
        return np.stack([self.bfs_distances(v) for v in range(self.n)])


def make_graph(n: int, edges, labels=None) -> Graph:
    """Build a Graph from any iterable of endpoint pairs, canonicalizing order."""
    canon = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        canon.add((min(u, v), max(u, v)))
    return Graph(n, frozenset(canon), labels)


# ---------------------------------------------------------------------------
# named families

def path_graph(n: int) -> Graph:
    _require_size(n, 1, "path")
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    # a 1- or 2-cycle would need loops or parallel edges
    _require_size(n, 3, "cycle")
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    _require_size(n, 1, "complete")
    return make_graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def empty_graph(n: int) -> Graph:
    _require_size(n, 1, "empty")
    return make_graph(n, [])


def star_graph(n: int) -> Graph:
    """Star on n vertices: center 0 joined to every leaf."""
    _require_size(n, 1, "star")
    return make_graph(n, [(0, i) for i in range(1, n)])


def cocktail_party_graph(n: int) -> Graph:
    """Complete graph on 2n vertices minus the perfect matching {(2i, 2i+1)}."""
    _require_size(n, 1, "cocktail")
    edges = [
        (i, j)
        for i in range(2 * n)
        for j in range(i + 1, 2 * n)
        if j != i + 1 or i % 2 != 0
    ]
    return make_graph(2 * n, edges)


def cocktail_antipode_map(g: Graph) -> list[int] | None:
    """Antipode of each vertex when g is a cocktail party graph, else None.

    Detection is structural: every off-diagonal distance is 1 except a single
    distance-2 partner per vertex.
    """
    if g.n < 2 or g.n % 2 != 0:
        return None
    dist = g.distance_matrix()
    antipode = [-1] * g.n
    for v in range(g.n):
        far = [u for u in range(g.n) if u != v and dist[v, u] != 1]
        if len(far) != 1 or dist[v, far[0]] != 2:
            return None
        antipode[v] = far[0]
    return antipode


def _require_size(n: int, minimum: int, family: str) -> None:
    if n < minimum:
        raise ValueError(f"{family} family needs size >= {minimum}, got {n}")


# ---------------------------------------------------------------------------
# specs and files

FAMILY_KINDS = ("path", "cycle", "complete", "cocktail", "empty", "star")


@dataclass(frozen=True)
class GraphSpec:
    """Parsed description of a graph: a named family, a file, or a corona."""

    kind: str
    size: int | None = None
    path: str | None = None
    factors: tuple["GraphSpec", "GraphSpec"] | None = None

    def __str__(self) -> str:
        if self.kind == "corona":
            return f"corona({self.factors[0]},{self.factors[1]})"
        if self.kind == "file":
            return f"file:{self.path}"
        return f"{self.kind}:{self.size}"


def build_family(spec: GraphSpec) -> Graph:
    """Materialize a GraphSpec; deterministic for identical specs."""
    if spec.kind == "corona":
        from .corona import corona_graph  # local import: corona builds on graphs

        g, h = (build_family(f) for f in spec.factors)
        return corona_graph(g, h)
    if spec.kind == "file":
        return read_edge_list(spec.path)
    if spec.kind not in FAMILY_KINDS:
        raise ValueError(f"unknown graph family {spec.kind!r}")
    if spec.size is None:
        raise ValueError(f"{spec.kind} spec needs a size")
    builders = {
        "path": path_graph,
        "cycle": cycle_graph,
        "complete": complete_graph,
        "cocktail": cocktail_party_graph,
        "empty": empty_graph,
        "star": star_graph,
    }
    return builders[spec.kind](spec.size)


def read_edge_list(path: str | Path) -> Graph:
    """Load the plain edge-list format.

    First significant line holds the vertex count n; every following line is
    "u v" with 0 <= u < v < n.  '#' starts a comment, blank lines are skipped,
    duplicate edges are rejected.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ValueError(f"cannot read edge list {path}: {err}") from err
    n: int | None = None
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if n is None:
            try:
                n = int(line)
            except ValueError as err:
                raise ValueError(f"{path}:{lineno}: vertex count expected") from err
            if n < 1:
                raise ValueError(f"{path}:{lineno}: vertex count must be >= 1")
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError as err:
            raise ValueError(f"{path}:{lineno}: expected integers") from err
        if not 0 <= u < v < n:
            raise ValueError(f"{path}:{lineno}: edge ({u},{v}) needs 0 <= u < v < n")
        if (u, v) in edges:
            raise ValueError(f"{path}:{lineno}: duplicate edge ({u},{v})")
        edges.add((u, v))
    if n is None:
        raise ValueError(f"{path}: empty edge-list file")
    return Graph(n, frozenset(edges))


def write_edge_list(g: Graph) -> str:
    """Serialize a graph in the edge-list file format (with label comments)."""
    lines = [str(g.n)]
    if g.labels is not None:
        for idx, lab in enumerate(g.labels):
            lines.append(f"# vertex {idx} = {format_vertex_label(lab)}")
    for u, v in sorted(g.edges):
        lines.append(f"{u} {v}")
    return "\n".join(lines) + "\n"


def format_vertex_label(label) -> str:
    """Render a corona vertex label: base v -> (v,0), copy w of v -> (v,w{j})."""
    if label[0] == "base":
        return f"({label[1]},0)"
    return f"({label[1]},w{label[2]})"
