"""Undirected simple graphs: random generation, edge-list files, Laplacians.

Vertices are 0-based everywhere, including the file format. Every graph must
be free of isolated vertices because the degree-normalized Laplacian divides
by sqrt(degree).
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import GenerationError, ParseError


@dataclass(frozen=True)
class Graph:
    """Immutable undirected simple graph.

    ``edges`` is an (m, 2) int64 array with u < v per row, sorted
    lexicographically; construction validates simplicity and rejects
    isolated vertices.
    """

    n: int
    edges: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError("edge endpoint out of range [0, n)")
            if (edges[:, 0] == edges[:, 1]).any():
                raise ValueError("self-loops are not allowed")
        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        canon = np.stack([lo, hi], axis=1)
        order = np.lexsort((canon[:, 1], canon[:, 0]))
        canon = canon[order]
        if len(canon) > 1 and (np.diff(canon, axis=0) == 0).all(axis=1).any():
            raise ValueError("duplicate edge")
        canon.setflags(write=False)
        object.__setattr__(self, "edges", canon)
        deg = self.degree_vector()
        if (deg == 0).any():
            k = int(np.argmin(deg))
            raise ValueError(f"isolated vertex {k} (degree 0 is not supported)")

    @property
    def m(self) -> int:
        return int(self.edges.shape[0])

    def degree_vector(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.n)


def degrees(g: Graph) -> np.ndarray:
    """Per-vertex degree; sums to 2*m."""
    return g.degree_vector()


def _decode_pairs(idx: np.ndarray, n: int) -> np.ndarray:
    """Map linear indices in [0, n(n-1)/2) to (u, v) pairs with u < v."""
    t = idx.astype(np.float64)
    u = np.floor(((2 * n - 1) - np.sqrt((2 * n - 1) ** 2 - 8 * t)) / 2).astype(np.int64)
    base = u * n - u * (u + 1) // 2 - u - 1
    v = idx.astype(np.int64) - base
    return np.stack([u, v], axis=1)


def erdos_renyi(n: int, m: int, seed, max_attempts: int = 200) -> Graph:
    """Uniform random graph with exactly ``m`` distinct edges (G(n, M) model).

    Draws are repeated (same RNG stream, so deterministic per seed) until no
    vertex is isolated; raises GenerationError when ``max_attempts`` draws
    all contain an isolated vertex.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    max_edges = n * (n - 1) // 2
    if not 1 <= m <= max_edges:
        raise ValueError(f"m must be in [1, {max_edges}] for n={n}, got {m}")
    rng = np.random.default_rng(seed)
    for _ in range(max_attempts):
        idx = np.sort(rng.choice(max_edges, size=m, replace=False))
        edges = _decode_pairs(idx, n)
        deg = np.bincount(edges.ravel(), minlength=n)
        if (deg > 0).all():
            return Graph(n, edges)
    raise GenerationError(
        f"no isolated-vertex-free graph with n={n}, m={m} in {max_attempts} attempts"
    )


def from_edge_pairs(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from (u, v) pairs, deduplicating undirected edges."""
    seen = set()
    out = []
    for u, v in pairs:
        key = (v, u) if v < u else (u, v)
        if key not in seen:
            seen.add(key)
            out.append(key)
    edges = np.array(sorted(out), dtype=np.int64).reshape(-1, 2)
    return Graph(n, edges)


def load_edge_list(text: str) -> Graph:
    """Parse the edge-list format.

    Lines hold two whitespace-separated vertex indices; '#' starts a comment
    line; an optional first directive line "n <count>" fixes the vertex count
    (otherwise max index + 1 is used). Duplicate undirected edges collapse;
    self-loops and isolated vertices are errors.
    """
    declared_n: int | None = None
    pairs: list[tuple[int, int]] = []
    saw_data = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "n" and not saw_data and declared_n is None:
            if len(parts) != 2:
                raise ParseError("directive must be 'n <count>'", line=lineno)
            try:
                declared_n = int(parts[1])
            except ValueError:
                raise ParseError(f"bad vertex count {parts[1]!r}", line=lineno) from None
            if declared_n < 1:
                raise ParseError("vertex count must be positive", line=lineno)
            continue
        if len(parts) != 2:
            raise ParseError("expected two vertex indices", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"bad edge {line!r}", line=lineno) from None
        if u < 0 or v < 0:
            raise ParseError("negative vertex index", line=lineno)
        if u == v:
            raise ParseError(f"self-loop at vertex {u}", line=lineno)
        saw_data = True
        pairs.append((u, v))
    if not pairs:
        raise ParseError("edge list holds no edges")
    n = declared_n if declared_n is not None else max(max(u, v) for u, v in pairs) + 1
    max_idx = max(max(u, v) for u, v in pairs)
    if max_idx >= n:
        raise ParseError(f"edge endpoint {max_idx} outside declared n={n}")
    try:
        return from_edge_pairs(n, pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def dump_edge_list(g: Graph) -> str:
    """Canonical edge-list text: 'n <count>' header then sorted edges."""
    lines = [f"n {g.n}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def graph_hash(g: Graph) -> str:
    """Content hash over the canonical serialization (keys the basis cache)."""
    return hashlib.sha256(dump_edge_list(g).encode()).hexdigest()


def normalized_laplacian(g: Graph) -> np.ndarray:
    """Degree-normalized Laplacian: identity diagonal, -1/sqrt(d_i d_j) on edges.

    Symmetric positive semi-definite with spectrum inside [0, 2]; exact
    symmetry by construction (each off-diagonal value assigned to both
    triangles).
    """
    deg = g.degree_vector().astype(float)
    L = np.eye(g.n)
    u, v = g.edges[:, 0], g.edges[:, 1]
    w = -1.0 / np.sqrt(deg[u] * deg[v])
    L[u, v] = w
    L[v, u] = w
    return L
