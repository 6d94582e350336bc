"""DIMACS clique-format graphs: parsing, clique verification, rounding/repair
extraction from probability vectors, planted-clique generation, and a small
exact branch-and-bound solver used to validate desk-scale instances."""

from __future__ import annotations

import gzip
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import RngStream


class DimacsParseError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a dense boolean adjacency matrix."""

    n: int
    adjacency: np.ndarray
    m: int

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u, v])


def from_edges(n: int, edges) -> Graph:
    adj = np.zeros((n, n), dtype=bool)
    m = 0
    for u, v in edges:
        if u == v:
            continue
        if not adj[u, v]:
            m += 1
        adj[u, v] = adj[v, u] = True
    return Graph(n=n, adjacency=adj, m=m)


def parse_dimacs(text: str) -> Graph:
    """Parse DIMACS .clq text: `c` comments, one `p edge N M` line, `e u v`
    edges with 1-based vertices.  Duplicate edges are deduplicated; a header
    edge count that disagrees with the parsed count triggers a warning and
    the parsed count wins."""
    n = None
    header_m = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise DimacsParseError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsParseError(f"line {lineno}: malformed problem line {line!r}")
            try:
                n, header_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError(f"line {lineno}: malformed problem line {line!r}")
            if n < 1:
                raise DimacsParseError(f"line {lineno}: vertex count must be positive")
        elif parts[0] == "e":
            if n is None:
                raise DimacsParseError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise DimacsParseError(f"line {lineno}: malformed edge line {line!r}")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsParseError(f"line {lineno}: malformed edge line {line!r}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsParseError(f"line {lineno}: vertex index out of range")
            if u == v:
                warnings.warn(f"line {lineno}: self-loop ignored")
                continue
            edges.append((u - 1, v - 1))
        else:
            raise DimacsParseError(f"line {lineno}: unrecognized line {line!r}")
    if n is None:
        raise DimacsParseError("missing problem line")
    g = from_edges(n, edges)
    if header_m is not None and header_m != g.m:
        warnings.warn(f"header edge count {header_m} != parsed {g.m}; using parsed count")
    return g


def serialize_dimacs(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    iu, iv = np.nonzero(np.triu(g.adjacency, k=1))
    lines.extend(f"e {u + 1} {v + 1}" for u, v in zip(iu, iv))
    return "\n".join(lines) + "\n"


def load_dimacs(path: str | Path) -> Graph:
    """Read a .clq file; transparently decompresses gzip input."""
    path = Path(path)
    data = path.read_bytes()
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return parse_dimacs(data.decode("utf-8"))


def verify_clique(g: Graph, vertices) -> tuple[bool, int]:
    """True iff all pairs in the set are adjacent; the empty set is a clique."""
    vs = sorted(set(int(v) for v in vertices))
    if vs and (vs[0] < 0 or vs[-1] >= g.n):
        raise ValueError("vertex out of range")
    if len(vs) <= 1:
        return True, len(vs)
    sub = g.adjacency[np.ix_(vs, vs)]
    k = len(vs)
    ok = bool(sub.sum() == k * (k - 1))
    return ok, k


def round_and_repair(g: Graph, q: np.ndarray) -> list[int]:
    """Extract a feasible clique from a probability vector.

    Threshold at 0.5, then while the candidate set is not a clique drop the
    lowest-probability vertex among those incident to a missing pair (lowest
    index breaks ties).  The result always verifies.
    """
    q = np.asarray(q, dtype=np.float64)
    if q.shape != (g.n,):
        raise ValueError(f"probability vector must have shape ({g.n},)")
    keep = np.where(q >= 0.5)[0]
    while keep.size > 1:
        sub = g.adjacency[np.ix_(keep, keep)]
        missing = ~sub & ~np.eye(keep.size, dtype=bool)
        offenders = np.where(missing.any(axis=1))[0]
        if offenders.size == 0:
            break
        drop = offenders[np.argmin(q[keep[offenders]])]
        keep = np.delete(keep, drop)
    return [int(v) for v in keep]


def planted_clique(n: int, k: int, p_edge: float, rng: RngStream) -> tuple[Graph, list[int]]:
    """Erdos-Renyi background G(n, p_edge) with a planted k-clique.

    Returns the graph and the planted vertex set.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    if not 0.0 < p_edge < 1.0:
        raise ValueError("p_edge must lie in (0, 1)")
    iu, iv = np.triu_indices(n, k=1)
    u, rng = rng.uniform(iu.size)
    adj = np.zeros((n, n), dtype=bool)
    present = u < p_edge
    adj[iu[present], iv[present]] = True
    # planted set: a random k-subset chosen by uniform keys
    keys, rng = rng.uniform(n)
    planted = np.sort(np.argsort(keys)[:k])
    adj[np.ix_(planted, planted)] = True
    np.fill_diagonal(adj, False)
    adj |= adj.T
    m = int(np.triu(adj, k=1).sum())
    return Graph(n=n, adjacency=adj, m=m), [int(v) for v in planted]


def max_clique_exact(g: Graph, budget: int = 5_000_000) -> list[int]:
    """Exact maximum clique by branch and bound with greedy-coloring bounds.

    Suitable for desk-scale instances (hundreds of vertices); raises if the
    search exceeds ``budget`` expanded nodes.
    """
    adj_bits = [0] * g.n
    for v in range(g.n):
        row = 0
        for u in np.nonzero(g.adjacency[v])[0]:
            row |= 1 << int(u)
        adj_bits[v] = row

    best: list[int] = []
    nodes = 0

    def color_sort(cand: int) -> list[tuple[int, int]]:
        # greedy coloring; returns (vertex, color) in nondecreasing color order
        order = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= avail - 1      # drop v
                avail &= ~adj_bits[v]   # same color class must be independent
                rest &= ~(1 << v)
                order.append((v, color))
        return order

    def expand(current: list[int], cand: int):
        nonlocal best, nodes
        nodes += 1
        if nodes > budget:
            raise RuntimeError("max_clique_exact budget exceeded")
        order = color_sort(cand)
        for v, color in reversed(order):
            if len(current) + color <= len(best):
                return
            current.append(v)
            sub = cand & adj_bits[v]
            if sub:
                expand(current, sub)
            elif len(current) > len(best):
                best = list(current)
            current.pop()
            cand &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return sorted(best)
