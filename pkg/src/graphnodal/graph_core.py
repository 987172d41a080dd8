"""Graph data type, random samplers, and edge-list I/O.

The graph is a plain immutable adjacency structure on vertices 0..n-1.
Samplers draw from G(n,p), from the uniform simple d-regular distribution
(configuration model with full rejection), and from the centered Bernoulli
matrix ensembles: entries take the value p-1 with probability p and the
value p otherwise, so every entry has mean zero and variance p(1-p).

All randomness flows through RngStream: a (seed, label, index) triple that
fixes the generated value sequence, so identical triples reproduce identical
samples bit for bit no matter the order or thread in which they are drawn.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphParseError",
    "RngStream",
    "SamplingError",
    "adjacency_matrix",
    "connected_components",
    "laplacian_matrix",
    "read_graph",
    "sample_gnp",
    "sample_regular",
    "sample_sym_xp_matrix",
    "sample_xp_matrix",
    "substream",
    "write_graph",
]

REGULAR_RESTART_BUDGET = 10_000


class SamplingError(RuntimeError):
    """Raised when a rejection sampler exhausts its restart budget."""


class GraphParseError(ValueError):
    """Raised on malformed edge-list input; the message carries the line number."""


@dataclass(frozen=True)
class RngStream:
    """Splittable random stream identified by (seed, label, index).

    The label is hashed into a 64-bit key and combined with the index as a
    Philox spawn key, so distinct labels or indices yield statistically
    independent streams while identical triples replay the same sequence.
    """

    seed: int
    label: str = ""
    index: int = 0

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"substream index must be nonnegative, got {self.index}")

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        label_key = int.from_bytes(
            hashlib.blake2b(self.label.encode("utf-8"), digest_size=8).digest(), "big"
        )
        seq = np.random.SeedSequence(
            entropy=self.seed % (1 << 64), spawn_key=(label_key, self.index)
        )
        return np.random.Generator(np.random.Philox(seq))


def substream(seed: int, label: str, index: int = 0) -> RngStream:
    """Derive the stream for (seed, label, index); see RngStream."""
    return RngStream(seed=seed, label=label, index=index)


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph: vertex count, sorted edge list, adjacency lists.

    Edges are stored as (u, v) with u < v, sorted lexicographically, and the
    per-vertex neighbor tuples are sorted.  Construct through from_edges so
    the invariants (no loops, no duplicates, consistent adjacency) hold.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        if n < 1:
            raise ValueError(f"vertex count must be positive, got {n}")
        canon = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            pair = (u, v) if u < v else (v, u)
            if pair in canon:
                raise ValueError(f"duplicate edge {pair}")
            canon.add(pair)
        sorted_edges = tuple(sorted(canon))
        neighbors: list[list[int]] = [[] for _ in range(n)]
        for u, v in sorted_edges:
            neighbors[u].append(v)
            neighbors[v].append(u)
        adjacency = tuple(tuple(sorted(ns)) for ns in neighbors)
        return cls(n=n, edges=sorted_edges, adjacency=adjacency)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> np.ndarray:
        return np.array([len(ns) for ns in self.adjacency], dtype=np.int64)


def connected_components(
    g: Graph, mask: Sequence[bool] | np.ndarray | None = None
) -> list[list[int]]:
    """Connected components of g, or of the subgraph induced on mask.

    Returns sorted vertex lists, ordered by smallest contained vertex.
    Vertices with mask[v] false belong to no component.
    """
    if mask is None:
        allowed = [True] * g.n
    else:
        allowed = [bool(x) for x in mask]
        if len(allowed) != g.n:
            raise ValueError(f"mask length {len(allowed)} != vertex count {g.n}")
    seen = [False] * g.n
    components: list[list[int]] = []
    for start in range(g.n):
        if seen[start] or not allowed[start]:
            continue
        queue = deque([start])
        seen[start] = True
        comp = []
        while queue:
            v = queue.popleft()
            comp.append(v)
            for w in g.adjacency[v]:
                if allowed[w] and not seen[w]:
                    seen[w] = True
                    queue.append(w)
        components.append(sorted(comp))
    return components


def sample_gnp(n: int, p: float, rng: RngStream) -> Graph:
    """Erdos-Renyi sample: each of the C(n,2) pairs kept with probability p.

    The endpoints p=0 and p=1 are allowed and give the empty and complete
    graph deterministically.
    """
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability must lie in [0,1], got {p}")
    gen = rng.generator()
    iu, ju = np.triu_indices(n, k=1)
    keep = gen.random(iu.size) < p
    edges = zip(iu[keep].tolist(), ju[keep].tolist())
    return Graph.from_edges(n, edges)


def sample_regular(
    n: int, d: int, rng: RngStream, restart_budget: int = REGULAR_RESTART_BUDGET
) -> Graph:
    """Uniform simple d-regular graph via the configuration model.

    Half-edges are paired by a uniform permutation; any outcome containing a
    loop or a multi-edge is rejected wholesale and the pairing restarts, which
    preserves exact uniformity over simple d-regular graphs.  Exceeding the
    restart budget raises SamplingError (for d <= 5 and n >= 50 the per-try
    acceptance probability is far from 0, so this indicates misuse).
    """
    if n < 1:
        raise ValueError(f"vertex count must be positive, got {n}")
    if d < 0 or d >= n:
        raise ValueError(f"degree must satisfy 0 <= d < n, got d={d}, n={n}")
    if (n * d) % 2 != 0:
        raise ValueError(f"n*d must be even, got n={n}, d={d}")
    gen = rng.generator()
    stubs = np.repeat(np.arange(n), d)
    for _ in range(restart_budget):
        perm = gen.permutation(stubs)
        u = perm[0::2]
        v = perm[1::2]
        if np.any(u == v):
            continue
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        keys = lo.astype(np.int64) * n + hi
        if np.unique(keys).size != keys.size:
            continue
        return Graph.from_edges(n, zip(lo.tolist(), hi.tolist()))
    raise SamplingError(
        f"no simple {d}-regular graph on {n} vertices within {restart_budget} restarts"
    )


def adjacency_matrix(g: Graph) -> np.ndarray:
    """Dense 0/1 adjacency matrix with zero diagonal; exactly symmetric."""
    a = np.zeros((g.n, g.n), dtype=np.float64)
    if g.edges:
        e = np.asarray(g.edges, dtype=np.int64)
        a[e[:, 0], e[:, 1]] = 1.0
        a[e[:, 1], e[:, 0]] = 1.0
    return a


def laplacian_matrix(g: Graph) -> np.ndarray:
    """Combinatorial Laplacian: degree diagonal minus adjacency; row sums zero."""
    lap = -adjacency_matrix(g)
    np.fill_diagonal(lap, g.degrees().astype(np.float64))
    return lap


def sample_xp_matrix(m: int, k: int, p: float, rng: RngStream) -> np.ndarray:
    """m-by-k matrix of independent centered Bernoulli entries (p-1 w.p. p, else p)."""
    if m < 1 or k < 1:
        raise ValueError(f"matrix dimensions must be positive, got {m}x{k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0,1], got {p}")
    gen = rng.generator()
    return np.where(gen.random((m, k)) < p, p - 1.0, float(p))


def sample_sym_xp_matrix(k: int, p: float, rng: RngStream) -> np.ndarray:
    """Symmetric k-by-k matrix: i.i.d. centered Bernoulli above the diagonal,
    mirrored below, and every diagonal entry exactly p."""
    if k < 1:
        raise ValueError(f"matrix dimension must be positive, got {k}")
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0,1], got {p}")
    gen = rng.generator()
    a = np.full((k, k), float(p), dtype=np.float64)
    iu, ju = np.triu_indices(k, k=1)
    vals = np.where(gen.random(iu.size) < p, p - 1.0, float(p))
    a[iu, ju] = vals
    a[ju, iu] = vals
    return a


def write_graph(g: Graph, target: str | IO[str]) -> None:
    """Write the edge-list format: "n m" then one sorted "u v" line per edge."""
    lines = [f"{g.n} {g.num_edges}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    text = "\n".join(lines) + "\n"
    if isinstance(target, str):
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        target.write(text)


def read_graph(source: str | IO[str]) -> Graph:
    """Parse the edge-list format written by write_graph.

    Lines starting with '#' are treated as comments and skipped (command-line
    outputs prepend one).  Any structural defect raises GraphParseError with
    the offending physical line number.
    """
    if isinstance(source, str):
        with open(source, "r", encoding="utf-8") as fh:
            raw_lines = fh.readlines()
    else:
        raw_lines = source.readlines()

    numbered = [
        (i + 1, line.strip())
        for i, line in enumerate(raw_lines)
        if line.strip() and not line.lstrip().startswith("#")
    ]
    if not numbered:
        raise GraphParseError("line 1: empty input, expected header 'n m'")

    def fields(lineno: int, text: str, what: str) -> tuple[int, int]:
        parts = text.split()
        if len(parts) != 2:
            raise GraphParseError(f"line {lineno}: expected two integers for {what}, got {text!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(
                f"line {lineno}: expected two integers for {what}, got {text!r}"
            ) from None

    header_no, header = numbered[0]
    n, m = fields(header_no, header, "header")
    if n < 1:
        raise GraphParseError(f"line {header_no}: vertex count must be positive, got {n}")
    if m < 0:
        raise GraphParseError(f"line {header_no}: edge count must be nonnegative, got {m}")
    body = numbered[1:]
    if len(body) != m:
        raise GraphParseError(
            f"line {header_no}: header declares {m} edges but {len(body)} edge lines follow"
        )
    edges = []
    seen = set()
    for lineno, text in body:
        u, v = fields(lineno, text, "edge")
        if u == v:
            raise GraphParseError(f"line {lineno}: self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"line {lineno}: edge ({u},{v}) out of range for n={n}")
        if u > v:
            raise GraphParseError(f"line {lineno}: edge ({u},{v}) not in u < v order")
        if (u, v) in seen:
            raise GraphParseError(f"line {lineno}: duplicate edge ({u},{v})")
        seen.add((u, v))
        edges.append((u, v))
    return Graph.from_edges(n, edges)
