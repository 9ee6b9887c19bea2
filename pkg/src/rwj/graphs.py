"""Weighted graphs, graph6 and edge-list formats, generators, degree statistics.

Conventions used throughout:

* a self-loop (u, u, w) contributes its weight once to the degree d_u,
  i.e. d = A 1 with a_uu = w on the diagonal;
* ``volume`` is the sum of all weighted degrees (the quantity the stationary
  distribution d_i / volume normalises against);
* graphs are immutable after construction.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraphError, GenerationError, GraphFormatError

GRAPH6_MAX_N = 62  # single-byte size header only

GENERATOR_MODELS = ("path", "cycle", "star", "complete", "er", "sbm")


@dataclass(frozen=True)
class WeightedGraph:
    """Symmetric nonnegative weighted adjacency, stored once per unordered pair.

    ``edges`` holds triples (u, v, w) with 0 <= u <= v < n and w > 0; u == v
    encodes a self-loop of weight a_uu. Absent pairs have weight zero.
    Equality and hashing ignore ``name``.
    """

    n: int
    edges: tuple[tuple[int, int, float], ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise GraphFormatError(f"need at least 2 vertices, got n={self.n}")
        seen: set[tuple[int, int]] = set()
        normalized = []
        for u, v, w in self.edges:
            u, v = int(u), int(v)
            if u > v:
                u, v = v, u
            if not (0 <= u <= v < self.n):
                raise GraphFormatError(f"edge ({u},{v}) out of range for n={self.n}")
            w = float(w)
            if not (w > 0.0) or not math.isfinite(w):
                raise GraphFormatError(f"edge ({u},{v}) has nonpositive or non-finite weight {w}")
            if (u, v) in seen:
                raise GraphFormatError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            normalized.append((u, v, w))
        object.__setattr__(self, "edges", tuple(sorted(normalized)))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]], name: str | None = None) -> "WeightedGraph":
        """Unweighted helper: every listed pair gets weight 1."""
        return cls(n, tuple((u, v, 1.0) for u, v in pairs), name)

    def adjacency(self) -> np.ndarray:
        """Dense symmetric adjacency matrix (fresh array each call)."""
        a = np.zeros((self.n, self.n))
        for u, v, w in self.edges:
            a[u, v] = w
            a[v, u] = w
        return a

    def degrees(self) -> np.ndarray:
        """Weighted degree vector d = A 1 (self-loops counted once)."""
        return self.adjacency().sum(axis=1)

    @property
    def volume(self) -> float:
        return float(self.degrees().sum())

    def is_unweighted(self) -> bool:
        return all(w == 1.0 for _, _, w in self.edges)

    def has_self_loops(self) -> bool:
        return any(u == v for u, v, _ in self.edges)


@dataclass(frozen=True, eq=False)
class DegreeStats:
    """Degree summary quantities used by the sufficient-condition ladder."""

    d: np.ndarray
    volume: float
    d_max: float
    d_mean: float
    d_second_moment: float
    snr: float  # d_mean^2 / d_second_moment, in (0, 1], 1 iff regular


def degree_stats(g: WeightedGraph) -> DegreeStats:
    d = g.degrees()
    d_mean = float(d.mean())
    d2 = float((d * d).mean())
    return DegreeStats(
        d=d,
        volume=float(d.sum()),
        d_max=float(d.max()),
        d_mean=d_mean,
        d_second_moment=d2,
        snr=d_mean * d_mean / d2,
    )


def is_connected(g: WeightedGraph) -> bool:
    """True iff the positive-weight adjacency has one component (self-loops ignored)."""
    adj: list[list[int]] = [[] for _ in range(g.n)]
    for u, v, _ in g.edges:
        if u != v:
            adj[u].append(v)
            adj[v].append(u)
    seen = [False] * g.n
    seen[0] = True
    queue = deque([0])
    count = 1
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                count += 1
                queue.append(v)
    return count == g.n


# ---------------------------------------------------------------------------
# graph6 (McKay's format, single-byte header, n <= 62)
# ---------------------------------------------------------------------------

def parse_graph6(data: bytes | str) -> WeightedGraph:
    """Parse one graph6 line into an unweighted graph.

    Layout: header byte 63+n, then the upper triangle read column by column
    (x01, x02, x12, x03, ...), packed big-endian 6 bits per byte, each byte
    offset by 63. Trailing padding bits must be zero. Disconnected graphs are
    rejected with :class:`DisconnectedGraphError` so catalog scans can count
    them as skips rather than failures.
    """
    if isinstance(data, str):
        try:
            data = data.encode("ascii")
        except UnicodeEncodeError as exc:
            raise GraphFormatError(f"non-ASCII graph6 input: {exc}") from exc
    line = data.rstrip(b"\r\n")
    if not line:
        raise GraphFormatError("empty graph6 line")
    header = line[0]
    if header == 126:
        raise GraphFormatError("multi-byte graph6 size header (n > 62) is not supported")
    if not 63 <= header <= 126:
        raise GraphFormatError(f"graph6 header byte {header} outside [63, 126]")
    n = header - 63
    if n < 2:
        raise GraphFormatError(f"graph6 line encodes n={n}; need n >= 2")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    body = line[1:]
    if len(body) != nbytes:
        raise GraphFormatError(f"graph6 body has {len(body)} bytes, expected {nbytes} for n={n}")
    bits = []
    for b in body:
        if not 63 <= b <= 126:
            raise GraphFormatError(f"graph6 body byte {b} outside [63, 126]")
        val = b - 63
        bits.extend((val >> k) & 1 for k in range(5, -1, -1))
    if any(bits[nbits:]):
        raise GraphFormatError("nonzero padding bits in graph6 body")
    pairs = []
    k = 0
    for v in range(1, n):
        for u in range(v):
            if bits[k]:
                pairs.append((u, v))
            k += 1
    g = WeightedGraph.from_pairs(n, pairs, name=line.decode("ascii"))
    if not is_connected(g):
        raise DisconnectedGraphError(f"graph6 line {line.decode('ascii')!r} is disconnected")
    return g


def write_graph6(g: WeightedGraph) -> bytes:
    """Encode an unweighted graph without self-loops as one graph6 line (no newline)."""
    if g.n > GRAPH6_MAX_N:
        raise GraphFormatError(f"graph6 v1 supports n <= {GRAPH6_MAX_N}, got n={g.n}")
    if g.has_self_loops():
        raise GraphFormatError("graph6 cannot encode self-loops")
    if not g.is_unweighted():
        raise GraphFormatError("graph6 cannot encode weighted edges")
    present = {(u, v) for u, v, _ in g.edges}
    bits = []
    for v in range(1, g.n):
        for u in range(v):
            bits.append(1 if (u, v) in present else 0)
    while len(bits) % 6:
        bits.append(0)
    out = bytearray([63 + g.n])
    for i in range(0, len(bits), 6):
        val = 0
        for b in bits[i:i + 6]:
            val = (val << 1) | b
        out.append(val + 63)
    return bytes(out)


# ---------------------------------------------------------------------------
# weighted edge-list text format
# ---------------------------------------------------------------------------

def parse_edgelist(text: str) -> WeightedGraph:
    """Parse the weighted edge-list format.

    Lines starting with '#' are comments; the first data line is the vertex
    count n; each following data line is "u v w" with 0-based endpoints and a
    positive weight. u == v encodes a self-loop. Duplicate unordered pairs are
    an error, as is a disconnected result.
    """
    data_lines = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        data_lines.append(line)
    if not data_lines:
        raise GraphFormatError("edge list has no data lines")
    try:
        n = int(data_lines[0])
    except ValueError as exc:
        raise GraphFormatError(f"first data line must be the vertex count, got {data_lines[0]!r}") from exc
    edges = []
    for line in data_lines[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise GraphFormatError(f"expected 'u v w', got {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError as exc:
            raise GraphFormatError(f"unparseable edge line {line!r}") from exc
        if not math.isfinite(w) or w <= 0.0:
            raise GraphFormatError(f"nonpositive or non-finite weight in {line!r}")
        edges.append((u, v, w))
    g = WeightedGraph(n, tuple(edges))
    if not is_connected(g):
        raise DisconnectedGraphError("edge list describes a disconnected graph")
    return g


def write_edgelist(g: WeightedGraph, comments: Sequence[str] = ()) -> str:
    """Serialise a graph in the edge-list format; weights round-trip exactly."""
    lines = [f"# {c}" for c in comments]
    lines.append(str(g.n))
    for u, v, w in g.edges:
        lines.append(f"{u} {v} {w!r}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _require_n(params: dict, minimum: int = 2) -> int:
    n = params.get("n")
    if not isinstance(n, (int, np.integer)) or n < minimum:
        raise GraphFormatError(f"model needs integer n >= {minimum}, got {n!r}")
    return int(n)


def _er_pairs(n: int, p: float, rng: np.random.Generator) -> list[tuple[int, int]]:
    draws = rng.random(n * (n - 1) // 2)
    pairs = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[k] < p:
                pairs.append((u, v))
            k += 1
    return pairs


def _sbm_pairs(sizes: Sequence[int], b: np.ndarray, rng: np.random.Generator) -> list[tuple[int, int]]:
    block = []
    for idx, s in enumerate(sizes):
        block.extend([idx] * s)
    n = len(block)
    draws = rng.random(n * (n - 1) // 2)
    pairs = []
    k = 0
    for u in range(n):
        for v in range(u + 1, n):
            if draws[k] < b[block[u], block[v]]:
                pairs.append((u, v))
            k += 1
    return pairs


def generate(model: str, seed: int = 0, retry_budget: int = 1000, **params) -> WeightedGraph:
    """Build a named deterministic family or a seeded random graph.

    Deterministic families (path, cycle, star, complete) ignore the seed.
    Random models (er, sbm) resample from the same seeded stream until
    connected, up to ``retry_budget`` attempts; the resample count, when
    nonzero, is recorded in the graph name.
    """
    if model == "path":
        n = _require_n(params)
        return WeightedGraph.from_pairs(n, [(i, i + 1) for i in range(n - 1)], name=f"path(n={n})")
    if model == "cycle":
        n = _require_n(params, minimum=3)
        pairs = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
        return WeightedGraph.from_pairs(n, pairs, name=f"cycle(n={n})")
    if model == "star":
        n = _require_n(params)
        return WeightedGraph.from_pairs(n, [(0, i) for i in range(1, n)], name=f"star(n={n})")
    if model == "complete":
        n = _require_n(params)
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        return WeightedGraph.from_pairs(n, pairs, name=f"complete(n={n})")
    if model == "er":
        n = _require_n(params)
        p = params.get("p")
        if not isinstance(p, (int, float)) or not 0.0 < p <= 1.0:
            raise GraphFormatError(f"er needs p in (0, 1], got {p!r}")
        rng = np.random.default_rng(seed)
        base = f"er(n={n},p={p:g},seed={seed})"
        for attempt in range(retry_budget):
            pairs = _er_pairs(n, float(p), rng)
            name = base if attempt == 0 else f"er(n={n},p={p:g},seed={seed},resampled={attempt})"
            g = WeightedGraph.from_pairs(n, pairs, name=name)
            if is_connected(g):
                return g
        raise GenerationError(f"no connected er(n={n},p={p:g}) sample in {retry_budget} attempts (seed={seed})")
    if model == "sbm":
        sizes = params.get("sizes")
        b = params.get("b")
        if not sizes or any(int(s) < 1 for s in sizes):
            raise GraphFormatError(f"sbm needs positive block sizes, got {sizes!r}")
        sizes = [int(s) for s in sizes]
        bmat = np.asarray(b, dtype=float)
        k = len(sizes)
        if bmat.shape != (k, k) or not np.allclose(bmat, bmat.T):
            raise GraphFormatError(f"sbm needs a symmetric {k}x{k} probability matrix")
        if bmat.min() < 0.0 or bmat.max() > 1.0:
            raise GraphFormatError("sbm probabilities must lie in [0, 1]")
        n = sum(sizes)
        if n < 2:
            raise GraphFormatError("sbm needs at least 2 vertices in total")
        rng = np.random.default_rng(seed)
        base = f"sbm(sizes={tuple(sizes)},seed={seed})"
        for attempt in range(retry_budget):
            pairs = _sbm_pairs(sizes, bmat, rng)
            name = base if attempt == 0 else f"sbm(sizes={tuple(sizes)},seed={seed},resampled={attempt})"
            g = WeightedGraph.from_pairs(n, pairs, name=name)
            if is_connected(g):
                return g
        raise GenerationError(f"no connected sbm(sizes={tuple(sizes)}) sample in {retry_budget} attempts (seed={seed})")
    raise GraphFormatError(f"unknown model {model!r}; choose one of {GENERATOR_MODELS}")
