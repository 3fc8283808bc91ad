"""Rooted marked multigraphs and ball extraction.

The universal currency of the package is :class:`RootedNetwork`: a finite
connected multigraph with a root, a mark per vertex, two marks per edge
(one at each endpoint) and a *radius of validity*.  A network with
validity ``r`` is an exact picture of some (possibly infinite) rooted
network out to graph distance ``r`` from the root: every vertex closer
than ``r`` has its complete neighborhood present.  ``validity=None``
means the network is complete (a finite graph given in full).

Parallel edges are supported everywhere; loops are rejected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

from .errors import DomainError, TruncationError
from .marks import EMPTY_MARK, Mark

# (u, v, mark at u, mark at v)
Edge = tuple[int, int, Mark, Mark]


@dataclass(frozen=True, eq=False)
class RootedNetwork:
    vertices: tuple[int, ...]
    marks: dict[int, Mark]
    edges: tuple[Edge, ...]
    root: int
    validity: Optional[int] = None  # None = complete network

    def __post_init__(self):
        vs = set(self.vertices)
        if self.root not in vs:
            raise DomainError(f"root {self.root} is not a vertex")
        if self.validity is not None and self.validity < 0:
            raise DomainError("radius of validity must be >= 0")
        for u, v, _, _ in self.edges:
            if u == v:
                raise DomainError(f"loop at vertex {u} (loops are not supported)")
            if u not in vs or v not in vs:
                raise DomainError(f"edge ({u}, {v}) references a missing vertex")

    # -- cached structure ------------------------------------------------

    @cached_property
    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        """vertex -> list of (neighbor, edge index), parallel edges repeated."""
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.vertices}
        for i, (u, v, _, _) in enumerate(self.edges):
            adj[u].append((v, i))
            adj[v].append((u, i))
        return adj

    @cached_property
    def root_distances(self) -> dict[int, int]:
        return self.distances_from(self.root)

    def distances_from(self, start: int) -> dict[int, int]:
        if start not in self.adjacency:
            raise DomainError(f"vertex {start} not in network")
        dist = {start: 0}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            du = dist[u]
            for w, _ in self.adjacency[u]:
                if w not in dist:
                    dist[w] = du + 1
                    queue.append(w)
        return dist

    # -- basic queries ---------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        """Multigraph degree: parallel edges each count."""
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> list[int]:
        """Distinct adjacent vertices, in first-seen order."""
        seen: dict[int, None] = {}
        for w, _ in self.adjacency[v]:
            seen.setdefault(w)
        return list(seen)

    def root_degree(self) -> int:
        return self.degree(self.root)

    def mean_degree(self) -> float:
        return 2.0 * self.num_edges / self.num_vertices

    def is_connected(self) -> bool:
        return len(self.distances_from(self.root)) == self.num_vertices

    def require_connected(self) -> "RootedNetwork":
        if not self.is_connected():
            raise DomainError("network is not connected")
        return self


def ball(net: RootedNetwork, center: int, r: int) -> RootedNetwork:
    """Induced sub-network on vertices within distance ``r`` of ``center``.

    The result is rooted at ``center`` with validity ``r``.  When the
    source has finite validity, ``d(root, center) + r`` must not exceed
    it, otherwise the requested ball is not fully known.
    """
    if center not in net.adjacency:
        raise DomainError(f"ball center {center} not in network")
    if r < 0:
        raise DomainError("ball radius must be >= 0")
    if net.validity is not None:
        offset = net.root_distances.get(center)
        if offset is None or offset + r > net.validity:
            raise TruncationError(
                f"radius-{r} ball at {center} exceeds validity {net.validity}"
            )
    dist = {center: 0}
    order = [center]
    queue = deque([center])
    adj = net.adjacency
    while queue:
        u = queue.popleft()
        du = dist[u]
        if du == r:
            continue
        for w, _ in adj[u]:
            if w not in dist:
                dist[w] = du + 1
                order.append(w)
                queue.append(w)
    eidx: set[int] = set()
    for u in order:
        for w, i in adj[u]:
            if w in dist:
                eidx.add(i)
    all_edges = net.edges
    edges = tuple(all_edges[i] for i in sorted(eidx))
    marks = {v: net.marks[v] for v in order}
    return RootedNetwork(tuple(order), marks, edges, center, r)


def rerooted(net: RootedNetwork, new_root: int) -> RootedNetwork:
    """Same network with a different root (complete networks only)."""
    if net.validity is not None:
        raise TruncationError("re-rooting is only exact on complete networks")
    if new_root not in net.adjacency:
        raise DomainError(f"vertex {new_root} not in network")
    return RootedNetwork(net.vertices, net.marks, net.edges, new_root, None)


@dataclass(frozen=True)
class DoublyRootedNetwork:
    """A rooted network with an ordered second distinguished vertex."""

    net: RootedNetwork
    second_root: int

    def __post_init__(self):
        if self.second_root not in self.net.adjacency:
            raise DomainError(f"second root {self.second_root} not in network")


@dataclass
class NetworkBuilder:
    """Mutable accumulator; `build` freezes into a validated RootedNetwork."""

    _marks: dict[int, Mark] = field(default_factory=dict)
    _edges: list[Edge] = field(default_factory=list)
    _next_id: int = 0

    def add_vertex(self, mark: Mark = EMPTY_MARK) -> int:
        v = self._next_id
        self._next_id += 1
        self._marks[v] = mark
        return v

    def add_edge(self, u: int, v: int, mark_u: Mark = EMPTY_MARK, mark_v: Mark = EMPTY_MARK) -> int:
        if u not in self._marks or v not in self._marks:
            raise DomainError("add_edge endpoints must be added first")
        self._edges.append((u, v, mark_u, mark_v))
        return len(self._edges) - 1

    def set_mark(self, v: int, mark: Mark) -> None:
        if v not in self._marks:
            raise DomainError(f"vertex {v} not in builder")
        self._marks[v] = mark

    @property
    def num_vertices(self) -> int:
        return len(self._marks)

    def build(
        self, root: int, validity: Optional[int] = None, check: bool = True
    ) -> RootedNetwork:
        """Freeze into a network; ``check=False`` skips the connectivity BFS
        for callers whose construction is connected by design."""
        net = RootedNetwork(
            tuple(self._marks), dict(self._marks), tuple(self._edges), root, validity
        )
        return net.require_connected() if check else net


def from_edges(
    pairs: Iterable[tuple[int, int]],
    root: int,
    validity: Optional[int] = None,
    marks: Optional[dict[int, Mark]] = None,
) -> RootedNetwork:
    """Unmarked network from an iterable of endpoint pairs (test-friendly)."""
    pairs = list(pairs)
    ids: dict[int, None] = {root: None}
    for u, v in pairs:
        ids.setdefault(u)
        ids.setdefault(v)
    vmarks = {v: EMPTY_MARK for v in ids}
    if marks:
        vmarks.update(marks)
    edges = tuple((u, v, EMPTY_MARK, EMPTY_MARK) for u, v in pairs)
    net = RootedNetwork(tuple(ids), vmarks, edges, root, validity)
    return net.require_connected()
