"""Ball samplers and finite graph builders for the stock measures.

Samplers here are exact: the returned radius-r ball has precisely the law
of the target measure's r-ball.  Finite builders (regular-tree balls,
gasket stages, stars) return complete networks for uniform-root
statistics.  ``ray_from_endpoint`` is a deliberately non-unimodular
fixture kept as a negative control for the mass-transport tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .marks import EMPTY_MARK
from .network import NetworkBuilder, RootedNetwork
from .sampler import RootedLawSampler


@dataclass(frozen=True)
class OffspringLaw:
    """Finitely supported probability law on nonnegative integers."""

    probs: tuple[tuple[int, float], ...]

    def __post_init__(self):
        total = 0.0
        for k, p in self.probs:
            if not isinstance(k, int) or k < 0:
                raise DomainError(f"offspring values must be ints >= 0, got {k!r}")
            if p < 0:
                raise DomainError("offspring probabilities must be >= 0")
            total += p
        if abs(total - 1.0) > 1e-9:
            raise DomainError(f"offspring probabilities sum to {total}, not 1")

    @classmethod
    def from_dict(cls, d: dict[int, float]) -> "OffspringLaw":
        return cls(tuple(sorted((int(k), float(p)) for k, p in d.items() if p > 0)))

    @classmethod
    def uniform(cls, lo: int, hi: int) -> "OffspringLaw":
        n = hi - lo + 1
        return cls.from_dict({k: 1.0 / n for k in range(lo, hi + 1)})

    @property
    def support(self) -> list[int]:
        return [k for k, _ in self.probs]

    @property
    def max_value(self) -> int:
        return self.probs[-1][0]

    def sample(self, rng: np.random.Generator) -> int:
        u = rng.random()
        acc = 0.0
        for k, p in self.probs:
            acc += p
            if u < acc:
                return k
        return self.probs[-1][0]

    def convolve(self, other: "OffspringLaw") -> dict[int, float]:
        out: dict[int, float] = {}
        for k1, p1 in self.probs:
            for k2, p2 in other.probs:
                out[k1 + k2] = out.get(k1 + k2, 0.0) + p1 * p2
        return out


# -- canopy ----------------------------------------------------------------


def _canopy_ball(n: int, r: int) -> RootedNetwork:
    """Exact radius-r ball of the canopy tree around spine vertex n (n >= -1).

    The canopy tree: a spine x_{-1} - x_0 - x_1 - ..., where each x_m with
    m >= 0 also hangs a complete binary tree of depth m from an extra root
    vertex attached to x_m.
    """
    lo, hi = max(-1, n - r), n + r
    nv = hi - lo + 1  # spine vertices get ids 0 .. nv-1 in spine order
    edges = []
    for i in range(nv - 1):
        edges.append((i, i + 1, EMPTY_MARK, EMPTY_MARK))
    nxt_id = nv
    for m in range(max(0, lo), hi + 1):
        budget = r - abs(m - n) - 1  # remaining radius after reaching the tree root
        if budget < 0:
            continue
        depth_max = min(m, budget)
        t_root = nxt_id
        nxt_id += 1
        edges.append((m - lo, t_root, EMPTY_MARK, EMPTY_MARK))
        frontier = [t_root]
        for _ in range(depth_max):
            nxt = []
            for parent in frontier:
                for _bit in range(2):
                    child = nxt_id
                    nxt_id += 1
                    edges.append((parent, child, EMPTY_MARK, EMPTY_MARK))
                    nxt.append(child)
            frontier = nxt
    marks = dict.fromkeys(range(nxt_id), EMPTY_MARK)
    return RootedNetwork(tuple(range(nxt_id)), marks, tuple(edges), n - lo, r)


class CanopySampler(RootedLawSampler):
    """Canopy tree rooted at spine level n with probability 2^(-n-2), n >= -1."""

    name = "canopy"
    degree_bound = 3
    root_degree_law = {1: 0.5, 3: 0.5}

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        n = int(rng.geometric(0.5)) - 2  # P[n] = 2^(-n-2) on {-1, 0, 1, ...}
        return _canopy_ball(n, radius)


def canopy_sampler() -> RootedLawSampler:
    return CanopySampler()


# -- point masses ------------------------------------------------------------


def _path_ball(lo: int, hi: int, root_pos: int, validity: int) -> RootedNetwork:
    b = NetworkBuilder()
    ids = {m: b.add_vertex() for m in range(lo, hi + 1)}
    for m in range(lo, hi):
        b.add_edge(ids[m], ids[m + 1])
    return b.build(ids[root_pos], validity, check=False)


def _regular_ball_builder(d: int, n: int) -> tuple[NetworkBuilder, int]:
    b = NetworkBuilder()
    root = b.add_vertex()
    frontier = [root]
    for depth in range(n):
        nxt = []
        for v in frontier:
            kids = d if depth == 0 else d - 1
            for _ in range(kids):
                w = b.add_vertex()
                b.add_edge(v, w)
                nxt.append(w)
        frontier = nxt
    return b, root


class PointMassSampler(RootedLawSampler):
    """Deterministic sampler for single-vertex, two-ended line, or d-regular tree."""

    def __init__(self, kind: str, k: int = 3):
        if kind not in ("single_vertex", "line", "regular"):
            raise DomainError(f"unknown point mass kind {kind!r}")
        if kind == "regular" and k < 1:
            raise DomainError("regular tree degree must be >= 1")
        self.kind = kind
        self.k = k
        self.name = f"regular{k}" if kind == "regular" else kind
        self.degree_bound = {"single_vertex": 0, "line": 2, "regular": k}[kind]
        self.root_degree_law = {self.degree_bound: 1.0}

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        if self.kind == "single_vertex":
            b = NetworkBuilder()
            return b.build(b.add_vertex(), radius, check=False)
        if self.kind == "line":
            return _path_ball(-radius, radius, 0, radius)
        b, root = _regular_ball_builder(self.k, radius)
        return b.build(root, radius, check=False)


def point_mass_sampler(kind: str, k: int = 3) -> RootedLawSampler:
    return PointMassSampler(kind, k)


class RayFromEndpointSampler(RootedLawSampler):
    """One-ended path rooted at its endpoint; intentionally not unimodular."""

    name = "ray_from_endpoint"
    degree_bound = 2
    root_degree_law = {1: 1.0}

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        return _path_ball(0, radius, 0, radius)


def ray_from_endpoint() -> RootedLawSampler:
    return RayFromEndpointSampler()


# -- finite graphs -----------------------------------------------------------


def regular_tree_ball(d: int, n: int) -> RootedNetwork:
    """Complete radius-n ball of the d-regular tree, rooted at the center."""
    if d < 2 or n < 0:
        raise DomainError("need d >= 2 and n >= 0")
    b, root = _regular_ball_builder(d, n)
    return b.build(root, None)


def sierpinski_graph(n: int, rng: Optional[np.random.Generator] = None) -> RootedNetwork:
    """Stage-n gasket boundary graph (stage 0 is a triangle).

    Built by the usual three-copies-glued-at-corners recursion on a
    triangular integer lattice.  Root is the lower-left corner, or a
    uniform vertex when an rng is supplied (uniform-root statistics
    downstream re-root anyway).
    """
    if n < 0:
        raise DomainError("gasket stage must be >= 0")
    tri = [(0, 0), (1, 0), (0, 1)]
    edges = {(tri[0], tri[1]), (tri[0], tri[2]), (tri[1], tri[2])}
    for k in range(n):
        s = 2**k
        shifted = set()
        for (ax, ay), (bx, by) in edges:
            shifted.add(((ax + s, ay), (bx + s, by)))
            shifted.add(((ax, ay + s), (bx, by + s)))
        edges |= shifted
    b = NetworkBuilder()
    ids: dict[tuple[int, int], int] = {}

    def vid(p):
        if p not in ids:
            ids[p] = b.add_vertex()
        return ids[p]

    vid((0, 0))
    for p, q in sorted(edges):
        b.add_edge(vid(p), vid(q))
    root = ids[(0, 0)]
    if rng is not None:
        root = int(rng.integers(0, len(ids)))
    return b.build(root, None)


def star_graph(n: int) -> RootedNetwork:
    """K_{1,n}: hub plus n leaves, rooted at the hub."""
    if n < 1:
        raise DomainError("star needs at least one leaf")
    b = NetworkBuilder()
    hub = b.add_vertex()
    for _ in range(n):
        b.add_edge(hub, b.add_vertex())
    return b.build(hub, None)


# -- universal cover of the random multigraph chain ---------------------------


class ChainCoverSampler(RootedLawSampler):
    """Universal cover, rooted over 0, of the chain with random parallel edges.

    Each base edge {k, k+1} carries an independent number of parallel
    copies drawn from the offspring law (support must start at 1 so the
    base is connected).  In the cover a vertex over base k has one edge
    per copy in the two adjoining bundles, and only the traversed copy is
    excluded on the way back, so untraversed parallel copies open fresh
    branches.
    """

    def __init__(self, p: OffspringLaw):
        if min(p.support) < 1:
            raise DomainError("chain cover needs multiplicities >= 1")
        self.p = p
        self.name = f"chain_cover({','.join(str(k) for k in p.support)})"
        self.degree_bound = 2 * p.max_value
        self.root_degree_law = p.convolve(p)

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        # bundle k joins base vertices k and k+1
        mult = {k: self.p.sample(rng) for k in range(-radius, radius)}
        b = NetworkBuilder()
        root = b.add_vertex()
        frontier: list[tuple[int, int, Optional[tuple[int, int]]]] = [(root, 0, None)]
        for _ in range(radius):
            nxt = []
            for vid_, base, incoming in frontier:
                for dirn, bundle in ((+1, base), (-1, base - 1)):
                    for idx in range(mult.get(bundle, 0)):
                        if incoming == (dirn, idx):
                            continue
                        w = b.add_vertex()
                        b.add_edge(vid_, w)
                        nxt.append((w, base + dirn, (-dirn, idx)))
            frontier = nxt
        return b.build(root, radius, check=False)


def chain_cover_sampler(p: OffspringLaw) -> RootedLawSampler:
    return ChainCoverSampler(p)


# -- fixture registry ----------------------------------------------------------


def make_fixture(name: str) -> RootedLawSampler:
    """Sampler fixture by CLI name; DomainError on unknown names."""
    if name == "canopy":
        return CanopySampler()
    if name in ("single_vertex", "line"):
        return PointMassSampler(name)
    if name.startswith("regular"):
        suffix = name[len("regular"):]
        if suffix.isdigit():
            return PointMassSampler("regular", int(suffix))
    if name == "ray_from_endpoint":
        return RayFromEndpointSampler()
    if name == "chain_cover_u12":
        return ChainCoverSampler(OffspringLaw.uniform(1, 2))
    if name == "chain_cover_u14":
        return ChainCoverSampler(OffspringLaw.uniform(1, 4))
    raise DomainError(f"unknown fixture {name!r}")


FIXTURE_NAMES = (
    "canopy",
    "single_vertex",
    "line",
    "regular3",
    "ray_from_endpoint",
    "chain_cover_u12",
    "chain_cover_u14",
)
