"""Embedding a bounded-degree tree law into percolation on a regular tree.

Pipeline: from a tree-law sampler ``mu`` with degrees <= d, build

* the degree-biased companion law (rejection on root degree),
* the branching filler law ``nu`` (root from the biased law plus closed
  edges to independent copies of itself),
* the percolation law ``rho`` whose balls are d-regular with the root's
  open cluster distributed exactly as ``mu``, and
* its direction-marked refinement used by the swap-invariance test.

Also here: the two reductions that shrink a law toward bounded degree and
percolation-free form (edge-color stripping, high-degree edge deletion)
and mark transforms that preserve the tested invariances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ContractViolation, DegenerateMeasureError, DomainError, MarkError
from .marks import CLOSED, CLOSED_MARK, OPEN, Mark
from .network import NetworkBuilder, RootedNetwork, ball
from .sampler import RootedLawSampler

# A network whose underlying graph is a regular-tree ball and whose edge
# endpoint marks carry the color channel in values[0] (and, after
# direction_marks, the outgoing direction label in values[1]).
PercolationBall = RootedNetwork


@dataclass(frozen=True)
class DegreeProfile:
    """Root-degree probabilities p_k under a law plus the closed-slot mass.

    ``alpha`` is the expected number of free slots d - deg at the root; it
    vanishes exactly when the law is concentrated on root degree d.
    """

    d: int
    p: dict[int, float]
    alpha: float
    exact: bool = True

    def __post_init__(self):
        if abs(sum(self.p.values()) - 1.0) > 1e-9:
            raise DomainError("degree probabilities must sum to 1")
        if any(k > self.d or k < 0 for k in self.p):
            raise ContractViolation(f"root degree above bound d={self.d}")
        expect = sum(pk * (self.d - k) for k, pk in self.p.items())
        if abs(expect - self.alpha) > 1e-9 or self.alpha < -1e-12:
            raise DomainError("alpha inconsistent with degree probabilities")

    @property
    def degenerate(self) -> bool:
        return self.alpha == 0.0


def degree_profile(
    mu: RootedLawSampler, d: int, n: int, rng: np.random.Generator
) -> DegreeProfile:
    """Root-degree profile of ``mu`` against bound ``d``.

    Uses the sampler's declared exact root-degree law when available,
    otherwise the empirical law of n radius-1 draws.
    """
    if mu.degree_bound is not None and mu.degree_bound > d:
        raise ContractViolation(
            f"sampler degree bound {mu.degree_bound} exceeds d={d}"
        )
    if mu.root_degree_law is not None:
        p = dict(mu.root_degree_law)
        alpha = sum(pk * (d - k) for k, pk in p.items())
        return DegreeProfile(d, p, alpha, exact=True)
    if n < 1:
        raise DomainError("need n >= 1 draws")
    counts: dict[int, int] = {}
    for _ in range(n):
        deg = mu.sample(1, rng).root_degree()
        if deg > d:
            raise ContractViolation(f"sampled root degree {deg} > d={d}")
        counts[deg] = counts.get(deg, 0) + 1
    p = {k: c / n for k, c in counts.items()}
    alpha = sum(pk * (d - k) for k, pk in p.items())
    return DegreeProfile(d, p, alpha, exact=False)


class BiasedSampler(RootedLawSampler):
    """Root-degree-biased companion of ``mu``: density prop. to d - deg(root).

    Realized by rejection with acceptance (d - deg)/d, so no normalizing
    constant is needed.  Every accepted root has degree <= d - 1.
    """

    def __init__(self, mu: RootedLawSampler, d: int, max_attempts: int = 100_000):
        if mu.degree_bound is not None and mu.degree_bound > d:
            raise ContractViolation(f"degree bound {mu.degree_bound} > d={d}")
        if mu.root_degree_law is not None:
            if all(k == d for k in mu.root_degree_law):
                raise DegenerateMeasureError(
                    "alpha = 0: root degree is d almost surely, nothing to bias"
                )
        self.mu = mu
        self.d = d
        self.max_attempts = max_attempts
        self.name = f"biased({mu.name},d={d})"
        self.degree_bound = d
        if mu.root_degree_law is not None:
            alpha = sum(p * (d - k) for k, p in mu.root_degree_law.items())
            self.root_degree_law = {
                k: p * (d - k) / alpha for k, p in mu.root_degree_law.items() if k < d
            }

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        for _ in range(self.max_attempts):
            net = self.mu.sample(max(radius, 1), rng)
            deg = net.root_degree()
            if deg > self.d:
                raise ContractViolation(f"root degree {deg} > d={self.d}")
            if rng.random() * self.d < self.d - deg:
                return net if radius >= 1 else ball(net, net.root, 0)
        raise DegenerateMeasureError(
            f"rejection budget exhausted after {self.max_attempts} proposals; "
            "is the law concentrated on root degree d?"
        )


def biased_sampler(mu: RootedLawSampler, d: int) -> RootedLawSampler:
    return BiasedSampler(mu, d)


# -- the branching construction ---------------------------------------------


def _graft_open(
    b: NetworkBuilder,
    piece: RootedNetwork,
    base_dist: int,
    is_filler_root: bool,
    d: int,
    r: int,
    todo: list[tuple[int, int]],
) -> int:
    """Copy an open tree into the build, scheduling closed slots.

    Every grafted vertex within global distance r-1 of the final root gets
    its d - degree closed slots (one fewer at a filler root, which already
    owes one to its incoming closed edge).  Returns the new id of the
    piece's root.
    """
    new_id = {v: b.add_vertex(piece.marks[v]) for v in piece.vertices}
    for u, v, mu_, mv_ in piece.edges:
        b.add_edge(new_id[u], new_id[v], mu_.with_prefix(OPEN), mv_.with_prefix(OPEN))
    dists = piece.root_distances
    for v in piece.vertices:
        where = base_dist + dists[v]
        if where > r - 1:
            continue
        deg = piece.degree(v)
        reserve = 1 if (is_filler_root and v == piece.root) else 0
        if deg + reserve > d:
            raise ContractViolation(
                f"vertex degree {deg} incompatible with regular degree d={d}"
            )
        for _ in range(d - deg - reserve):
            todo.append((new_id[v], where))
    return new_id[piece.root]


def _filler_expand(
    b: NetworkBuilder,
    todo: list[tuple[int, int]],
    biased: "BiasedSampler",
    d: int,
    r: int,
    rng: np.random.Generator,
) -> None:
    """Drain the closed-slot queue breadth-first with independent fillers."""
    head = 0
    while head < len(todo):
        parent, dist = todo[head]
        head += 1
        piece = biased.sample(r - dist - 1, rng)
        root = _graft_open(b, piece, dist + 1, True, d, r, todo)
        b.add_edge(parent, root, CLOSED_MARK, CLOSED_MARK)


class NuSampler(RootedLawSampler):
    """Filler law: biased root, closed edges to independent copies of itself."""

    def __init__(self, mu: RootedLawSampler, d: int):
        self._biased = BiasedSampler(mu, d)
        self.mu = mu
        self.d = d
        self.name = f"nu({mu.name},d={d})"
        self.degree_bound = d
        self.root_degree_law = {d - 1: 1.0}

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        b = NetworkBuilder()
        todo: list[tuple[int, int]] = []
        piece = self._biased.sample(radius, rng)
        root = _graft_open(b, piece, 0, True, self.d, radius, todo)
        _filler_expand(b, todo, self._biased, self.d, radius, rng)
        return b.build(root, radius, check=False)


def nu_sample(
    mu: RootedLawSampler, d: int, r: int, rng: np.random.Generator
) -> RootedNetwork:
    """One exact radius-r ball of the filler law (see NuSampler)."""
    return NuSampler(mu, d).sample(r, rng)


class RhoSampler(RootedLawSampler):
    """Percolation law on the d-regular tree whose open root cluster is mu.

    The open tree is a mu ball; every interior vertex is topped up to
    degree d with closed edges leading to independent filler samples.
    When mu is concentrated on d-regular trees no closed slot ever opens
    and the output is the all-open regular ball.
    """

    def __init__(self, mu: RootedLawSampler, d: int):
        if mu.degree_bound is not None and mu.degree_bound > d:
            raise ContractViolation(f"degree bound {mu.degree_bound} > d={d}")
        self.mu = mu
        self.d = d
        self.name = f"rho({mu.name},d={d})"
        self.degree_bound = d
        self.root_degree_law = {d: 1.0}
        self._biased: Optional[BiasedSampler] = None

    def _filler(self) -> BiasedSampler:
        if self._biased is None:
            self._biased = BiasedSampler(self.mu, self.d)
        return self._biased

    def sample(self, radius: int, rng: np.random.Generator) -> PercolationBall:
        b = NetworkBuilder()
        todo: list[tuple[int, int]] = []
        piece = self.mu.sample(radius, rng)
        root = _graft_open(b, piece, 0, False, self.d, radius, todo)
        if todo:
            _filler_expand(b, todo, self._filler(), self.d, radius, rng)
        return b.build(root, radius, check=False)


def rho_sampler(mu: RootedLawSampler, d: int) -> RootedLawSampler:
    return RhoSampler(mu, d)


# -- colors and direction marks ----------------------------------------------


def _edge_color(mu_: Mark, mv_: Mark) -> float:
    if not mu_.values or not mv_.values:
        raise DomainError("edge lacks a color channel in values[0]")
    c = mu_.values[0]
    if c != mv_.values[0] or c not in (OPEN, CLOSED):
        raise DomainError(f"inconsistent or non-binary edge color {c!r}")
    return c


def direction_marks(net: PercolationBall, rng: np.random.Generator) -> PercolationBall:
    """Attach outgoing direction labels to closed edges.

    At each vertex incident to k closed edges, the k outgoing labels (in
    values[1] of the endpoint marks on that vertex's side) form a uniform
    permutation of 1..k, independently across vertices.  Labels reflect
    only the closed edges visible in the ball; sample one radius higher
    and truncate when exact boundary laws matter (RhoPrimeSampler does).
    """
    edges = list(net.edges)
    closed_slots: dict[int, list[tuple[int, int]]] = {}
    for i, (u, v, mu_, mv_) in enumerate(edges):
        if _edge_color(mu_, mv_) == CLOSED:
            closed_slots.setdefault(u, []).append((i, 0))
            closed_slots.setdefault(v, []).append((i, 1))
    if not closed_slots:
        return net
    new_marks: dict[tuple[int, int], Mark] = {}
    for v in net.vertices:
        slots = closed_slots.get(v)
        if not slots:
            continue
        k = len(slots)
        if k == 1:
            labels = (1,)
        elif k == 2:
            labels = (1, 2) if rng.random() < 0.5 else (2, 1)
        else:
            labels = rng.permutation(k) + 1
        for (i, side), lab in zip(slots, labels):
            m = edges[i][2 + side]
            new_marks[(i, side)] = Mark(m.tag, (m.values[0], float(lab)) + m.values[1:])
    out = []
    for i, (u, v, mu_, mv_) in enumerate(edges):
        out.append((u, v, new_marks.get((i, 0), mu_), new_marks.get((i, 1), mv_)))
    return RootedNetwork(net.vertices, dict(net.marks), tuple(out), net.root, net.validity)


class RhoPrimeSampler(RootedLawSampler):
    """Direction-marked percolation law; exact at every radius.

    Drawn one radius deep and truncated so that boundary vertices carry
    labels computed from their full closed-edge count.
    """

    def __init__(self, mu: RootedLawSampler, d: int):
        self._rho = RhoSampler(mu, d)
        self.mu = mu
        self.d = d
        self.name = f"rho_prime({mu.name},d={d})"
        self.degree_bound = d
        self.root_degree_law = {d: 1.0}

    def sample(self, radius: int, rng: np.random.Generator) -> PercolationBall:
        wide = self._rho.sample(radius + 1, rng)
        return ball(direction_marks(wide, rng), wide.root, radius)


def rho_prime_sampler(mu: RootedLawSampler, d: int) -> RootedLawSampler:
    return RhoPrimeSampler(mu, d)


def strip_closed(net: PercolationBall) -> RootedNetwork:
    """Open component of the root with the color channel removed."""
    open_adj: dict[int, list[int]] = {v: [] for v in net.vertices}
    open_edges = []
    for u, v, mu_, mv_ in net.edges:
        if _edge_color(mu_, mv_) == OPEN:
            open_adj[u].append(v)
            open_adj[v].append(u)
            open_edges.append((u, v, mu_.drop_first_value(), mv_.drop_first_value()))
    keep = {net.root}
    stack = [net.root]
    while stack:
        u = stack.pop()
        for w in open_adj[u]:
            if w not in keep:
                keep.add(w)
                stack.append(w)
    order = tuple(v for v in net.vertices if v in keep)
    edges = tuple(e for e in open_edges if e[0] in keep)
    marks = {v: net.marks[v] for v in order}
    return RootedNetwork(order, marks, edges, net.root, net.validity)


# -- reductions and mark transforms --------------------------------------------


def truncate_degree(net: RootedNetwork, d: int) -> RootedNetwork:
    """Delete every edge incident to a vertex of degree > d; keep root part.

    On a partially known network the output's validity drops by one: the
    fate of edges touching boundary vertices depends on degrees outside
    the picture.
    """
    bad = {v for v in net.vertices if net.degree(v) > d}
    kept = [e for e in net.edges if e[0] not in bad and e[1] not in bad]
    adj: dict[int, list[int]] = {v: [] for v in net.vertices}
    for u, v, _, _ in kept:
        adj[u].append(v)
        adj[v].append(u)
    keep = {net.root}
    stack = [net.root]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in keep:
                keep.add(w)
                stack.append(w)
    order = tuple(v for v in net.vertices if v in keep)
    edges = tuple(e for e in kept if e[0] in keep)
    marks = {v: net.marks[v] for v in order}
    validity = None if net.validity is None else max(net.validity - 1, 0)
    return RootedNetwork(order, marks, edges, net.root, validity)


VertexMap = Callable[[RootedNetwork, int], Mark]


def map_marks(net: RootedNetwork, phi: VertexMap) -> RootedNetwork:
    """Replace every vertex mark by phi(net, x).

    phi must be deterministic and isomorphism-covariant (a function of the
    rooted isomorphism class of (net, x)) for the output law to inherit
    the input's invariances.
    """
    marks = {}
    for v in net.vertices:
        m = phi(net, v)
        if not isinstance(m, Mark):
            raise MarkError(f"phi returned {type(m).__name__}, expected Mark")
        marks[v] = m
    return RootedNetwork(net.vertices, marks, net.edges, net.root, net.validity)


ValueLaw = Callable[[np.random.Generator], float]


def add_iid_marks(
    net: RootedNetwork, law: ValueLaw, rng: np.random.Generator
) -> RootedNetwork:
    """Append one IID real coordinate to every vertex mark."""
    marks = {}
    for v in net.vertices:
        m = net.marks[v]
        x = float(law(rng))
        if not math.isfinite(x):
            raise MarkError(f"IID mark law produced non-finite value {x!r}")
        marks[v] = Mark(m.tag, m.values + (x,))
    return RootedNetwork(net.vertices, marks, net.edges, net.root, net.validity)


def uniform01(rng: np.random.Generator) -> float:
    return float(rng.random())


class MappedMarkSampler(RootedLawSampler):
    """Sampler whose vertex marks are replaced by a covariant map."""

    def __init__(self, base: RootedLawSampler, phi: VertexMap, label: str = "phi"):
        self.base = base
        self.phi = phi
        self.name = f"map_marks({base.name},{label})"
        self.degree_bound = base.degree_bound
        self.root_degree_law = base.root_degree_law

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        return map_marks(self.base.sample(radius, rng), self.phi)


class IIDMarkSampler(RootedLawSampler):
    """Sampler with one IID real appended to every vertex mark."""

    def __init__(self, base: RootedLawSampler, law: ValueLaw = uniform01, label: str = "iid"):
        self.base = base
        self.law = law
        self.name = f"add_iid_marks({base.name},{label})"
        self.degree_bound = base.degree_bound
        self.root_degree_law = base.root_degree_law

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        return add_iid_marks(self.base.sample(radius, rng), self.law, rng)


def map_marks_sampler(base: RootedLawSampler, phi: VertexMap, label: str = "phi") -> RootedLawSampler:
    return MappedMarkSampler(base, phi, label)


def add_iid_marks_sampler(base: RootedLawSampler, law: ValueLaw = uniform01) -> RootedLawSampler:
    return IIDMarkSampler(base, law)
