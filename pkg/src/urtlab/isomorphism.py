"""Exact rooted isomorphism with mark tolerance, and the local metric.

``rooted_isomorphic`` decides whether a root-preserving isomorphism exists
whose corresponding marks (vertex marks and both endpoint marks of every
edge) are within a tolerance in the mark metric; tags must agree exactly.
The search is BFS-ordered backtracking with per-bundle bipartite matching,
sized for balls of at most a few thousand vertices.

``local_distance`` computes 1/(1+a) where ``a`` is the largest horizon out
to which the two networks look alike: radius-floor(r) balls must admit a
rooted isomorphism with marks closer than 1/r.  From finite data the
supremum is only certain once a disagreement is seen, hence the exactness
flag.
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .errors import TruncationError
from .marks import Mark, mark_distance
from .network import RootedNetwork, ball


def rooted_isomorphic(a: RootedNetwork, b: RootedNetwork, mark_tol: float = 0.0) -> bool:
    """True iff a root-preserving isomorphism matches all marks within tol."""
    return _iso_within(a, b, mark_tol)


def iso_min_max_distance(a: RootedNetwork, b: RootedNetwork) -> float:
    """Smallest achievable max mark distance over rooted isomorphisms.

    Returns inf when the networks are not rooted-isomorphic even ignoring
    mark values (tags still must match).
    """
    cands = {0.0}
    vals_a = _all_values(a)
    vals_b = _all_values(b)
    for x in vals_a:
        for y in vals_b:
            cands.add(abs(x - y))
    cands = sorted(cands)
    if not _iso_within(a, b, cands[-1]):
        return math.inf
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _iso_within(a, b, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


class LocalDistance(NamedTuple):
    value: float
    exactness: str  # "exact" | "upper-bounded"


def local_distance(a: RootedNetwork, b: RootedNetwork, r_max: int) -> LocalDistance:
    """Local metric between rooted networks, evaluated out to radius r_max.

    "exact" means some disagreement was found within the horizon, so the
    reported value is the true distance; "upper-bounded" means the
    networks agree out to r_max and the true distance can only be smaller.
    """
    if r_max < 1:
        raise TruncationError("r_max must be >= 1")
    for net in (a, b):
        if net.validity is not None and net.validity < r_max:
            raise TruncationError(f"validity {net.validity} < r_max {r_max}")
    sup = 0.0
    for k in range(r_max + 1):
        delta = iso_min_max_distance(ball(a, a.root, k), ball(b, b.root, k))
        if math.isinf(delta):
            return LocalDistance(1.0 / (1.0 + sup), "exact")
        limit = math.inf if delta == 0.0 else 1.0 / delta
        if k < r_max:
            if limit <= k:
                return LocalDistance(1.0 / (1.0 + sup), "exact")
            if limit < k + 1:
                return LocalDistance(1.0 / (1.0 + limit), "exact")
            sup = float(k + 1)
        else:
            # only the single point r = r_max remains inside the horizon
            if limit > r_max:
                return LocalDistance(1.0 / (1.0 + r_max), "upper-bounded")
            return LocalDistance(1.0 / (1.0 + r_max), "exact")
    raise AssertionError("unreachable")


# -- search internals ------------------------------------------------------


def _all_values(net: RootedNetwork) -> set[float]:
    vals = set()
    for m in net.marks.values():
        vals.update(m.values)
    for _, _, mu, mv in net.edges:
        vals.update(mu.values)
        vals.update(mv.values)
    return vals


def _bundles(net: RootedNetwork) -> dict[tuple[int, int], list[tuple[Mark, Mark]]]:
    """(u, v) -> list of (mark at u, mark at v); stored once per direction."""
    out: dict[tuple[int, int], list[tuple[Mark, Mark]]] = {}
    for u, v, mu, mv in net.edges:
        out.setdefault((u, v), []).append((mu, mv))
        out.setdefault((v, u), []).append((mv, mu))
    return out


def _bundle_matchable(
    ba: list[tuple[Mark, Mark]], bb: list[tuple[Mark, Mark]], tol: float
) -> bool:
    """Perfect matching of parallel-edge bundles under componentwise tol."""
    if len(ba) != len(bb):
        return False
    used = [False] * len(bb)

    def match(i: int) -> bool:
        if i == len(ba):
            return True
        xu, xv = ba[i]
        for j, (yu, yv) in enumerate(bb):
            if used[j]:
                continue
            if mark_distance(xu, yu) <= tol and mark_distance(xv, yv) <= tol:
                used[j] = True
                if match(i + 1):
                    return True
                used[j] = False
        return False

    return match(0)


def _iso_within(a: RootedNetwork, b: RootedNetwork, tol: float) -> bool:
    if a.num_vertices != b.num_vertices or a.num_edges != b.num_edges:
        return False
    dist_a, dist_b = a.root_distances, b.root_distances
    if len(dist_a) != a.num_vertices or len(dist_b) != b.num_vertices:
        return False

    def invariant(net: RootedNetwork, dist: dict[int, int], v: int) -> tuple:
        return (dist[v], net.degree(v), len(net.neighbors(v)), net.marks[v].tag)

    inv_a = {v: invariant(a, dist_a, v) for v in a.vertices}
    inv_b = {v: invariant(b, dist_b, v) for v in b.vertices}
    if sorted(inv_a.values()) != sorted(inv_b.values()):
        return False

    bun_a, bun_b = _bundles(a), _bundles(b)

    # BFS order so every vertex after the root has a mapped neighbor
    order = [a.root]
    seen = {a.root}
    for u in order:
        for w in a.neighbors(u):
            if w not in seen:
                seen.add(w)
                order.append(w)

    mapping: dict[int, int] = {}
    used_b: set[int] = set()

    def feasible(u: int, w: int) -> bool:
        if inv_a[u] != inv_b[w]:
            return False
        if mark_distance(a.marks[u], b.marks[w]) > tol:
            return False
        mapped_nb_a = [x for x in a.neighbors(u) if x in mapping]
        mapped_nb_b = {x for x in b.neighbors(w) if x in used_b}
        if {mapping[x] for x in mapped_nb_a} != mapped_nb_b:
            return False
        for x in mapped_nb_a:
            if not _bundle_matchable(bun_a[(u, x)], bun_b[(w, mapping[x])], tol):
                return False
        return True

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        u = order[k]
        if k == 0:
            cands = [b.root]
        else:
            anchor = next(x for x in a.neighbors(u) if x in mapping)
            cands = [w for w in b.neighbors(mapping[anchor]) if w not in used_b]
        for w in cands:
            if feasible(u, w):
                mapping[u] = w
                used_b.add(w)
                if extend(k + 1):
                    return True
                del mapping[u]
                used_b.discard(w)
        return False

    return extend(0)
