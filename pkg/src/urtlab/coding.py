"""Exact canonical codes for rooted marked balls.

Equal codes correspond exactly to rooted-isomorphic balls after marks are
quantized, so codes can serve as class keys in empirical distributions.
Two code paths:

* trees (underlying simple graph acyclic): linear-time bottom-up signature
  with sorted children, parallel edges folded into the child bundle;
* anything with a cycle: canonical labeling by iterated color refinement
  with individualization backtracking, taking the lexicographically
  smallest serialization.  Intended for desk-scale balls (a few thousand
  vertices); large highly-symmetric cyclic graphs would backtrack heavily.

No hashing is involved: the code bytes spell out the full canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TruncationError
from .marks import Mark, mark_key
from .network import RootedNetwork, ball


@dataclass(frozen=True)
class CanonicalCode:
    code: bytes
    depth: int
    quantization: float


def canonical_code(net: RootedNetwork, depth: int, quantization: float = 0.0) -> CanonicalCode:
    """Canonical code of the depth-ball around the root.

    Raises TruncationError when the network's validity cannot cover
    ``depth``.  Codes computed at different depths or quantizations never
    compare equal (both are folded into the byte string).
    """
    if net.validity is not None and depth > net.validity:
        raise TruncationError(f"depth {depth} exceeds validity {net.validity}")
    b = _restrict(net, depth)
    body, kind = _canonical_body(b, quantization)
    header = f"U1|{kind}|d{depth}|q{quantization!r}|".encode()
    return CanonicalCode(header + body, depth, quantization)


def _restrict(net: RootedNetwork, depth: int) -> RootedNetwork:
    # avoid a copy when the network already is its own depth-ball
    dist = net.root_distances
    if len(dist) == net.num_vertices and max(dist.values()) <= depth:
        return net
    return ball(net, net.root, depth)


def pair_code(
    net: RootedNetwork, first: int, second: int, depth: int, quantization: float = 0.0
) -> bytes:
    """Code of the depth-ball around ``first`` with the ordered pair marked.

    The two distinguished vertices are folded into the vertex tags, so the
    code identifies the doubly-rooted isomorphism class of the ball.
    ``second`` must lie within ``depth`` of ``first``.
    """
    b = ball(net, first, depth)
    if second not in b.marks:
        raise TruncationError("second root outside the coded ball")
    marks = dict(b.marks)
    m1, m2 = b.marks[first], b.marks[second]
    if first == second:
        marks[first] = Mark(4 * m1.tag + 3, m1.values)
    else:
        marks[first] = Mark(4 * m1.tag + 1, m1.values)
        marks[second] = Mark(4 * m2.tag + 2, m2.values)
    tagged = RootedNetwork(b.vertices, marks, b.edges, first, depth)
    body, kind = _canonical_body(tagged, quantization)
    header = f"U1|{kind}|d{depth}|q{quantization!r}|".encode()
    return header + body


# -- shared helpers -------------------------------------------------------


def _mark_strs(net: RootedNetwork, q: float) -> dict[Mark, str]:
    table: dict[Mark, str] = {}
    for m in net.marks.values():
        if m not in table:
            table[m] = repr(mark_key(m, q))
    for _, _, mu, mv in net.edges:
        for m in (mu, mv):
            if m not in table:
                table[m] = repr(mark_key(m, q))
    return table


def _simple_tree_parents(net: RootedNetwork) -> dict[int, int] | None:
    """BFS parents when the underlying simple graph is a tree, else None."""
    parent: dict[int, int] = {net.root: net.root}
    order = [net.root]
    i = 0
    adj = net.adjacency
    while i < len(order):
        u = order[i]
        i += 1
        for w, _ in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
            elif w != parent[u] and u != parent[w] and w != u:
                return None  # cross edge -> cycle in the simple graph
    return parent


def _canonical_body(net: RootedNetwork, q: float) -> tuple[bytes, str]:
    mstr = _mark_strs(net, q)
    parent = _simple_tree_parents(net)
    if parent is not None:
        return _tree_code(net, parent, mstr), "T"
    return _general_code(net, mstr), "G"


# -- tree path ------------------------------------------------------------


def _tree_code(net: RootedNetwork, parent: dict[int, int], mstr: dict[Mark, str]) -> bytes:
    children: dict[int, list[int]] = {v: [] for v in net.vertices}
    # bundle[(child)] = sorted marks of the parallel edges to the parent
    bundle: dict[int, list[str]] = {v: [] for v in net.vertices}
    for u, v, mu, mv in net.edges:
        if parent[v] == u:
            c, tok = v, mstr[mu] + ">" + mstr[mv]
        else:
            c, tok = u, mstr[mv] + ">" + mstr[mu]
        if not bundle[c]:
            children[parent[c]].append(c)
        bundle[c].append(tok)

    sig: dict[int, str] = {}
    # bottom-up over BFS order (parents always precede children)
    order = [net.root]
    for v in order:
        order.extend(children[v])
    for v in reversed(order):
        entries = sorted("{%s}%s" % (";".join(sorted(bundle[c])), sig[c]) for c in children[v])
        sig[v] = "(" + mstr[net.marks[v]] + "|" + ",".join(entries) + ")"
    return sig[net.root].encode()


# -- general path (cycles) ------------------------------------------------


def _general_code(net: RootedNetwork, mstr: dict[Mark, str]) -> bytes:
    verts = list(net.vertices)
    index = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    dist = net.root_distances
    # (mark at my side, mark at far side, far index) per incident edge slot
    incid: list[list[tuple[str, str, int]]] = [[] for _ in range(n)]
    for u, v, mu, mv in net.edges:
        iu, iv = index[u], index[v]
        su, sv = mstr[mu], mstr[mv]
        incid[iu].append((su, sv, iv))
        incid[iv].append((sv, su, iu))

    init_keys = [(dist[v], mstr[net.marks[v]]) for v in verts]
    colors = _relabel([(k,) for k in init_keys])

    def refine(cols: list[int]) -> list[int]:
        while True:
            keys = [
                (cols[i], tuple(sorted((a, b, cols[j]) for a, b, j in incid[i])))
                for i in range(n)
            ]
            new = _relabel(keys)
            if new == cols:
                return cols
            cols = new

    def serialize(cols: list[int]) -> bytes:
        label = {i: cols[i] for i in range(n)}
        rows = []
        for u, v, mu, mv in net.edges:
            a, b = label[index[u]], label[index[v]]
            sa, sb = mstr[mu], mstr[mv]
            if a > b:
                a, b, sa, sb = b, a, sb, sa
            rows.append((a, b, sa, sb))
        rows.sort()
        vparts = ",".join(
            mstr[net.marks[verts[i]]] for i in sorted(range(n), key=lambda i: cols[i])
        )
        eparts = ",".join(f"{a}-{b}:{sa}>{sb}" for a, b, sa, sb in rows)
        return f"n{n};r{cols[index[net.root]]};V[{vparts}];E[{eparts}]".encode()

    def search(cols: list[int]) -> bytes:
        cols = refine(cols)
        classes: dict[int, list[int]] = {}
        for i, c in enumerate(cols):
            classes.setdefault(c, []).append(i)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = classes[c]
                break
        if target is None:
            return serialize(cols)
        best = None
        fresh = n  # larger than any current color
        for i in target:
            branch = list(cols)
            branch[i] = fresh
            cand = search(branch)
            if best is None or cand < best:
                best = cand
        return best

    return search(colors)


def _relabel(keys: list) -> list[int]:
    lookup = {k: c for c, k in enumerate(sorted(set(keys)))}
    return [lookup[k] for k in keys]
