"""Plain-text serialization of rooted networks.

One network is a block of lines:

    root <id>
    validity <int or inf>
    v <id> <tag> <values>
    e <u> <v> <tag_u> <values_u> <tag_v> <values_v>

where <values> is '-' for an empty mark or comma-separated floats.  Blank
lines and '#' comments are skipped.  A stream of networks separates blocks
with 'graph <k>' headers.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, TextIO

from .errors import DomainError
from .marks import Mark
from .network import RootedNetwork


def _fmt_values(m: Mark) -> str:
    if not m.values:
        return "-"
    return ",".join(repr(v) for v in m.values)


def _parse_values(s: str) -> tuple[float, ...]:
    if s == "-":
        return ()
    return tuple(float(tok) for tok in s.split(","))


def write_network(net: RootedNetwork, fh: TextIO) -> None:
    fh.write(f"root {net.root}\n")
    fh.write(f"validity {'inf' if net.validity is None else net.validity}\n")
    for v in net.vertices:
        m = net.marks[v]
        fh.write(f"v {v} {m.tag} {_fmt_values(m)}\n")
    for u, v, mu, mv in net.edges:
        fh.write(
            f"e {u} {v} {mu.tag} {_fmt_values(mu)} {mv.tag} {_fmt_values(mv)}\n"
        )


def write_networks(nets: Iterable[RootedNetwork], fh: TextIO) -> None:
    for i, net in enumerate(nets):
        fh.write(f"graph {i}\n")
        write_network(net, fh)
        fh.write("\n")


def _blocks(fh: TextIO) -> Iterator[list[list[str]]]:
    """Group token lines into per-graph blocks split at 'graph' headers."""
    block: list[list[str]] = []
    started = False
    for raw in fh:
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if toks[0] == "graph":
            if started and block:
                yield block
                block = []
            started = True
            continue
        block.append(toks)
    if block:
        yield block


def _network_from_tokens(tokens: list[list[str]]) -> RootedNetwork:
    root: Optional[int] = None
    validity: Optional[int] = None
    saw_validity = False
    order: list[int] = []
    marks: dict[int, Mark] = {}
    edges = []
    for toks in tokens:
        kind = toks[0]
        if kind == "root":
            root = int(toks[1])
        elif kind == "validity":
            saw_validity = True
            validity = None if toks[1] == "inf" else int(toks[1])
        elif kind == "v":
            vid = int(toks[1])
            if vid in marks:
                raise DomainError(f"duplicate vertex {vid}")
            order.append(vid)
            marks[vid] = Mark(int(toks[2]), _parse_values(toks[3]))
        elif kind == "e":
            u, v = int(toks[1]), int(toks[2])
            edges.append(
                (
                    u,
                    v,
                    Mark(int(toks[3]), _parse_values(toks[4])),
                    Mark(int(toks[5]), _parse_values(toks[6])),
                )
            )
        else:
            raise DomainError(f"unknown line kind {kind!r}")
    if root is None or not saw_validity:
        raise DomainError("network block needs 'root' and 'validity' lines")
    net = RootedNetwork(tuple(order), marks, tuple(edges), root, validity)
    return net.require_connected()


def read_network(fh: TextIO) -> RootedNetwork:
    blocks = list(_blocks(fh))
    if len(blocks) != 1:
        raise DomainError(f"expected one network, found {len(blocks)}")
    return _network_from_tokens(blocks[0])


def read_networks(fh: TextIO) -> list[RootedNetwork]:
    return [_network_from_tokens(b) for b in _blocks(fh)]
