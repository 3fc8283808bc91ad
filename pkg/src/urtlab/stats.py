"""Empirical ball-class distributions and the statistical test battery.

Distributions live over canonical codes of depth-r balls.  The module
provides total-variation distance, mass-transport (involution) testing
with an exact permutation-calibrated threshold, walk-stationarity and
tightness diagnostics, convergence tracking against a target law, and the
cross-radius consistency check every sampler must satisfy.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .coding import canonical_code, pair_code
from .errors import ContractViolation, DomainError, TruncationError
from .network import RootedNetwork, ball
from .sampler import RootedLawSampler

Source = Union[RootedLawSampler, RootedNetwork]


@dataclass(frozen=True)
class EmpiricalRootedDist:
    """Frequency map from canonical depth-ball codes to sample counts."""

    depth: int
    quantization: float
    counts: dict[bytes, int]
    n: int

    def __post_init__(self):
        if sum(self.counts.values()) != self.n:
            raise DomainError("counts must sum to n")

    @property
    def freqs(self) -> dict[bytes, float]:
        return {c: k / self.n for c, k in self.counts.items()}

    @property
    def num_classes(self) -> int:
        return len(self.counts)


def empirical_distribution(
    source: Source,
    depth: int,
    n: int,
    rng: np.random.Generator,
    quantization: float = 0.0,
    sample_radius: Optional[int] = None,
) -> EmpiricalRootedDist:
    """Depth-ball class distribution from n draws.

    Samplers are drawn independently at ``sample_radius`` (default:
    ``depth``).  A finite complete network is read with uniform random
    roots; partially known networks are refused since re-rooting them is
    not exact.
    """
    if n < 1:
        raise DomainError("need n >= 1")
    radius = depth if sample_radius is None else sample_radius
    if radius < depth:
        raise TruncationError("sample_radius must be >= depth")
    counts: Counter[bytes] = Counter()
    if isinstance(source, RootedLawSampler):
        for _ in range(n):
            net = source.sample(radius, rng)
            counts[canonical_code(net, depth, quantization).code] += 1
    else:
        if source.validity is not None:
            raise TruncationError("uniform-root statistics need a complete network")
        ids = source.vertices
        for i in rng.integers(0, len(ids), size=n):
            b = ball(source, ids[i], depth)
            counts[canonical_code(b, depth, quantization).code] += 1
    return EmpiricalRootedDist(depth, quantization, dict(counts), n)


def exact_distribution(
    net: RootedNetwork, depth: int, quantization: float = 0.0
) -> EmpiricalRootedDist:
    """Uniform-root class distribution by full enumeration (no sampling noise)."""
    if net.validity is not None:
        raise TruncationError("uniform-root statistics need a complete network")
    counts: Counter[bytes] = Counter()
    for v in net.vertices:
        counts[canonical_code(ball(net, v, depth), depth, quantization).code] += 1
    return EmpiricalRootedDist(depth, quantization, dict(counts), net.num_vertices)


def tv_distance(a: EmpiricalRootedDist, b: EmpiricalRootedDist) -> float:
    """Total variation distance between two class distributions."""
    if a.depth != b.depth or a.quantization != b.quantization:
        raise DomainError("distributions disagree on depth or quantization")
    fa, fb = a.freqs, b.freqs
    return 0.5 * sum(abs(fa.get(c, 0.0) - fb.get(c, 0.0)) for c in set(fa) | set(fb))


@dataclass(frozen=True)
class TestReport:
    statistic: float
    threshold: float
    verdict: str  # "pass" | "fail"
    n: int
    seed: Optional[int] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        expect = "pass" if self.statistic <= self.threshold else "fail"
        if self.verdict != expect:
            raise DomainError("verdict inconsistent with statistic/threshold")

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "threshold": self.threshold,
            "verdict": self.verdict,
            "n": self.n,
            "seed": self.seed,
            "diagnostics": self.diagnostics,
        }


def _report(statistic: float, threshold: float, n: int, seed, diagnostics) -> TestReport:
    verdict = "pass" if statistic <= threshold else "fail"
    return TestReport(statistic, threshold, verdict, n, seed, diagnostics)


# -- mass transport ---------------------------------------------------------

MassFunction = Callable[[RootedNetwork, int, int], float]


def mtp_test(
    mu: RootedLawSampler,
    f: MassFunction,
    s: int,
    n: int,
    rng: np.random.Generator,
    f_bound: float = 1.0,
    threshold: float = 4.0,
    seed: Optional[int] = None,
) -> TestReport:
    """Monte Carlo check that mass sent over edges equals mass received.

    ``f(net, x, y)`` is mass sent from x to a neighbor y; it must be
    isomorphism-covariant, depend only on the depth-s ball, and stay in
    [0, f_bound].  The statistic is |mean(sent - received)| over draws in
    units of its standard error, compared against a z threshold.
    """
    if n < 2:
        raise DomainError("need n >= 2 draws")
    diffs = np.empty(n)
    sent_sum = recv_sum = 0.0
    for i in range(n):
        net = mu.sample(s + 1, rng)
        o = net.root
        sent = recv = 0.0
        for x in net.neighbors(o):
            fs = f(net, o, x)
            fr = f(net, x, o)
            for val in (fs, fr):
                if not (0.0 <= val <= f_bound):
                    raise ContractViolation(
                        f"mass value {val} outside declared bound [0, {f_bound}]"
                    )
            sent += fs
            recv += fr
        diffs[i] = sent - recv
        sent_sum += sent
        recv_sum += recv
    mean = float(diffs.mean())
    se = float(diffs.std(ddof=1)) / math.sqrt(n)
    if se == 0.0:
        stat = 0.0 if mean == 0.0 else math.inf
    else:
        stat = abs(mean) / se
    diag = {
        "mean_sent": sent_sum / n,
        "mean_received": recv_sum / n,
        "mean_difference": mean,
        "standard_error": se,
    }
    return _report(stat, threshold, n, seed, diag)


def involution_test(
    mu: RootedLawSampler,
    depth: int,
    n: int,
    rng: np.random.Generator,
    quantization: float = 0.0,
    n_null: int = 100,
    null_quantile: float = 0.99,
    seed: Optional[int] = None,
    keep_classes: bool = False,
) -> TestReport:
    """Neighbor-swap invariance test of a rooted law.

    For each draw, every neighbor x of the root o contributes the ordered
    pair of doubly-rooted ball codes (seen-from-o, seen-from-x).
    Enumerating all neighbors realizes the degree weighting of the
    mass-transport sums, and reduces to the uniform-random-neighbor form
    on regular laws.  The statistic is the TV distance between the two
    sides; the threshold is the ``null_quantile`` of the exact permutation
    null obtained by re-orienting each draw's pairs with probability 1/2
    (under swap invariance the draws are exchangeable, so this null is
    exact at any n).
    """
    if depth < 1:
        raise DomainError("involution test needs depth >= 1")
    code_ids: dict[bytes, int] = {}

    def intern(c: bytes) -> int:
        if c not in code_ids:
            code_ids[c] = len(code_ids)
        return code_ids[c]

    pair_draw: list[int] = []
    pair_a: list[int] = []
    pair_b: list[int] = []
    used = 0
    isolated = 0
    for i in range(n):
        net = mu.sample(depth + 1, rng)
        o = net.root
        nbrs = net.neighbors(o)
        if not nbrs:
            isolated += 1
            continue
        for x in nbrs:
            pair_draw.append(used)
            pair_a.append(intern(pair_code(net, o, x, depth, quantization)))
            pair_b.append(intern(pair_code(net, x, o, depth, quantization)))
        used += 1

    diag: dict = {"draws_used": used, "isolated_roots": isolated, "n_pairs": len(pair_a)}
    if not pair_a:
        warnings.warn("involution test degenerate: no root had a neighbor")
        diag["degenerate"] = True
        return _report(0.0, 0.0, n, seed, diag)

    k = len(code_ids)
    draw_idx = np.asarray(pair_draw, dtype=np.int64)
    a = np.asarray(pair_a, dtype=np.int64)
    b = np.asarray(pair_b, dtype=np.int64)
    total = np.bincount(a, minlength=k) + np.bincount(b, minlength=k)
    weight = float(len(pair_a))

    def tv_for(flips: np.ndarray) -> float:
        fp = flips[draw_idx]
        side1 = np.bincount(np.where(fp, b, a), minlength=k)
        side2 = total - side1
        return 0.5 * float(np.abs(side1 - side2).sum()) / weight

    tv_obs = tv_for(np.zeros(used, dtype=bool))
    null_tvs = np.array(
        [tv_for(rng.integers(0, 2, size=used).astype(bool)) for _ in range(n_null)]
    )
    threshold = float(np.quantile(null_tvs, null_quantile, method="higher"))
    diag.update(
        {
            "n_classes": k,
            "null_mean": float(null_tvs.mean()),
            "null_quantile": null_quantile,
            "n_null": n_null,
        }
    )
    if keep_classes:
        side1 = np.bincount(a, minlength=k)
        codes = sorted(code_ids, key=code_ids.get)
        diag["classes"] = {
            codes[i].hex(): [int(side1[i]), int(total[i] - side1[i])] for i in range(k)
        }
    return _report(tv_obs, threshold, n, seed, diag)


# -- degree bias, stationarity, tightness ------------------------------------


def degree_biased(net: RootedNetwork) -> dict[int, float]:
    """Vertex distribution weighting x by deg(x); stationary for random walk."""
    degs = {v: net.degree(v) for v in net.vertices}
    if any(d == 0 for d in degs.values()):
        raise DomainError("degree bias undefined with isolated vertices")
    total = sum(degs.values())
    return {v: d / total for v, d in degs.items()}


def srw_stationarity_residual(net: RootedNetwork) -> float:
    """max_y |sum_x pi(x) P(x,y) - pi(y)| for the degree-biased pi (exact)."""
    pi = degree_biased(net)
    idx = {v: i for i, v in enumerate(net.vertices)}
    m = len(idx)
    p = np.zeros((m, m))
    for v in net.vertices:
        deg = net.degree(v)
        for w, _ in net.adjacency[v]:
            p[idx[v], idx[w]] += 1.0 / deg
    vec = np.array([pi[v] for v in net.vertices])
    return float(np.abs(vec @ p - vec).max())


def high_degree_event_probs(
    net: RootedNetwork, r: int, big: int
) -> tuple[float, float]:
    """(P_U, P_D) of seeing a vertex of degree > ``big`` within distance r.

    Exact multi-source BFS; U weights vertices uniformly, D by degree.
    """
    degs = {v: net.degree(v) for v in net.vertices}
    if any(d == 0 for d in degs.values()):
        raise DomainError("no isolated vertices allowed")
    frontier = {v for v, d in degs.items() if d > big}
    covered = set(frontier)
    for _ in range(r):
        nxt = set()
        for v in frontier:
            for w, _ in net.adjacency[v]:
                if w not in covered:
                    covered.add(w)
                    nxt.add(w)
        frontier = nxt
    total_deg = sum(degs.values())
    p_u = len(covered) / net.num_vertices
    p_d = sum(degs[v] for v in covered) / total_deg
    return p_u, p_d


def tightness_report(
    family: Sequence[RootedNetwork],
    r: int,
    big: int,
    epsilon: float = 0.05,
    labels: Optional[Sequence[str]] = None,
    seed: Optional[int] = None,
) -> TestReport:
    """Tightness diagnostic for a family of finite graphs.

    For each member: mean degree, the uniform-integrability tail
    E[deg; deg > big] under a uniform root, and the exact probabilities of
    a degree-> ``big`` vertex within distance r under the uniform and the
    degree-biased root.  The family passes ("tight at (r, big)") when the
    worst such probability is at most epsilon.
    """
    if not family:
        raise DomainError("empty family")
    per_graph = []
    worst = 0.0
    for i, g in enumerate(family):
        p_u, p_d = high_degree_event_probs(g, r, big)
        degs = [g.degree(v) for v in g.vertices]
        tail = sum(d for d in degs if d > big) / g.num_vertices
        worst = max(worst, p_u, p_d)
        per_graph.append(
            {
                "label": labels[i] if labels else str(i),
                "vertices": g.num_vertices,
                "mean_degree": g.mean_degree(),
                "p_high_uniform": p_u,
                "p_high_degree_biased": p_d,
                "ui_tail": tail,
            }
        )
    diag = {
        "r": r,
        "degree_cutoff": big,
        "per_graph": per_graph,
        "sup_ui_tail": max(g["ui_tail"] for g in per_graph),
    }
    return _report(worst, epsilon, len(family), seed, diag)


# -- convergence ---------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    tv_values: tuple[float, ...]

    def nonincreasing(self, tol: float = 0.0) -> bool:
        return all(
            self.tv_values[i + 1] <= self.tv_values[i] + tol
            for i in range(len(self.tv_values) - 1)
        )


def convergence_check(
    sources: Sequence[Source],
    target: Source,
    depth: int,
    n: int,
    rng: np.random.Generator,
    quantization: float = 0.0,
) -> ConvergenceReport:
    """TV between each source's depth statistics and the target's."""
    ref = empirical_distribution(target, depth, n, rng, quantization)
    tvs = []
    for src in sources:
        d = empirical_distribution(src, depth, n, rng, quantization)
        tvs.append(tv_distance(d, ref))
    return ConvergenceReport(tuple(tvs))


# -- sampler consistency --------------------------------------------------------


def consistency_check(
    sampler: RootedLawSampler,
    depth: int,
    n: int,
    rng: np.random.Generator,
    quantization: float = 0.0,
    n_null: int = 200,
    sd_factor: float = 3.0,
    seed: Optional[int] = None,
) -> TestReport:
    """Cross-radius consistency: depth stats from radius depth+1 vs depth.

    The TV between the two empirical distributions is compared against the
    null scale of two independent n-sample empiricals of the pooled law
    (parametric bootstrap): threshold = null mean + sd_factor * null sd.
    """
    lo = empirical_distribution(sampler, depth, n, rng, quantization)
    hi = empirical_distribution(
        sampler, depth, n, rng, quantization, sample_radius=depth + 1
    )
    tv = tv_distance(lo, hi)
    pooled = Counter(lo.counts)
    pooled.update(hi.counts)
    probs = np.array([c / (2 * n) for c in pooled.values()])
    draws = rng.multinomial(n, probs, size=(n_null, 2))
    null_tvs = 0.5 * np.abs(draws[:, 0, :] - draws[:, 1, :]).sum(axis=1) / n
    threshold = float(null_tvs.mean() + sd_factor * null_tvs.std(ddof=1))
    diag = {
        "tv": tv,
        "classes": len(pooled),
        "null_mean": float(null_tvs.mean()),
        "null_sd": float(null_tvs.std(ddof=1)),
    }
    return _report(tv, threshold, n, seed, diag)
