"""Upper half-plane geometry: Ford horoballs, horocycle lattices, forests.

Exact rational arithmetic is used for the Ford configuration (tangencies
and radii), floating point for lattice points and distances, and the
Poincare disc only for reporting boundary convergence.  The forest
construction places a unit-spaced lattice on a horocycle at fixed depth
inside every horoball and keeps each lattice edge independently; its rays
creep along horocycles, so they converge to the tangency point of their
horoball while their distance from the start grows only logarithmically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, PrecisionError, RetryBudgetError

SQRT3_2 = math.sqrt(3.0) / 2.0
# hyperbolic area of the box proposal {|x| <= 1/2, y >= sqrt(3)/2}
_BOX_AREA = 2.0 / math.sqrt(3.0)
# hyperbolic distance between consecutive points at unit horocyclic spacing
UNIT_HOROCYCLE_CHORD = 2.0 * math.asinh(0.5)


@dataclass(frozen=True)
class HPoint:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and self.y > 0):
            raise DomainError(f"not an upper half-plane point: ({self.x}, {self.y})")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(float(z.real), float(z.imag))


def hyperbolic_distance(a: HPoint, b: HPoint) -> float:
    """Half-plane distance acosh(1 + |a-b|^2 / (2 y_a y_b))."""
    s = ((a.x - b.x) ** 2 + (a.y - b.y) ** 2) / (2.0 * a.y * b.y)
    if not math.isfinite(s):
        raise PrecisionError("distance argument overflowed")
    return math.acosh(1.0 + s)


def cayley(z: complex) -> complex:
    """Half-plane to Poincare disc, i -> 0, infinity -> 1."""
    return (z - 1j) / (z + 1j)


@dataclass(frozen=True)
class Horoball:
    """A Ford-configuration horoball: tangent at a rational, or at infinity."""

    tangency: Optional[Fraction]  # None = ball at infinity
    radius: Optional[Fraction]  # euclidean radius; None for the ball at infinity
    height: Optional[Fraction] = None  # boundary height, infinity ball only

    def __post_init__(self):
        if self.tangency is None:
            if self.height is None or self.height <= 0 or self.radius is not None:
                raise DomainError("ball at infinity needs a positive height")
        else:
            if self.radius is None or self.radius <= 0 or self.height is not None:
                raise DomainError("tangent horoball needs a positive radius")

    @classmethod
    def at_infinity(cls, height: Fraction = Fraction(1)) -> "Horoball":
        return cls(None, None, Fraction(height))

    @classmethod
    def ford(cls, p: int, q: int) -> "Horoball":
        if q < 1 or gcd(p, q) != 1:
            raise DomainError(f"{p}/{q} is not in lowest terms with q >= 1")
        return cls(Fraction(p, q), Fraction(1, 2 * q * q))

    @property
    def at_inf(self) -> bool:
        return self.tangency is None

    @property
    def q(self) -> int:
        if self.at_inf:
            raise DomainError("ball at infinity has no denominator")
        return self.tangency.denominator

    @property
    def p(self) -> int:
        if self.at_inf:
            raise DomainError("ball at infinity has no numerator")
        return self.tangency.numerator

    def tangency_disc(self) -> complex:
        """Disc-model position of the ideal tangency point."""
        if self.at_inf:
            return complex(1.0, 0.0)
        return cayley(complex(float(self.tangency), 0.0))


def horoballs_tangent(a: Horoball, b: Horoball) -> bool:
    """Exact tangency test in rational arithmetic."""
    if a.at_inf and b.at_inf:
        return False
    if a.at_inf or b.at_inf:
        ball_, inf_ = (b, a) if a.at_inf else (a, b)
        return 2 * ball_.radius == inf_.height
    dt = a.tangency - b.tangency
    return dt * dt == 4 * a.radius * b.radius


def horoballs_interiors_disjoint(a: Horoball, b: Horoball) -> bool:
    """Exact disjoint-interior test (tangency counts as disjoint)."""
    if a.at_inf and b.at_inf:
        return a.height == b.height
    if a.at_inf or b.at_inf:
        ball_, inf_ = (b, a) if a.at_inf else (a, b)
        return 2 * ball_.radius <= inf_.height
    dt = a.tangency - b.tangency
    return dt * dt >= 4 * a.radius * b.radius


def ford_horoballs(
    q_max: int, window: tuple[float, float] = (0.0, 1.0)
) -> list[Horoball]:
    """The ball at infinity (height 1) plus Ford circles in the window.

    Circles sit at rationals p/q in lowest terms with q <= q_max and have
    euclidean radius 1/(2 q^2); any two are tangent exactly when
    |p q' - p' q| = 1 and never overlap.
    """
    if q_max < 1:
        raise DomainError("q_max must be >= 1")
    lo, hi = window
    if hi < lo:
        raise DomainError("empty window")
    out = [Horoball.at_infinity(Fraction(1))]
    for q in range(1, q_max + 1):
        for p in range(math.ceil(lo * q), math.floor(hi * q) + 1):
            if gcd(p, q) == 1:
                out.append(Horoball.ford(p, q))
    return out


# -- Mobius maps -----------------------------------------------------------


@dataclass(frozen=True)
class MobiusMap:
    """Orientation-preserving isometry z -> (az + b)/(cz + d), det = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > 1e-12:
            raise DomainError(f"determinant {det} != 1")

    @classmethod
    def normalized(cls, a: float, b: float, c: float, d: float) -> "MobiusMap":
        det = a * d - b * c
        if det <= 0:
            raise DomainError(f"determinant {det} must be positive")
        s = math.sqrt(det)
        return cls(a / s, b / s, c / s, d / s)

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def to_tangency(cls, p: int, q: int) -> "MobiusMap":
        """Integer map sending infinity to p/q and {y > 1} onto the Ford ball."""
        if q < 1 or gcd(p, q) != 1:
            raise DomainError(f"{p}/{q} not in lowest terms")
        # extended euclid: p*d0 - q*b0 = 1
        b0, d0 = _bezout(p, q)
        return cls(float(p), float(b0), float(q), float(d0))

    def __call__(self, z: complex) -> complex:
        den = self.c * z + self.d
        if den == 0:
            raise PrecisionError("Mobius map sent a finite point to infinity")
        return (self.a * z + self.b) / den

    def apply_point(self, pt: HPoint) -> HPoint:
        return HPoint.from_complex(self(pt.z))

    def apply_boundary(self, x: float) -> float:
        """Action on ideal points; math.inf stands for the point at infinity."""
        if math.isinf(x):
            return math.inf if self.c == 0.0 else self.a / self.c
        den = self.c * x + self.d
        if den == 0.0:
            return math.inf
        return (self.a * x + self.b) / den

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """self after other."""
        return MobiusMap.normalized(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)


def _bezout(p: int, q: int) -> tuple[int, int]:
    """(b, d) with p*d - q*b = 1."""
    old_r, r = p, q
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r != 0:
        quo = old_r // r
        old_r, r = r, old_r - quo * r
        old_s, s = s, old_s - quo * s
        old_t, t = t, old_t - quo * t
    if old_r == 1:
        return -old_t, old_s
    if old_r == -1:
        return old_t, -old_s
    raise DomainError(f"{p} and {q} are not coprime")


# -- lattices and forests ------------------------------------------------------


def horocycle_lattice(h: Horoball, delta: float, count: int) -> list[HPoint]:
    """Unit-spaced lattice on the horocycle at depth ``delta`` inside ``h``.

    For the ball at infinity with height eta the points are
    (k * eta * e^delta, eta * e^delta) for k = 0..count-1; other horoballs
    receive the image of this lattice under the integer map taking the
    infinity ball onto them.  Raises PrecisionError when coordinates near
    the tangency can no longer resolve unit spacing.
    """
    if delta < 0:
        raise DomainError("depth must be >= 0")
    if count < 1:
        raise DomainError("count must be >= 1")
    if h.at_inf:
        y = float(h.height) * math.exp(delta)
        pts = [HPoint(k * y, y) for k in range(count)]
    else:
        m = MobiusMap.to_tangency(h.p, h.q)
        y = math.exp(delta)
        try:
            pts = [m.apply_point(HPoint(k * y, y)) for k in range(count)]
        except DomainError as exc:  # mapped y underflowed to 0
            raise PrecisionError(f"lattice point underflow near {h.tangency}") from exc
    for a, b in zip(pts, pts[1:]):
        if abs(hyperbolic_distance(a, b) - UNIT_HOROCYCLE_CHORD) > 1e-6:
            raise PrecisionError("unit spacing lost to rounding; reduce count or delta")
    return pts


@dataclass(frozen=True)
class ForestPath:
    """One tree of the forest: consecutive lattice points inside a horoball."""

    host: Horoball
    points: tuple[HPoint, ...]


def build_horoforest(
    q_max: int,
    delta: float,
    bernoulli_keep: float,
    rng: np.random.Generator,
    window: tuple[float, float] = (0.0, 1.0),
    count: int = 64,
) -> list[ForestPath]:
    """Forest from unit lattices in every Ford horoball, Bernoulli-thinned.

    Each lattice edge survives independently with probability
    ``bernoulli_keep``; with 1.0 every horoball contributes one path.
    Components are returned as maximal runs of consecutive points.
    """
    if not (0.0 < bernoulli_keep <= 1.0):
        raise DomainError("bernoulli_keep must be in (0, 1]")
    paths = []
    for h in ford_horoballs(q_max, window):
        pts = horocycle_lattice(h, delta, count)
        if bernoulli_keep >= 1.0:
            keep_edge = [True] * (len(pts) - 1)
        else:
            keep_edge = list(rng.random(len(pts) - 1) < bernoulli_keep)
        start = 0
        for i, kept in enumerate(keep_edge + [False]):
            if not kept:
                paths.append(ForestPath(h, tuple(pts[start : i + 1])))
                start = i + 1
    return paths


# -- random isometry ------------------------------------------------------------


def in_fundamental_domain(z: complex) -> bool:
    """Classical modular domain |Re z| <= 1/2, |z| >= 1 (area pi/3)."""
    return abs(z.real) <= 0.5 and abs(z) >= 1.0


def _propose_box_point(rng: np.random.Generator) -> complex:
    # hyperbolic-area-uniform on {|x| <= 1/2, y >= sqrt(3)/2}
    x = rng.uniform(-0.5, 0.5)
    y = SQRT3_2 / (1.0 - rng.random())
    return complex(x, y)


def fundamental_domain_area_mc(n: int, rng: np.random.Generator) -> float:
    """Monte Carlo estimate of the fundamental domain's hyperbolic area."""
    x = rng.uniform(-0.5, 0.5, size=n)
    y = SQRT3_2 / (1.0 - rng.random(size=n))
    inside = (x * x + y * y) >= 1.0
    return _BOX_AREA * float(inside.mean())


def random_isometry(rng: np.random.Generator, max_attempts: int = 1000) -> MobiusMap:
    """Random isometry: rotate about i, then send i to a random domain point.

    The translation target is hyperbolic-area-uniform (by rejection) in
    the fundamental domain of the Ford configuration's stabilizer, the
    rotation angle uniform; applying the result to the Ford horoballs
    yields a randomly placed copy of the configuration.
    """
    for _ in range(max_attempts):
        z = _propose_box_point(rng)
        if in_fundamental_domain(z):
            break
    else:
        raise RetryBudgetError(f"no domain point accepted in {max_attempts} proposals")
    theta = rng.uniform(0.0, 2.0 * math.pi)
    half = 0.5 * theta
    rot = MobiusMap(math.cos(half), math.sin(half), -math.sin(half), math.cos(half))
    x, y = z.real, z.imag
    sq = math.sqrt(y)
    to_i = MobiusMap(1.0 / sq, -x / sq, 0.0, sq)  # z -> i
    return to_i.inverse().compose(rot)


# -- ray diagnostics --------------------------------------------------------------


@dataclass(frozen=True)
class RayTrace:
    points: tuple[HPoint, ...]
    dist_from_start: tuple[float, ...]
    speeds: tuple[float, ...]  # dist_from_start[n] / n, 0.0 at n = 0
    disc_trace: tuple[complex, ...]
    boundary_limit: complex

    def __post_init__(self):
        for a, b in zip(self.dist_from_start, self.dist_from_start[1:]):
            if b < a - 1e-12:
                raise DomainError("distances from start must be nondecreasing")


def ray_metrics(ray: Sequence[HPoint], n_max: Optional[int] = None) -> RayTrace:
    """Distances, speeds, disc trace and boundary estimate along a ray.

    The boundary limit is estimated as the disc image of the last point;
    for forest rays it should agree with the host horoball's tangency.
    """
    pts = list(ray)
    if n_max is not None:
        if len(pts) < n_max + 1:
            raise DomainError(f"ray has {len(pts)} points, need {n_max + 1}")
        pts = pts[: n_max + 1]
    if not pts:
        raise DomainError("empty ray")
    start = pts[0]
    dists = [hyperbolic_distance(start, p) for p in pts]
    speeds = [0.0] + [dists[n] / n for n in range(1, len(pts))]
    disc = [cayley(p.z) for p in pts]
    return RayTrace(tuple(pts), tuple(dists), tuple(speeds), tuple(disc), disc[-1])
