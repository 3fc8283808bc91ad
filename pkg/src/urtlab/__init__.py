"""urtlab: random rooted tree laws, percolation embeddings, and diagnostics.

Library layout:

* ``network`` / ``marks`` / ``coding`` / ``isomorphism``: the rooted
  marked multigraph data model, exact canonical ball codes, rooted
  isomorphism and the local metric;
* ``generators``: exact ball samplers and finite graph builders;
* ``embed``: the bounded-degree tree-law to regular-tree percolation
  pipeline with its reductions and mark transforms;
* ``stats``: empirical ball-class distributions, TV distance,
  mass-transport / involution tests, tightness and convergence reports;
* ``hyperbolic``: Ford horoballs, horocycle lattices, zero-speed forests;
* ``cli``: the ``urtlab`` command.
"""

from .coding import CanonicalCode, canonical_code, pair_code
from .embed import (
    DegreeProfile,
    add_iid_marks,
    add_iid_marks_sampler,
    biased_sampler,
    degree_profile,
    direction_marks,
    map_marks,
    map_marks_sampler,
    nu_sample,
    rho_prime_sampler,
    rho_sampler,
    strip_closed,
    truncate_degree,
)
from .generators import (
    OffspringLaw,
    canopy_sampler,
    chain_cover_sampler,
    make_fixture,
    point_mass_sampler,
    ray_from_endpoint,
    regular_tree_ball,
    sierpinski_graph,
    star_graph,
)
from .hyperbolic import (
    ForestPath,
    Horoball,
    HPoint,
    MobiusMap,
    RayTrace,
    build_horoforest,
    ford_horoballs,
    horocycle_lattice,
    hyperbolic_distance,
    random_isometry,
    ray_metrics,
)
from .isomorphism import LocalDistance, local_distance, rooted_isomorphic
from .marks import Mark
from .network import DoublyRootedNetwork, NetworkBuilder, RootedNetwork, ball, rerooted
from .sampler import RootedLawSampler
from .stats import (
    ConvergenceReport,
    EmpiricalRootedDist,
    TestReport,
    consistency_check,
    convergence_check,
    degree_biased,
    empirical_distribution,
    exact_distribution,
    involution_test,
    mtp_test,
    srw_stationarity_residual,
    tightness_report,
    tv_distance,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalCode",
    "canonical_code",
    "pair_code",
    "DegreeProfile",
    "add_iid_marks",
    "add_iid_marks_sampler",
    "biased_sampler",
    "degree_profile",
    "direction_marks",
    "map_marks",
    "map_marks_sampler",
    "nu_sample",
    "rho_prime_sampler",
    "rho_sampler",
    "strip_closed",
    "truncate_degree",
    "OffspringLaw",
    "canopy_sampler",
    "chain_cover_sampler",
    "make_fixture",
    "point_mass_sampler",
    "ray_from_endpoint",
    "regular_tree_ball",
    "sierpinski_graph",
    "star_graph",
    "ForestPath",
    "Horoball",
    "HPoint",
    "MobiusMap",
    "RayTrace",
    "build_horoforest",
    "ford_horoballs",
    "horocycle_lattice",
    "hyperbolic_distance",
    "random_isometry",
    "ray_metrics",
    "LocalDistance",
    "local_distance",
    "rooted_isomorphic",
    "Mark",
    "DoublyRootedNetwork",
    "NetworkBuilder",
    "RootedNetwork",
    "ball",
    "rerooted",
    "RootedLawSampler",
    "ConvergenceReport",
    "EmpiricalRootedDist",
    "TestReport",
    "consistency_check",
    "convergence_check",
    "degree_biased",
    "empirical_distribution",
    "exact_distribution",
    "involution_test",
    "mtp_test",
    "srw_stationarity_residual",
    "tightness_report",
    "tv_distance",
]
