"""Base class for exact-in-law rooted ball samplers.

A sampler stands in for a probability measure on rooted networks: asked
for radius ``r`` it returns a network whose validity is at least ``r``
and whose r-ball has exactly the right law.  Consistency across radii
(the r-ball of a radius-(r+1) sample has the same law as a radius-r
sample) is a testable contract, exercised in the statistics module.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .network import RootedNetwork


class RootedLawSampler:
    """Procedure (radius, rng) -> RootedNetwork with validity >= radius."""

    name: str = "sampler"
    #: upper bound on all degrees under the law, when one is declared
    degree_bound: Optional[int] = None
    #: exact law of the root degree, when known in closed form
    root_degree_law: Optional[dict[int, float]] = None

    def sample(self, radius: int, rng: np.random.Generator) -> RootedNetwork:
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"
