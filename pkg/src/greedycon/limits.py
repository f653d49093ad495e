"""Resource caps shared across the toolkit.

Most enumerations here grow super-exponentially in their inputs, so every
potentially explosive operation takes an explicit cap and fails loudly with
CapExceededError instead of hanging.
"""

from dataclasses import dataclass


class CapExceededError(RuntimeError):
    """An enumeration would exceed its configured cap."""


class PreconditionError(ValueError):
    """A documented operation precondition does not hold."""


@dataclass(frozen=True)
class Limits:
    max_carrier: int = 5040           # largest word transversal we materialize
    max_group_degree: int = 6         # symmetric groups up to S_6
    max_group_order: int = 120        # subgroup enumeration bound (Sub(S_5))
    max_exhaustive_carrier: int = 10  # partition-scan congruence strategy
    max_congruences: int = 200_000    # principal-join congruence strategy
    max_eq_points: int = 6            # equivalence-lattice ground set
    max_iso_size: int = 40            # lattice isomorphism search
    max_identity_length: int = 6      # bounded greediness sweeps
    max_orbit_types: int = 200_000    # symmetry-reduced congruence sweeps


DEFAULT_LIMITS = Limits()
