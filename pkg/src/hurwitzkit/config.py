"""Default budgets and tolerances shared across the package.

Every value here can be overridden per call; the CLI exposes the most
important ones as flags (and ``HURWITZKIT_*`` environment variables).
"""

# permutation groups
ELEMENT_CAP = 2_000_000          # full element list only for |G| <= this
CLASS_CAP = 5_000_000            # largest conjugacy class we will enumerate

# Nielsen classes / braid orbits
PAIR_BUDGET = 50_000_000         # candidate tuples examined by the enumerator
ORBIT_BUDGET = 1_000_000         # inner classes visited by a braid-orbit BFS

# Braid words whose action on a 4-point straight Nielsen class gives the
# inertia of the symmetrized Hurwitz curve (over 0, 1, infinity).  Found by
# search on the PSp6(2) degree-28 orbit; edit to experiment.
HURWITZ_CURVE_WORDS = ("Q2", "Q1^2", "Q2 Q1^2")

# exact arithmetic
DEFAULT_PRIME = 31
FACTOR_SPECIALIZATIONS = 3

# numerics
PRECISION_LADDER = (53, 128, 256, 512)
TRACK_REL_TOL_53 = 1e-10
CLEARANCE_FRACTION = 1e-3        # of the branch point spread
LOOP_RADIUS_FRACTION = 1.0 / 3.0
MAX_NEWTON_ITERATIONS = 60


def tracking_tolerance(bits: int) -> float:
    """Relative residual accepted while tracking at a given precision."""
    if bits <= 53:
        return TRACK_REL_TOL_53
    return 2.0 ** (-0.6 * bits)


# recognition
LLL_DELTA = (99, 100)
RECOGNITION_MARGIN = 2.0 ** 16
