"""Published reference instance: a joint PMF, a post-processing channel and the
K_alpha values reported for them (bits, three decimals)."""

import numpy as np

from .prob_core import ConditionalPmf, JointPmf

COUNTEREXAMPLE_PXY = np.array(
    [
        [0.43, 0.43, 0.02],
        [0.01, 0.01, 0.04],
        [0.01, 0.01, 0.04],
    ]
)

# rows indexed by y, columns by z
COUNTEREXAMPLE_PZ_GIVEN_Y = np.array(
    [
        [1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0],
        [0.0, 0.5, 0.5],
    ]
)

# (alpha, pair) -> reported K_alpha
REPORTED_K = {
    (0.5, "XY"): 0.253,
    (0.5, "XZ"): 0.315,
    (0.2, "XY"): 0.109,
    (1.0, "XY"): 0.221,
    (1.5, "XY"): 0.063,
}

REPORTED_TOL = 1e-3


def counterexample_joint() -> JointPmf:
    return JointPmf(COUNTEREXAMPLE_PXY, ("0", "1", "2"), ("0", "1", "2"))


def counterexample_channel() -> ConditionalPmf:
    return ConditionalPmf(COUNTEREXAMPLE_PZ_GIVEN_Y, ("0", "1", "2"), ("0", "1", "2"))
