"""
Walk on the Hamming-weight classes
==================================

Because the start state and the marked node are symmetric under bit
permutations, the walk lives in a ``2n``-dimensional subspace.  Here the
reduced walk is checked against the full one and then pushed to sizes
the full vector cannot reach.
"""

# %%
import numpy as np

from qwalk import (
    WalkConfig,
    build_collapsed_unitary,
    collapse,
    collapsed_initial_state,
    collapsed_step,
    marked_probability,
    step,
    uniform_state,
)

n = 8
op = build_collapsed_unitary(n)
small = collapsed_initial_state(n)
full = uniform_state(n)
cfg = WalkConfig(n)
worst = 0.0
for _ in range(40):
    small = collapsed_step(small, op)
    full = step(full, cfg)
    worst = max(worst, np.max(np.abs(collapse(full).amps - small.amps)))
print("max deviation over 40 steps", worst)

# %%
# Large n uses banded storage; the matrix has 2n rows.
big = build_collapsed_unitary(200)
print("banded:", big.is_banded, "orthogonality defect:", big.orthogonality_defect())
print("p(marked) at t=0 for n=200:", marked_probability(collapsed_initial_state(200)))
