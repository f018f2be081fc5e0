"""
Coined walk on the hypercube
============================

Run the Grover-coined walk on the full ``n * 2**n`` state vector, check
that it stays normalized and that it commutes with relabeling the bits.
"""

# %%
import numpy as np

from qwalk import WalkConfig, apply_bit_swap, evolve, node_distribution, step, uniform_state

n = 6
cfg = WalkConfig(n)
s = uniform_state(n)
print("dimension", s.amps.size, "norm", s.norm())

# %%
# Without the marking coin the uniform state is a fixed point.
print("unperturbed drift", np.max(np.abs(step(s, cfg, perturbed=False).amps - s.amps)))

# %%
# With the marking coin, probability flows toward node 0.
for t in (0, 5, 10, 15):
    p = node_distribution(evolve(s, cfg, t))
    print(f"t={t:2d}  p(node 0)={p[0]:.4f}")

# %%
# Swapping two bit positions commutes with one step.
v = evolve(s, cfg, 3)
gap = np.max(np.abs(step(apply_bit_swap(v, 0, 4), cfg).amps - apply_bit_swap(step(v, cfg), 0, 4).amps))
print("commutation gap", gap)
