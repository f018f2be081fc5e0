"""
Search versus Grover
====================

Track the probability of measuring the marked node over time, sample it
with a fixed seed, and compare the walk with Grover's algorithm.
"""

# %%
from qwalk import WalkConfig, amplified_success, grover_reference, probability_curve, run_search, t_final

n = 8
curve = probability_curve(WalkConfig(n), 3 * t_final(n))
peak_t, peak_p = max(curve, key=lambda tp: tp[1])
print(f"t_f={t_final(n)}  peak at t={peak_t} with p={peak_p:.4f}")

# %%
out = run_search(WalkConfig(n, seed=1), trials=20_000)
print(f"exact {out.p_exact:.4f}  sampled {out.p_empirical:.4f}")

# %%
# The walk succeeds with probability near 1/2; a few repetitions close the
# gap with Grover, which uses about sqrt(N) oracle calls.
for n in (8, 12, 16):
    iters, p_grover = grover_reference(n)
    p_walk = run_search(WalkConfig(n), trials=1).p_exact
    print(f"n={n:2d}  walk {p_walk:.3f} (x7: {amplified_success(p_walk, 7):.3f})  grover {p_grover:.5f} in {iters} iterations")
