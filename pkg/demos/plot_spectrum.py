"""
Eigenvalues near 1
==================

Marking one node splits the eigenvalue 1 into a conjugate pair
``exp(+-i omega0)``.  The start state is split almost evenly between
the two eigenvectors, which is why the walk rotates toward the target.
"""

# %%
from qwalk import build_collapsed_unitary, eigendecompose, arc_members, spectral_summary

n = 10
pairs = eigendecompose(build_collapsed_unitary(n, True).matrix, n=n)
for p in arc_members(pairs, n):
    print(f"eigenvalue {p.value:.6f}  angle {p.angle:+.6f}  residual {p.residual:.1e}")

# %%
for n in (8, 16, 24, 32):
    s = spectral_summary(n)
    print(f"n={n:2d}  omega0={s.omega0:.3e}  p0={s.p0:.4f}  p1={s.p1:.4f}  bounds ok: {all(s.bounds_ok.values())}")
