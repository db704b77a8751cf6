"""
Divergence-free Fourier fields on the torus
===========================================

Spectral fields, the Leray projection, the advection term and the
trilinear form that the Kato inequality bounds.
"""

# %%
import numpy as np

from katobounds import fields

# a single Hermitian pair: k = (1,0,0) with coefficient along e_2
v = fields.SpectralField(3, {(1, 0, 0): (0, 1, 0)})
print("stored modes:", v.support())
print("<v|v>_3 =", fields.sobolev_inner(v, v, 3.0))

# %%
# Leray projection removes the component along k
u = fields.SpectralField(3, {(1, 0, 0): (1, 1, 0)})
print("P u at (1,0,0):", fields.leray_project(u).coefficient((1, 0, 0)))

# %%
# random divergence-free pairs; the L^2 trilinear form vanishes
v = fields.random_divfree_field(1, 3, 3)
w = fields.random_divfree_field(2, 3, 3)
print("modes in v, w:", len(v.support()), len(w.support()))
print("<v.grad w | w>_0 =", fields.trilinear(v, w, 0.0))

# %%
# the Kato ratio |<v.grad w|w>_n| / (|v|_n |w|_n^2) for a few n
for n in (3, 4, 5, 10):
    r = abs(fields.trilinear(v, w, n)) / (fields.sobolev_norm(v, n) * fields.sobolev_norm(w, n) ** 2)
    print(f"n={n:>2}: ratio {r:.4g}")

# %%
# across many random pairs the ratio stays well below the upper bounds
rng = np.random.default_rng(0)
best = {n: 0.0 for n in (3, 4, 5, 10)}
for _ in range(200):
    a = fields.random_divfree_field(int(rng.integers(2**31)), 3, 2)
    b = fields.random_divfree_field(int(rng.integers(2**31)), 3, 2)
    for n in best:
        r = abs(fields.trilinear(a, b, n)) / (fields.sobolev_norm(a, n) * fields.sobolev_norm(b, n) ** 2)
        best[n] = max(best[n], r)
print("largest sampled ratios:", {n: round(x, 4) for n, x in best.items()})
