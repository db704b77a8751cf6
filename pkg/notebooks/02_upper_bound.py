"""
Upper bound from the cutoff lattice sums
========================================

Finite part Gamma_n(k), tail bound, large-|k| envelope and the resulting
G+ for n = 4 (rho = 10, t = 6).
"""

# %%
import math

import numpy as np

from katobounds import gfunction, kernel

cfg = gfunction.default_config(4)
print(cfg)
print("shell size:", len(gfunction.lattice_shell(cfg.d, cfg.rho)))
print("C_4 =", kernel.c_max(4.0).max)
print("delta G_4 =", gfunction.delta_g(cfg))

# %%
# Gamma at a few small wave vectors; (2,1,0) is the maximizer
for k in [(1, 0, 0), (1, 1, 0), (2, 1, 0), (2, 2, 1), (5, 3, 0)]:
    print(k, gfunction.gamma(cfg, k))

# %%
# large |k|: Gamma tends to the sphere polynomial P_40(u)
data = gfunction.asymptotic_data(cfg)
p0 = data.P[0]
print("P_40 range on the sphere:", p0.lo, p0.hi)
u = np.ones(3) / math.sqrt(3)
for i in (25, 50, 100, 200):
    k = np.rint(i * u).astype(int)
    print(f"|k|~{i:>3}: Gamma {gfunction.gamma(cfg, k):.4f}  limit {float(p0.poly(u)[0]):.4f}")

# %%
# the envelope for |k| >= 2 rho stays below the interior maximum
for km in (20, 25, 40, 80, 1e4):
    print(f"|k|={km:>7}: lower {gfunction.tail_lower(cfg, data, km):8.4f}  upper {gfunction.tail_upper(cfg, data, km):8.4f}")
print("sup of the upper envelope:", gfunction.sup_tail(cfg, data))

# %%
br = gfunction.sup_bracket(cfg)
print("sup Gamma", br.sup_gamma, "at", br.argmax)
print("bracket for sup G:", (br.lower, br.upper))
print("G+ =", gfunction.upper_bound_g(br), "raw", gfunction.upper_bound_g(br, rounded=False))
