"""
Lower bound from a twelve-mode trial family
===========================================

Two v-modes and ten w-modes; the ratio of the trilinear form to the norms
is a lower bound for the sharp constant.
"""

# %%
from katobounds import gfunction, lowerbound

p = lowerbound.REFERENCE_PARAMS[4]
v, w = lowerbound.twelve_mode_family(p)
print("support sizes:", len(v.support), len(w.support))
print("N_4(v)^2, N_4(w)^2:", lowerbound.closed_form_norms(p, 4.0))
print("P_4 generic vs closed form:", lowerbound.p_form(v, w, 4.0), lowerbound.closed_form_p(p, 4.0))

# %%
for n in (3, 4, 5, 10):
    val = lowerbound.g_lower(*lowerbound.twelve_mode_family(lowerbound.REFERENCE_PARAMS[n]), n)
    print(f"n={n:>2}: G- = {val:.6f}")

# %%
# polishing from the reference parameters with a few restarts
res = lowerbound.optimize_lower(3, [lowerbound.REFERENCE_PARAMS[3]], restarts=3, seed=0)
print("optimized G-_3:", res.value, "rounded", res.rounded)
print(res.params.to_json())

# %%
# the two pipelines bracket the sharp constant
br = gfunction.sup_bracket(gfunction.default_config(4))
lo = lowerbound.g_lower(*lowerbound.twelve_mode_family(lowerbound.REFERENCE_PARAMS[4]), 4)
hi = gfunction.upper_bound_g(br, rounded=False)
print(f"{lo:.4f} <= G_4 <= {hi:.4f}  (ratio {lo / hi:.3f})")
