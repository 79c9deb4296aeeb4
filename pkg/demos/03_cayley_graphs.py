# %% [markdown]
# # Cayley graphs of SL2(F_p)
#
# Spectral gap, diameter and the walk from the identity.

# %%
import numpy as np

from wordlab import cayley_graph, diameter, enumerate_group, lambda1
from wordlab.cayley import laplacian_spectrum, random_generating_pairs, walk_deviation_series

# %%
G = enumerate_group("SL2", 7)
for pair in random_generating_pairs(G, 5, seed=7):
    g = cayley_graph(G, pair)
    lam, gam = lambda1(g), diameter(g)
    print(g.generators_hash[:8], f"lambda1={lam:.4f}", "diameter", gam, "1/(8 gamma^2) =", round(1 / (8 * gam**2), 5))

# %% [markdown]
# The walk deviation decays at the second-largest eigenvalue modulus of the
# walk operator. When the top of the Laplacian spectrum is close to 2*(2r),
# that modulus comes from the negative end and exceeds 1 - lambda1/(2r).

# %%
g = cayley_graph(G, random_generating_pairs(G, 20, seed=7)[-1])
spec = np.sort(laplacian_spectrum(g))
rho_gap = 1 - spec[1] / 4
rho_full = max(abs(1 - spec[1:] / 4))
dev = walk_deviation_series(g, 60)
print(f"1 - lambda1/4 = {rho_gap:.3f}, full modulus = {rho_full:.3f}")
print("deviation at 60:", dev[60], "exp(-60 lambda1/4):", np.exp(-60 * spec[1] / 4))
