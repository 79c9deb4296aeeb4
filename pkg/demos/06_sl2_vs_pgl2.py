# %% [markdown]
# # Commutator fibers: SL2 against PGL2
#
# Per-class Lang-Weil ratios |w^{-1}(g)| / p^{(r-1) dim G} for products of
# commutators in disjoint letters.

# %%
import numpy as np

from wordlab.experiments import fgi_deviation

# %%
for p in (5, 7, 11):
    for kind in ("SL2", "PGL2"):
        rep = fgi_deviation(kind, p, 2)
        print(kind, p, "max|ratio-1| =", round(rep["max_deviation"], 4), "ratios", np.round(rep["ratios"], 2)[:8])

# %% [markdown]
# In PGL2 the image of any product of commutators lies in the index-2
# subgroup PSL2, so about half the fibers are empty and the rest are doubled.
