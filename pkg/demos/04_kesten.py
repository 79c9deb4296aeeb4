# %% [markdown]
# # Return probability of random words in F_2
#
# Sampled against the exact distance chain on the 4-regular tree.

# %%
from wordlab import kesten_return
from wordlab.cayley import kesten_exact

# %%
res = kesten_return(2, 24, 200_000, seed=1)
for ell, rate in zip(res.lengths, res.rates):
    print(ell, rate, kesten_exact(2, ell))

# %% [markdown]
# A plain log-linear fit is biased by the polynomial prefactor ell^{-3/2};
# the corrected fit lands close to log(sqrt(3)/2).

# %%
print("corrected", res.slope, "plain", res.plain_slope, "target", res.target)
