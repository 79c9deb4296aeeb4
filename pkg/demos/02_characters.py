# %% [markdown]
# # Character tables from class sums
#
# Degrees, orthogonality and Fourier coefficients for a few small groups.

# %%
import numpy as np

from wordlab import character_table, conjugacy_classes, enumerate_group, parse_word, word_measure_exact
from wordlab.spectra import centralizer_bound_check, fourier_coeffs, sl2_degree_multiset, spectral_decay_profile

# %%
for kind, p in [("SL2", 7), ("PGL2", 7), ("GL2", 5)]:
    G = enumerate_group(kind, p)
    ct = character_table(conjugacy_classes(G))
    print(G.name, sorted(int(d) for d in ct.degrees), "orthogonality error", max(ct.orthogonality_error()))

# %%
print(sl2_degree_multiset(7))

# %% [markdown]
# Fourier coefficients of tau_{[x,y]} are 1/rho(1).

# %%
G = enumerate_group("SL2", 11)
cd = conjugacy_classes(G)
ct = character_table(cd)
a = fourier_coeffs(word_measure_exact(parse_word("abAB"), G, cd), ct)
print(np.round(a.real * np.asarray(ct.degrees), 12))

# %%
print(centralizer_bound_check(ct))
prof = spectral_decay_profile(parse_word("aabAB"), ct)
print("empirical exponent", prof.epsilon_hat)
