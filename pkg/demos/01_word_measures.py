# %% [markdown]
# # Word measures on SL2(F_p)
#
# The commutator word pushed forward to a finite group, measured against
# the uniform distribution.

# %%
import math

from wordlab import character_table, commutator, conjugacy_classes, enumerate_group, lq_distance, mixing_time, word_measure_exact, zeta
from wordlab.freeword import convolve_words

# %%
G = enumerate_group("SL2", 13)
cd = conjugacy_classes(G)
tau = word_measure_exact(commutator(), G, cd)
print(G.name, "order", G.order, "classes", cd.k)

# %% [markdown]
# The identity fiber has exactly |G| k(G) points.

# %%
print(tau.element_mass(G.identity) * G.order**2, G.order * cd.k)

# %% [markdown]
# Squared L^2 distance to uniform equals zeta(2) - 1.

# %%
ct = character_table(cd)
print(lq_distance(tau, 2) ** 2, zeta(ct, 2) - 1)

# %%
for q in (1, 2, math.inf):
    print(q, lq_distance(tau, q), mixing_time(tau, q, 5))

# %% [markdown]
# Two commutators in disjoint letters: the measure is the convolution square.

# %%
tau2 = word_measure_exact(convolve_words(commutator(), commutator()), G, cd)
print(lq_distance(tau2, math.inf))
