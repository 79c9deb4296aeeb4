# %% [markdown]
# # Trace polynomials and point counts
#
# Every word in F_2 has an integer polynomial in (tr A, tr B, tr AB) giving
# the trace of w(A, B) on SL2.

# %%
from wordlab import count_points, estimate_dim, parse_word, trace_poly, variety_spec
from wordlab.ffield import primes_in
from wordlab.fricke import EXAMPLE_WORDS, count_series, special_point_check

# %%
for text in ["ab", "abAB", "aab", "abab"]:
    print(text, trace_poly(parse_word(text), validate=True))

# %% [markdown]
# Counting the principal part of the character variety of a one-relator
# group mod p and reading off a dimension from the log-log slope.

# %%
primes = primes_in(5, 120)
for name in ["figure-eight", "bs32", "a2ba-2b-2"]:
    series = count_series(variety_spec(EXAMPLE_WORDS[name]), primes)
    est = estimate_dim(series)
    print(name, "dim", est.label, "slope", round(est.slope, 3), "net", series.net[:10])

# %%
print(special_point_check(17)["candidates_satisfy"])
print(count_points(variety_spec(EXAMPLE_WORDS["bs32"]), 11))
