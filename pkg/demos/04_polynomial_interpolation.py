# %% [markdown]
# # Recovering a polynomial with few phase queries
#
# A polynomial of degree d in n variables has D coefficients. Querying k points
# with coefficients y_i and summing gives the phase e(Z.c), where Z runs over the
# image R of the query map. A Fourier transform on R then peaks at c with
# probability |R|/q^D.

# %%
import numpy as np

from qinterp.finite_field import field_new
from qinterp.interpolation import (ProtocolParams, build_image, output_distribution,
                                   success_probability, trials)
from qinterp.polynomial import query_count, random_polynomial

for n, d in [(1, 1), (1, 2), (1, 5), (2, 2), (3, 3)]:
    print(f"n={n} d={d}: k = {query_count(n, d)}")

# %%
P = ProtocolParams.create(field_new(3), n=1, d=1)
table = build_image(P)
print("|R| =", table.size, " P =", success_probability(P, table))

# %% [markdown]
# The analytic state and the gate-level circuit give the same distribution.

# %%
f = random_polynomial(P.basis, P.field, seed=1)
a = output_distribution(f, P, table, "analytic")
c = output_distribution(f, P, table, "circuit")
print("coefficients:", f.codes, " argmax:", int(a.argmax()), " TV:", 0.5 * np.abs(a - c).sum())

# %% [markdown]
# Success improves as the field grows.

# %%
for q in (3, 5, 7, 11, 13):
    Pq = ProtocolParams.create(field_new(q), 1, 1)
    pr = success_probability(Pq)
    print(f"q={q:2d}  P={str(pr):8s} q(1-P)={float(q * (1 - pr)):.4f}")

s = trials(P, 10_000, seed=2024, table=table)
print("empirical:", s.empirical_rate, " wilson:", s.wilson)
