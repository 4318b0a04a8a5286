# %% [markdown]
# # Splitting the queries among players
#
# Each of the k players holds one query (x_i, y_i). Reconstruction needs all of
# them. An eavesdropper who grabs a share consumes it, so the run aborts.

# %%
import itertools

import numpy as np

from qinterp.finite_field import field_new
from qinterp.interpolation import ProtocolParams, build_image
from qinterp.polynomial import random_polynomial
from qinterp.secret_sharing import (AdversaryStructure, ambiguity_count, deal_and_reconstruct,
                                    share_constraints, structure_report, threshold_structure)

P = ProtocolParams.create(field_new(3), n=1, d=2)
table = build_image(P)
f = random_polynomial(P.basis, P.field, seed=5)
rng = np.random.default_rng(0)

out = deal_and_reconstruct(f, P, table, rng)
for rec in out.transcript.records:
    print(rec)
print("success:", out.result.success)

# %%
out = deal_and_reconstruct(f, P, table, rng, interception=[2])
view = [([v.code for v in x], y.code) for x, y in out.interceptor_view]
print("destroyed:", out.destroyed, " eve holds (x, y):", view)

# %% [markdown]
# A single share leaves many coefficient vectors consistent with what one player
# can compute.

# %%
F = P.field
counts = {ambiguity_count(share_constraints([(x,)], [y], f), P.basis, F)
          for x, y in itertools.product(F.elements(), repeat=2)}
print("candidates left by one share:", sorted(counts))

# %% [markdown]
# Adversary structures: Q2, duals and self-duality.

# %%
print(structure_report(AdversaryStructure.build(2, [[], [1]])))
print(structure_report(threshold_structure(3, 1)))
