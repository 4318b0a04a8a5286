# %% [markdown]
# # Bernstein-Vazirani with one oracle call
#
# The hidden string a defines f(x) = a.x over GF(2). One query, framed by
# Fourier transforms, leaves the input register exactly in |a>.

# %%
import numpy as np

from qinterp.bernstein_vazirani import BvInstance, bv_circuit, bv_run

inst = BvInstance.from_bits("1011")
tr = bv_circuit(inst)
marg = tr.psi3.marginal("x")
print("peak index:", int(marg.argmax()), " mass:", round(float(marg.max()), 12))

# %%
rng = np.random.default_rng(42)
for _ in range(5):
    res = bv_run(BvInstance.random(6, rng), rng)
    print(res.to_dict())
