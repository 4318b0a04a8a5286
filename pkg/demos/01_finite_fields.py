# %% [markdown]
# # Finite fields and the additive character
#
# Elements of GF(p^r) are polynomials over GF(p) reduced by a monic irreducible
# modulus. We store them as integer codes (little-endian base-p digits) and cache
# lookup tables so the simulator can work on whole arrays at once.

# %%
import numpy as np

from qinterp.finite_field import field_new, format_poly, trace, character

F = field_new(2, 2)
print("GF(4) modulus:", format_poly(F.modulus))
a, b = F.element([0, 1]), F.element([1, 1])
print("a*b =", (a * b).to_list(), " a/b =", (a / b).to_list())

# %% [markdown]
# The trace maps GF(q) onto the prime field, and e(z) = exp(2 pi i Tr(z)/p) is the
# character behind every phase in the protocols.

# %%
for z in F.elements():
    print(z.code, z.to_list(), "Tr =", trace(z), "e =", np.round(character(z), 6))

# %% [markdown]
# Characters sum to zero over the whole field unless the argument is zero.

# %%
G = field_new(3, 2)
for a in (G.zero, G.one, G.generator()):
    s = sum(character(a * z) for z in G.elements())
    print(f"sum e({a.code}*z) = {s.real:+.3f}{s.imag:+.3f}i")
